"""Record session-protocol transcripts for the playground's replay tests.

Each fixture is newline-JSON with one object per line, either
``{"dir": "send", "msg": <command>}`` or ``{"dir": "recv", "msg": <event>}``,
exactly as the wire would carry them.  The UI tests replay these against the
client store, so regenerating fixtures after a protocol change keeps the two
sides honest.  Run from the repo root: python3 scripts/make_ui_fixtures.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from graphchem.session import Session  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


class Recorder:
    def __init__(self):
        self.session = Session()
        self.lines = []

    def send(self, **cmd):
        self.lines.append({"dir": "send", "msg": cmd})
        events = self.session.handle_command(cmd)
        for event in events:
            self.lines.append({"dir": "recv", "msg": event})
        return events

    def write(self, name):
        path = OUT / name
        text = "".join(json.dumps(line, sort_keys=True) + "\n" for line in self.lines)
        path.write_text(text)
        print(f"{name}: {len(self.lines)} lines")


def event_types(events):
    return [e["type"] for e in events]


def lifecycle():
    """load -> steer -> step -> mid-run set_weights -> death -> post-death errors."""
    r = Recorder()
    r.send(v=1, type="load", id="c1", catalog_name="chemlambda-quine-a")
    r.send(v=1, type="set_algorithm", id="c2", algorithm="random", strategy="GROW")
    r.send(v=1, type="set_weights", id="c3", w=0.9)
    r.send(v=1, type="step", id="c4", n=6)
    # steering mid-evolution: slam the slider to pure SLIM so the run dies
    r.send(v=1, type="set_weights", id="c5", w=0.0)
    events = r.send(v=1, type="step", id="c6", n=400)
    assert "death" in event_types(events), "lifecycle fixture must reach death"
    # a rejected command and a command on a dead engine, for snap-back tests
    r.send(v=1, type="set_weights", id="c7", w=1.5)
    r.send(v=1, type="step", id="c8", n=1)
    r.send(v=1, type="snapshot", id="c9")
    r.write("lifecycle.jsonl")


def grow_extreme():
    """Slider at the GROW extreme: every fired rewrite is GROW class."""
    r = Recorder()
    r.send(v=1, type="load", id="g1", catalog_name="chemlambda-quine-a")
    r.send(v=1, type="set_weights", id="g2", w=1.0)
    events = r.send(v=1, type="step", id="g3", n=8)
    classes = {a["class"]
               for e in events if e["type"] == "report"
               for a in e["applied"]}
    assert classes == {"GROW"}, f"expected pure GROW at w=1, got {classes}"
    r.send(v=1, type="snapshot", id="g4")
    r.write("grow-extreme.jsonl")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    lifecycle()
    grow_extreme()


if __name__ == "__main__":
    main()

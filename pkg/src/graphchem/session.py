"""Transport-independent live-steering session.

Speaks newline-delimited JSON objects tagged ``{"v": 1, "type": ...}``.
Commands arrive one per message and are applied between engine steps, so a
step never sees a half-applied configuration.  Every accepted command is
acknowledged first (echoing its ``id`` when given); failures produce an
``error`` event instead of an ack.

Events per step: always a ``report``; a ``state`` snapshot unless the graph
is big (>= ``state_threshold`` nodes), in which case states go out only every
``state_stride`` steps.  Death emits a final ``death`` event and stops the
run loop without ending the session.  Report step numbers keep increasing
across load/reset; loaded molecules are re-aged to the current step so node
ages still start at zero.
"""

from __future__ import annotations

import json
from typing import Any

from .catalog import catalog_text
from .chemistry import rewrite_class, ruleset
from .engine import DeadStateError, EngineConfig, EngineState, StepReport, new_state, step_engine
from .molecule import MolError, parse_mol

PROTOCOL_VERSION = 1

COMMANDS = ("load", "set_algorithm", "set_weights", "set_chemistry",
            "step", "run", "pause", "snapshot", "reset")


def _ev(ev_type: str, **fields) -> dict:
    return {"v": PROTOCOL_VERSION, "type": ev_type, **fields}


def _report_event(r: StepReport) -> dict:
    return _ev("report", step=r.step, matches_found=r.matches_found,
               applied=[{"rule": rule, "age": age, "class": rewrite_class(rule)}
                        for rule, age in r.applied],
               node_count=r.node_count, type_counts=r.type_counts,
               arrows_combed=r.arrows_combed, loops_delta=r.loops_delta,
               dead=r.dead)


class Session:
    def __init__(self, state_threshold: int = 1000, state_stride: int = 10):
        self.state_threshold = state_threshold
        self.state_stride = state_stride
        self.engine: EngineState | None = None
        self.chemistry = "chemlambda"
        self.algorithm = "random"
        self.weights = 0.5
        self.strategy = "GROW"
        self.seed = 0
        self.running = False
        self.rate = 0.0  # steps per second while running
        self._loaded_text: str | None = None
        self._high_step = 0

    # -- wire handling -------------------------------------------------------

    def handle_message(self, text: str) -> list[dict]:
        try:
            cmd = json.loads(text)
        except json.JSONDecodeError as exc:
            return [_ev("error", message=f"malformed JSON: {exc}")]
        if not isinstance(cmd, dict):
            return [_ev("error", message="command must be a JSON object")]
        return self.handle_command(cmd)

    def handle_command(self, cmd: dict) -> list[dict]:
        cid = cmd.get("id")
        ctype = cmd.get("type")
        if ctype not in COMMANDS:
            return [_ev("error", message=f"unknown command type {ctype!r}", id=cid)]
        try:
            events = getattr(self, f"_cmd_{ctype}")(cmd)
        except (MolError, DeadStateError) as exc:
            return [_ev("error", message=str(exc), id=cid)]
        return [_ev("ack", id=cid, command=ctype)] + events

    # -- commands -------------------------------------------------------------

    def _config(self) -> EngineConfig:
        return EngineConfig(chemistry=self.chemistry, algorithm=self.algorithm,
                            weights=self.weights, strategy=self.strategy,
                            seed=self.seed)

    def _load_molecule(self, text: str, chemistry: str) -> list[dict]:
        chem = ruleset(chemistry)
        mol = parse_mol(text, family=chem.family)
        self.chemistry = chemistry
        state = new_state(mol, self._config())
        state.step = self._high_step
        for node in state.mol.nodes.values():
            node.birth_step = self._high_step
        self.engine = state
        self._loaded_text = text
        self.running = False
        return [_ev("loaded", node_count=state.mol.node_count,
                    edge_count=state.mol.edge_count, chemistry=self.chemistry)]

    def _cmd_load(self, cmd: dict) -> list[dict]:
        if "catalog_name" in cmd:
            text, entry = catalog_text(cmd["catalog_name"])
            return self._load_molecule(text, cmd.get("chemistry", entry.chemistry))
        if "mol_text" not in cmd:
            raise MolError("load needs mol_text or catalog_name")
        if "chemistry" not in cmd:
            raise MolError("load with mol_text needs an explicit chemistry")
        return self._load_molecule(cmd["mol_text"], cmd["chemistry"])

    def _require_engine(self) -> EngineState:
        if self.engine is None:
            raise MolError("no molecule loaded")
        return self.engine

    def _cmd_set_algorithm(self, cmd: dict) -> list[dict]:
        algorithm = cmd.get("algorithm")
        if algorithm not in ("random", "older_first"):
            raise MolError(f"unknown algorithm {algorithm!r}")
        strategy = cmd.get("strategy", self.strategy)
        self.algorithm = algorithm
        self.strategy = strategy
        self._reconfigure()
        return []

    def _cmd_set_weights(self, cmd: dict) -> list[dict]:
        w = cmd.get("w")
        if not isinstance(w, (int, float)) or not 0.0 <= w <= 1.0:
            raise MolError(f"weights must lie in [0, 1], got {w!r}")
        self.weights = float(w)
        self._reconfigure()
        return []

    def _cmd_set_chemistry(self, cmd: dict) -> list[dict]:
        cid = cmd.get("chemistry")
        chem = ruleset(cid)
        if self.engine is not None and self.engine.mol.family != chem.family:
            raise MolError(f"loaded molecule is {self.engine.mol.family}, "
                           f"{cid} needs {chem.family}")
        self.chemistry = cid
        self._reconfigure()
        if self.engine is not None:
            self.engine.dead = False  # the new rule set may find matches
        return []

    def _reconfigure(self) -> None:
        # new config takes effect at the next step; the rng stream continues
        if self.engine is not None:
            self.engine.config = self._config()

    def _cmd_step(self, cmd: dict) -> list[dict]:
        n = cmd.get("n", 1)
        if not isinstance(n, int) or n < 0:
            raise MolError(f"step count must be a nonnegative integer, got {n!r}")
        self._require_engine()
        events: list[dict] = []
        for _ in range(n):
            events.extend(self._step_once())
            if self.engine.dead:
                break
        return events

    def _cmd_run(self, cmd: dict) -> list[dict]:
        rate = cmd.get("steps_per_second", 10)
        if not isinstance(rate, (int, float)) or rate <= 0:
            raise MolError(f"steps_per_second must be positive, got {rate!r}")
        state = self._require_engine()
        if state.dead:
            raise DeadStateError("molecule is dead; load or reset first")
        self.rate = float(rate)
        self.running = True
        return []

    def _cmd_pause(self, cmd: dict) -> list[dict]:
        self.running = False
        return []

    def _cmd_snapshot(self, cmd: dict) -> list[dict]:
        state = self._require_engine()
        return [self._state_event(state)]

    def _cmd_reset(self, cmd: dict) -> list[dict]:
        if self._loaded_text is None:
            raise MolError("nothing loaded to reset")
        self.seed = cmd.get("seed", self.seed)
        return self._load_molecule(self._loaded_text, self.chemistry)

    # -- stepping --------------------------------------------------------------

    def _step_once(self, suppress_state: bool = False) -> list[dict]:
        state = self._require_engine()
        report = step_engine(state)
        self._high_step = max(self._high_step, report.step)
        events = [_report_event(report)]
        if report.dead:
            self.running = False
            events.append(_ev("death", step=report.step))
            return events
        if not suppress_state and self._state_due(state, report.step):
            events.append(self._state_event(state))
        return events

    def _state_due(self, state: EngineState, step: int) -> bool:
        if state.mol.node_count < self.state_threshold:
            return True
        return step % self.state_stride == 0

    def tick(self, suppress_state: bool = False) -> list[dict]:
        """One run-loop step; the transport paces calls at self.rate."""
        if not self.running or self.engine is None:
            return []
        return self._step_once(suppress_state)

    def _state_event(self, state: EngineState) -> dict:
        mol = state.mol
        nodes = [{"id": nid, "type": n.node_type,
                  "age": max(0, state.step - n.birth_step)}
                 for nid, n in sorted(mol.nodes.items())]
        edges = []
        for tag in sorted(mol.edges):
            (n1, p1), (n2, p2) = mol.edges[tag]
            edges.append({"tag": tag, "from": {"node": n1, "port": p1},
                          "to": {"node": n2, "port": p2}})
        return _ev("state", step=state.step, nodes=nodes, edges=edges,
                   chemistry=self.chemistry, algorithm=self.algorithm,
                   weights=self.weights, strategy=self.strategy,
                   dead=state.dead)


def encode_events(events: list[dict]) -> str:
    return "".join(json.dumps(e, sort_keys=True) + "\n" for e in events)


def decode_line(line: str) -> dict[str, Any]:
    return json.loads(line)

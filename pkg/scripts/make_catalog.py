"""Regenerate src/graphchem/catalog from seeded searches.

Every quine entry is the state at its orbit entry point (ages flattened), so
loading the file and verifying it reports preperiod 0.  Run from the repo
root: python scripts/make_catalog.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

import graphchem as gc  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "graphchem" / "catalog"

SEARCHES = {
    "ic": (gc.RandomFamily("ic", (5, 8), seed=2026), 6000),
    "diric": (gc.RandomFamily("diric", (5, 10), seed=11), 6000),
    "chemlambda": (gc.RandomFamily("chemlambda", (5, 10), seed=5), 6000),
}


def orbit_entry(fq: gc.FoundQuine, chemistry: str):
    family = "undirected" if chemistry == "ic" else "directed"
    m = gc.parse_mol(fq.mol_text, family=family)
    tr = gc.run(m, gc.EngineConfig(chemistry=chemistry, algorithm="older_first",
                                   horizon=fq.preperiod))
    text = gc.serialize_mol(tr.final_molecule)
    flat = gc.parse_mol(text, family=family)
    verdict = gc.verify_quine(flat, chemistry, horizon=120)
    if verdict.status != "quine" or verdict.preperiod != 0:
        return None
    return text, flat, verdict


def pick_quines(chemistry: str, count: int, max_nodes: int = 12):
    f, samples = SEARCHES[chemistry]
    report = gc.search_quines(f, samples, horizon=200)
    picked = []
    seen_periods = set()
    for fq in report.found:
        got = orbit_entry(fq, chemistry)
        if got is None:
            continue
        text, flat, verdict = got
        if flat.node_count > max_nodes:
            continue
        # prefer a spread of periods
        key = verdict.period
        if key in seen_periods and len(seen_periods) < count:
            continue
        seen_periods.add(key)
        picked.append((fq, text, flat, verdict))
        if len(picked) == count:
            break
    return [(fq, text, flat, v) for fq, text, flat, v in picked], f


def main() -> None:
    OUT.mkdir(exist_ok=True)
    entries = []

    def add(name, text, chemistry, family, status, period, nodes, source, comments):
        (OUT / f"{name}.mol").write_text(text if text.endswith("\n") else text + "\n")
        entries.append({"name": name, "file": f"{name}.mol", "chemistry": chemistry,
                        "family": family, "expected_status": status, "period": period,
                        "nodes": nodes, "source": source, "comments": comments})

    m = gc.lambda_to_mol("(\\x.x)z")
    add("identity-application", gc.serialize_mol(m), "chemlambda", "directed",
        "dead", None, m.node_count,
        "lambda front end: (\\x.x)z",
        "One beta step, then the result wire; dies at step 2. Runs the same under diric.")

    m = gc.lambda_to_mol("(\\x.x x)(\\y.y)")
    add("self-application-collapse", gc.serialize_mol(m), "chemlambda", "directed",
        "dead", None, m.node_count,
        "lambda front end: (\\x.x x)(\\y.y)",
        "Node counts walk 6-4-6-2 under older_first; ends as the identity graph.")

    for chemistry, prefix, count in (("ic", "ic-quine", 3),
                                     ("diric", "diric-quine", 2),
                                     ("chemlambda", "chemlambda-quine", 2)):
        picked, fam = pick_quines(chemistry, count)
        for letter, (fq, text, flat, v) in zip("abcdef", picked):
            add(f"{prefix}-{letter}", text, chemistry, flat.family, "quine",
                v.period, flat.node_count,
                f"random search: family={fam.family} nodes={fam.node_count} "
                f"master_seed={fam.seed} sample={fq.index}",
                f"Period {v.period} under older_first (GROW strategy), preperiod 0.")

    (OUT / "manifest.json").write_text(
        json.dumps({"entries": entries}, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(entries)} entries to {OUT}")


if __name__ == "__main__":
    main()

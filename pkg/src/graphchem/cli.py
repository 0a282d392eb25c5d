"""Command-line front end.

Every subcommand prints one effective-config line (flags plus seed) so any
run can be reproduced from its output alone.  Exit codes: 0 success (for
quine-check: verdict quine), 2 dead, 3 aperiodic, 1 usage or input errors.
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from . import __version__
from .alife import RandomFamily, search_quines, verify_quine
from .catalog import catalog_entries, catalog_text
from .canon import canonical_certificate
from .chemistry import CHEMISTRY_IDS, ruleset
from .engine import EngineConfig, Trace, new_state, run, step_engine
from .molecule import MolError, parse_mol, serialize_mol
from .translators import LambdaError, ic_to_diric, lambda_to_mol

_ALGO = {"random": "random", "older-first": "older_first", "older_first": "older_first"}
_STRATEGY = {"grow": "GROW", "slim": "SLIM", "GROW": "GROW", "SLIM": "SLIM"}


def _echo_config(cmd: str, **kv) -> None:
    pairs = " ".join(f"{k}={v}" for k, v in kv.items())
    print(f"# {cmd} {pairs}")


def _read_molecule(path: str, chemistry: str):
    chem = ruleset(chemistry)
    text = pathlib.Path(path).read_text()
    return parse_mol(text, family=chem.family)


def _load_input(args, chemistry: str):
    """--in accepts a mol file path or catalog:NAME."""
    if args.input.startswith("catalog:"):
        text, entry = catalog_text(args.input.split(":", 1)[1])
        chem = ruleset(chemistry or entry.chemistry)
        return parse_mol(text, family=chem.family), (chemistry or entry.chemistry)
    return _read_molecule(args.input, chemistry), chemistry


def cmd_run(args) -> int:
    chemistry = args.chemistry
    mol, chemistry = _load_input(args, chemistry)
    config = EngineConfig(chemistry=chemistry, algorithm=_ALGO[args.algo],
                          weights=args.weights, strategy=_STRATEGY[args.strategy],
                          seed=args.seed, horizon=args.steps)
    _echo_config("run", input=args.input, chemistry=chemistry, algo=config.algorithm,
                 weights=config.weights, strategy=config.strategy,
                 steps=args.steps, seed=args.seed)
    snapdir = None
    if args.snapshots:
        snapdir = pathlib.Path(args.snapshots)
        snapdir.mkdir(parents=True, exist_ok=True)
        state = new_state(mol, config)
        (snapdir / "step000000.mol").write_text(serialize_mol(state.mol))
        reports = []
        reason = "horizon"
        for _ in range(config.horizon):
            report = step_engine(state)
            reports.append(report)
            (snapdir / f"step{report.step:06d}.mol").write_text(serialize_mol(state.mol))
            if report.dead:
                reason = "dead"
                break
        trace = Trace(reports, state.mol, canonical_certificate(state.mol), reason)
    else:
        trace = run(mol, config)
    final = trace.final_molecule
    dead = trace.reason == "dead"
    if args.trace:
        pathlib.Path(args.trace).write_text(trace.to_csv())
    if args.out:
        pathlib.Path(args.out).write_text(serialize_mol(final))
    print(f"steps={len(trace.reports)} nodes={final.node_count} dead={str(dead).lower()}")
    return 0


def cmd_quine_check(args) -> int:
    mol, chemistry = _load_input(args, args.chemistry)
    _echo_config("quine-check", input=args.input, chemistry=chemistry,
                 strategy=_STRATEGY[args.strategy], horizon=args.horizon)
    verdict = verify_quine(mol, chemistry, _STRATEGY[args.strategy], args.horizon)
    if verdict.status == "quine":
        print(f"quine preperiod={verdict.preperiod} period={verdict.period}")
        return 0
    if verdict.status == "dead":
        print(f"dead after {verdict.steps_run} steps")
        return 2
    print(f"aperiodic within horizon {args.horizon}")
    return 3


def _parse_nodes(spec: str) -> int | tuple[int, int]:
    if "-" in spec:
        lo, hi = spec.split("-", 1)
        return (int(lo), int(hi))
    return int(spec)


def cmd_search(args) -> int:
    family = RandomFamily(args.family, _parse_nodes(args.nodes), seed=args.seed)
    chemistry = args.chemistry or args.family
    _echo_config("search", family=args.family, nodes=args.nodes, samples=args.samples,
                 seed=args.seed, chemistry=chemistry, strategy=_STRATEGY[args.strategy],
                 horizon=args.horizon, workers=args.workers)
    report = search_quines(family, args.samples, chemistry,
                           _STRATEGY[args.strategy], args.horizon,
                           workers=args.workers)
    text = report.to_jsonl()
    if args.out:
        pathlib.Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"quines={report.quines} dead={report.dead} aperiodic={report.aperiodic}",
          file=sys.stderr)
    return 0


def cmd_lambda(args) -> int:
    mol = lambda_to_mol(args.term)
    _echo_config("lambda", term=repr(args.term), reduce=args.reduce,
                 chemistry=args.chemistry, algo=_ALGO[args.algo],
                 steps=args.steps, seed=args.seed)
    if args.reduce:
        config = EngineConfig(chemistry=args.chemistry, algorithm=_ALGO[args.algo],
                              weights=args.weights, seed=args.seed, horizon=args.steps)
        trace = run(mol, config)
        mol = trace.final_molecule
        print(f"steps={len(trace.reports)} nodes={mol.node_count} "
              f"dead={str(trace.reason == 'dead').lower()}")
    text = serialize_mol(mol)
    if args.out:
        pathlib.Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_translate(args) -> int:
    if (args.source, args.target) != ("ic", "diric"):
        print(f"translate: only ic -> diric is available, got {args.source} -> {args.target}")
        return 1
    text = pathlib.Path(args.input).read_text()
    mol = parse_mol(text, family="undirected")
    _echo_config("translate", source=args.source, target=args.target, input=args.input)
    out = ic_to_diric(mol)
    result = serialize_mol(out)
    if args.out:
        pathlib.Path(args.out).write_text(result)
    else:
        sys.stdout.write(result)
    print(f"nodes={mol.node_count} -> {out.node_count}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    host, _, port = args.bind.rpartition(":")
    _echo_config("serve", bind=args.bind, static=args.static)
    from .server import main as serve_main
    return serve_main(host or "127.0.0.1", int(port), args.static)


def cmd_rules(args) -> int:
    _echo_config("rules", chemistry=args.chemistry)
    chem = ruleset(args.chemistry)
    for rule in chem.rules:
        d = rule.describe()
        lhs = d["lhs"]
        rhs = " ".join(f"{t['type']}[{','.join(t['ports'])}]" for t in d["rhs"]) or "-"
        wires = " ".join("~".join(w) for w in d["wires"])
        print(f"{rule.name:10s} {d['class']:4s} {lhs['x']['type']}.{lhs['x']['port']}"
              f" >< {lhs['y']['type']}.{lhs['y']['port']:3s} -> {rhs} {wires}".rstrip())
    return 0


def cmd_catalog(args) -> int:
    _echo_config("catalog", details=args.details)
    for entry in catalog_entries():
        line = (f"{entry.name:28s} {entry.chemistry:10s} {entry.expected_status:6s}"
                f" nodes={entry.nodes}")
        if entry.period is not None:
            line += f" period={entry.period}"
        print(line)
        if args.details:
            print(f"    source: {entry.source}")
            print(f"    {entry.comments}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphchem",
                                description="artificial-chemistry graph rewriting workbench")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="evolve a molecule and write trace/final state")
    run_p.add_argument("--in", dest="input", required=True,
                       help="mol file path or catalog:NAME")
    run_p.add_argument("--chemistry", choices=CHEMISTRY_IDS, default=None)
    run_p.add_argument("--algo", choices=sorted(_ALGO), default="random")
    run_p.add_argument("--weights", type=float, default=0.5)
    run_p.add_argument("--strategy", choices=sorted(_STRATEGY), default="grow")
    run_p.add_argument("--steps", type=int, default=100)
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--trace", help="write per-step CSV here")
    run_p.add_argument("--out", help="write the final molecule here")
    run_p.add_argument("--snapshots", help="write one mol file per step into this directory")
    run_p.set_defaults(fn=cmd_run)

    qc = sub.add_parser("quine-check", help="verdict: exit 0 quine, 2 dead, 3 aperiodic")
    qc.add_argument("--in", dest="input", required=True)
    qc.add_argument("--chemistry", choices=CHEMISTRY_IDS, default=None)
    qc.add_argument("--strategy", choices=sorted(_STRATEGY), default="grow")
    qc.add_argument("--horizon", type=int, default=200)
    qc.set_defaults(fn=cmd_quine_check)

    se = sub.add_parser("search", help="random quine search")
    se.add_argument("--family", choices=CHEMISTRY_IDS, required=True)
    se.add_argument("--nodes", default="5-8", help="node count K or range LO-HI")
    se.add_argument("--samples", type=int, required=True)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--chemistry", choices=CHEMISTRY_IDS, default=None)
    se.add_argument("--strategy", choices=sorted(_STRATEGY), default="grow")
    se.add_argument("--horizon", type=int, default=200)
    se.add_argument("--out", help="write found quines as JSON lines here")
    se.add_argument("--workers", type=int, default=1)
    se.set_defaults(fn=cmd_search)

    la = sub.add_parser("lambda", help="translate a lambda term; optionally reduce it")
    la.add_argument("term")
    la.add_argument("--reduce", action="store_true")
    la.add_argument("--chemistry", choices=("chemlambda", "diric"), default="chemlambda")
    la.add_argument("--algo", choices=sorted(_ALGO), default="older-first")
    la.add_argument("--weights", type=float, default=0.5)
    la.add_argument("--steps", type=int, default=200)
    la.add_argument("--seed", type=int, default=0)
    la.add_argument("--out", help="write the molecule here instead of stdout")
    la.set_defaults(fn=cmd_lambda)

    tr = sub.add_parser("translate", help="node-doubling translation between families")
    tr.add_argument("--from", dest="source", required=True)
    tr.add_argument("--to", dest="target", required=True)
    tr.add_argument("--in", dest="input", required=True)
    tr.add_argument("--out")
    tr.set_defaults(fn=cmd_translate)

    sv = sub.add_parser("serve", help="serve the session protocol and playground assets")
    sv.add_argument("--bind", default="127.0.0.1:8008")
    sv.add_argument("--static", help="directory of playground assets")
    sv.set_defaults(fn=cmd_serve)

    ru = sub.add_parser("rules", help="print the rewrite table of a chemistry")
    ru.add_argument("--chemistry", choices=CHEMISTRY_IDS, required=True)
    ru.set_defaults(fn=cmd_rules)

    ca = sub.add_parser("catalog", help="list packaged molecules")
    ca.add_argument("--details", action="store_true")
    ca.set_defaults(fn=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (MolError, LambdaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

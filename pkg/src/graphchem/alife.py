"""Quine detection, random molecules, quine search, metabolism and lifetime.

A quine here is a molecule whose deterministic older-first evolution revisits
an earlier shape: the verdict carries the first repeated step (preperiod) and
the gap (period).  Search samples random molecules from a seeded family and
verifies each one independently, so results do not depend on worker count.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import random as _random
from dataclasses import dataclass, replace

from .canon import canonical_certificate, isomorphic
from .chemistry import GROW, ruleset
from .engine import EngineConfig, _shuffle, new_state, step_engine
from .molecule import (
    DIRECTED, MolError, Molecule, SIGNATURES, UNDIRECTED,
    connected_components, parse_mol, serialize_mol,
)

# node types drawn when a family does not pin its own weights; closure types
# (FRIN, FROUT, E) and Arrow are never drawn, they only cap leftover ports
_DEFAULT_WEIGHTS = {
    "ic": {"GAMMA": 1.0, "DELTA": 1.0},
    "chemlambda": {"L": 1.0, "A": 1.0, "FI": 1.0, "FO": 1.0, "FOE": 1.0, "T": 0.5},
    "diric": {"L": 1.0, "A": 1.0, "FI": 1.0, "FOE": 1.0, "T": 0.5},
}


@dataclass(frozen=True)
class RandomFamily:
    family: str  # chemistry id; fixes the node-type universe
    node_count: int | tuple[int, int]
    seed: int = 0
    weights: dict | None = None

    def __post_init__(self) -> None:
        chem = ruleset(self.family)
        nc = self.node_count
        if isinstance(nc, int):
            if nc < 1:
                raise MolError("node_count must be >= 1")
        else:
            lo, hi = nc
            if not (1 <= lo <= hi):
                raise MolError(f"bad node_count range {nc}")
        if self.weights is not None:
            if not self.weights:
                raise MolError("weights must name at least one node type")
            for t, w in self.weights.items():
                sig = SIGNATURES.get(t)
                if sig is None or sig.directed != (chem.family == DIRECTED):
                    raise MolError(f"type {t} does not fit family {self.family}")
                if t == "Arrow":
                    raise MolError("Arrow is transient and cannot be drawn")
                if w <= 0:
                    raise MolError(f"weight for {t} must be positive")

    def effective_weights(self) -> dict:
        return dict(self.weights) if self.weights else dict(_DEFAULT_WEIGHTS[self.family])


def random_molecule(f: RandomFamily) -> Molecule:
    """Draw types per weights, wire ports by seeded uniform matching, close
    the leftovers (FRIN/FROUT for directed ports, E for undirected)."""
    rng = _random.Random(f.seed)
    nc = f.node_count
    n = nc if isinstance(nc, int) else rng.randint(nc[0], nc[1])
    weights = f.effective_weights()
    names = sorted(weights)
    cum: list[float] = []
    total = 0.0
    for t in names:
        total += weights[t]
        cum.append(total)

    def pick() -> str:
        x = rng.random() * total
        for t, c in zip(names, cum):
            if x < c:
                return t
        return names[-1]

    types = [pick() for _ in range(n)]
    directed = ruleset(f.family).family == DIRECTED
    tags: dict[tuple[int, int], str] = {}
    counter = 0

    def wire(a: tuple[int, int], b: tuple[int, int]) -> None:
        nonlocal counter
        tags[a] = tags[b] = f"e{counter}"
        counter += 1

    closures: list[str] = []

    def close(slot: tuple[int, int], ctype: str) -> None:
        nonlocal counter
        tag = f"e{counter}"
        counter += 1
        tags[slot] = tag
        closures.append(f"{ctype} {tag}")

    if directed:
        ins = [(i, p) for i, t in enumerate(types)
               for p in range(SIGNATURES[t].arity) if SIGNATURES[t].port_dir(p) == "in"]
        outs = [(i, p) for i, t in enumerate(types)
                for p in range(SIGNATURES[t].arity) if SIGNATURES[t].port_dir(p) == "out"]
        _shuffle(ins, rng)
        _shuffle(outs, rng)
        for a, b in zip(outs, ins):
            wire(a, b)
        for slot in outs[len(ins):]:
            close(slot, "FROUT")
        for slot in ins[len(outs):]:
            close(slot, "FRIN")
    else:
        slots = [(i, p) for i, t in enumerate(types)
                 for p in range(SIGNATURES[t].arity)]
        _shuffle(slots, rng)
        for k in range(0, len(slots) - 1, 2):
            wire(slots[k], slots[k + 1])
        if len(slots) % 2:
            close(slots[-1], "E")

    rows = [" ".join([t, *(tags[(i, p)] for p in range(SIGNATURES[t].arity))])
            for i, t in enumerate(types)]
    rows.extend(closures)
    return parse_mol("\n".join(rows), family=DIRECTED if directed else UNDIRECTED)


# -- quine verification -------------------------------------------------------


@dataclass(frozen=True)
class QuineVerdict:
    status: str  # quine | dead | aperiodic_within_horizon
    preperiod: int | None
    period: int | None
    steps_run: int
    final_nodes: int
    capped: bool = False


def _shape_key(m: Molecule) -> tuple:
    return (m.node_count, m.edge_count, tuple(sorted(m.type_counts().items())))


def verify_quine(m: Molecule, chemistry: str, strategy: str = "GROW",
                 horizon: int = 200, max_nodes: int | None = None) -> QuineVerdict:
    """Run older_first and look for a repeated shape.

    Certificates are only computed when a cheap shape key (node, edge and
    per-type counts) already collided, then confirmed by explicit isomorphism.
    The engine's age clock starts at the largest birth step present, so
    verifying a mid-orbit snapshot continues its run exactly; on a repeat the
    verdict's period therefore re-verifies from the repeated state itself.
    """
    cfg = EngineConfig(chemistry=chemistry, algorithm="older_first",
                       strategy=strategy, seed=0, horizon=horizon)
    state = new_state(m, cfg)
    base = max((n.birth_step for n in state.mol.nodes.values()), default=0)
    state.step = base
    history: list[tuple[tuple, Molecule, object | None]] = []
    by_key: dict[tuple, list[int]] = {}

    def record(idx: int) -> None:
        key = _shape_key(state.mol)
        history.append((key, state.mol.copy(), None))
        by_key.setdefault(key, []).append(idx)

    def repeat_of(idx: int) -> int | None:
        key = _shape_key(state.mol)
        earlier = by_key.get(key, ())
        if not earlier:
            return None
        cert = canonical_certificate(state.mol)
        for j in earlier:
            kj, mj, cj = history[j]
            if cj is None:
                cj = canonical_certificate(mj)
                history[j] = (kj, mj, cj)
            if cj.digest == cert.digest and isomorphic(mj, state.mol):
                return j
        return None

    record(0)
    for i in range(1, horizon + 1):
        report = step_engine(state)
        if report.dead:
            return QuineVerdict("dead", None, None, i, state.mol.node_count)
        j = repeat_of(i)
        if j is not None:
            return QuineVerdict("quine", j, i - j, i, state.mol.node_count)
        if max_nodes is not None and state.mol.node_count > max_nodes:
            return QuineVerdict("aperiodic_within_horizon", None, None, i,
                                state.mol.node_count, capped=True)
        record(i)
    return QuineVerdict("aperiodic_within_horizon", None, None, horizon,
                        state.mol.node_count)


# -- random search -------------------------------------------------------------


@dataclass(frozen=True)
class FoundQuine:
    index: int
    seed: int
    mol_text: str
    preperiod: int
    period: int
    node_count: int

    def to_json(self) -> str:
        return json.dumps({"index": self.index, "seed": self.seed,
                           "preperiod": self.preperiod, "period": self.period,
                           "nodes": self.node_count, "mol": self.mol_text},
                          sort_keys=True)


@dataclass
class SearchReport:
    family: str
    chemistry: str
    samples: int
    quines: int
    dead: int
    aperiodic: int
    found: list[FoundQuine]

    def to_jsonl(self) -> str:
        lines = [fq.to_json() for fq in self.found]
        lines.append(json.dumps({
            "samples": self.samples, "quines": self.quines, "dead": self.dead,
            "aperiodic": self.aperiodic, "family": self.family,
            "chemistry": self.chemistry}, sort_keys=True))
        return "\n".join(lines) + "\n"


def sample_seed(master: int, index: int) -> int:
    digest = hashlib.blake2b(f"{master}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _default_cap(f: RandomFamily) -> int:
    nc = f.node_count
    hi = nc if isinstance(nc, int) else nc[1]
    return max(64, 4 * hi)


def _search_chunk(args: tuple) -> list[tuple]:
    f, chemistry, strategy, horizon, max_nodes, start, stop = args
    out = []
    for i in range(start, stop):
        mol = random_molecule(replace(f, seed=sample_seed(f.seed, i)))
        verdict = verify_quine(mol, chemistry, strategy, horizon, max_nodes)
        if verdict.status == "quine":
            out.append((i, "quine", verdict.preperiod, verdict.period,
                        mol.node_count, serialize_mol(mol)))
        else:
            out.append((i, verdict.status, None, None, None, None))
    return out


def search_quines(f: RandomFamily, samples: int, chemistry: str | None = None,
                  strategy: str = "GROW", horizon: int = 200,
                  max_nodes: int | None = None, workers: int = 1) -> SearchReport:
    """Verify `samples` random molecules; per-sample seeds derive from the
    family seed and the sample index, so output is worker-count independent."""
    if samples < 1:
        raise MolError("samples must be >= 1")
    if chemistry is None:
        chemistry = f.family
    if max_nodes is None:
        max_nodes = _default_cap(f)
    chunk = 1024
    spans = [(f, chemistry, strategy, horizon, max_nodes, s, min(s + chunk, samples))
             for s in range(0, samples, chunk)]
    if workers <= 1:
        chunks = [_search_chunk(a) for a in spans]
    else:
        with multiprocessing.Pool(workers) as pool:
            chunks = pool.map(_search_chunk, spans)
    found: list[FoundQuine] = []
    dead = aperiodic = 0
    for rows in chunks:
        for i, status, pre, per, nodes, text in rows:
            if status == "quine":
                found.append(FoundQuine(i, sample_seed(f.seed, i), text, pre, per, nodes))
            elif status == "dead":
                dead += 1
            else:
                aperiodic += 1
    return SearchReport(f.family, chemistry, samples, len(found), dead,
                        aperiodic, found)


# -- metabolism and lifetime ---------------------------------------------------


@dataclass
class MetabolismSeries:
    node_counts: list[int]
    grow_counts: list[int]
    slim_counts: list[int]
    death_step: int | None
    trailing_min: int
    trailing_max: int


def metabolism_run(m: Molecule, chemistry: str, w: float, seed: int,
                   horizon: int, window: int = 50) -> MetabolismSeries:
    """Random-algorithm run; per-step node counts and rewrite activity."""
    cfg = EngineConfig(chemistry=chemistry, algorithm="random", weights=w,
                       seed=seed, horizon=horizon)
    state = new_state(m, cfg)
    chem = ruleset(chemistry)
    nodes: list[int] = []
    grows: list[int] = []
    slims: list[int] = []
    death: int | None = None
    for _ in range(horizon):
        report = step_engine(state)
        nodes.append(report.node_count)
        g = sum(1 for rule, _ in report.applied
                if chem.by_name[rule].growth_class == GROW)
        grows.append(g)
        slims.append(len(report.applied) - g)
        if report.dead:
            death = report.step
            break
    tail = nodes[-window:] if nodes else [m.node_count]
    return MetabolismSeries(nodes, grows, slims, death, min(tail), max(tail))


@dataclass
class LifetimeSummary:
    death_fraction: float
    death_steps: list[int]
    quantiles: dict[str, int] | None


def lifetime_stats(m: Molecule, chemistry: str, w: float, seeds: list[int],
                   horizon: int) -> LifetimeSummary:
    if not seeds:
        raise MolError("seeds must be nonempty")
    deaths: list[int] = []
    for seed in seeds:
        series = metabolism_run(m, chemistry, w, seed, horizon)
        if series.death_step is not None:
            deaths.append(series.death_step)
    deaths.sort()
    quant = None
    if deaths:
        def q(p: float) -> int:
            return deaths[min(len(deaths) - 1, int(p * len(deaths)))]
        quant = {"p25": q(0.25), "p50": q(0.50), "p75": q(0.75), "p90": q(0.90)}
    return LifetimeSummary(len(deaths) / len(seeds), deaths, quant)


# -- replication ----------------------------------------------------------------


def run_with_snapshots(m: Molecule, config: EngineConfig) -> list[tuple[int, Molecule]]:
    state = new_state(m, config)
    out: list[tuple[int, Molecule]] = [(0, state.mol.copy())]
    for _ in range(config.horizon):
        report = step_engine(state)
        out.append((report.step, state.mol.copy()))
        if report.dead:
            break
    return out


def detect_replication(states: list[tuple[int, Molecule]],
                       original: Molecule) -> tuple[bool, int | None]:
    """First step whose state holds two or more disjoint copies of original."""
    for step, mol in states:
        copies = 0
        for comp in connected_components(mol):
            if comp.node_count == original.node_count and isomorphic(comp, original):
                copies += 1
                if copies >= 2:
                    return True, step
    return False, None

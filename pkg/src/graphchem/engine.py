"""Step scheduler for graph chemistries.

Two algorithms:

* ``random``      - visit matches in a seeded shuffled order, skip any match
  that shares a node with one already accepted this step, then flip a biased
  coin per accepted match: growing rewrites fire with probability w, slimming
  ones with probability 1 - w.
* ``older_first`` - deterministic greedy.  Sort matches by age (older joins
  first), break ties in favour of the configured strategy's preferred growth
  class, then by joining tag; accept a maximal conflict-free prefix and fire
  everything accepted.

After the fired rewrites are applied the Arrow contraction pass always runs.
A state is dead when a step finds zero matches; stepping a dead state again
is an error.
"""

from __future__ import annotations

import csv
import io
import random as _random
from dataclasses import dataclass, field

from .canon import Certificate, canonical_certificate
from .chemistry import (
    Chemistry, GROW, Match, apply_match_into, comb_into, conflict_pairs,
    find_matches, ruleset,
)
from .molecule import MolError, Molecule

ALGORITHMS = ("random", "older_first")
STRATEGIES = ("GROW", "SLIM")


class DeadStateError(MolError):
    pass


@dataclass
class EngineConfig:
    chemistry: str = "chemlambda"
    algorithm: str = "random"
    weights: float = 0.5
    strategy: str = "GROW"
    seed: int = 0
    horizon: int = 1000

    def __post_init__(self) -> None:
        ruleset(self.chemistry)
        if self.algorithm not in ALGORITHMS:
            raise MolError(f"unknown algorithm {self.algorithm!r}")
        if not 0.0 <= self.weights <= 1.0:
            raise MolError(f"weights must lie in [0, 1], got {self.weights}")
        if self.strategy not in STRATEGIES:
            raise MolError(f"strategy must be GROW or SLIM, got {self.strategy!r}")
        if self.horizon < 0:
            raise MolError("horizon must be >= 0")


@dataclass
class StepReport:
    step: int
    matches_found: int
    applied: tuple[tuple[str, int], ...]  # (rule name, match age)
    node_count: int
    type_counts: dict[str, int]
    arrows_combed: int
    loops_delta: int
    dead: bool


@dataclass
class EngineState:
    mol: Molecule
    config: EngineConfig
    step: int = 0
    dead: bool = False
    rng: _random.Random = field(init=False)

    def __post_init__(self) -> None:
        self.rng = _random.Random(self.config.seed)


def new_state(mol: Molecule, config: EngineConfig) -> EngineState:
    chem = ruleset(config.chemistry)
    if mol.family != chem.family:
        raise MolError(
            f"chemistry {config.chemistry} needs {chem.family} molecules, got {mol.family}")
    return EngineState(mol.copy(), config)


def _shuffle(items: list, rng: _random.Random) -> None:
    # Fisher-Yates on randrange; random.shuffle would work too, but pinning
    # the draw sequence here keeps recorded traces stable across Python bumps
    for i in range(len(items) - 1, 0, -1):
        j = rng.randrange(i + 1)
        items[i], items[j] = items[j], items[i]


def _accept_random(matches: list[Match], chem: Chemistry,
                   rng: _random.Random, w: float) -> list[Match]:
    order = list(matches)
    _shuffle(order, rng)
    taken: set[str] = set()
    fired: list[Match] = []
    for mt in order:
        if mt.node_x in taken or mt.node_y in taken:
            continue
        taken.add(mt.node_x)
        taken.add(mt.node_y)
        coin = rng.random()
        grow = chem.by_name[mt.rule].growth_class == GROW
        if (coin < w) if grow else (coin < 1.0 - w):
            fired.append(mt)
    return fired


def _accept_older_first(matches: list[Match], chem: Chemistry,
                        strategy: str) -> list[Match]:
    prefer_grow = strategy == "GROW"

    def rank(mt: Match):
        grow = chem.by_name[mt.rule].growth_class == GROW
        return (mt.age, grow != prefer_grow)

    taken: set[str] = set()
    fired: list[Match] = []
    for mt in sorted(matches, key=rank):  # find_matches pre-sorts by tag
        if mt.node_x in taken or mt.node_y in taken:
            continue
        taken.add(mt.node_x)
        taken.add(mt.node_y)
        fired.append(mt)
    return fired


def is_dead(mol: Molecule, chemistry: Chemistry | str) -> bool:
    """No rule instance anywhere: nothing can ever fire again."""
    return not find_matches(mol, ruleset(chemistry) if isinstance(chemistry, str) else chemistry)


def step_engine(state: EngineState) -> StepReport:
    """Advance one step in place and return its report."""
    if state.dead:
        raise DeadStateError(f"molecule died at step {state.step}; reset before stepping")
    cfg = state.config
    chem = ruleset(cfg.chemistry)
    state.step += 1
    mol = state.mol
    matches = find_matches(mol, chem)
    if not matches:
        state.dead = True
        return StepReport(state.step, 0, (), mol.node_count,
                          mol.type_counts(), 0, 0, True)
    if cfg.algorithm == "random":
        fired = _accept_random(matches, chem, state.rng, cfg.weights)
    else:
        fired = _accept_older_first(matches, chem, cfg.strategy)
    loops_before = mol.loops_harvested
    for mt in fired:
        apply_match_into(mol, mt, chem, state.step)
    combed = comb_into(mol)
    return StepReport(state.step, len(matches),
                      tuple((mt.rule, mt.age) for mt in fired),
                      mol.node_count, mol.type_counts(), combed,
                      mol.loops_harvested - loops_before, False)


@dataclass
class Trace:
    reports: list[StepReport]
    final_molecule: Molecule
    final_certificate: Certificate
    reason: str  # dead | horizon

    def to_csv(self) -> str:
        families = sorted({t for r in self.reports for t in r.type_counts})
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["step", "matches", "applied", "nodes",
                         *families, "arrows", "loops", "dead"])
        for r in self.reports:
            applied = ";".join(f"{rule}:{age}" for rule, age in r.applied)
            writer.writerow([r.step, r.matches_found, applied, r.node_count,
                             *(r.type_counts.get(t, 0) for t in families),
                             r.arrows_combed, r.loops_delta, int(r.dead)])
        return buf.getvalue()


def run(mol: Molecule, config: EngineConfig) -> Trace:
    """Run until death or the horizon, collecting a report per step."""
    state = new_state(mol, config)
    reports: list[StepReport] = []
    reason = "horizon"
    for _ in range(config.horizon):
        report = step_engine(state)
        reports.append(report)
        if report.dead:
            reason = "dead"
            break
    return Trace(reports, state.mol, canonical_certificate(state.mol), reason)

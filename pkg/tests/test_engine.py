"""Scheduling: the seeded-random algorithm, the deterministic age-ordered
algorithm, traces, and death.

Hand-derived anchors used below:

* identity application "L e e t / A t z r": one beta match; firing it and
  contracting Arrows leaves the bare FRIN-FROUT wire, so the run dies on the
  step after (2 steps total under the deterministic algorithm).
* conflict witness "L a b x / A x c y / FOE y d e": two matches of equal age
  sharing the A node; A-FOE is GROW, A-L is SLIM, so the strategy decides
  which one fires and the other is skipped as conflicting.
"""

import pytest
from hypothesis import given, settings, strategies as st

from graphchem.molecule import MolError
from graphchem import (
    DeadStateError,
    EngineConfig,
    RandomFamily,
    find_matches,
    is_dead,
    isomorphic,
    new_state,
    parse_mol,
    random_molecule,
    rewrite_class,
    run,
    ruleset,
    serialize_mol,
    step_engine,
)

IDENTITY_APP = "L e e t\nA t z r"
CONFLICT_WITNESS = "L a b x\nA x c y\nFOE y d e"
WIRE = "FRIN w\nFROUT w"
# FI fed by two FRIN with output into T: single SLIM match (FI-T), no GROW
SLIM_ONLY = "FI a b x\nT x"


def config(**kw) -> EngineConfig:
    base = dict(chemistry="chemlambda", algorithm="older_first",
                weights=0.5, strategy="GROW", seed=0, horizon=100)
    base.update(kw)
    return EngineConfig(**base)


class TestEngineConfig:
    def test_bad_weights(self):
        with pytest.raises(MolError):
            config(weights=1.5)

    def test_bad_algorithm(self):
        with pytest.raises(MolError):
            config(algorithm="sometimes")

    def test_bad_strategy(self):
        with pytest.raises(MolError):
            config(strategy="shrink")

    def test_negative_horizon(self):
        with pytest.raises(MolError):
            config(horizon=-1)


class TestIsDead:
    def test_empty(self):
        assert is_dead(parse_mol("", family="directed"), "chemlambda")

    def test_wire(self):
        assert is_dead(parse_mol(WIRE), "chemlambda")

    def test_identity_application_lives(self):
        assert not is_dead(parse_mol(IDENTITY_APP), "chemlambda")


class TestStep:
    def test_zero_matches_reports_death(self):
        state = new_state(parse_mol(WIRE), config())
        report = step_engine(state)
        assert report.matches_found == 0
        assert report.dead is True
        assert report.applied == ()
        assert state.mol.node_count == 2

    def test_stepping_dead_state_raises(self):
        state = new_state(parse_mol(WIRE), config())
        step_engine(state)
        with pytest.raises(DeadStateError):
            step_engine(state)

    def test_random_w1_starves_slim(self):
        """w=1 gives SLIM matches acceptance probability 0."""
        state = new_state(parse_mol(SLIM_ONLY), config(algorithm="random", weights=1.0))
        for _ in range(20):
            report = step_engine(state)
            assert report.applied == ()
            assert report.dead is False

    def test_random_w0_starves_grow(self):
        grow_only = "L a b x\nFOE x c d"  # single L-FOE match, GROW
        state = new_state(parse_mol(grow_only), config(algorithm="random", weights=0.0))
        for _ in range(20):
            report = step_engine(state)
            assert report.applied == ()

    def test_random_w1_only_grow_fires(self):
        """At w=1 a SLIM match may still reserve its nodes, but never fires."""
        fired_rules = []
        for seed in range(10):
            state = new_state(parse_mol(CONFLICT_WITNESS),
                              config(algorithm="random", weights=1.0, seed=seed))
            report = step_engine(state)
            for rule, _ in report.applied:
                fired_rules.append(rule)
                assert rewrite_class(rule) == "GROW", f"SLIM rule {rule} fired at w=1"
        assert "A-FOE" in fired_rules, "A-FOE never fired across 10 seeds"

    def test_older_first_grow_prefers_distribution(self):
        state = new_state(parse_mol(CONFLICT_WITNESS), config(strategy="GROW"))
        report = step_engine(state)
        assert [r for r, _ in report.applied] == ["A-FOE"]
        assert report.matches_found == 2

    def test_older_first_slim_prefers_annihilation(self):
        state = new_state(parse_mol(CONFLICT_WITNESS), config(strategy="SLIM"))
        report = step_engine(state)
        assert [r for r, _ in report.applied] == ["A-L"]

    def test_older_first_age_beats_class(self):
        """An older SLIM match outranks a younger GROW match even under the
        GROW strategy: age is the primary key."""
        m = parse_mol(CONFLICT_WITNESS)
        foe = next(nid for nid, n in m.nodes.items() if n.node_type == "FOE")
        m.nodes[foe].birth_step = 3  # makes the A-FOE match younger
        state = new_state(m, config(strategy="GROW"))
        state.step = 3
        report = step_engine(state)
        assert [r for r, _ in report.applied] == ["A-L"]

    def test_fired_node_sets_disjoint(self):
        m = random_molecule(RandomFamily("chemlambda", 14, seed=99))
        state = new_state(m, config(algorithm="random", weights=0.9, seed=5))
        chem = ruleset("chemlambda")
        for _ in range(10):
            matches = {(mt.rule, mt.edge): mt for mt in find_matches(state.mol, chem)}
            if not matches:
                break
            report = step_engine(state)
            # fired rules must correspond to disjoint node sets
            seen = set()
            for rule, age in report.applied:
                mt = next(v for k, v in matches.items() if k[0] == rule and v.age == age
                          and not ({v.node_x, v.node_y} & seen))
                seen |= {mt.node_x, mt.node_y}


class TestRun:
    def test_horizon_zero(self):
        trace = run(parse_mol(IDENTITY_APP), config(horizon=0))
        assert trace.reports == []
        assert trace.reason == "horizon"

    def test_identity_application_dies_in_two_steps(self):
        for strategy in ("GROW", "SLIM"):
            trace = run(parse_mol(IDENTITY_APP), config(strategy=strategy))
            assert trace.reason == "dead"
            assert len(trace.reports) == 2
            assert isomorphic(trace.final_molecule, parse_mol(WIRE))

    def test_same_seed_identical_traces(self):
        m = random_molecule(RandomFamily("chemlambda", 12, seed=4))
        cfg = config(algorithm="random", seed=123, horizon=60)
        t1 = run(m, cfg)
        t2 = run(m, cfg)
        assert t1.reports == t2.reports
        assert t1.final_certificate == t2.final_certificate
        assert serialize_mol(t1.final_molecule) == serialize_mol(t2.final_molecule)

    def test_different_seeds_usually_differ(self):
        m = random_molecule(RandomFamily("chemlambda", 14, seed=4))
        traces = [run(m, config(algorithm="random", seed=s, horizon=30)).reports
                  for s in range(6)]
        assert any(traces[0] != other for other in traces[1:])

    def test_family_mismatch_rejected(self):
        with pytest.raises(MolError):
            run(parse_mol("GAMMA a b c"), config())

    def test_input_molecule_not_mutated(self):
        m = parse_mol(IDENTITY_APP)
        before = serialize_mol(m)
        run(m, config())
        assert serialize_mol(m) == before

    def test_step_numbers_consecutive(self):
        m = random_molecule(RandomFamily("ic", 8, seed=21))
        trace = run(m, config(chemistry="ic", algorithm="random", seed=2, horizon=40))
        assert [r.step for r in trace.reports] == list(range(1, len(trace.reports) + 1))


class TestTraceCsv:
    def test_schema(self):
        trace = run(parse_mol(IDENTITY_APP), config())
        lines = trace.to_csv().splitlines()
        header = lines[0].split(",")
        assert header[:4] == ["step", "matches", "applied", "nodes"]
        assert header[-3:] == ["arrows", "loops", "dead"]
        assert len(lines) == 1 + len(trace.reports)

    def test_applied_cells_name_rule_and_age(self):
        trace = run(parse_mol(IDENTITY_APP), config())
        first = trace.to_csv().splitlines()[1].split(",")
        assert first[2] == "A-L:0"


# -- properties ---------------------------------------------------------------

@given(st.integers(0, 10**9), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_node_ledger(mol_seed, run_seed):
    """Per step: nodes = previous nodes + sum(|rhs|-2 over fired) - arrows combed."""
    m = random_molecule(RandomFamily("chemlambda", (6, 12), seed=mol_seed))
    chem = ruleset("chemlambda")
    cfg = config(algorithm="random", seed=run_seed, weights=0.6, horizon=15)
    state = new_state(m, cfg)
    prev = state.mol.node_count
    for _ in range(cfg.horizon):
        report = step_engine(state)
        if report.dead:
            break
        delta = sum(len(chem.by_name[rule].rhs) - 2 for rule, _ in report.applied)
        assert report.node_count == prev + delta - report.arrows_combed
        prev = report.node_count


@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_diric_older_first_fires_everything(seed):
    """No conflicts means the greedy maximal set is the entire match list."""
    m = random_molecule(RandomFamily("diric", (4, 12), seed=seed))
    state = new_state(m, config(chemistry="diric"))
    matches = find_matches(state.mol, ruleset("diric"))
    report = step_engine(state)
    assert len(report.applied) == len(matches)


@given(st.integers(0, 10**9), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_death_is_absorbing(mol_seed, run_seed):
    # low weights keep the random walk SLIM-leaning so most samples die
    # inside the horizon instead of growing without bound
    m = random_molecule(RandomFamily("chemlambda", (4, 6), seed=mol_seed))
    trace = run(m, config(algorithm="random", seed=run_seed, weights=0.3, horizon=60))
    if trace.reason == "dead":
        assert is_dead(trace.final_molecule, "chemlambda")
        assert trace.reports[-1].dead
        assert all(not r.dead for r in trace.reports[:-1])

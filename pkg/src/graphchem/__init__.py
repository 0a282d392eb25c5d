"""Graph-rewrite workbench for artificial chemistries.

Directed lambda-calculus molecules and interaction-combinator molecules under
a shared port-graph substrate, with random and older-first schedulers, quine
search and verification, and a newline-JSON session protocol for live runs.
"""

from .molecule import (
    Molecule, MolError, ParseError, SpliceError, SIGNATURES,
    parse_mol, serialize_mol, validate, connected_components, splice,
)
from .canon import Certificate, canonical_certificate, isomorphic
from .chemistry import (
    Chemistry, Match, RewriteRule, ruleset, CHEMISTRY_IDS, rewrite_class,
    find_matches, conflict_pairs, apply_match, comb_pass,
)
from .engine import (
    EngineConfig, EngineState, StepReport, Trace, DeadStateError,
    new_state, step_engine, run, is_dead,
)
from .translators import (
    Var, Lam, App, LambdaError, parse_lambda, lambda_to_mol,
    ic_to_diric, ic_to_diric_map,
)
from .alife import (
    QuineVerdict, RandomFamily, FoundQuine, SearchReport, MetabolismSeries,
    LifetimeSummary, verify_quine, random_molecule, search_quines,
    metabolism_run, lifetime_stats, detect_replication, run_with_snapshots,
    sample_seed,
)

__version__ = "0.1.0"

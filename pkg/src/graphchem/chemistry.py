"""Rewrite rules, rule tables, pattern matching and application.

Three chemistries are provided:

* ``chemlambda``  - lambda-calculus graph chemistry over the directed family.
* ``diric``       - directed interaction-combinator chemistry; shares the
  distribution/annihilation core with chemlambda, swaps the application
  duplication rule for a fan-in interaction and uses termination rules that
  keep exactly one active port per node type, so no two match patterns can
  ever share a node.
* ``ic``          - undirected interaction combinators.

A rule's left side is a single edge joining a specific port of one node type
to a specific port of another.  The right side is a list of node templates
over formal tags plus optional direct wirings; both compile to one `splice`
call.  ``COMB`` (Arrow chain contraction) is not a scheduled rule; it runs as
a mandatory pass after every engine step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .molecule import (
    DIRECTED, IN, OUT, UNDIRECTED,
    Endpoint, MolError, Molecule, SIGNATURES, splice_into, tag_key,
)

GROW, SLIM, NEUTRAL = "GROW", "SLIM", "NEUTRAL"


class StaleMatchError(MolError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    name: str
    rule_set: str  # bare | end | dicmod | ic
    x_type: str
    x_formals: tuple[str, ...]
    y_type: str
    y_formals: tuple[str, ...]
    rhs: tuple[tuple[str, tuple[str, ...]], ...]
    wires: tuple[tuple[str, str], ...] = ()

    @property
    def join_formal(self) -> str:
        common = set(self.x_formals) & set(self.y_formals)
        assert len(common) == 1, self.name
        return next(iter(common))

    @property
    def x_port(self) -> int:
        return self.x_formals.index(self.join_formal)

    @property
    def y_port(self) -> int:
        return self.y_formals.index(self.join_formal)

    @property
    def lhs_key(self) -> tuple[str, int, str, int]:
        return (self.x_type, self.x_port, self.y_type, self.y_port)

    @property
    def growth_class(self) -> str:
        # rewrites adding more nodes than they consume grow, the rest slim
        return GROW if len(self.rhs) > 2 else SLIM

    def describe(self) -> dict:
        sx, sy = SIGNATURES[self.x_type], SIGNATURES[self.y_type]
        return {
            "name": self.name,
            "set": self.rule_set,
            "lhs": {
                "x": {"type": self.x_type, "port": sx.port_name(self.x_port)},
                "y": {"type": self.y_type, "port": sy.port_name(self.y_port)},
            },
            "rhs": [{"type": t, "ports": list(fs)} for t, fs in self.rhs],
            "wires": [list(w) for w in self.wires],
            "class": self.growth_class,
        }


def _r(name: str, rule_set: str, x: str, y: str, rhs: tuple[str, ...] = (),
       wires: tuple[tuple[str, str], ...] = ()) -> RewriteRule:
    xt, *xf = x.split()
    yt, *yf = y.split()
    templates = []
    for spec in rhs:
        tt, *tf = spec.split()
        templates.append((tt, tuple(tf)))
    return RewriteRule(name, rule_set, xt, tuple(xf), yt, tuple(yf),
                       tuple(templates), wires)


def _check_rule(rule: RewriteRule, family: str) -> None:
    """Static sanity pass over one rule at table-build time."""
    sx, sy = SIGNATURES[rule.x_type], SIGNATURES[rule.y_type]
    assert sx.directed == sy.directed == (family == DIRECTED), rule.name
    assert len(rule.x_formals) == sx.arity and len(rule.y_formals) == sy.arity, rule.name
    assert len(set(rule.x_formals)) == sx.arity and len(set(rule.y_formals)) == sy.arity, rule.name
    if family == DIRECTED:
        assert sx.port_dir(rule.x_port) == OUT and sy.port_dir(rule.y_port) == IN, rule.name

    # polarity bookkeeping: a boundary site keeps the direction of the port it
    # replaces; every formal must pair one producer with one consumer.
    polarity: dict[str, list[str]] = {}
    boundary = set()
    for sig, formals in ((sx, rule.x_formals), (sy, rule.y_formals)):
        for i, f in enumerate(formals):
            if f == rule.join_formal:
                continue
            boundary.add(f)
            polarity.setdefault(f, []).append(sig.port_dir(i))
    internal: dict[str, int] = {}
    for tt, tf in rule.rhs:
        st = SIGNATURES[tt]
        assert st.directed == (family == DIRECTED), rule.name
        assert len(tf) == st.arity, rule.name
        for i, f in enumerate(tf):
            polarity.setdefault(f, []).append(st.port_dir(i))
            internal[f] = internal.get(f, 0) + 1
    for f1, f2 in rule.wires:
        assert f1 in boundary and f2 in boundary, rule.name
        polarity.setdefault(f1, []).extend(polarity.pop(f2, []))
    wired = {f for pair in rule.wires for f in pair}
    for f in boundary:
        if f in wired:
            assert internal.get(f, 0) == 0, rule.name
        else:
            assert internal.get(f, 0) == 1, f"{rule.name}: boundary {f} unused"
    for f, occs in polarity.items():
        assert len(occs) == 2, f"{rule.name}: formal {f} has {len(occs)} ends"
        if family == DIRECTED:
            if f in boundary or f in wired:
                # site dir equals removed port dir; pairs must not clash
                if f in internal:
                    assert occs[0] == occs[1], f"{rule.name}: direction clash on {f}"
                else:
                    assert sorted(occs) == [IN, OUT], f"{rule.name}: direction clash on {f}"
            else:
                assert sorted(occs) == [IN, OUT], f"{rule.name}: direction clash on {f}"


# -- rule tables -------------------------------------------------------------

# shared distribution / annihilation core plus the terminations legal in both
# directed chemistries (each joins through the unique active port of its type)
_BARE = (
    _r("A-L", "bare", "L a b j", "A j c d", ("Arrow a d", "Arrow c b")),
    _r("FI-FOE", "bare", "FI a b j", "FOE j c d", ("Arrow a c", "Arrow b d")),
    _r("L-FO", "bare", "L a b j", "FO j c d",
       ("FOE a u1 u2", "L u1 w1 c", "L u2 w2 d", "FI w1 w2 b")),
    _r("L-FOE", "bare", "L a b j", "FOE j c d",
       ("FOE a u1 u2", "L u1 w1 c", "L u2 w2 d", "FI w1 w2 b")),
    _r("FI-FO", "bare", "FI a b j", "FO j c d",
       ("FOE a u1 u2", "FOE b w1 w2", "FI u1 w1 c", "FI u2 w2 d")),
    _r("FO-FOE", "bare", "FO a b j", "FOE j c d",
       ("FOE a u1 u2", "FO u1 w1 c", "FO u2 w2 d", "FI w1 w2 b")),
    _r("FI-T", "bare", "FI a b j", "T j", ("T a", "T b")),
    _r("Arrow-T", "bare", "Arrow a j", "T j", ("T a",)),
    _r("FRIN-T", "bare", "FRIN j", "T j"),
)

# chemlambda extends the core with application duplication and terminations
# that give A, FO and FOE a second active port (the source of its conflicts)
_END = (
    _r("A-FO", "end", "A a b j", "FO j c d",
       ("FOE a u1 u2", "FOE b w1 w2", "A u1 w1 c", "A u2 w2 d")),
    _r("A-FOE", "end", "A a b j", "FOE j c d",
       ("FOE a u1 u2", "FOE b w1 w2", "A u1 w1 c", "A u2 w2 d")),
    _r("L-T", "end", "L a b j", "T j", ("T a", "FRIN b")),
    _r("A-T", "end", "A a b j", "T j", ("T a", "T b")),
    _r("FO-T-lo", "end", "FO a j c", "T j", ("Arrow a c",)),
    _r("FO-T-ro", "end", "FO a b j", "T j", ("Arrow a b",)),
    _r("FOE-T-lo", "end", "FOE a j c", "T j", ("Arrow a c",)),
    _r("FOE-T-ro", "end", "FOE a b j", "T j", ("Arrow a b",)),
)

# diric swaps application duplication for the fan-in interaction and erases
# from the output side through FRIN, mirroring the eraser pair produced by
# doubling an undirected eraser; every type keeps exactly one active port
_DICMOD = (
    _r("FI-A", "dicmod", "FI a b j", "A j c d",
       ("A a u1 v1", "A b u2 v2", "FOE c u1 u2", "FI v1 v2 d")),
    _r("L-T", "dicmod", "L a b j", "T j", ("T a", "FRIN b")),
    _r("FRIN-A", "dicmod", "FRIN j", "A j c d", ("T c", "FRIN d")),
    _r("FRIN-FO", "dicmod", "FRIN j", "FO j c d", ("FRIN c", "FRIN d")),
    _r("FRIN-FOE", "dicmod", "FRIN j", "FOE j c d", ("FRIN c", "FRIN d")),
)

_IC = (
    _r("GG", "ic", "GAMMA j a1 a2", "GAMMA j b1 b2",
       wires=(("a1", "b1"), ("a2", "b2"))),
    _r("DD", "ic", "DELTA j a1 a2", "DELTA j b1 b2",
       wires=(("a1", "b1"), ("a2", "b2"))),
    _r("GD", "ic", "GAMMA j a1 a2", "DELTA j b1 b2",
       ("DELTA a1 s1 s2", "DELTA a2 s3 s4", "GAMMA b1 s1 s3", "GAMMA b2 s2 s4")),
    _r("GE", "ic", "GAMMA j a1 a2", "E j", ("E a1", "E a2")),
    _r("DE", "ic", "DELTA j a1 a2", "E j", ("E a1", "E a2")),
    _r("EE", "ic", "E j", "E j"),
)


@dataclass(frozen=True)
class Chemistry:
    id: str
    family: str
    rules: tuple[RewriteRule, ...]
    by_key: dict = field(repr=False)
    by_name: dict = field(repr=False)


def _build(cid: str, family: str, rules: tuple[RewriteRule, ...]) -> Chemistry:
    by_key: dict[tuple, RewriteRule] = {}
    by_name: dict[str, RewriteRule] = {}
    for rule in rules:
        _check_rule(rule, family)
        key = rule.lhs_key
        assert key not in by_key, f"duplicate lhs {key} in {cid}"
        by_name[rule.name] = rule
        by_key[key] = rule
    return Chemistry(cid, family, rules, by_key, by_name)


_CHEMISTRIES: dict[str, Chemistry] = {}


def ruleset(cid: str) -> Chemistry:
    if not _CHEMISTRIES:
        _CHEMISTRIES["chemlambda"] = _build("chemlambda", DIRECTED, _BARE + _END)
        _CHEMISTRIES["diric"] = _build("diric", DIRECTED, _BARE + _DICMOD)
        _CHEMISTRIES["ic"] = _build("ic", UNDIRECTED, _IC)
    chem = _CHEMISTRIES.get(cid)
    if chem is None:
        raise MolError(f"unknown chemistry {cid!r} (choose from chemlambda, diric, ic)")
    return chem


CHEMISTRY_IDS = ("chemlambda", "diric", "ic")


def rewrite_class(rule_name: str) -> str:
    """Growth class of a rewrite by name; COMB is the only NEUTRAL entry."""
    if rule_name == "COMB":
        return NEUTRAL
    for cid in CHEMISTRY_IDS:
        rule = ruleset(cid).by_name.get(rule_name)
        if rule is not None:
            return rule.growth_class
    raise MolError(f"unknown rule {rule_name!r}")


# -- matching ----------------------------------------------------------------


@dataclass(frozen=True)
class Match:
    rule: str
    node_x: str
    node_y: str
    edge: str
    age: int


def find_matches(m: Molecule, chem: Chemistry | str) -> list[Match]:
    """All rule instances in m, in canonical (age, rule, tag) order."""
    if isinstance(chem, str):
        chem = ruleset(chem)
    if m.family != chem.family:
        raise MolError(f"{chem.id} expects {chem.family} molecules, got {m.family}")
    by_key = chem.by_key
    nodes = m.nodes
    out: list[Match] = []
    for tag, eps in m.edges.items():
        (n1, p1), (n2, p2) = eps
        a, b = nodes[n1], nodes[n2]
        rule = by_key.get((a.node_type, p1, b.node_type, p2))
        if rule is None and m.family == UNDIRECTED:
            rule = by_key.get((b.node_type, p2, a.node_type, p1))
            if rule is not None:
                n1, n2, a, b = n2, n1, b, a
        if rule is None:
            continue
        out.append(Match(rule.name, n1, n2, tag,
                         max(a.birth_step, b.birth_step)))
    out.sort(key=lambda mt: (mt.age, mt.rule, tag_key(mt.edge)))
    return out


def conflict_pairs(matches: list[Match]) -> set[frozenset]:
    """Unordered pairs of matches that share at least one node."""
    by_node: dict[str, list[Match]] = {}
    for mt in matches:
        by_node.setdefault(mt.node_x, []).append(mt)
        by_node.setdefault(mt.node_y, []).append(mt)
    out: set[frozenset] = set()
    for group in by_node.values():
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                out.add(frozenset((a, b)))
    return out


def apply_match(m: Molecule, match: Match, chem: Chemistry | str, step: int) -> Molecule:
    out = m.copy()
    apply_match_into(out, match, chem, step)
    return out


def apply_match_into(m: Molecule, match: Match, chem: Chemistry | str, step: int) -> None:
    """Fire one rewrite in place.  New nodes get birth_step = step."""
    if isinstance(chem, str):
        chem = ruleset(chem)
    rule = chem.by_name.get(match.rule)
    if rule is None:
        raise MolError(f"rule {match.rule!r} not in chemistry {chem.id}")
    nx = m.nodes.get(match.node_x)
    ny = m.nodes.get(match.node_y)
    if nx is None or ny is None or nx.node_type != rule.x_type or ny.node_type != rule.y_type:
        raise StaleMatchError(f"match {match.rule} on {match.node_x},{match.node_y} is stale")
    eps = m.edges.get(match.edge)
    if eps is None or sorted(eps) != sorted([(match.node_x, rule.x_port), (match.node_y, rule.y_port)]):
        raise StaleMatchError(f"joining edge {match.edge!r} no longer matches {match.rule}")

    canon = {f2: f1 for f1, f2 in rule.wires}
    boundary: dict[Endpoint, str] = {}
    for nid, formals, jpos in ((match.node_x, rule.x_formals, rule.x_port),
                               (match.node_y, rule.y_formals, rule.y_port)):
        for idx, f in enumerate(formals):
            if idx == jpos:
                continue
            boundary[(nid, idx)] = canon.get(f, f)
    add = [(t, [canon.get(f, f) for f in fs]) for t, fs in rule.rhs]
    splice_into(m, (match.node_x, match.node_y), add, boundary, step)


# -- COMB: Arrow chain contraction (a pass, never a scheduled rule) ----------


def comb_pass(m: Molecule) -> Molecule:
    out = m.copy()
    comb_into(out)
    return out


def comb_into(m: Molecule) -> int:
    """Contract every Arrow chain to a single edge; closed Arrow cycles are
    removed and counted in loops_harvested.  Returns Arrows removed."""
    arrows = [nid for nid, n in m.nodes.items() if n.node_type == "Arrow"]
    if not arrows:
        return 0
    arrow_set = set(arrows)
    done: set[str] = set()
    removed = 0
    for a in arrows:
        if a in done:
            continue
        # walk upstream to the head of the chain (or detect a cycle)
        head, cycle = a, False
        while True:
            in_tag = m.nodes[head].edge_tags[0]
            prod = m.other_endpoint(in_tag, (head, 0))
            if prod[0] in arrow_set and prod[1] == 1:
                head = prod[0]
                if head == a:
                    cycle = True
                    break
            else:
                break
        chain = [head]
        cur = head
        while True:
            out_tag = m.nodes[cur].edge_tags[1]
            consumer = m.other_endpoint(out_tag, (cur, 1))
            if consumer[0] in arrow_set and consumer[1] == 0 and consumer[0] != head:
                cur = consumer[0]
                chain.append(cur)
            else:
                break
        if cycle:
            for nid in chain:
                node = m.nodes[nid]
                for pi, tag in enumerate(node.edge_tags):
                    if tag in m.edges:
                        del m.edges[tag]
                del m.nodes[nid]
                done.add(nid)
            m.loops_harvested += 1
            removed += len(chain)
            continue
        keep_tag = m.nodes[head].edge_tags[0]
        producer = m.other_endpoint(keep_tag, (head, 0))
        last_out = m.nodes[chain[-1]].edge_tags[1]
        consumer = m.other_endpoint(last_out, (chain[-1], 1))
        for nid in chain:
            node = m.nodes[nid]
            for tag in node.edge_tags:
                if tag in m.edges:
                    del m.edges[tag]
            del m.nodes[nid]
            done.add(nid)
        m.nodes[producer[0]].edge_tags[producer[1]] = keep_tag
        m.nodes[consumer[0]].edge_tags[consumer[1]] = keep_tag
        m.edges[keep_tag] = [producer, consumer]
        removed += len(chain)
    return removed

"""Port-graph molecules and the mol text format.

A molecule is a graph whose nodes carry a fixed, ordered list of typed
ports.  Edges are named by opaque string tags; every tag appears on exactly
two ports in the whole molecule.  Node types come in two families that never
mix inside one molecule: the directed family (lambda-calculus chemistries,
every edge runs from an out port to an in port) and the undirected family
(interaction combinators, all ports free).

The mol text format is one node per line, ``TYPE tag tag ...``, with ``#``
comments.  A tag used only once denotes a dangling half-edge; the parser
closes it with a synthetic plumbing node (FRIN for a dangling in port,
FROUT for a dangling out port, E for the undirected family) so that the
two-endpoint invariant always holds in memory.
"""

from __future__ import annotations

from dataclasses import dataclass

DIRECTED = "directed"
UNDIRECTED = "undirected"

IN, OUT, FREE = "in", "out", "free"


class MolError(Exception):
    pass


class ParseError(MolError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SpliceError(MolError):
    pass


@dataclass(frozen=True)
class NodeSignature:
    """Shape of one node type: ordered, direction-typed ports."""

    type_name: str
    ports: tuple[tuple[str, str], ...]
    directed: bool

    @property
    def arity(self) -> int:
        return len(self.ports)

    def port_index(self, name: str) -> int:
        for i, (pname, _) in enumerate(self.ports):
            if pname == name:
                return i
        raise KeyError(f"{self.type_name} has no port {name!r}")

    def port_name(self, index: int) -> str:
        return self.ports[index][0]

    def port_dir(self, index: int) -> str:
        return self.ports[index][1]


def _sig(name: str, directed: bool, spec: str) -> NodeSignature:
    ports = tuple(tuple(part.split(":")) for part in spec.split())
    return NodeSignature(name, ports, directed)  # type: ignore[arg-type]


SIGNATURES: dict[str, NodeSignature] = {
    s.type_name: s
    for s in (
        _sig("L", True, "mi:in lo:out ro:out"),
        _sig("A", True, "li:in ri:in mo:out"),
        _sig("FI", True, "li:in ri:in mo:out"),
        _sig("FO", True, "mi:in lo:out ro:out"),
        _sig("FOE", True, "mi:in lo:out ro:out"),
        _sig("Arrow", True, "i:in o:out"),
        _sig("T", True, "i:in"),
        _sig("FRIN", True, "o:out"),
        _sig("FROUT", True, "i:in"),
        _sig("GAMMA", False, "p:free a1:free a2:free"),
        _sig("DELTA", False, "p:free a1:free a2:free"),
        _sig("E", False, "p:free"),
    )
}

DIRECTED_TYPES = frozenset(n for n, s in SIGNATURES.items() if s.directed)
UNDIRECTED_TYPES = frozenset(n for n, s in SIGNATURES.items() if not s.directed)


def tag_key(tag: str) -> tuple[int, str]:
    """Canonical sort key for edge tags and node ids ("e9" < "e10")."""
    return (len(tag), tag)


Endpoint = tuple[str, int]  # (node id, port index)


class Node:
    __slots__ = ("id", "node_type", "birth_step", "edge_tags", "synthetic")

    def __init__(self, node_id: str, node_type: str, edge_tags: list[str],
                 birth_step: int = 0, synthetic: bool = False):
        self.id = node_id
        self.node_type = node_type
        self.edge_tags = edge_tags
        self.birth_step = birth_step
        self.synthetic = synthetic

    @property
    def signature(self) -> NodeSignature:
        return SIGNATURES[self.node_type]

    def copy(self) -> "Node":
        return Node(self.id, self.node_type, list(self.edge_tags),
                    self.birth_step, self.synthetic)

    def __repr__(self) -> str:
        return f"<{self.node_type} {self.id} {' '.join(self.edge_tags)}>"


class Molecule:
    """A port graph plus bookkeeping counters.

    ``edges`` maps each tag to its two endpoints.  For the directed family
    the endpoint list is normalised out-port first once complete.
    ``loops_harvested`` counts closed wire loops removed by surgery; it is
    bookkeeping, not structure, and is ignored by isomorphism.
    """

    def __init__(self, family: str = DIRECTED):
        if family not in (DIRECTED, UNDIRECTED):
            raise MolError(f"unknown family {family!r}")
        self.family = family
        self.nodes: dict[str, Node] = {}
        self.edges: dict[str, list[Endpoint]] = {}
        self.loops_harvested = 0
        self._fresh_tag = 0
        self._fresh_node = 0

    # -- construction -----------------------------------------------------

    def fresh_tag(self) -> str:
        while True:
            t = f"e{self._fresh_tag}"
            self._fresh_tag += 1
            if t not in self.edges:
                return t

    def fresh_node_id(self) -> str:
        while True:
            n = f"n{self._fresh_node}"
            self._fresh_node += 1
            if n not in self.nodes:
                return n

    def add_node(self, node_type: str, tags: list[str] | tuple[str, ...],
                 birth_step: int = 0, synthetic: bool = False) -> str:
        sig = SIGNATURES.get(node_type)
        if sig is None:
            raise MolError(f"unknown node type {node_type!r}")
        if sig.directed != (self.family == DIRECTED):
            raise MolError(f"{node_type} does not belong to the {self.family} family")
        if len(tags) != sig.arity:
            raise MolError(f"{node_type} takes {sig.arity} tags, got {len(tags)}")
        nid = self.fresh_node_id()
        node = Node(nid, node_type, list(tags), birth_step, synthetic)
        self.nodes[nid] = node
        for idx, tag in enumerate(node.edge_tags):
            self._register(tag, (nid, idx))
        return nid

    def _register(self, tag: str, ep: Endpoint) -> None:
        eps = self.edges.get(tag)
        if eps is None:
            self.edges[tag] = [ep]
            return
        if len(eps) >= 2:
            raise MolError(f"tag {tag!r} used more than twice")
        eps.append(ep)
        self._normalize(tag)

    def _normalize(self, tag: str) -> None:
        eps = self.edges[tag]
        if len(eps) != 2:
            return
        if self.family == DIRECTED:
            # out endpoint first when directions are sane; leave junk for validate()
            d0 = self.port_dir(eps[0])
            d1 = self.port_dir(eps[1])
            if d0 == IN and d1 == OUT:
                eps.reverse()
        else:
            eps.sort(key=lambda ep: (tag_key(ep[0]), ep[1]))

    def _unregister(self, tag: str, ep: Endpoint) -> None:
        eps = self.edges[tag]
        eps.remove(ep)
        if not eps:
            del self.edges[tag]

    # -- queries -----------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def type_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for n in self.nodes.values():
            out[n.node_type] = out.get(n.node_type, 0) + 1
        return out

    def port_dir(self, ep: Endpoint) -> str:
        return self.nodes[ep[0]].signature.port_dir(ep[1])

    def other_endpoint(self, tag: str, ep: Endpoint) -> Endpoint:
        a, b = self.edges[tag]
        return b if a == ep else a

    def out_in(self, tag: str) -> tuple[Endpoint, Endpoint]:
        """Both endpoints of a directed edge, producer first."""
        a, b = self.edges[tag]
        if self.port_dir(a) == OUT:
            return a, b
        return b, a

    def copy(self) -> "Molecule":
        m = Molecule(self.family)
        m.nodes = {nid: n.copy() for nid, n in self.nodes.items()}
        m.edges = {tag: list(eps) for tag, eps in self.edges.items()}
        m.loops_harvested = self.loops_harvested
        m._fresh_tag = self._fresh_tag
        m._fresh_node = self._fresh_node
        return m

    def __repr__(self) -> str:
        return f"<Molecule {self.family} nodes={self.node_count} edges={self.edge_count}>"


# -- mol text ---------------------------------------------------------------


def parse_mol(text: str, family: str = "auto") -> Molecule:
    """Parse mol text.  family is "directed", "undirected" or "auto"."""
    rows: list[tuple[int, str, list[str]]] = []
    seen_family: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        ntype, tags = toks[0], toks[1:]
        sig = SIGNATURES.get(ntype)
        if sig is None:
            raise ParseError(f"unknown node type {ntype!r}", lineno)
        fam = DIRECTED if sig.directed else UNDIRECTED
        if seen_family is None:
            seen_family = fam
        elif seen_family != fam:
            raise ParseError(f"{ntype} mixes node families in one molecule", lineno)
        if len(tags) != sig.arity:
            raise ParseError(f"{ntype} takes {sig.arity} tags, got {len(tags)}", lineno)
        rows.append((lineno, ntype, tags))

    if family == "auto":
        family = seen_family or DIRECTED
    elif family not in (DIRECTED, UNDIRECTED):
        raise ParseError(f"unknown family {family!r}")
    elif seen_family is not None and seen_family != family:
        raise ParseError(f"molecule is {seen_family}, expected {family}")

    m = Molecule(family)
    uses: dict[str, list[Endpoint]] = {}
    order: list[str] = []
    for lineno, ntype, tags in rows:
        nid = m.fresh_node_id()
        node = Node(nid, ntype, list(tags))
        m.nodes[nid] = node
        for idx, t in enumerate(tags):
            if t not in uses:
                uses[t] = []
                order.append(t)
            if len(uses[t]) >= 2:
                raise ParseError(f"tag {t!r} used more than twice", lineno)
            uses[t].append((nid, idx))

    for t in order:
        eps = uses[t]
        if len(eps) == 2:
            if family == DIRECTED:
                d0 = m.nodes[eps[0][0]].signature.port_dir(eps[0][1])
                d1 = m.nodes[eps[1][0]].signature.port_dir(eps[1][1])
                if d0 == d1:
                    raise ParseError(f"tag {t!r} joins two {d0} ports")
            m.edges[t] = list(eps)
            m._normalize(t)

    # close dangling half-edges with plumbing nodes
    for t in order:
        eps = uses[t]
        if len(eps) != 1:
            continue
        if family == DIRECTED:
            d = m.nodes[eps[0][0]].signature.port_dir(eps[0][1])
            closure = "FRIN" if d == IN else "FROUT"
        else:
            closure = "E"
        m.edges[t] = list(eps)
        nid = m.fresh_node_id()
        node = Node(nid, closure, [t], birth_step=0, synthetic=True)
        m.nodes[nid] = node
        m.edges[t].append((nid, 0))
        m._normalize(t)
    return m


def serialize_mol(m: Molecule) -> str:
    """Render mol text.  Synthetic closure nodes are omitted when the parser
    would regenerate them; one closure of an all-synthetic pair is kept so
    the bare wire still round-trips."""
    decided: dict[str, bool] = {}  # node id -> keep?
    for nid, node in m.nodes.items():
        if not node.synthetic:
            decided[nid] = True
    for nid, node in m.nodes.items():
        if nid in decided:
            continue
        partner = m.other_endpoint(node.edge_tags[0], (nid, 0))[0]
        if partner == nid:
            decided[nid] = True  # closure wired to itself; cannot regenerate
        elif decided.get(partner, False):
            decided[nid] = False
        elif partner in decided:  # partner already omitted
            decided[nid] = True
        else:
            decided[nid] = True  # first of a synthetic pair wins

    kept = [n for nid, n in m.nodes.items() if decided[nid]]
    kept.sort(key=lambda n: (n.birth_step, tuple(tag_key(t) for t in n.edge_tags), n.node_type))
    lines = [" ".join([n.node_type, *n.edge_tags]) for n in kept]
    return "\n".join(lines) + ("\n" if lines else "")


def validate(m: Molecule) -> list[str]:
    """Return a list of invariant violations, empty when the molecule is sound."""
    problems: list[str] = []
    seen: dict[str, list[Endpoint]] = {}
    for nid, node in m.nodes.items():
        sig = SIGNATURES.get(node.node_type)
        if sig is None:
            problems.append(f"node {nid}: unknown type {node.node_type!r}")
            continue
        if sig.directed != (m.family == DIRECTED):
            problems.append(f"node {nid}: {node.node_type} is not a {m.family} type")
        if len(node.edge_tags) != sig.arity:
            problems.append(f"node {nid}: {node.node_type} needs {sig.arity} tags, has {len(node.edge_tags)}")
            continue
        for idx, tag in enumerate(node.edge_tags):
            seen.setdefault(tag, []).append((nid, idx))

    for tag, eps in seen.items():
        if len(eps) != 2:
            problems.append(f"tag {tag!r} has {len(eps)} endpoints, expected 2")
            continue
        reg = m.edges.get(tag)
        if reg is None or sorted(reg) != sorted(eps):
            problems.append(f"tag {tag!r}: edge registry does not match node ports")
        if m.family == DIRECTED:
            dirs = sorted(m.nodes[nid].signature.port_dir(idx) for nid, idx in eps)
            if dirs != [IN, OUT]:
                problems.append(f"tag {tag!r} joins ports {dirs[0]}/{dirs[1]}, expected in/out")
    for tag in m.edges:
        if tag not in seen:
            problems.append(f"tag {tag!r} registered but used by no node")
    for nid, node in m.nodes.items():
        if node.birth_step < 0:
            problems.append(f"node {nid}: negative birth_step")
    return problems


# -- components --------------------------------------------------------------


def connected_components(m: Molecule) -> list[Molecule]:
    """Split into connected components; node ids, tags and births survive."""
    visited: set[str] = set()
    comps: list[Molecule] = []
    for start in m.nodes:
        if start in visited:
            continue
        stack = [start]
        members: list[str] = []
        visited.add(start)
        while stack:
            nid = stack.pop()
            members.append(nid)
            node = m.nodes[nid]
            for idx, tag in enumerate(node.edge_tags):
                o = m.other_endpoint(tag, (nid, idx))[0]
                if o not in visited:
                    visited.add(o)
                    stack.append(o)
        sub = Molecule(m.family)
        sub._fresh_tag = m._fresh_tag
        sub._fresh_node = m._fresh_node
        for nid in sorted(members, key=tag_key):
            sub.nodes[nid] = m.nodes[nid].copy()
        for nid in sub.nodes:
            for tag in m.nodes[nid].edge_tags:
                if tag not in sub.edges:
                    sub.edges[tag] = list(m.edges[tag])
        comps.append(sub)
    return comps


# -- splice: the one graph surgery every rewrite compiles to ----------------

NodeTemplate = tuple[str, tuple[str, ...] | list[str]]


def splice(m: Molecule, remove, add: list[NodeTemplate],
           boundary: dict[Endpoint, str], step: int) -> Molecule:
    out = m.copy()
    splice_into(out, remove, add, boundary, step)
    return out


def splice_into(m: Molecule, remove, add: list[NodeTemplate],
                boundary: dict[Endpoint, str], step: int) -> list[str]:
    """Remove nodes, instantiate templates, reconnect the boundary.  Mutates m.

    ``boundary`` maps (removed node id, port index) sites to formal tags.
    A formal tag must occur exactly twice across template slots and boundary
    values.  Two boundary occurrences of one formal fuse the two old edges
    into a single wire (a fusion that closes on itself harvests a loop).
    Edges whose endpoints both die with no boundary covering either (the
    joining edge of a rewrite) are dropped.  Returns new node ids.
    """
    remove = tuple(remove)
    removed = set(remove)
    for nid in removed:
        if nid not in m.nodes:
            raise SpliceError(f"cannot remove unknown node {nid}")

    # formal occurrences: ("new", template index, port) and ("site", nid, port)
    occ: dict[str, list[tuple]] = {}
    for ti, (ntype, formals) in enumerate(add):
        sig = SIGNATURES.get(ntype)
        if sig is None:
            raise SpliceError(f"unknown template type {ntype!r}")
        if sig.directed != (m.family == DIRECTED):
            raise SpliceError(f"template {ntype} is not a {m.family} type")
        if len(formals) != sig.arity:
            raise SpliceError(f"template {ntype} needs {sig.arity} formals")
        for pi, f in enumerate(formals):
            occ.setdefault(f, []).append(("new", ti, pi))
    for site, f in boundary.items():
        nid, pi = site
        if nid not in removed:
            raise SpliceError(f"boundary site {site} is not on a removed node")
        if pi >= m.nodes[nid].signature.arity:
            raise SpliceError(f"boundary site {site} out of range")
        occ.setdefault(f, []).append(("site", nid, pi))
    for f, terms in occ.items():
        if len(terms) != 2:
            raise SpliceError(f"formal edge {f!r} has {len(terms)} attachments, expected 2")

    # old edges touching removed nodes become segments between terminals;
    # visit them in removal order so fresh-tag draws do not depend on the
    # molecule's edge insertion history
    touched: list[str] = []
    for nid in remove:
        for tag in m.nodes[nid].edge_tags:
            if tag not in touched:
                touched.append(tag)
    segments: list[tuple[tuple, tuple, str | None]] = []
    dead_tags: list[str] = []
    for tag in touched:
        a, b = m.edges[tag]
        da, db = a[0] in removed, b[0] in removed
        dead_tags.append(tag)
        ca, cb = a in boundary, b in boundary
        if da and db and not ca and not cb:
            continue  # joining edge: vanishes outright
        if (da and not ca) or (db and not cb):
            raise SpliceError(f"dangling half-edge left uncovered on tag {tag!r}")
        ta = ("junc", *a) if da else ("anchor", *a)
        tb = ("junc", *b) if db else ("anchor", *b)
        segments.append((ta, tb, tag))
    for f, terms in occ.items():
        conv = []
        for t in terms:
            if t[0] == "new":
                conv.append(("newanchor", t[1], t[2]))
            else:
                conv.append(("junc", t[1], t[2]))
        segments.append((conv[0], conv[1], None))

    seg_at: dict[tuple, list[int]] = {}
    for i, (ta, tb, _) in enumerate(segments):
        for t in (ta, tb):
            if t[0] == "junc":
                seg_at.setdefault(t, []).append(i)
    for junc, ss in seg_at.items():
        if len(ss) != 2:
            raise SpliceError(f"boundary covers half-edge at {junc[1:]} {len(ss)} times")

    # materialise templates
    new_ids: list[str] = []
    for ntype, formals in add:
        nid = m.fresh_node_id()
        m.nodes[nid] = Node(nid, ntype, [""] * len(formals), birth_step=step)
        new_ids.append(nid)

    for tag in dead_tags:
        del m.edges[tag]

    def anchor_ep(term: tuple) -> Endpoint:
        if term[0] == "newanchor":
            return (new_ids[term[1]], term[2])
        return (term[1], term[2])

    visited = [False] * len(segments)
    resolved: list[tuple[Endpoint, Endpoint, list[str]]] = []
    for i, (ta, tb, tag) in enumerate(segments):
        if visited[i] or (ta[0] == "junc" and tb[0] == "junc"):
            continue
        visited[i] = True
        start, cur = (ta, tb) if ta[0] != "junc" else (tb, ta)
        tags = [tag] if tag else []
        prev = i
        while cur[0] == "junc":
            s1, s2 = seg_at[cur]
            nxt = s2 if s1 == prev else s1
            visited[nxt] = True
            ua, ub, utag = segments[nxt]
            if utag:
                tags.append(utag)
            cur = ub if ua == cur else ua
            prev = nxt
        resolved.append((anchor_ep(start), anchor_ep(cur), tags))

    loops = 0
    for i, seg in enumerate(segments):
        if visited[i]:
            continue
        # pure junction cycle: walk it once
        visited[i] = True
        ta, tb, _ = seg
        cur, prev = tb, i
        while True:
            s1, s2 = seg_at[cur]
            nxt = s2 if s1 == prev else s1
            if visited[nxt]:
                break
            visited[nxt] = True
            ua, ub, _ = segments[nxt]
            cur = ub if ua == cur else ua
            prev = nxt
        loops += 1
    m.loops_harvested += loops

    # chains keep the smallest of their old tags; fresh draws for pure
    # template edges must dodge those kept tags (already purged from edges)
    assigned: list[str | None] = [min(tags, key=tag_key) if tags else None
                                  for _, _, tags in resolved]
    kept = {t for t in assigned if t is not None}
    for i, t in enumerate(assigned):
        if t is not None:
            continue
        t = m.fresh_tag()
        while t in kept:
            t = m.fresh_tag()
        assigned[i] = t
    for (ep_a, ep_b, _), tag in zip(resolved, assigned):
        if m.family == DIRECTED:
            dirs = sorted((m.port_dir(ep_a), m.port_dir(ep_b)))
            if dirs != [IN, OUT]:
                raise SpliceError(f"direction mismatch wiring {ep_a} to {ep_b}")
        if tag in m.edges:
            raise SpliceError(f"tag collision on {tag!r}")
        m.nodes[ep_a[0]].edge_tags[ep_a[1]] = tag
        m.nodes[ep_b[0]].edge_tags[ep_b[1]] = tag
        m.edges[tag] = [ep_a, ep_b]
        m._normalize(tag)

    for nid in removed:
        del m.nodes[nid]
    for nid in new_ids:
        if "" in m.nodes[nid].edge_tags:
            raise SpliceError(f"template node {nid} left with an unwired port")
    return new_ids

"""Isomorphism-invariant certificates and explicit isomorphism checks.

The certificate digest is computed from an iterated neighbourhood-refinement
colouring: node colours start from node types and are repeatedly re-interned
from the ordered vector of (neighbour colour, neighbour port) seen through
each port.  Ordered ports make this refinement very sharp in practice; the
rare colour collision between non-isomorphic molecules is tolerated because
every consumer that needs certainty (quine detection) confirms a digest hit
with the explicit backtracking check in `isomorphic`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .molecule import Molecule, tag_key

_MAX_ROUNDS = 16

NodeKey = tuple[int, str]  # (molecule index, node id)


def _h(text: str) -> str:
    return hashlib.blake2b(text.encode(), digest_size=8).hexdigest()


def _refine(mols: list[Molecule], max_rounds: int = _MAX_ROUNDS) -> tuple[dict[NodeKey, str], int]:
    """Colour the disjoint union of `mols`.

    Colours are hash strings canonical across calls: the colour of a node is
    a pure function of its isomorphism-class neighbourhood, never of which
    molecules happen to share the call.  Each round folds the ordered vector
    of (neighbour colour, far port index) into the node's own colour; the
    loop stops once the partition stops splitting.
    """
    color: dict[NodeKey, str] = {}
    for mi, m in enumerate(mols):
        for nid, n in m.nodes.items():
            color[(mi, nid)] = _h(n.node_type)
    ncolors = len(set(color.values()))
    for _ in range(max_rounds):
        nxt: dict[NodeKey, str] = {}
        for mi, m in enumerate(mols):
            for nid, node in m.nodes.items():
                vec = [color[(mi, nid)]]
                for pi, tag in enumerate(node.edge_tags):
                    onid, opi = m.other_endpoint(tag, (nid, pi))
                    vec.append(f"{color[(mi, onid)]}@{opi}")
                nxt[(mi, nid)] = _h("|".join(vec))
        ncolors2 = len(set(nxt.values()))
        # hashing folds the old colour in, so the partition only ever splits;
        # equal counts means it is stable
        if ncolors2 == ncolors:
            return nxt, ncolors2
        color, ncolors = nxt, ncolors2
    return color, ncolors


@dataclass(frozen=True)
class Certificate:
    digest: bytes
    node_count: int
    edge_count: int

    @property
    def hex(self) -> str:
        return self.digest.hex()


def canonical_certificate(m: Molecule) -> Certificate:
    """Digest of the isomorphism class; blind to tags, ids, births, order."""
    color, _ = _refine([m])
    hist: dict[int, int] = {}
    for c in color.values():
        hist[c] = hist.get(c, 0) + 1
    payload = (m.family, m.node_count, m.edge_count, sorted(hist.items()))
    digest = hashlib.blake2b(repr(payload).encode(), digest_size=16).digest()
    return Certificate(digest, m.node_count, m.edge_count)


def _component_ids(m: Molecule) -> list[list[str]]:
    visited: set[str] = set()
    comps = []
    for start in m.nodes:
        if start in visited:
            continue
        stack, members = [start], []
        visited.add(start)
        while stack:
            nid = stack.pop()
            members.append(nid)
            node = m.nodes[nid]
            for pi, tag in enumerate(node.edge_tags):
                o = m.other_endpoint(tag, (nid, pi))[0]
                if o not in visited:
                    visited.add(o)
                    stack.append(o)
        comps.append(sorted(members, key=tag_key))
    return comps


def _match_component(a: Molecule, b: Molecule, color: dict[NodeKey, int],
                     root: str, cand: str) -> dict[str, str] | None:
    """Grow a port-preserving bijection from root -> cand; ports force it."""
    mapping = {root: cand}
    inverse = {cand: root}
    queue = [root]
    while queue:
        x = queue.pop()
        y = mapping[x]
        nx, ny = a.nodes[x], b.nodes[y]
        if nx.node_type != ny.node_type:
            return None
        for pi in range(len(nx.edge_tags)):
            xm, xp = a.other_endpoint(nx.edge_tags[pi], (x, pi))
            ym, yp = b.other_endpoint(ny.edge_tags[pi], (y, pi))
            if xp != yp or color[(0, xm)] != color[(1, ym)]:
                return None
            if xm in mapping:
                if mapping[xm] != ym:
                    return None
            elif ym in inverse:
                return None
            else:
                mapping[xm] = ym
                inverse[ym] = xm
                queue.append(xm)
    return mapping


def isomorphic(a: Molecule, b: Molecule) -> bool:
    """Type- and port-preserving bijection test (loops counter excluded)."""
    if a.family != b.family or a.node_count != b.node_count or a.edge_count != b.edge_count:
        return False
    if a.node_count == 0:
        return True
    color, _ = _refine([a, b])
    hist_a: dict[int, int] = {}
    hist_b: dict[int, int] = {}
    for (mi, nid), c in color.items():
        h = hist_a if mi == 0 else hist_b
        h[c] = h.get(c, 0) + 1
    if hist_a != hist_b:
        return False

    comps_a = _component_ids(a)
    comps_b = _component_ids(b)
    if len(comps_a) != len(comps_b):
        return False

    def comp_inv(mi: int, comp: list[str]) -> tuple:
        return (len(comp), tuple(sorted(color[(mi, nid)] for nid in comp)))

    inv_b: dict[tuple, list[list[str]]] = {}
    for comp in comps_b:
        inv_b.setdefault(comp_inv(1, comp), []).append(comp)

    used: list[set[int]] = [set()]

    def assign(i: int) -> bool:
        if i == len(comps_a):
            return True
        comp = comps_a[i]
        inv = comp_inv(0, comp)
        pool = inv_b.get(inv, [])
        root = min(comp, key=lambda nid: (color[(0, nid)], tag_key(nid)))
        for bi, bcomp in enumerate(pool):
            key = (repr(inv), bi)
            if key in used[0]:
                continue
            for cand in bcomp:
                if color[(1, cand)] != color[(0, root)]:
                    continue
                if _match_component(a, b, color, root, cand) is not None:
                    used[0].add(key)
                    if assign(i + 1):
                        return True
                    used[0].discard(key)
                    break  # any seed works or none does within this component
        return False

    return assign(0)

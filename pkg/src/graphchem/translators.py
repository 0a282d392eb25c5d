"""Front ends that produce molecules.

* ``parse_lambda`` / ``lambda_to_mol`` - untyped lambda terms to directed
  molecules.  An abstraction becomes an L node, an application an A node.
  A variable used twice or more fans out through a chain of FO nodes; an
  unused variable is capped with T; free variables enter through real FRIN
  nodes (one per name) and the term's root exits through FROUT.

* ``ic_to_diric`` - doubles an undirected combinator molecule into the
  directed family.  Every node splits into an (in-half, out-half) pair and
  every edge into an antiparallel pair of directed edges, so node and edge
  counts exactly double and each native rewrite corresponds to exactly two
  directed rewrites.
"""

from __future__ import annotations

from dataclasses import dataclass

from .molecule import (
    DIRECTED, Endpoint, MolError, Molecule, SIGNATURES, UNDIRECTED, parse_mol,
)

__all__ = [
    "Var", "Lam", "App", "LambdaError", "parse_lambda", "lambda_to_mol",
    "ic_to_diric", "ic_to_diric_map",
]


class LambdaError(MolError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


Term = Var | Lam | App


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "\\λ":
            toks.append(("lambda", c, i))
            i += 1
        elif c == ".":
            toks.append(("dot", c, i))
            i += 1
        elif c == "(":
            toks.append(("lparen", c, i))
            i += 1
        elif c == ")":
            toks.append(("rparen", c, i))
            i += 1
        elif c.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], i))
            i = j
        else:
            raise LambdaError(f"unexpected character {c!r}", i)
    toks.append(("eof", "", n))
    return toks


def parse_lambda(text: str) -> Term:
    r"""Parse ``\x.M`` / ``λx.M`` with left-associative juxtaposition."""
    toks = _tokenize(text)
    pos = 0

    def peek() -> tuple[str, str, int]:
        return toks[pos]

    def take(kind: str) -> tuple[str, str, int]:
        nonlocal pos
        tok = toks[pos]
        if tok[0] != kind:
            raise LambdaError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        pos += 1
        return tok

    def term() -> Term:
        if peek()[0] == "lambda":
            take("lambda")
            name = take("ident")[1]
            take("dot")
            return Lam(name, term())
        return app()

    def app() -> Term:
        t = atom()
        while peek()[0] in ("ident", "lparen"):
            t = App(t, atom())
        # a lambda directly in argument position extends to the right
        if peek()[0] == "lambda":
            return App(t, term())
        return t

    def atom() -> Term:
        kind, val, at = peek()
        if kind == "ident":
            take("ident")
            return Var(val)
        if kind == "lparen":
            take("lparen")
            t = term()
            take("rparen")
            return t
        raise LambdaError(f"expected a term, found {val or 'end of input'!r}", at)

    out = term()
    kind, val, at = peek()
    if kind != "eof":
        raise LambdaError(f"trailing input {val!r}", at)
    return out


def lambda_to_mol(term: Term | str) -> Molecule:
    """Translate a lambda term (or its source text) into a directed molecule."""
    if isinstance(term, str):
        term = parse_lambda(term)
    rows: list[str] = []
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"t{counter[0]}"

    def fan_out(src: str, uses: list[str]) -> None:
        """Wire one producer tag to every use tag through an FO chain."""
        cur = src
        for u in uses[:-2]:
            nxt = fresh()
            rows.append(f"FO {cur} {u} {nxt}")
            cur = nxt
        rows.append(f"FO {cur} {uses[-2]} {uses[-1]}")

    free_uses: dict[str, list[str]] = {}
    scopes: dict[str, list[list[str]]] = {}

    def emit(t: Term) -> str:
        if isinstance(t, Var):
            tag = fresh()
            stack = scopes.get(t.name)
            if stack:
                stack[-1].append(tag)
            else:
                free_uses.setdefault(t.name, []).append(tag)
            return tag
        if isinstance(t, Lam):
            scopes.setdefault(t.var, []).append([])
            body_tag = emit(t.body)
            uses = scopes[t.var].pop()
            out_tag = fresh()
            if not uses:
                lo = fresh()
                rows.append(f"L {body_tag} {lo} {out_tag}")
                rows.append(f"T {lo}")
            elif len(uses) == 1:
                rows.append(f"L {body_tag} {uses[0]} {out_tag}")
            else:
                lo = fresh()
                rows.append(f"L {body_tag} {lo} {out_tag}")
                fan_out(lo, uses)
            return out_tag
        fn_tag = emit(t.fn)
        arg_tag = emit(t.arg)
        out_tag = fresh()
        rows.append(f"A {fn_tag} {arg_tag} {out_tag}")
        return out_tag

    root = emit(term)
    rows.append(f"FROUT {root}")
    for name in sorted(free_uses):
        uses = free_uses[name]
        if len(uses) == 1:
            rows.append(f"FRIN {uses[0]}")
        else:
            src = fresh()
            rows.append(f"FRIN {src}")
            fan_out(src, uses)
    return parse_mol("\n".join(rows), family=DIRECTED)


# -- undirected -> directed doubling -----------------------------------------

# (in-half, out-half) types per undirected node type, and for each undirected
# port index the daughter port that receives / emits its share of the flow
_SPLIT = {
    "GAMMA": ("A", "L", (("A", 0), ("A", 1), ("L", 0)), (("L", 2), ("L", 1), ("A", 2))),
    "DELTA": ("FOE", "FI", (("FOE", 0), ("FI", 0), ("FI", 1)), (("FI", 2), ("FOE", 1), ("FOE", 2))),
    "E": ("T", "FRIN", (("T", 0),), (("FRIN", 0),)),
}


def ic_to_diric_map(m: Molecule) -> tuple[Molecule, dict[str, dict[str, str]]]:
    """Double an undirected molecule; also return {node id: {type: daughter id}}."""
    if m.family != UNDIRECTED:
        raise MolError("ic_to_diric expects an undirected molecule")
    out = Molecule(DIRECTED)
    order = sorted(m.nodes)

    # two passes: fill every daughter's tag list first, then add nodes,
    # because Molecule.add_node wants complete rows
    tags_for: dict[tuple[str, str], list[str | None]] = {}
    for nid in order:
        tin, tout, _, _ = _SPLIT[m.nodes[nid].node_type]
        tags_for[(nid, tin)] = [None] * SIGNATURES[tin].arity
        tags_for[(nid, tout)] = [None] * SIGNATURES[tout].arity

    def img(ep: Endpoint, half: str) -> tuple[str, str, int]:
        nid, pi = ep
        ntype = m.nodes[nid].node_type
        tin, tout, in_map, out_map = _SPLIT[ntype]
        dtype, dport = (in_map if half == "in" else out_map)[pi]
        return nid, dtype, dport

    for tag in sorted(m.edges):
        ep1, ep2 = m.edges[tag]
        for suffix, src, dst in ((".a", ep2, ep1), (".b", ep1, ep2)):
            n_s, t_s, p_s = img(src, "out")
            n_d, t_d, p_d = img(dst, "in")
            tags_for[(n_s, t_s)][p_s] = tag + suffix
            tags_for[(n_d, t_d)][p_d] = tag + suffix

    daughters: dict[str, dict[str, str]] = {}
    for nid in order:
        node = m.nodes[nid]
        tin, tout, _, _ = _SPLIT[node.node_type]
        pair: dict[str, str] = {}
        for dtype in (tin, tout):
            row = tags_for[(nid, dtype)]
            assert None not in row, (nid, dtype)
            # daughters are real structure even when the parent was a closure
            pair[dtype] = out.add_node(dtype, row, birth_step=node.birth_step)
        daughters[nid] = pair
    return out, daughters


def ic_to_diric(m: Molecule) -> Molecule:
    return ic_to_diric_map(m)[0]

"""Constructors for the specific finite complex models the pipeline uses.

The cast: the unknot, the (2, 2k+1) torus-knot staircases, a fifteen-generator
model of the doubled trefoil, and their mirrors and connected sums.  Connected
sum is tensor product, mirror is the graded dual.  Expressions are written in
a small text grammar: "U", "D", "T(2,5)", "m(K)", "K#K", "3*K".
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    BifilteredComplex,
    ComplexError,
    F2Span,
    Generator,
    direct_sum,
    dualize,
    is_acyclic,
    tensor,
    validate,
)


def unknot_model() -> BifilteredComplex:
    """One generator at grading 0, filtration (0, 0); empty differential."""
    return BifilteredComplex([Generator("x0", 0, 0, 0)], {}, label="U")


def torus_model(k: int) -> BifilteredComplex:
    """Staircase model of the (2, 2k+1) torus knot.

    Cycles x_i at grading 0 on i + j = k, connectors y_i at grading 1 on
    i + j = k + 1 with d(y_i) = x_{i-1} + x_i.  k = 0 gives the unknot.
    """
    if k < 0:
        raise ComplexError("torus_model needs k >= 0")
    if k == 0:
        return unknot_model()
    gens = [Generator(f"x{i}", 0, i, k - i) for i in range(k + 1)]
    gens += [Generator(f"y{i}", 1, i, k + 1 - i) for i in range(1, k + 1)]
    diff = {f"y{i}": {f"x{i-1}": 0, f"x{i}": 0} for i in range(1, k + 1)}
    return BifilteredComplex(gens, diff, label=f"T(2,{2 * k + 1})")


def whitehead_double_model() -> BifilteredComplex:
    """Fifteen-generator model of the doubled trefoil complex.

    The three generators x1, y2, z1 span a subcomplex carrying the homology (a
    staircase translate); the remaining twelve generators form an acyclic
    direct complement.  All arrows are vertical or horizontal: sources drop
    exactly one filtration level, with U-decorations encoding drops of i.
    """
    pos = {
        "u1": (-1, 0, 1), "u2": (-1, 0, 1),
        "x1": (0, 0, 1), "x2": (0, 0, 1),
        "v1": (-2, 0, 0), "v2": (-2, 0, 0), "v3": (-2, 0, 0), "v4": (-2, 0, 0),
        "y1": (-1, 0, 0), "y2": (-1, 0, 0), "y3": (-1, 0, 0),
        "w1": (-3, 0, -1), "w2": (-3, 0, -1),
        "z1": (-2, 0, -1), "z2": (-2, 0, -1),
    }
    gens = [Generator(g, gr, i, j) for g, (gr, i, j) in pos.items()]
    diff = {
        "x2": {"y1": 0},
        "y2": {"x1": 1, "z1": 0},
        "y3": {"x2": 1, "z2": 0},
        "z2": {"y1": 1},
        "u1": {"v1": 0},
        "u2": {"v2": 0},
        "v3": {"u1": 1, "w1": 0},
        "v4": {"u2": 1, "w2": 0},
        "w1": {"v1": 1},
        "w2": {"v2": 1},
    }
    C = BifilteredComplex(gens, diff, label="D")
    report = validate(C)
    if not report:
        raise ComplexError(f"doubled-trefoil model corrupt: {report.problems}")
    return C


# ---------------------------------------------------------------------------
# Expression grammar
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KnotExpr:
    """AST node: kind in {"U", "T", "D", "mirror", "sum", "repeat"}."""

    kind: str
    q: int = 0                      # for T(2, q)
    k: int = 0                      # for repeat
    args: tuple = ()

    def text(self) -> str:
        if self.kind == "U":
            return "U"
        if self.kind == "D":
            return "D"
        if self.kind == "T":
            return f"T(2,{self.q})"
        if self.kind == "mirror":
            return f"m({self.args[0].text()})"
        if self.kind == "repeat":
            return f"{self.k}*{self.args[0].text()}"
        return "#".join(a.text() for a in self.args)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ComplexError(f"bad knot expression at column {self.pos}: {msg}")

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self) -> KnotExpr:
        e = self.sum()
        if self.peek():
            self.error("trailing input")
        return e

    def sum(self) -> KnotExpr:
        terms = [self.term()]
        while self.peek() == "#":
            self.pos += 1
            terms.append(self.term())
        if len(terms) == 1:
            return terms[0]
        return KnotExpr("sum", args=tuple(terms))

    def term(self) -> KnotExpr:
        ch = self.peek()
        if ch.isdigit():
            k = self.integer()
            self.expect("*")
            inner = self.term()
            if k < 1:
                self.error("repeat count must be >= 1")
            return KnotExpr("repeat", k=k, args=(inner,))
        if ch == "(":
            self.pos += 1
            e = self.sum()
            self.expect(")")
            return e
        if ch == "U":
            self.pos += 1
            return KnotExpr("U")
        if ch == "D":
            self.pos += 1
            return KnotExpr("D")
        if ch == "m":
            self.pos += 1
            self.expect("(")
            e = self.sum()
            self.expect(")")
            return KnotExpr("mirror", args=(e,))
        if ch == "T":
            self.pos += 1
            self.expect("(")
            if self.integer() != 2:
                self.error("only T(2,q) is supported")
            self.expect(",")
            q = self.integer()
            self.expect(")")
            if q < 3 or q % 2 == 0:
                self.error("T(2,q) needs odd q >= 3")
            return KnotExpr("T", q=q)
        self.error("expected U, D, T(2,q), m(...), k*... or (...)")


def parse_expr(text: str) -> KnotExpr:
    return _Parser(text).parse()


def _push_mirrors(e: KnotExpr, mirrored: bool = False) -> KnotExpr:
    """Normal form: mirrors distributed over sums/repeats, double mirrors gone."""
    if e.kind == "mirror":
        return _push_mirrors(e.args[0], not mirrored)
    if e.kind == "sum":
        return KnotExpr("sum", args=tuple(_push_mirrors(a, mirrored) for a in e.args))
    if e.kind == "repeat":
        return KnotExpr("repeat", k=e.k, args=(_push_mirrors(e.args[0], mirrored),))
    return KnotExpr("mirror", args=(e,)) if mirrored else e


def build_model(expr: KnotExpr | str) -> BifilteredComplex:
    """Evaluate an expression to its complex; the label records the expression."""
    if isinstance(expr, str):
        expr = parse_expr(expr)
    expr = _push_mirrors(expr)

    def build(e: KnotExpr) -> BifilteredComplex:
        if e.kind == "U":
            return unknot_model()
        if e.kind == "D":
            return whitehead_double_model()
        if e.kind == "T":
            return torus_model((e.q - 1) // 2)
        if e.kind == "mirror":
            return dualize(build(e.args[0]))
        if e.kind == "repeat":
            acc = build(e.args[0])
            for _ in range(e.k - 1):
                acc = tensor(acc, build(e.args[0]))
            return acc
        if e.kind == "sum":
            acc = build(e.args[0])
            for a in e.args[1:]:
                acc = tensor(acc, build(a))
            return acc
        raise ComplexError(f"unknown expression kind {e.kind!r}")

    return build(expr).with_label(expr.text())


# ---------------------------------------------------------------------------
# Staircase splitting of trefoil tensor powers
# ---------------------------------------------------------------------------


def _split_step(S: BifilteredComplex, k: int) -> tuple[BifilteredComplex, BifilteredComplex]:
    """One inductive splitting: T(2,2k+1)-staircase (x) T(2,3) -> staircase + acyclic.

    Performs the explicit filtered change of basis
        alpha_i = x_i (x) w  + y_{i+1} (x) z0,
        beta_i  = x_i (x) z1 + x_{i+1} (x) z0,
        gamma_i = y_i (x) z1 + x_i (x) w,
    on the tensor complex and verifies by direct linear algebra that the
    differential splits into k four-generator acyclic summands plus a
    (2k+3)-generator staircase.  Both summed generators always share a
    bifiltration level, so the change of basis is filtration-preserving.
    """
    T1 = torus_model(1).relabel({"x0": "z0", "x1": "z1", "y1": "w"})
    prod = tensor(S, T1)
    # Old basis and positions; the tensor differential here is upow-free.
    old = sorted(prod.gens)
    idx = {gid: n for n, gid in enumerate(old)}
    if any(u != 0 for row in prod.diff.values() for u in row.values()):
        raise ComplexError("splitting step expects an undecorated staircase tensor")

    def vec(*gids: str) -> int:
        v = 0
        for gid in gids:
            v ^= 1 << idx[gid]
        return v

    # New basis: substitutions for 0 <= i < k (alpha, beta) and 0 < i <= k
    # (gamma); everything else keeps its tensor basis vector.
    new_basis: dict[str, int] = {gid: vec(gid) for gid in old}
    names: dict[str, str] = {gid: gid for gid in old}
    for i in range(k):
        new_basis[f"alpha{i}"] = vec(f"x{i}|w", f"y{i+1}|z0")
        names[f"alpha{i}"] = f"x{i}|w"
        new_basis[f"beta{i}"] = vec(f"x{i}|z1", f"x{i+1}|z0")
        names[f"beta{i}"] = f"x{i}|z1"
        new_basis[f"gamma{i+1}"] = vec(f"y{i+1}|z1", f"x{i+1}|w")
        names[f"gamma{i+1}"] = f"y{i+1}|z1"
    for i in range(k):
        for alias in (f"x{i}|w", f"x{i}|z1", f"y{i+1}|z1"):
            del new_basis[alias]

    # Change of basis must be invertible and position-preserving: every
    # substituted pair sits at one bifiltration level.
    span = F2Span()
    for name, v in sorted(new_basis.items()):
        rep = prod.gens[names[name]]
        for bit in range(len(old)):
            if v >> bit & 1:
                g = prod.gens[old[bit]]
                if (g.gr, g.i, g.j) != (rep.gr, rep.i, rep.j):
                    raise ComplexError("substitution mixes bifiltration levels")
        if not span.add(v):
            raise ComplexError("substitution basis is singular")

    # Express the differential in the new basis.
    order = sorted(new_basis)
    mat = [new_basis[name] for name in order]

    def express(v: int) -> set[str]:
        piv: dict[int, tuple[int, int]] = {}
        for ncol, col in enumerate(mat):
            combo = 1 << ncol
            while col:
                top = col.bit_length() - 1
                if top in piv:
                    pcol, pcombo = piv[top]
                    col ^= pcol
                    combo ^= pcombo
                else:
                    piv[top] = (col, combo)
                    break
        out = 0
        while v:
            top = v.bit_length() - 1
            pcol, pcombo = piv[top]
            v ^= pcol
            out ^= pcombo
        return {order[b] for b in range(len(order)) if out >> b & 1}

    bdry_old: dict[str, int] = {}
    for src, row in prod.diff.items():
        bdry_old[src] = vec(*row.keys())
    new_diff: dict[str, set[str]] = {}
    for name in order:
        image = 0
        v = new_basis[name]
        for bit in range(len(old)):
            if v >> bit & 1:
                image ^= bdry_old.get(old[bit], 0)
        if image:
            new_diff[name] = express(image)

    # The split: acyclic summands <y_i|w> -> <alpha_{i-1}, gamma_i> -> <beta_{i-1}>
    # and the staircase complement.
    expected_acyclic = {
        f"y{i}|w": {f"alpha{i-1}", f"gamma{i}"} for i in range(1, k + 1)
    }
    expected_acyclic.update({f"alpha{i}": {f"beta{i}"} for i in range(k)})
    expected_acyclic.update({f"gamma{i}": {f"beta{i-1}"} for i in range(1, k + 1)})
    stair_ids = [f"x{i}|z0" for i in range(k + 1)]
    stair_ids += [f"y{i}|z0" for i in range(1, k + 1)]
    stair_ids += [f"x{k}|w", f"x{k}|z1"]
    acyclic_ids = sorted(set(order) - set(stair_ids))
    for src, dsts in new_diff.items():
        block = expected_acyclic.get(src)
        if block is not None:
            if dsts != block:
                raise ComplexError(f"acyclic block mismatch at {src}: {sorted(dsts)}")
        else:
            if not dsts <= set(stair_ids):
                raise ComplexError(f"staircase part not closed at {src}")

    def assemble(ids: list[str], label: str) -> BifilteredComplex:
        gens = []
        for name in ids:
            rep = prod.gens[names[name]]
            gens.append(Generator(name, rep.gr, rep.i, rep.j))
        diff = {
            s: {d: 0 for d in new_diff[s]} for s in ids if new_diff.get(s)
        }
        return BifilteredComplex(gens, diff, label=label)

    stair = assemble(stair_ids, f"T(2,{2 * k + 3})")
    acyc = assemble(acyclic_ids, f"A[{k}]")
    rename = {f"x{i}|z0": f"x{i}" for i in range(k + 1)}
    rename.update({f"y{i}|z0": f"y{i}" for i in range(1, k + 1)})
    rename.update({f"x{k}|w": f"y{k+1}", f"x{k}|z1": f"x{k+1}"})
    return stair.relabel(rename, label=stair.label), acyc


def split_staircase(k: int) -> tuple[BifilteredComplex, BifilteredComplex]:
    """Split the k-th trefoil tensor power into a staircase plus acyclics.

    Iterates the one-step basis change; the accumulated acyclic part of the
    earlier steps is carried along by tensoring with the trefoil model, so the
    two returned complexes together have total rank 3^k.
    """
    if k < 1:
        raise ComplexError("split_staircase needs k >= 1")
    stair = torus_model(1)
    acyclic: BifilteredComplex | None = None
    for step in range(1, k):
        if acyclic is not None:
            acyclic = tensor(acyclic, torus_model(1), label="acyclic")
        stair, new_acyc = _split_step(stair, step)
        if acyclic is None:
            acyclic = new_acyc.with_label("acyclic")
        else:
            acyclic = direct_sum(acyclic, new_acyc, label="acyclic")
    if acyclic is None:
        acyclic = BifilteredComplex([], {}, label="acyclic")
    if not is_acyclic(acyclic):
        raise ComplexError("split produced a non-acyclic complement")
    return stair, acyclic

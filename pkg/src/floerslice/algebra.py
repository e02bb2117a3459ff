"""Exact bifiltered chain complexes over the two-element field with formal U-action.

A complex is stored as a finite set of generators, each carrying an integer
homological grading and a pair of integer filtration levels (i, j).  The
differential is a set of F2-entries "src -> U^upow * dst"; the full complex the
finite data represents is C (x) F[U, U^-1], where the variable U drops both
filtration levels by one and the grading by two.  Arrows landing on
U-translates are encoded by the upow decoration, so the generating set stays
finite while the represented complex is U-periodic.

Everything here is exact integer / F2 arithmetic: no floats, no tolerances.
Complexes are treated as immutable values; every operation returns a new one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping


class ComplexError(ValueError):
    """Structurally invalid complex or operation argument."""


# ---------------------------------------------------------------------------
# Grading shift tags
# ---------------------------------------------------------------------------

# A tag atom is a hashable tuple such as ("eps1", N, m) or ("base", "D").
Atom = tuple


@dataclass(frozen=True)
class ShiftTag:
    """Formal integer combination of symbolic grading-shift atoms.

    Absolute gradings of surgered-manifold complexes are only pinned up to
    shifts that depend on the surgery parameters; those shifts stay symbolic.
    Tags support addition and negation; a difference of two tags is legal only
    when they are equal, in which case it is the zero tag.
    """

    atoms: tuple[tuple[Atom, int], ...] = ()
    const: int = 0

    @staticmethod
    def make(pairs: Iterable[tuple[Atom, int]] = (), const: int = 0) -> "ShiftTag":
        acc: dict[Atom, int] = {}
        for atom, coeff in pairs:
            acc[atom] = acc.get(atom, 0) + coeff
        items = tuple(sorted((a, c) for a, c in acc.items() if c != 0))
        return ShiftTag(items, const)

    @staticmethod
    def atom(*parts) -> "ShiftTag":
        return ShiftTag.make([(tuple(parts), 1)])

    def __add__(self, other: "ShiftTag") -> "ShiftTag":
        return ShiftTag.make(
            list(self.atoms) + list(other.atoms), self.const + other.const
        )

    def __neg__(self) -> "ShiftTag":
        return ShiftTag.make([(a, -c) for a, c in self.atoms], -self.const)

    def plus_const(self, d: int) -> "ShiftTag":
        return ShiftTag(self.atoms, self.const + d)

    def is_zero(self) -> bool:
        return not self.atoms and self.const == 0

    def difference(self, other: "ShiftTag") -> int:
        """Integer difference self - other; raises unless the symbolic parts agree."""
        if self.atoms != other.atoms:
            raise ComplexError(
                "illegal tag subtraction: symbolic parts differ "
                f"({self.atoms} vs {other.atoms})"
            )
        return self.const - other.const

    def to_json(self) -> list:
        out = [[list(a), c] for a, c in self.atoms]
        out.append(["const", self.const])
        return out

    @staticmethod
    def from_json(data: list) -> "ShiftTag":
        pairs = []
        const = 0
        for item in data:
            key, val = item
            if key == "const":
                const = int(val)
            else:
                pairs.append((tuple(key), int(val)))
        return ShiftTag.make(pairs, const)


ZERO_TAG = ShiftTag()


# ---------------------------------------------------------------------------
# Generators and complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    gid: str
    gr: int
    i: int
    j: int

    @property
    def diag(self) -> int:
        return self.i - self.j


class BifilteredComplex:
    """Finite model of a U-periodic bifiltered complex over F2.

    gens: mapping gid -> Generator.
    diff: mapping src gid -> {dst gid: upow}; presence of a key means the
          F2-coefficient of U^upow * dst in d(src) is 1.  Given the gradings
          of src and dst the upow is forced, so at most one entry per pair.
    """

    __slots__ = ("gens", "diff", "tag", "label")

    def __init__(
        self,
        gens: Iterable[Generator],
        diff: Mapping[str, Mapping[str, int]],
        tag: ShiftTag = ZERO_TAG,
        label: str = "",
    ):
        gen_map: dict[str, Generator] = {}
        for g in gens:
            if g.gid in gen_map:
                raise ComplexError(f"duplicate generator id {g.gid!r}")
            gen_map[g.gid] = g
        self.gens: dict[str, Generator] = gen_map
        clean: dict[str, dict[str, int]] = {}
        for src, row in diff.items():
            if src not in gen_map:
                raise ComplexError(f"differential source {src!r} is not a generator")
            entries = {}
            for dst, upow in row.items():
                if dst not in gen_map:
                    raise ComplexError(f"differential target {dst!r} is not a generator")
                entries[dst] = int(upow)
            if entries:
                clean[src] = entries
        self.diff: dict[str, dict[str, int]] = clean
        self.tag = tag
        self.label = label

    # -- basic accessors ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.gens)

    def generators(self) -> list[Generator]:
        return [self.gens[k] for k in sorted(self.gens)]

    def entries(self) -> list[tuple[str, str, int]]:
        out = []
        for src in sorted(self.diff):
            for dst in sorted(self.diff[src]):
                out.append((src, dst, self.diff[src][dst]))
        return out

    def relabel(self, mapping: Mapping[str, str], label: str | None = None) -> "BifilteredComplex":
        gens = [
            Generator(mapping[g.gid], g.gr, g.i, g.j) for g in self.gens.values()
        ]
        diff = {
            mapping[s]: {mapping[d]: u for d, u in row.items()}
            for s, row in self.diff.items()
        }
        return BifilteredComplex(gens, diff, self.tag,
                                 self.label if label is None else label)

    def with_label(self, label: str) -> "BifilteredComplex":
        return BifilteredComplex(self.gens.values(), self.diff, self.tag, label)

    def with_tag(self, tag: ShiftTag) -> "BifilteredComplex":
        return BifilteredComplex(self.gens.values(), self.diff, tag, self.label)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "shift_tag": self.tag.to_json(),
            "generators": [
                {"id": g.gid, "gr": g.gr, "i": g.i, "j": g.j}
                for g in self.generators()
            ],
            "differential": [
                {"from": s, "to": d, "upow": u} for (s, d, u) in self.entries()
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "BifilteredComplex":
        gens = [
            Generator(str(g["id"]), int(g["gr"]), int(g["i"]), int(g["j"]))
            for g in data["generators"]
        ]
        diff: dict[str, dict[str, int]] = {}
        for e in data["differential"]:
            diff.setdefault(str(e["from"]), {})[str(e["to"])] = int(e["upow"])
        tag = ShiftTag.from_json(data.get("shift_tag", []))
        return BifilteredComplex(gens, diff, tag, str(data.get("label", "")))

    def __repr__(self) -> str:
        return (
            f"<BifilteredComplex {self.label!r}: {len(self.gens)} generators, "
            f"{sum(len(r) for r in self.diff.values())} entries>"
        )


# ---------------------------------------------------------------------------
# F2 linear algebra on int bitmasks
# ---------------------------------------------------------------------------


def f2_rank(cols: list[int]) -> int:
    """Rank of the F2 matrix whose columns are the given bitmasks."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in cols:
        while col:
            top = col.bit_length() - 1
            if top in pivots:
                col ^= pivots[top]
            else:
                pivots[top] = col
                rank += 1
                break
    return rank


def f2_kernel(cols: list[int]) -> list[int]:
    """Basis of the kernel of the column map, as bitmasks over column indices."""
    pivots: dict[int, tuple[int, int]] = {}  # row -> (reduced col, combo mask)
    kernel = []
    for idx, col in enumerate(cols):
        combo = 1 << idx
        while col:
            top = col.bit_length() - 1
            if top in pivots:
                pcol, pcombo = pivots[top]
                col ^= pcol
                combo ^= pcombo
            else:
                pivots[top] = (col, combo)
                break
        if col == 0:
            kernel.append(combo)
    return kernel


class F2Span:
    """Incrementally built row space with membership tests."""

    def __init__(self):
        self.pivots: dict[int, int] = {}

    def reduce(self, vec: int) -> int:
        while vec:
            top = vec.bit_length() - 1
            if top not in self.pivots:
                return vec
            vec ^= self.pivots[top]
        return 0

    def add(self, vec: int) -> bool:
        """Insert vec; returns True if it enlarged the span."""
        vec = self.reduce(vec)
        if vec:
            self.pivots[vec.bit_length() - 1] = vec
            return True
        return False

    def contains(self, vec: int) -> bool:
        return self.reduce(vec) == 0

    @property
    def rank(self) -> int:
        return len(self.pivots)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    problems: list[str]

    def __bool__(self) -> bool:
        return self.ok


def validate(C: BifilteredComplex) -> ValidationReport:
    """Check the structural axioms: entry gradings/filtrations and d^2 = 0.

    d drops the grading by one, U drops it by two and drops both filtration
    levels by one; no entry may raise either filtration level.  d^2 = 0 is
    checked over F2 after expanding the U-decorations.
    """
    problems: list[str] = []
    for src, row in C.diff.items():
        g = C.gens[src]
        for dst, u in row.items():
            h = C.gens[dst]
            if u < 0:
                problems.append(f"entry {src}->{dst}: negative upow {u}")
            if h.gr - 2 * u != g.gr - 1:
                problems.append(
                    f"entry {src}->U^{u}.{dst}: grading mismatch "
                    f"({h.gr} - 2*{u} != {g.gr} - 1)"
                )
            if h.i - u > g.i or h.j - u > g.j:
                problems.append(
                    f"entry {src}->U^{u}.{dst}: filtration raised "
                    f"(target at ({h.i - u},{h.j - u}), source at ({g.i},{g.j}))"
                )
    for src in sorted(C.diff):
        square: dict[tuple[str, int], int] = {}
        for mid, u1 in C.diff[src].items():
            for dst, u2 in C.diff.get(mid, {}).items():
                key = (dst, u1 + u2)
                square[key] = square.get(key, 0) ^ 1
        for (dst, u), coeff in sorted(square.items()):
            if coeff:
                problems.append(f"d^2 != 0: d^2({src}) contains U^{u}.{dst}")
    return ValidationReport(not problems, problems)


# ---------------------------------------------------------------------------
# Structural operations
# ---------------------------------------------------------------------------


def width(C: BifilteredComplex) -> int:
    """max(i - j) - min(i - j) + 1 over all generators."""
    if not C.gens:
        raise ComplexError("width of an empty complex is undefined")
    diags = [g.diag for g in C.gens.values()]
    return max(diags) - min(diags) + 1


def diag_band(C: BifilteredComplex) -> tuple[int, int]:
    """(min, max) of i - j over generators."""
    if not C.gens:
        raise ComplexError("band of an empty complex is undefined")
    diags = [g.diag for g in C.gens.values()]
    return min(diags), max(diags)


def shift(C: BifilteredComplex, di: int, dj: int, dg: int | Atom = 0) -> BifilteredComplex:
    """Uniform translation of filtrations and grading.

    dg may be an integer (gradings move by dg) or a symbolic atom, which is
    accumulated in the shift tag while integer gradings stay put.
    """
    tag = C.tag
    dgi = 0
    if isinstance(dg, int):
        dgi = dg
    else:
        tag = tag + ShiftTag.atom(*dg)
    gens = [Generator(g.gid, g.gr + dgi, g.i + di, g.j + dj) for g in C.gens.values()]
    return BifilteredComplex(gens, C.diff, tag, C.label)


def tensor(C1: BifilteredComplex, C2: BifilteredComplex,
           label: str | None = None) -> BifilteredComplex:
    """Tensor product over F2; gradings and filtrations add componentwise."""
    gens = []
    for a in C1.gens.values():
        for b in C2.gens.values():
            gens.append(
                Generator(f"{a.gid}|{b.gid}", a.gr + b.gr, a.i + b.i, a.j + b.j)
            )
    diff: dict[str, dict[str, int]] = {}
    for a in C1.gens:
        arow = C1.diff.get(a, {})
        for b in C2.gens:
            row: dict[str, int] = {}
            for a2, u in arow.items():
                row[f"{a2}|{b}"] = u
            for b2, u in C2.diff.get(b, {}).items():
                key = f"{a}|{b2}"
                if key in row and row[key] == u:
                    del row[key]  # F2 cancellation
                else:
                    row[key] = u
            if row:
                diff[f"{a}|{b}"] = row
    if label is None:
        label = f"({C1.label})#({C2.label})" if C1.label or C2.label else ""
    return BifilteredComplex(gens, diff, C1.tag + C2.tag, label)


def dualize(C: BifilteredComplex, label: str | None = None) -> BifilteredComplex:
    """Graded dual: gradings and filtrations negate, every arrow reverses."""
    gens = [Generator(g.gid, -g.gr, -g.i, -g.j) for g in C.gens.values()]
    diff: dict[str, dict[str, int]] = {}
    for src, row in C.diff.items():
        for dst, u in row.items():
            diff.setdefault(dst, {})[src] = u
    if label is None:
        label = f"m({C.label})" if C.label else ""
    return BifilteredComplex(gens, diff, -C.tag, label)


def direct_sum(C1: BifilteredComplex, C2: BifilteredComplex,
               label: str | None = None) -> BifilteredComplex:
    """Disjoint union of generators and entries (ids get +/- prefixes)."""
    if C1.tag.atoms != C2.tag.atoms:
        raise ComplexError("direct sum of complexes with different symbolic tags")
    gens = [Generator("L." + g.gid, g.gr, g.i, g.j) for g in C1.gens.values()]
    gens += [Generator("R." + g.gid, g.gr, g.i, g.j) for g in C2.gens.values()]
    diff: dict[str, dict[str, int]] = {}
    for src, row in C1.diff.items():
        diff["L." + src] = {"L." + d: u for d, u in row.items()}
    for src, row in C2.diff.items():
        diff["R." + src] = {"R." + d: u for d, u in row.items()}
    if label is None:
        label = f"({C1.label})+({C2.label})"
    return BifilteredComplex(gens, diff, C1.tag, label)


def subcomplex(C: BifilteredComplex, gids: Iterable[str],
               label: str = "") -> BifilteredComplex:
    """Restriction to a subset of generators; the subset must be d-closed."""
    keep = set(gids)
    missing = keep - set(C.gens)
    if missing:
        raise ComplexError(f"unknown generators {sorted(missing)}")
    diff: dict[str, dict[str, int]] = {}
    for src in keep:
        row = C.diff.get(src, {})
        bad = set(row) - keep
        if bad:
            raise ComplexError(
                f"not a subcomplex: d({src}) hits excluded {sorted(bad)}"
            )
        if row:
            diff[src] = dict(row)
    return BifilteredComplex([C.gens[g] for g in keep], diff, C.tag, label)


# ---------------------------------------------------------------------------
# Homology of the U-periodic expansion
# ---------------------------------------------------------------------------


def _parity_matrices(C: BifilteredComplex) -> tuple[list[int], list[int], int, int]:
    """Columns of d on the two grading parities of the expanded complex.

    Each graded piece of C (x) F[U,U^-1] contains exactly one U-translate of
    every generator of matching parity, and the matrix of d is the same for
    all gradings of a fixed parity.  Returns (cols from parity 0, cols from
    parity 1, #parity-0 gens, #parity-1 gens).
    """
    by_parity: dict[int, list[str]] = {0: [], 1: []}
    for gid in sorted(C.gens):
        by_parity[C.gens[gid].gr & 1].append(gid)
    index = {0: {}, 1: {}}
    for par in (0, 1):
        for pos, gid in enumerate(by_parity[par]):
            index[par][gid] = pos
    cols = {0: [], 1: []}
    for par in (0, 1):
        other = 1 - par
        for gid in by_parity[par]:
            vec = 0
            for dst in C.diff.get(gid, {}):
                vec ^= 1 << index[other][dst]
            cols[par].append(vec)
    return cols[0], cols[1], len(by_parity[0]), len(by_parity[1])


def homology_rank(C: BifilteredComplex) -> int:
    """F2-rank of the homology of the expanded complex over one U-period.

    Equals dim H_g + dim H_{g+1} for any grading g; a single U-tower counts 1.
    """
    if not C.gens:
        return 0
    cols0, cols1, n0, n1 = _parity_matrices(C)
    r0 = f2_rank(cols0)
    r1 = f2_rank(cols1)
    return (n0 - r0 - r1) + (n1 - r1 - r0)


def is_acyclic(C: BifilteredComplex) -> bool:
    return homology_rank(C) == 0


def slice_homology(C: BifilteredComplex, j0: int) -> dict[int, int]:
    """Graded homology ranks of the (i = 0, j = j0) bi-slice subquotient.

    The slice takes, for every generator, its unique U-translate with first
    filtration level 0; a generator lands in the j0 slice when j - i = j0.
    Only differential entries preserving both filtration levels survive.
    Returns {grading: rank} with zero ranks omitted.
    """
    members = [g for g in C.generators() if g.j - g.i == j0]
    grade = {g.gid: g.gr - 2 * g.i for g in members}
    by_grade: dict[int, list[str]] = {}
    for g in members:
        by_grade.setdefault(grade[g.gid], []).append(g.gid)
    for lst in by_grade.values():
        lst.sort()
    index = {
        gamma: {gid: pos for pos, gid in enumerate(lst)}
        for gamma, lst in by_grade.items()
    }
    ranks: dict[int, int] = {}
    member_set = set(grade)
    for gamma, lst in by_grade.items():
        cols = []
        tgt_index = index.get(gamma - 1, {})
        for gid in lst:
            g = C.gens[gid]
            vec = 0
            for dst, u in C.diff.get(gid, {}).items():
                h = C.gens[dst]
                if dst in member_set and h.i - u == g.i:
                    vec ^= 1 << tgt_index[dst]
            cols.append(vec)
        ranks[gamma] = f2_rank(cols)
    out: dict[int, int] = {}
    for gamma, lst in by_grade.items():
        h = len(lst) - ranks.get(gamma, 0) - ranks.get(gamma + 1, 0)
        if h:
            out[gamma] = h
    return out


# ---------------------------------------------------------------------------
# Reduction (cancellation of filtration-preserving entries)
# ---------------------------------------------------------------------------


def _preserving_entries(gens: dict[str, Generator],
                        diff: dict[str, dict[str, int]]) -> list[tuple]:
    found = []
    for src, row in diff.items():
        g = gens[src]
        for dst, u in row.items():
            h = gens[dst]
            if h.i - u == g.i and h.j - u == g.j:
                found.append(((g.gr, g.i, g.j, src, dst), src, dst, u))
    found.sort()
    return found


def reduce_complex(C: BifilteredComplex) -> BifilteredComplex:
    """Cancel every bifiltration-preserving differential entry.

    Standard Gaussian cancellation: for a preserving entry src -> U^u dst,
    remove both generators and splice d(src) through every other arrow into
    dst.  Cancellation proceeds in a fixed order (lowest (grading, i, j, id)
    source first) so outputs are reproducible.  The result is a filtered
    homotopy equivalent complex with no preserving entries; homology rank is
    unchanged and the width never grows.
    """
    gens = dict(C.gens)
    fwd: dict[str, dict[str, int]] = {s: dict(r) for s, r in C.diff.items()}
    back: dict[str, dict[str, int]] = {}
    for src, row in fwd.items():
        for dst, u in row.items():
            back.setdefault(dst, {})[src] = u

    def toggle(x: str, y: str, u: int) -> None:
        row = fwd.setdefault(x, {})
        if y in row and row[y] == u:
            del row[y]
            del back[y][x]
            if not row:
                del fwd[x]
            if not back[y]:
                del back[y]
        elif y in row:
            raise ComplexError("conflicting upow on one arrow")  # gradings forbid this
        else:
            row[y] = u
            back.setdefault(y, {})[x] = u

    while True:
        cands = _preserving_entries(gens, fwd)
        if not cands:
            break
        _, src, dst, u = cands[0]
        ins = [(x, a) for x, a in back.get(dst, {}).items() if x != src]
        outs = [(y, b) for y, b in fwd.get(src, {}).items() if y != dst]
        # drop src and dst together with every incident entry
        for gid in (src, dst):
            for y in list(fwd.get(gid, {})):
                del back[y][gid]
                if not back[y]:
                    del back[y]
            fwd.pop(gid, None)
            for x in list(back.get(gid, {})):
                del fwd[x][gid]
                if not fwd[x]:
                    del fwd[x]
            back.pop(gid, None)
            del gens[gid]
        # splice every remaining arrow into dst through every arrow out of src
        for x, a in ins:
            for y, b in outs:
                toggle(x, y, a + b - u)

    # Splicing can produce negative upow; re-anchor generators (replace a
    # generator by a U-translate of itself) so all decorations are >= 0.
    # Anchors solve t[dst] <= t[src] + upow over all entries (Bellman-Ford;
    # feasible because every directed cycle has positive total upow).
    if any(u < 0 for row in fwd.values() for u in row.values()):
        t = {gid: 0 for gid in gens}
        for _ in range(len(gens) + 1):
            changed = False
            for src, row in fwd.items():
                for dst, u in row.items():
                    if t[dst] > t[src] + u:
                        t[dst] = t[src] + u
                        changed = True
            if not changed:
                break
        else:
            raise ComplexError("re-anchoring failed to converge")
        gens = {
            gid: Generator(gid, g.gr - 2 * t[gid], g.i - t[gid], g.j - t[gid])
            for gid, g in gens.items()
        }
        fwd = {
            src: {dst: u + t[src] - t[dst] for dst, u in row.items()}
            for src, row in fwd.items()
        }

    return BifilteredComplex(gens.values(), fwd, C.tag, C.label)


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------


def _anchor_normalized(C: BifilteredComplex) -> tuple[list[tuple], list[tuple]]:
    """Replace each generator by its U-translate of grading 0 or 1.

    Two finite models of the same U-periodic complex differ only by such
    re-anchoring, so this makes isomorphism checkable on the nose.  Returns
    (gen records, entries) with entries rebased; rebased upows land in {0,1}.
    """
    t = {gid: g.gr >> 1 for gid, g in C.gens.items()}
    gens = [
        (gid, g.gr - 2 * t[gid], g.i - t[gid], g.j - t[gid])
        for gid, g in C.gens.items()
    ]
    entries = []
    for src, row in C.diff.items():
        for dst, u in row.items():
            entries.append((src, dst, u + t[src] - t[dst]))
    return gens, entries


def canonical_form(C: BifilteredComplex, search_budget: int = 20000) -> str:
    """Deterministic serialization invariant under generator relabeling.

    Generators are first re-anchored to gradings {0, 1}; labels are then
    assigned by iterated signature refinement on (grading, i, j) plus
    incident-arrow signatures, with exhaustive search over any residual ties.
    Two complexes have equal canonical forms iff they are isomorphic as
    labeled bifiltered complexes (up to U-re-anchoring of generators).  The
    output is the standard complex schema with canonical ids g0, g1, ...

    Intended for small (reduced) complexes; highly symmetric inputs can
    exhaust the tie-break search budget, which raises rather than hanging.
    """
    gens, entries = _anchor_normalized(C)
    base = {gid: (gr, i, j) for gid, gr, i, j in gens}
    out_adj: dict[str, list[tuple[str, int]]] = {g: [] for g in base}
    in_adj: dict[str, list[tuple[str, int]]] = {g: [] for g in base}
    for src, dst, u in entries:
        out_adj[src].append((dst, u))
        in_adj[dst].append((src, u))

    def refine(colors: dict[str, int]) -> dict[str, int]:
        while True:
            sig = {
                g: (
                    colors[g],
                    tuple(sorted((u, colors[d]) for d, u in out_adj[g])),
                    tuple(sorted((u, colors[s]) for s, u in in_adj[g])),
                )
                for g in base
            }
            palette = {s: n for n, s in enumerate(sorted(set(sig.values())))}
            new = {g: palette[sig[g]] for g in base}
            if new == colors:
                return colors
            colors = new

    init_palette = {v: n for n, v in enumerate(sorted(set(base.values())))}
    colors = refine({g: init_palette[base[g]] for g in base})

    # Upfront symmetry estimate: the tie-break search is factorial in the
    # residual class sizes, so monsters are rejected before any work.
    import math

    estimate = 1
    counts: dict[int, int] = {}
    for c in colors.values():
        counts[c] = counts.get(c, 0) + 1
    for size in counts.values():
        estimate *= math.factorial(size)
        if estimate > 10 ** 7:
            raise ComplexError(
                "canonical_form: residual symmetry too large "
                f"({len(base)} generators); reduce or decompose first"
            )

    def serialize(order: list[str]) -> str:
        pos = {g: n for n, g in enumerate(order)}
        gen_part = [
            {"id": f"g{n}", "gr": base[g][0], "i": base[g][1], "j": base[g][2]}
            for n, g in enumerate(order)
        ]
        edge_part = [
            {"from": f"g{a}", "to": f"g{b}", "upow": u}
            for a, b, u in sorted((pos[s], pos[d], u) for s, d, u in entries)
        ]
        return json.dumps(
            {"label": "", "shift_tag": C.tag.to_json(), "generators": gen_part,
             "differential": edge_part},
            separators=(",", ":"),
        )

    budget = [search_budget]

    def solve(colors: dict[str, int]) -> str:
        budget[0] -= 1
        if budget[0] < 0:
            raise ComplexError(
                "canonical_form tie-break budget exhausted (complex too symmetric)"
            )
        classes: dict[int, list[str]] = {}
        for g, c in colors.items():
            classes.setdefault(c, []).append(g)
        ambiguous = sorted(c for c, members in classes.items() if len(members) > 1)
        if not ambiguous:
            order = sorted(base, key=lambda g: colors[g])
            return serialize(order)
        target = ambiguous[0]
        best = None
        fresh = max(colors.values()) + 1
        for pick in sorted(classes[target]):
            trial = dict(colors)
            trial[pick] = fresh
            cand = solve(refine(trial))
            if best is None or cand < best:
                best = cand
        return best

    return solve(colors)


def isomorphic(C1: BifilteredComplex, C2: BifilteredComplex) -> bool:
    return canonical_form(C1) == canonical_form(C2)


# ---------------------------------------------------------------------------
# Text diagram dump
# ---------------------------------------------------------------------------


def ascii_diagram(C: BifilteredComplex) -> str:
    """Generators grouped by (i, j) position on an ASCII grid, arrows listed."""
    if not C.gens:
        return "(empty complex)\n"
    cells: dict[tuple[int, int], list[str]] = {}
    for g in C.generators():
        cells.setdefault((g.i, g.j), []).append(f"{g.gid}^{g.gr}")
    imin = min(i for i, _ in cells)
    imax = max(i for i, _ in cells)
    jmin = min(j for _, j in cells)
    jmax = max(j for _, j in cells)
    colw = {}
    for i in range(imin, imax + 1):
        w = max([len(" ".join(cells.get((i, j), []))) for j in range(jmin, jmax + 1)]
                + [len(str(i))])
        colw[i] = max(w, 1)
    lines = []
    for j in range(jmax, jmin - 1, -1):
        row = [f"j={j:>4} |"]
        for i in range(imin, imax + 1):
            row.append(" ".join(cells.get((i, j), [])).ljust(colw[i]))
        lines.append(" ".join(row).rstrip())
    ruler = ["        " + "-" * (sum(colw.values()) + len(colw))]
    footer = ["i =      " + " ".join(str(i).ljust(colw[i]) for i in range(imin, imax + 1))]
    arrows = [
        f"  d({s}) += U^{u}.{d}" if u else f"  d({s}) += {d}"
        for s, d, u in C.entries()
    ]
    return "\n".join(lines + ruler + footer + ["arrows:"] + (arrows or ["  (none)"])) + "\n"

"""Refiltering: the complex of the meridian inside a negatively surgered manifold.

For surgery magnitude N at least twice the genus of the underlying knot (read
off the reduced model width as 2g + 1), the meridian complex in structure m is
the same unfiltered complex with each generator's bifiltration replaced by

    F_m(i, j) = (i, i)            if j >  i + m,
                (j - m, j - m-1)  if j <= i + m,

for m in the base window ceil((-N+1)/2) <= m <= floor(N/2).  Structures
outside the window are reached by extend_spinc, which lowers the j-filtration.
The overall grading shift is unknown and kept symbolic in the tag.
"""

from __future__ import annotations

from .algebra import (
    BifilteredComplex,
    ComplexError,
    F2Span,
    Generator,
    ShiftTag,
    homology_rank,
    reduce_complex,
    shift,
    validate,
    width,
)


class RangeError(ComplexError):
    """Parameter outside its admissible range."""


def refilter_position(i: int, j: int, m: int) -> tuple[int, int]:
    if j > i + m:
        return (i, i)
    return (j - m, j - m - 1)


def genus_bound(C: BifilteredComplex) -> int:
    """(width(reduce(C)) - 1) // 2; the genus the width of a knot model encodes."""
    w = width(reduce_complex(C))
    return (w - 1) // 2


def base_spinc_range(N: int) -> tuple[int, int]:
    """[ceil((-N+1)/2), floor(N/2)], the window the refiltering formula covers."""
    return (-((N - 1) // 2), N // 2)


def _check_params(C: BifilteredComplex, N: int, m: int) -> None:
    if N < 2:
        raise RangeError("surgery magnitude N must be >= 2")
    g = genus_bound(C)
    if N < 2 * g:
        raise RangeError(f"hypothesis N >= 2g violated (N={N}, 2g={2 * g})")
    lo, hi = base_spinc_range(N)
    if not lo <= m <= hi:
        raise RangeError(
            f"m={m} outside base range [{lo}, {hi}]; use extend_spinc for translates"
        )


def refilter(C: BifilteredComplex, N: int, m: int) -> BifilteredComplex:
    """Apply F_m to every generator position; arrows are untouched.

    F_m commutes with the U-translation, so upow decorations stay meaningful;
    the output is a valid complex of width at most 2 whose shift tag gains the
    symbolic atom eps1(N, m).
    """
    _check_params(C, N, m)
    gens = []
    for g in C.gens.values():
        ni, nj = refilter_position(g.i, g.j, m)
        gens.append(Generator(g.gid, g.gr, ni, nj))
    out = BifilteredComplex(
        gens, C.diff, C.tag + ShiftTag.atom("eps1", N, m),
        label=f"mu[{C.label}; -{N}, m={m}]",
    )
    report = validate(out)
    if not report:
        raise ComplexError(f"refilter produced an invalid complex: {report.problems[:3]}")
    return out


def extend_spinc(C: BifilteredComplex, t: int) -> BifilteredComplex:
    """Translate a refiltered complex to the structure t full periods away.

    The j-filtration drops by t; the represented label moves from m to m + tN.
    """
    return shift(C, 0, -t, 0).with_label(f"{C.label}{{0,{-t}}}" if t else C.label)


def refilter_any(C: BifilteredComplex, N: int, label: int) -> BifilteredComplex:
    """Refilter at an arbitrary integer label via the base window plus extension."""
    lo, hi = base_spinc_range(N)
    t = 0
    m = label
    while m > hi:
        m -= N
        t += 1
    while m < lo:
        m += N
        t -= 1
    return extend_spinc(refilter(C, N, m), t)


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


def _min_essential_level(R: BifilteredComplex) -> tuple[int, int, int] | None:
    """Least (i, j) filtration level carrying an essential base-supported cycle.

    For each base grading, scans sublevel spans {base generators with i <= a,
    j <= b} in ascending (a, b) order and tests by linear algebra whether the
    sublevel contains a cycle not hit by the differential from above.  Returns
    (i_level, j_level, grading) minimal lexicographically, or None.
    """
    from .algebra import f2_kernel

    gens = R.generators()
    by_grade: dict[int, list[str]] = {}
    for g in gens:
        by_grade.setdefault(g.gr, []).append(g.gid)
    best: tuple[int, int, int] | None = None
    for gamma, members in sorted(by_grade.items()):
        lower = [g.gid for g in gens if (g.gr - (gamma - 1)) % 2 == 0]
        lower_idx = {gid: n for n, gid in enumerate(lower)}
        here = [g.gid for g in gens if (g.gr - gamma) % 2 == 0]
        here_idx = {gid: n for n, gid in enumerate(here)}
        bspan = F2Span()
        for g in gens:
            if (g.gr - (gamma + 1)) % 2 == 0:
                vec = 0
                for dst in R.diff.get(g.gid, {}):
                    vec ^= 1 << here_idx[dst]
                bspan.add(vec)

        def essential_within(a: int, b: int) -> bool:
            sub = [gid for gid in members
                   if R.gens[gid].i <= a and R.gens[gid].j <= b]
            if not sub:
                return False
            cols = []
            for gid in sub:
                vec = 0
                for dst in R.diff.get(gid, {}):
                    vec ^= 1 << lower_idx[dst]
                cols.append(vec)
            for combo in f2_kernel(cols):
                vec = 0
                for n in range(len(sub)):
                    if combo >> n & 1:
                        vec ^= 1 << here_idx[sub[n]]
                if not bspan.contains(vec):
                    return True
            return False

        ivals = sorted({R.gens[gid].i for gid in members})
        jvals = sorted({R.gens[gid].j for gid in members})
        hit = None
        for a in ivals:
            if best is not None and a > best[0]:
                break  # cannot beat the best level found so far
            for b in jvals:
                if essential_within(a, b):
                    hit = (a, b, gamma)
                    break
            if hit:
                break
        if hit and (best is None or hit < best):
            best = hit
    return best


def normalize(C: BifilteredComplex) -> BifilteredComplex:
    """Diagonal shift putting the minimal-filtration essential cycle at i = 0.

    Works on the reduced copy (filtration levels of homology classes are
    reduction-invariant) and applies the resulting (d, d) filtration shift,
    gradings untouched, to the input.  Deterministic: among essential cycles
    supported on base generators, the one with least (i, j) level wins.
    """
    if homology_rank(C) != 1:
        raise ComplexError("normalize needs a complex with homology rank 1")
    R = reduce_complex(C)
    level = _min_essential_level(R)
    if level is None:
        raise ComplexError("no essential cycle supported on base generators")
    ilevel = level[0]
    if ilevel == 0:
        return C
    return shift(C, -ilevel, -ilevel, 0)

"""Shared test utilities: random valid complexes and filtered basis changes."""

import random

from floerslice.algebra import (
    BifilteredComplex,
    Generator,
    direct_sum,
    dualize,
    shift,
    tensor,
    validate,
)
from floerslice.models import torus_model, unknot_model, whitehead_double_model


def random_acyclic_pair(rng: random.Random, tag_like=None) -> BifilteredComplex:
    """Two generators joined by one arrow; always acyclic and valid."""
    u = rng.randrange(0, 3)
    gr = rng.randrange(-6, 7)
    i = rng.randrange(-5, 6)
    j = rng.randrange(-5, 6)
    di = rng.randrange(0, 3)
    dj = rng.randrange(0, 3)
    a = Generator("a", gr, i, j)
    b = Generator("b", gr - 1 + 2 * u, i + u - di, j + u - dj)
    return BifilteredComplex([a, b], {"a": {"b": u}}, label="pair")


def random_basis_change(C: BifilteredComplex, rng: random.Random) -> BifilteredComplex:
    """One filtered change of basis y -> y + U^t x, when the levels allow it."""
    gens = C.generators()
    for _ in range(30):
        x = rng.choice(gens)
        y = rng.choice(gens)
        if x.gid == y.gid:
            continue
        if (x.gr - y.gr) % 2:
            continue
        t = (x.gr - y.gr) // 2
        if x.i - t > y.i or x.j - t > y.j:
            continue
        diff = {s: dict(r) for s, r in C.diff.items()}

        def toggle(src, dst, u):
            row = diff.setdefault(src, {})
            if row.get(dst) == u:
                del row[dst]
                if not row:
                    del diff[src]
            else:
                row[dst] = u

        for dst, u in list(C.diff.get(x.gid, {}).items()):
            toggle(y.gid, dst, u + t)
        for src, row in list(C.diff.items()):
            if y.gid in row and src != x.gid:
                toggle(src, x.gid, row[y.gid] + t)
        out = BifilteredComplex(C.gens.values(), diff, C.tag, C.label)
        if validate(out).ok:
            return out
    return C


def random_complex(rng: random.Random, max_pieces: int = 3) -> BifilteredComplex:
    """Random valid complex: shifted primitives, sums, tensors, basis changes."""
    primitives = [
        lambda: unknot_model(),
        lambda: torus_model(rng.randrange(1, 4)),
        lambda: dualize(torus_model(rng.randrange(1, 3))),
        lambda: whitehead_double_model(),
        lambda: random_acyclic_pair(rng),
    ]
    C = rng.choice(primitives)()
    for _ in range(rng.randrange(0, max_pieces)):
        move = rng.randrange(4)
        if move == 0:
            C = shift(C, rng.randrange(-3, 4), rng.randrange(-3, 4),
                      2 * rng.randrange(-2, 3))
        elif move == 1 and len(C) <= 20:
            C = tensor(C, rng.choice(primitives[:3])())
        elif move == 2:
            C = direct_sum(C, random_acyclic_pair(rng))
        else:
            C = random_basis_change(C, rng)
    for _ in range(rng.randrange(0, 4)):
        C = random_basis_change(C, rng)
    return C

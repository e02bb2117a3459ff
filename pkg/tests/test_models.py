"""Knot models, the expression grammar, and the staircase splitting."""

import pytest

from floerslice.algebra import (
    ComplexError,
    canonical_form,
    dualize,
    homology_rank,
    is_acyclic,
    slice_homology,
    validate,
    width,
)
from floerslice.models import (
    build_model,
    parse_expr,
    split_staircase,
    torus_model,
    unknot_model,
    whitehead_double_model,
)


def test_unknot_model():
    C = unknot_model()
    assert width(C) == 1
    assert homology_rank(C) == 1
    assert slice_homology(C, 0) == {0: 1}


def test_torus_model_positions():
    C = torus_model(1)
    pos = sorted((g.i, g.j) for g in C.generators())
    assert pos == [(0, 1), (1, 0), (1, 1)]


def test_torus_model_family():
    for k in range(1, 6):
        C = torus_model(k)
        assert len(C) == 2 * k + 1
        assert width(C) == 2 * k + 1
        assert homology_rank(C) == 1
        assert validate(C).ok


def test_whitehead_model_passes_validation():
    D = whitehead_double_model()
    assert validate(D).ok
    assert homology_rank(D) == 1
    assert width(D) == 3
    # already reduced: no same-level arrows
    from floerslice.algebra import reduce_complex

    assert canonical_form(reduce_complex(D)) == canonical_form(D)


# -- grammar ------------------------------------------------------------------

def test_parse_roundtrip():
    for text in ["U", "D", "T(2,5)", "m(D)", "D#D", "3*D", "m(2*D#U)"]:
        assert parse_expr(parse_expr(text).text()).text() == parse_expr(text).text()


def test_parse_rejects_garbage():
    for text in ["T(3,5)", "T(2,4)", "0*D", "K", "m(D", "D#"]:
        with pytest.raises(ComplexError):
            parse_expr(text)


def test_build_model_examples():
    C = build_model("D#m(D)")
    assert len(C) == 225
    assert homology_rank(C) == 1

    assert width(build_model("2*D")) <= 5

    assert canonical_form(build_model("m(T(2,5))")) == canonical_form(
        dualize(torus_model(2))
    )


def test_mirror_distributes_over_sum():
    a = build_model("m(D#T(2,3))")
    b = build_model("m(D)#m(T(2,3))")
    assert canonical_form(a) == canonical_form(b)


def test_mirror_involution_normalized():
    assert canonical_form(build_model("m(m(D))")) == canonical_form(build_model("D"))


def test_build_model_homology_rank_one():
    for text in ["U", "D", "T(2,7)", "m(D)", "2*T(2,3)", "D#U", "m(2*D)"]:
        assert homology_rank(build_model(text)) == 1


def test_repeat_width_bound():
    for k in (1, 2):
        assert width(build_model(f"{k}*D")) <= 2 * k + 1


# -- splitting ----------------------------------------------------------------

def test_split_staircase_base_case():
    stair, acyc = split_staircase(1)
    assert canonical_form(stair) == canonical_form(torus_model(1))
    assert len(acyc) == 0


def test_split_staircase_step_counts():
    stair, acyc = split_staircase(2)
    assert len(stair) == 5 and len(acyc) == 4
    stair, acyc = split_staircase(3)
    assert len(stair) == 7 and len(acyc) == 20


def test_split_staircase_family():
    for k in range(1, 6):
        stair, acyc = split_staircase(k)
        assert canonical_form(stair) == canonical_form(torus_model(k))
        assert is_acyclic(acyc)
        assert validate(stair).ok and validate(acyc).ok
        assert len(stair) + len(acyc) == 3 ** k

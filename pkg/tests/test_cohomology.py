import random

import pytest

from lieform import (DimensionTooLarge, DualNumbers, DynkinType,
                     IntegersModPk, LieAlgebra, Matrix, NotACocycle,
                     NotAutomorphism, NotPerfect, PrimeField, ZZ, ce_complex,
                     chevalley_involution, chevalley_presentation,
                     cohomology_dim, is_lie_automorphism, lift_automorphism,
                     solve_coboundary, square_zero_extension,
                     torus_automorphism, triple_flip)

F3 = PrimeField(3)
F5 = PrimeField(5)
F7 = PrimeField(7)
SL2 = chevalley_presentation(DynkinType("A", 1))
SL3 = chevalley_presentation(DynkinType("A", 2))


def test_complex_shapes_sl2():
    cx = ce_complex(SL2.to_lie_algebra(F5))
    assert (cx.cochain_dim(0), cx.cochain_dim(1), cx.cochain_dim(2),
            cx.cochain_dim(3)) == (3, 9, 9, 3)
    assert cx.d0.nrows == 9 and cx.d0.ncols == 3
    assert cx.d1.nrows == 9 and cx.d1.ncols == 9
    assert cx.d2.nrows == 3 and cx.d2.ncols == 9
    assert (cx.d1 @ cx.d0).is_zero()
    assert (cx.d2 @ cx.d1).is_zero()


@pytest.mark.parametrize("pres,p", [
    (SL2, 3), (SL2, 5), (SL2, 7), (SL3, 5), (SL3, 7)], ids=["sl2-3",
    "sl2-5", "sl2-7", "sl3-5", "sl3-7"])
def test_whitehead_vanishing(pres, p):
    cx = ce_complex(pres.to_lie_algebra(PrimeField(p)))
    assert cohomology_dim(cx, 0) == 0
    assert cohomology_dim(cx, 1) == 0
    assert cohomology_dim(cx, 2) == 0


def test_abelian_algebra_cohomology():
    ab = LieAlgebra(F5, 2, {}, check=False)
    cx = ce_complex(ab)
    assert cx.d0.is_zero() and cx.d1.is_zero() and cx.d2.is_zero()
    assert cohomology_dim(cx, 0) == 2
    assert cohomology_dim(cx, 1) == 4
    assert cohomology_dim(cx, 2) == 2


def test_degree_bound():
    cx = ce_complex(SL2.to_lie_algebra(F5))
    with pytest.raises(ValueError):
        cohomology_dim(cx, 3)


def test_dimension_guard():
    big = LieAlgebra(F5, 21, {}, check=False)
    with pytest.raises(DimensionTooLarge):
        ce_complex(big)


def test_field_required():
    with pytest.raises(Exception):
        ce_complex(SL2.to_lie_algebra(ZZ))


def test_solve_coboundary_roundtrip():
    g = SL2.to_lie_algebra(F7)
    cx = ce_complex(g)
    rng = random.Random(11)
    for _ in range(10):
        delta = Matrix.column(F7, [rng.randrange(7) for _ in range(9)])
        theta = cx.d1 @ delta
        found = solve_coboundary(cx, theta)
        assert found is not None
        assert (cx.d1 @ found) == theta


def test_solve_coboundary_zero_gives_zero():
    cx = ce_complex(SL2.to_lie_algebra(F5))
    out = solve_coboundary(cx, [0] * 9)
    assert out is not None and out.is_zero()


def test_solve_coboundary_rejects_non_cocycles():
    # abelian in degree 2: d2 = 0, so craft the failure on a twisted
    # complex where d2 is injective on a line
    g = SL3.to_lie_algebra(F5)
    cx = ce_complex(g)
    # find a 2-cochain outside ker d2
    n2 = cx.cochain_dim(2)
    bad = None
    for k in range(n2):
        col = Matrix.column(F5, [1 if i == k else 0 for i in range(n2)])
        if not (cx.d2 @ col).is_zero():
            bad = col
            break
    assert bad is not None
    with pytest.raises(NotACocycle):
        solve_coboundary(cx, bad)


def test_twisted_complex_composes_to_zero():
    g = SL2.to_lie_algebra(F5)
    s = torus_automorphism(SL2, F5, 2)
    cx = ce_complex(g, twist=s)
    assert (cx.d1 @ cx.d0).is_zero()
    assert (cx.d2 @ cx.d1).is_zero()
    # twisting by the identity is no twist at all
    cid = ce_complex(g, twist=Matrix.identity(F5, 3))
    plain = ce_complex(g)
    assert cid.d1 == plain.d1 and cid.d2 == plain.d2


def test_square_zero_extension_mod_p2():
    ext = square_zero_extension(IntegersModPk(5, 2))
    assert ext.quotient_ring == F5
    assert ext.reduce_raw(17) == 2
    assert ext.lift_raw(2) == 2
    assert ext.j_embed(3) == 15
    assert ext.j_extract(15) == 3
    assert ext.j_extract(ext.j_embed(4)) == 4


def test_square_zero_extension_dual_numbers():
    ext = square_zero_extension(DualNumbers(F5))
    assert ext.quotient_ring == F5
    assert ext.reduce_raw((2, 3)) == 2
    assert ext.lift_raw(2) == (2, 0)
    assert ext.j_embed(3) == (0, 3)
    assert ext.j_extract((0, 3)) == 3


def test_square_zero_extension_rejects_other_rings():
    with pytest.raises(Exception):
        square_zero_extension(IntegersModPk(5, 3))
    with pytest.raises(Exception):
        square_zero_extension(PrimeField(5))


def test_lift_torus_automorphism_frozen():
    g = SL2.to_lie_algebra(ZZ)
    ext = square_zero_extension(IntegersModPk(5, 2))
    sigma_bar = torus_automorphism(SL2, F5, 2)
    lifted = lift_automorphism(g, ext, sigma_bar)
    assert lifted.rows() == [[1, 0, 0], [0, 17, 0], [0, 0, 3]]
    # lift reduces to the input
    z25 = IntegersModPk(5, 2)
    red = [[ext.reduce_raw(v) for v in row] for row in lifted.rows()]
    assert red == sigma_bar.rows()
    g25 = SL2.to_lie_algebra(z25)
    assert is_lie_automorphism(g25, lifted)


def test_alternative_diagonal_lift_also_works():
    # the entrywise-minimal lift is one of several valid lifts of the
    # same reduction; diag(1, 2, 13) is another
    z25 = IntegersModPk(5, 2)
    g25 = SL2.to_lie_algebra(z25)
    other = Matrix.from_rows(z25, [[1, 0, 0], [0, 2, 0], [0, 0, 13]])
    assert is_lie_automorphism(g25, other)


def test_lift_over_dual_numbers():
    g = SL2.to_lie_algebra(ZZ)
    ext = square_zero_extension(DualNumbers(F5))
    sigma_bar = triple_flip(SL2, F5, (1,))
    lifted = lift_automorphism(g, ext, sigma_bar)
    dual = DualNumbers(F5)
    gd = SL2.to_lie_algebra(dual)
    assert is_lie_automorphism(gd, lifted)
    assert [[v[0] for v in row] for row in lifted.rows()] == sigma_bar.rows()


def test_lift_composite_automorphism_sl3():
    g = SL3.to_lie_algebra(ZZ)
    ext = square_zero_extension(IntegersModPk(5, 2))
    s = torus_automorphism(SL3, F5, 3) @ chevalley_involution(SL3, F5)
    lifted = lift_automorphism(g, ext, s)
    g25 = SL3.to_lie_algebra(IntegersModPk(5, 2))
    assert is_lie_automorphism(g25, lifted)
    red = [[ext.reduce_raw(v) for v in row] for row in lifted.rows()]
    assert red == s.rows()


def test_lift_rejects_non_automorphism():
    g = SL2.to_lie_algebra(ZZ)
    ext = square_zero_extension(IntegersModPk(5, 2))
    shear = Matrix.from_rows(F5, [[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(NotAutomorphism):
        lift_automorphism(g, ext, shear)


def test_lift_needs_perfect_killing_form():
    g = SL2.to_lie_algebra(ZZ)
    ext = square_zero_extension(IntegersModPk(2, 2))
    sigma_bar = Matrix.identity(PrimeField(2), 3)
    with pytest.raises(NotPerfect):
        lift_automorphism(g, ext, sigma_bar)

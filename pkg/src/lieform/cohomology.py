"""Lie algebra cohomology in adjoint-type coefficients, degrees 0 to 3,
and the square-zero lifting of automorphisms that it powers.

Cochain spaces are flattened: a 1-cochain f sits at index a*dim + i for
the coefficient of basis vector a in f(e_i); 2- and 3-cochains use the
lexicographic index of the argument pair or triple in the same way.  The
action on coefficients may be twisted through an endomorphism, which is
what the obstruction calculus for lifting needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Union

from .liealg import (LieAlgebra, NotPerfect, base_change, is_lie_automorphism,
                     is_perfect, killing_form)
from .matrices import Matrix, solve_linear
from .rings import PrimeField, RingSpec, UnsupportedRing


class DimensionTooLarge(Exception):
    pass


class NotACocycle(Exception):
    pass


class NotAutomorphism(Exception):
    pass


@dataclass(frozen=True)
class CochainComplex:
    algebra: LieAlgebra
    twist: Optional[Matrix]
    pairs: tuple
    triples: tuple
    d0: Matrix
    d1: Matrix
    d2: Matrix

    def cochain_dim(self, degree: int) -> int:
        n = self.algebra.dim
        return (n, n * n, n * len(self.pairs), n * len(self.triples))[degree]


def ce_complex(g: LieAlgebra, twist: Optional[Matrix] = None) -> CochainComplex:
    """Differentials d0, d1, d2 of the coefficient module g, the action of
    x being bracketing with twist(x).  Exact over the base field; the two
    compositions are checked to vanish on construction.
    """
    ring = g.ring
    if not ring.is_field:
        raise UnsupportedRing("cochain complexes need a field, got %r" % (ring,))
    n = g.dim
    if n > 20:
        raise DimensionTooLarge("dim %d exceeds the supported bound 20" % n)
    if twist is not None and (twist.nrows, twist.ncols) != (n, n):
        raise ValueError("twist must be a dim x dim matrix")

    pairs = tuple(combinations(range(n), 2))
    triples = tuple(combinations(range(n), 3))
    pidx = {pr: q for q, pr in enumerate(pairs)}
    np_, nt = len(pairs), len(triples)

    acts = []
    for i in range(n):
        v = twist.col(i) if twist is not None else g.basis_vector(i)
        acts.append(g.ad_matrix(v))
    bk = {pr: g.bracket_basis(*pr) for pr in pairs}

    d0 = Matrix.from_rows(ring, [[acts[i].raw(a, b) for b in range(n)]
                                 for a in range(n) for i in range(n)])

    d1_rows = [[0] * (n * n) for _ in range(n * np_)]
    for q, (i, j) in enumerate(pairs):
        ri, rj = acts[i], acts[j]
        for a in range(n):
            row = d1_rows[a * np_ + q]
            for b in range(n):
                row[b * n + j] += ri.raw(a, b)
                row[b * n + i] -= rj.raw(a, b)
            for k, c in bk[(i, j)]:
                row[a * n + k] -= c
    # from_rows cannot infer a width from an empty list (dim 1 has no pairs)
    d1 = (Matrix.from_rows(ring, d1_rows) if d1_rows
          else Matrix(ring, 0, n * n, ()))

    d2_rows = [[0] * (n * np_) for _ in range(n * nt)]
    for tq, (i, j, k) in enumerate(triples):
        ri, rj, rk = acts[i], acts[j], acts[k]
        qjk, qik, qij = pidx[(j, k)], pidx[(i, k)], pidx[(i, j)]
        for a in range(n):
            row = d2_rows[a * nt + tq]
            for b in range(n):
                row[b * np_ + qjk] += ri.raw(a, b)
                row[b * np_ + qik] -= rj.raw(a, b)
                row[b * np_ + qij] += rk.raw(a, b)
            for sign, pr, m in ((-1, (i, j), k), (1, (i, k), j), (-1, (j, k), i)):
                for l, c in bk[pr]:
                    if l == m:
                        continue
                    if l < m:
                        row[a * np_ + pidx[(l, m)]] += sign * c
                    else:
                        row[a * np_ + pidx[(m, l)]] -= sign * c
    d2 = (Matrix.from_rows(ring, d2_rows) if d2_rows
          else Matrix(ring, 0, n * np_, ()))

    assert (d1 @ d0).is_zero() and (d2 @ d1).is_zero()
    return CochainComplex(g, twist, pairs, triples, d0, d1, d2)


def cohomology_dim(cx: CochainComplex, degree: int) -> int:
    from .matrices import rank
    if degree == 0:
        return cx.cochain_dim(0) - rank(cx.d0)
    if degree == 1:
        return (cx.cochain_dim(1) - rank(cx.d1)) - rank(cx.d0)
    if degree == 2:
        return (cx.cochain_dim(2) - rank(cx.d2)) - rank(cx.d1)
    raise ValueError("degree must be 0, 1 or 2")


def _as_column(cx: CochainComplex, theta: Union[Matrix, Sequence], degree: int) -> Matrix:
    want = cx.cochain_dim(degree)
    if isinstance(theta, Matrix):
        if (theta.nrows, theta.ncols) != (want, 1):
            raise ValueError("expected a %d x 1 column" % want)
        return theta
    if len(theta) != want:
        raise ValueError("expected %d cochain coordinates" % want)
    return Matrix.column(cx.algebra.ring, list(theta))


def solve_coboundary(cx: CochainComplex, theta: Union[Matrix, Sequence]) -> Optional[Matrix]:
    """A 1-cochain delta with d1(delta) = theta, or None if none exists.

    Free coordinates pivot to zero, so the answer is deterministic; the
    zero cocycle always comes back as the zero cochain.
    """
    col = _as_column(cx, theta, 2)
    if not (cx.d2 @ col).is_zero():
        raise NotACocycle("d2 of the given 2-cochain is nonzero")
    return solve_linear(cx.d1, col)


# ---------------------------------------------------------------------------
# square-zero extensions and automorphism lifting

@dataclass(frozen=True)
class SquareZeroExtension:
    """A surjection of rings whose kernel J squares to zero, with a
    section on raw values and coordinates for J."""

    total_ring: RingSpec
    quotient_ring: RingSpec

    @property
    def _modsq(self) -> bool:
        return self.total_ring.kind == "integers_mod_pk"

    def reduce_raw(self, v):
        if self._modsq:
            return v % self.total_ring.p
        return v[0]

    def lift_raw(self, v):
        """Least non-negative representative section of the quotient."""
        if self._modsq:
            return v % (self.total_ring.p ** 2)
        return (v, self.quotient_ring.zero())

    def j_embed(self, u):
        if self._modsq:
            p = self.total_ring.p
            return (p * (u % p)) % (p * p)
        return (self.quotient_ring.zero(), u)

    def j_extract(self, v):
        if self._modsq:
            p = self.total_ring.p
            if v % p:
                raise ValueError("value not in the square-zero ideal")
            return (v // p) % p
        if not self.quotient_ring.is_zero(v[0]):
            raise ValueError("value not in the square-zero ideal")
        return v[1]


def square_zero_extension(total: RingSpec) -> SquareZeroExtension:
    if total.kind == "integers_mod_pk" and total.k == 2:
        return SquareZeroExtension(total, PrimeField(total.p))
    if total.kind == "dual_numbers":
        return SquareZeroExtension(total, total.base)
    raise UnsupportedRing(
        "square-zero extension needs Z/p^2 or dual numbers, got %r" % (total,))


def lift_automorphism(g: LieAlgebra, ext: SquareZeroExtension,
                      sigma_bar: Matrix) -> Matrix:
    """Lift an automorphism through the extension when the Killing form
    of the reduced algebra is perfect.

    The input algebra must live over the integers; it is reduced to both
    levels of the extension.  The defect of the naive entrywise lift is a
    2-cocycle for the action twisted by sigma_bar; its primitive corrects
    the lift, and the result is re-verified exactly over the total ring.
    """
    if g.ring.kind != "integers":
        raise UnsupportedRing("lifting starts from an integral table")
    gq = base_change(g, ext.quotient_ring)
    if sigma_bar.ring != ext.quotient_ring:
        raise NotAutomorphism("matrix is over %r, expected %r"
                              % (sigma_bar.ring, ext.quotient_ring))
    if not is_lie_automorphism(gq, sigma_bar):
        raise NotAutomorphism("the given matrix is not an automorphism "
                              "over the quotient field")
    if not is_perfect(killing_form(gq)):
        raise NotPerfect("Killing form is degenerate over the quotient; "
                         "the obstruction space need not vanish")

    gt = base_change(g, ext.total_ring)
    total, quot = ext.total_ring, ext.quotient_ring
    n = g.dim
    sigma0 = Matrix(total, n, n, tuple(ext.lift_raw(v) for v in sigma_bar.data))

    pairs = tuple(combinations(range(n), 2))
    np_ = len(pairs)
    theta = [quot.zero()] * (n * np_)
    for q, (i, j) in enumerate(pairs):
        w = gt.bracket_vectors(sigma0.col(i), sigma0.col(j))
        target = [total.zero()] * n
        for k, c in gt.bracket_basis(i, j):
            for a in range(n):
                target[a] = total.add(target[a], total.mul(sigma0.raw(a, k), c))
        for a in range(n):
            d = total.sub(w[a], target[a])
            # the naive lift is an automorphism modulo J by construction
            assert quot.is_zero(ext.reduce_raw(d))
            theta[a * np_ + q] = ext.j_extract(d)

    cx = ce_complex(gq, twist=sigma_bar)
    tcol = Matrix.column(quot, theta)
    assert (cx.d2 @ tcol).is_zero(), "lift defect failed the cocycle identity"
    delta = solve_linear(cx.d1, tcol)
    assert delta is not None, "no primitive despite a perfect Killing form"

    lifted = tuple(
        total.sub(sigma0.raw(a, b), ext.j_embed(delta.raw(a * n + b, 0)))
        for a in range(n) for b in range(n))
    sigma = Matrix(total, n, n, lifted)

    assert all(ext.reduce_raw(sigma.raw(a, b)) == sigma_bar.raw(a, b)
               for a in range(n) for b in range(n))
    if not is_lie_automorphism(gt, sigma):
        raise AssertionError("corrected lift failed exact verification")
    return sigma

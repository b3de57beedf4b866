"""Exact matrices over the coefficient rings, with deterministic elimination.

Pivot choice is always "first usable entry in column order, scanning rows
top to bottom", so identical inputs give bit-identical outputs.  Over a
prime field the elimination is carried out on int64 arrays for speed; the
values are still exact residues, never floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .rings import (
    NonIntegralDenominator,
    NotAUnit,
    QQ,
    RingMismatch,
    RingSpec,
    Scalar,
    UnsupportedRing,
    convert_raw,
    pvaluation,
)


class DimensionMismatch(Exception):
    pass


class Singular(Exception):
    pass


class NotASubspace(Exception):
    pass


# Largest prime modulus for which int64 elimination cannot overflow.
_NP_PRIME_LIMIT = 1 << 21


def _np_ok(ring: RingSpec) -> bool:
    return ring.kind == "prime_field" and ring.p < _NP_PRIME_LIMIT


@dataclass(frozen=True)
class Matrix:
    """Immutable row-major matrix of raw ring values."""

    ring: RingSpec
    nrows: int
    ncols: int
    data: tuple

    # -- construction ------------------------------------------------------
    @staticmethod
    def from_rows(ring: RingSpec, rows: Sequence[Sequence]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat = []
        for row in rows:
            if len(row) != ncols:
                raise DimensionMismatch("ragged rows")
            for v in row:
                if isinstance(v, Scalar):
                    if v.ring != ring:
                        raise RingMismatch("entry from %r in %r matrix" % (v.ring, ring))
                    flat.append(v.value)
                else:
                    flat.append(ring.coerce(v))
        return Matrix(ring, nrows, ncols, tuple(flat))

    @staticmethod
    def zeros(ring: RingSpec, nrows: int, ncols: int) -> "Matrix":
        z = ring.zero()
        return Matrix(ring, nrows, ncols, (z,) * (nrows * ncols))

    @staticmethod
    def identity(ring: RingSpec, n: int) -> "Matrix":
        z, o = ring.zero(), ring.one()
        flat = [z] * (n * n)
        for i in range(n):
            flat[i * n + i] = o
        return Matrix(ring, n, n, tuple(flat))

    @staticmethod
    def column(ring: RingSpec, entries: Sequence) -> "Matrix":
        return Matrix.from_rows(ring, [[v] for v in entries])

    # -- access ------------------------------------------------------------
    def raw(self, i: int, j: int):
        return self.data[i * self.ncols + j]

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return Scalar(self.ring, self.raw(i, j))

    def row(self, i: int) -> tuple:
        return self.data[i * self.ncols:(i + 1) * self.ncols]

    def col(self, j: int) -> tuple:
        return tuple(self.data[i * self.ncols + j] for i in range(self.nrows))

    def rows(self) -> list:
        return [list(self.row(i)) for i in range(self.nrows)]

    # -- arithmetic --------------------------------------------------------
    def _same_shape(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise RingMismatch("%r vs %r" % (self.ring, other.ring))
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("%dx%d vs %dx%d" % (
                self.nrows, self.ncols, other.nrows, other.ncols))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        add = self.ring.add
        return Matrix(self.ring, self.nrows, self.ncols,
                      tuple(add(a, b) for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        sub = self.ring.sub
        return Matrix(self.ring, self.nrows, self.ncols,
                      tuple(sub(a, b) for a, b in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(self.ring, self.nrows, self.ncols,
                      tuple(neg(a) for a in self.data))

    def scale(self, c) -> "Matrix":
        c = c.value if isinstance(c, Scalar) else self.ring.coerce(c)
        mul = self.ring.mul
        return Matrix(self.ring, self.nrows, self.ncols,
                      tuple(mul(c, a) for a in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise RingMismatch("%r vs %r" % (self.ring, other.ring))
        if self.ncols != other.nrows:
            raise DimensionMismatch("%dx%d @ %dx%d" % (
                self.nrows, self.ncols, other.nrows, other.ncols))
        ring = self.ring
        if _np_ok(ring):
            a = self.to_numpy()
            b = other.to_numpy()
            return Matrix.from_numpy(ring, (a @ b) % ring.p)
        add, mul, zero = ring.add, ring.mul, ring.zero()
        n, m, k = self.nrows, other.ncols, self.ncols
        out = []
        for i in range(n):
            ri = self.row(i)
            for j in range(m):
                acc = zero
                for l in range(k):
                    v = ri[l]
                    w = other.raw(l, j)
                    if v != zero and w != zero:
                        acc = add(acc, mul(v, w))
                out.append(acc)
        return Matrix(ring, n, m, tuple(out))

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.ncols, self.nrows,
                      tuple(self.raw(i, j)
                            for j in range(self.ncols)
                            for i in range(self.nrows)))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows or self.ring != other.ring:
            raise DimensionMismatch("hstack shape mismatch")
        rows = [list(self.row(i)) + list(other.row(i)) for i in range(self.nrows)]
        return Matrix(self.ring, self.nrows, self.ncols + other.ncols,
                      tuple(v for row in rows for v in row))

    def submatrix_cols(self, cols: Iterable[int]) -> "Matrix":
        cols = list(cols)
        return Matrix(self.ring, self.nrows, len(cols),
                      tuple(self.raw(i, j) for i in range(self.nrows) for j in cols))

    def is_zero(self) -> bool:
        z = self.ring.zero()
        return all(v == z for v in self.data)

    # -- conversions -------------------------------------------------------
    def map_to_ring(self, dst: RingSpec) -> "Matrix":
        src = self.ring
        return Matrix(dst, self.nrows, self.ncols,
                      tuple(convert_raw(v, src, dst) for v in self.data))

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows(), dtype=np.int64).reshape(self.nrows, self.ncols)

    @staticmethod
    def from_numpy(ring: RingSpec, arr: np.ndarray) -> "Matrix":
        return Matrix(ring, arr.shape[0], arr.shape[1],
                      tuple(int(v) for v in arr.reshape(-1)))

    def __str__(self) -> str:
        fmt = self.ring.fmt
        return "\n".join(" ".join(fmt(v) for v in self.row(i))
                         for i in range(self.nrows))


# ---------------------------------------------------------------------------
# elimination over a prime field (int64 arrays, exact residues)
# ---------------------------------------------------------------------------

def _modp_echelon(a: np.ndarray, p: int, reduce_up: bool) -> tuple[np.ndarray, list[int]]:
    a = a % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        rows = np.nonzero(a[r:, c])[0]
        if rows.size == 0:
            continue
        pr = r + int(rows[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        below = np.nonzero(a[r + 1:, c])[0]
        if below.size:
            idx = below + r + 1
            a[idx] = (a[idx] - np.outer(a[idx, c], a[r])) % p
        if reduce_up and r > 0:
            above = np.nonzero(a[:r, c])[0]
            if above.size:
                a[above] = (a[above] - np.outer(a[above, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _generic_echelon(m: Matrix, reduce_up: bool) -> tuple[list[list], list[int]]:
    """Row echelon over a field or local ring; unit pivots, first-hit order."""
    ring = m.ring
    rows = m.rows()
    nrows, ncols = m.nrows, m.ncols
    usable = ring.is_unit if not ring.is_field else (lambda v: not ring.is_zero(v))
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if usable(rows[i][c])), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = [ring.mul(inv, v) for v in rows[r]]
        targets = range(nrows) if reduce_up else range(r + 1, nrows)
        for i in targets:
            if i != r and not ring.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [ring.sub(v, ring.mul(f, w))
                           for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(m: Matrix) -> int:
    """Rank over a field-kind ring."""
    ring = m.ring
    if not ring.is_field:
        raise UnsupportedRing("rank needs a field-kind ring, got %r" % (ring,))
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if _np_ok(ring):
        _, pivots = _modp_echelon(m.to_numpy(), ring.p, reduce_up=False)
        return len(pivots)
    _, pivots = _generic_echelon(m, reduce_up=False)
    return len(pivots)


def solve_linear(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """One exact solution of a x = b, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.  Over a
    local ring only unit pivots are used, which is complete whenever the
    column space is spanned with unit-pivot echelon form (always true for
    invertible systems).
    """
    ring = a.ring
    if ring != b.ring:
        raise RingMismatch("%r vs %r" % (ring, b.ring))
    if a.nrows != b.nrows:
        raise DimensionMismatch("lhs has %d rows, rhs %d" % (a.nrows, b.nrows))
    if not (ring.is_field or ring.is_local):
        raise UnsupportedRing("solve needs a field-kind or local ring")
    aug = a.hstack(b)
    if _np_ok(ring):
        ech, pivots = _modp_echelon(aug.to_numpy(), ring.p, reduce_up=True)
        pivots = [c for c in pivots if c < a.ncols]
        # consistency: no pivot may fall in the rhs block
        r = len(pivots)
        if np.any(ech[r:, a.ncols:]):
            return None
        out = np.zeros((a.ncols, b.ncols), dtype=np.int64)
        for i, c in enumerate(pivots):
            out[c] = ech[i, a.ncols:]
        return Matrix.from_numpy(ring, out)
    rows, pivots = _generic_echelon(aug, reduce_up=True)
    pivots_lhs = [c for c in pivots if c < a.ncols]
    r = len(pivots_lhs)
    z = ring.zero()
    for i in range(r, aug.nrows):
        if any(v != z for v in rows[i]):
            return None
    out = [[z] * b.ncols for _ in range(a.ncols)]
    for i, c in enumerate(pivots_lhs):
        out[c] = list(rows[i][a.ncols:])
    return Matrix.from_rows(ring, out)


def kernel(m: Matrix) -> Matrix:
    """Basis of the right null space over a field, as matrix columns.

    One column per free variable, ordered by free column index, with a 1
    in the free position; deterministic.
    """
    ring = m.ring
    if not ring.is_field:
        raise UnsupportedRing("kernel needs a field-kind ring")
    n = m.ncols
    if _np_ok(ring):
        ech, pivots = _modp_echelon(m.to_numpy(), ring.p, reduce_up=True)
        free = [c for c in range(n) if c not in pivots]
        out = np.zeros((n, len(free)), dtype=np.int64)
        p = ring.p
        for jidx, c in enumerate(free):
            out[c, jidx] = 1
            for i, pc in enumerate(pivots):
                out[pc, jidx] = (-int(ech[i, c])) % p
        return Matrix.from_numpy(ring, out)
    rows, pivots = _generic_echelon(m, reduce_up=True)
    free = [c for c in range(n) if c not in pivots]
    z, o = ring.zero(), ring.one()
    cols = []
    for c in free:
        v = [z] * n
        v[c] = o
        for i, pc in enumerate(pivots):
            v[pc] = ring.neg(rows[i][c])
        cols.append(v)
    return Matrix.from_rows(ring, [[cols[j][i] for j in range(len(free))]
                                   for i in range(n)]) if free else Matrix.zeros(ring, n, 0)


def inverse(m: Matrix) -> Matrix:
    """Exact inverse over a field or local ring (unit-pivot Gauss-Jordan)."""
    if m.nrows != m.ncols:
        raise DimensionMismatch("inverse of a %dx%d matrix" % (m.nrows, m.ncols))
    sol = solve_linear(m, Matrix.identity(m.ring, m.nrows))
    if sol is None:
        raise Singular("matrix is not invertible")
    # unit-pivot elimination can silently drop rank over a local ring
    if len(_pivots_of(m)) < m.nrows:
        raise Singular("matrix is not invertible")
    return sol


def _pivots_of(m: Matrix) -> list[int]:
    if _np_ok(m.ring):
        _, pivots = _modp_echelon(m.to_numpy(), m.ring.p, reduce_up=False)
        return pivots
    _, pivots = _generic_echelon(m, reduce_up=False)
    return pivots


def _bareiss_det_int(rows: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(m: Matrix):
    """Exact determinant as a raw ring value."""
    if m.nrows != m.ncols:
        raise DimensionMismatch("determinant of a %dx%d matrix" % (m.nrows, m.ncols))
    ring = m.ring
    n = m.nrows
    kind = ring.kind
    if kind == "integers":
        return _bareiss_det_int(m.rows())
    if kind in ("rationals", "localized_at_p"):
        rows = m.rows()
        scale = Fraction(1)
        int_rows = []
        for row in rows:
            l = 1
            for v in row:
                l = l * v.denominator // math.gcd(l, v.denominator)
            scale *= l
            int_rows.append([int(v * l) for v in row])
        return Fraction(_bareiss_det_int(int_rows)) / scale
    if kind == "integers_mod_pk":
        return _bareiss_det_int(m.rows()) % ring.modulus
    if kind == "prime_field":
        return _bareiss_det_int(m.rows()) % ring.p
    if kind == "dual_numbers":
        # det(A + eps B) = det(A) + eps * sum_i det(A with row i replaced by B row i)
        base = ring.base
        arows = [[v[0] for v in m.row(i)] for i in range(n)]
        brows = [[v[1] for v in m.row(i)] for i in range(n)]
        a_m = Matrix.from_rows(base, arows)
        d0 = det(a_m)
        d1 = base.zero()
        for i in range(n):
            mixed = [list(brows[r]) if r == i else list(arows[r]) for r in range(n)]
            d1 = base.add(d1, det(Matrix.from_rows(base, mixed)))
        return (d0, d1)
    raise UnsupportedRing("determinant over %r" % (ring,))


# ---------------------------------------------------------------------------
# lattice saturation at p
# ---------------------------------------------------------------------------

def _rref_rational_rows(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    m = Matrix.from_rows(QQ, rows)
    ech, pivots = _generic_echelon(m, reduce_up=True)
    return [ech[i] for i in range(len(pivots))]


def saturate(lattice_basis: Matrix, subspace_basis: Matrix, p: int) -> Matrix:
    """Basis of {v in lattice : v in span of subspace} as a Z_(p)-module.

    Both inputs are rational matrices whose columns are the generating
    vectors; the result is a rational matrix whose columns generate the
    saturation.  Raises NotASubspace when the subspace does not sit inside
    the column span of the lattice.
    """
    if lattice_basis.ring != QQ or subspace_basis.ring != QQ:
        raise UnsupportedRing("saturation works on rational matrices")
    if lattice_basis.nrows != subspace_basis.nrows:
        raise DimensionMismatch("ambient dimensions differ")
    n = lattice_basis.ncols
    coords = solve_linear(lattice_basis, subspace_basis)
    if coords is None:
        raise NotASubspace("subspace is not inside the lattice span")
    if (lattice_basis @ coords) != subspace_basis:
        raise NotASubspace("subspace is not inside the lattice span")
    # subspace basis in lattice coordinates, one generator per row
    rows = _rref_rational_rows(coords.transpose().rows())
    if not rows:
        return Matrix.zeros(QQ, lattice_basis.nrows, 0)

    def normalize(row: list[Fraction]) -> list[Fraction]:
        v = min(pvaluation(x, p) for x in row if x != 0)
        f = Fraction(p) ** (-v)
        return [x * f for x in row]

    rows = [normalize(r) for r in rows]
    # repeatedly divide p out of dependent combinations until the rows are
    # independent mod p; each step enlarges the span inside the saturation
    while True:
        red = Matrix.from_rows(PrimeFieldCache.get(p),
                               [[_fp_residue(x, p) for x in r] for r in rows])
        if rank(red) == len(rows):
            break
        c = kernel(red).col(0)
        w = [Fraction(0)] * n
        idx = None
        for i, ci in enumerate(c):
            if ci:
                idx = i if idx is None else idx
                for j in range(n):
                    w[j] += ci * rows[i][j]
        rows[idx] = normalize([x / p for x in w])
    basis_cols = Matrix.from_rows(QQ, rows).transpose()
    return lattice_basis @ basis_cols


class PrimeFieldCache:
    _cache: dict = {}

    @classmethod
    def get(cls, p: int):
        from .rings import PrimeField
        if p not in cls._cache:
            cls._cache[p] = PrimeField(p)
        return cls._cache[p]


def _fp_residue(q: Fraction, p: int) -> int:
    if q.denominator % p == 0:
        raise NonIntegralDenominator("%s has p in the denominator" % (q,))
    return (q.numerator * pow(q.denominator, -1, p)) % p

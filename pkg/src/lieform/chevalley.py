"""Chevalley integral bases: structure constants and classical realizations.

Basis order is [H_1..H_rank] followed by X_alpha over all roots, positives
first, each block in canonical root order.  Signs are pinned by the
extraspecial-pair convention: for each non-simple positive root gamma the
special pair (alpha, beta), alpha + beta = gamma with alpha minimal, gets
N = +(p+1) where p is the length of the alpha-string through beta; every
other constant follows from antisymmetry, the negation rule
N(-a,-b) = -N(a,b), the norm-ratio rotation rule for zero-sum triples, and
one Jacobi identity per remaining special pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .matrices import Matrix
from .rings import RingSpec, Scalar, ZZ
from .roots import DynkinType, InvalidRank, RootSystem, build_root_system


class NotClassical(Exception):
    pass


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vneg(a):
    return tuple(-x for x in a)


@dataclass
class ChevalleyPresentation:
    dynkin: DynkinType
    root_system: RootSystem
    dim: int
    labels: tuple
    table: dict = field(repr=False)        # (i,j) i<j -> tuple of (k, int)
    nconstants: dict = field(repr=False)   # (alpha, beta) -> int, both roots

    @property
    def rank(self) -> int:
        return self.dynkin.rank

    def root_basis_index(self, coords: tuple) -> int:
        return self.rank + self.root_system.root_index(coords)

    def bracket(self, i: int, j: int) -> tuple:
        """[b_i, b_j] as ((k, coefficient), ...) over Integers."""
        if i == j:
            return ()
        if i < j:
            return self.table.get((i, j), ())
        return tuple((k, -c) for k, c in self.table.get((j, i), ()))

    def ad_sparse(self) -> list:
        """ad(b_i) for every i, as int64 csr matrices."""
        cols = [[] for _ in range(self.dim)]  # per i: list of (row, col, val)
        for (i, j), terms in self.table.items():
            for k, c in terms:
                cols[i].append((k, j, c))
                cols[j].append((k, i, -c))
        out = []
        for entries in cols:
            if entries:
                r, c, v = zip(*entries)
            else:
                r = c = v = ()
            out.append(sp.csr_matrix(
                (np.array(v, dtype=np.int64), (np.array(r), np.array(c))),
                shape=(self.dim, self.dim)))
        return out

    def to_lie_algebra(self, ring: RingSpec):
        from .liealg import LieAlgebra
        table = {}
        for key, terms in self.table.items():
            mapped = tuple((k, ring.coerce(c)) for k, c in terms
                           if not ring.is_zero(ring.coerce(c)))
            if mapped:
                table[key] = mapped
        return LieAlgebra(ring, self.dim, table, dynkin=self.dynkin)


def _special_pairs(rs: RootSystem):
    """Per non-simple positive root: pairs (a, b), a+b = root, a before b."""
    pos = rs.positive_roots
    idx = {r: i for i, r in enumerate(pos)}
    out = {}
    for g in pos:
        if sum(g) == 1:
            continue
        pairs = []
        for i, a in enumerate(pos):
            b = tuple(x - y for x, y in zip(g, a))
            j = idx.get(b)
            if j is not None and j > i:
                pairs.append((a, b))
        out[g] = pairs  # already sorted by index of a
    return out


@lru_cache(maxsize=None)
def chevalley_presentation(t: DynkinType) -> ChevalleyPresentation:
    if t.rank > 8:
        raise InvalidRank("structure constants capped at rank 8, got %s" % (t,))
    rs = build_root_system(t)
    pos = rs.positive_roots
    specials = _special_pairs(rs)
    n_table: dict = {}

    def set_orbit(a, b, val):
        g = _vadd(a, b)
        na, nb, ng = _vneg(a), _vneg(b), _vneg(g)
        qa = Fraction(rs.norm2(a))
        qb = Fraction(rs.norm2(b))
        qg = Fraction(rs.norm2(g))
        ra = val * qa / qg
        rb = val * qb / qg
        for key, v in (
            ((a, b), val), ((b, a), -val),
            ((na, nb), -val), ((nb, na), val),
            ((b, ng), ra), ((ng, b), -ra),
            ((g, nb), ra), ((nb, g), -ra),
            ((ng, a), rb), ((a, ng), -rb),
            ((g, na), -rb), ((na, g), rb),
        ):
            frac = Fraction(v)
            assert frac.denominator == 1, (t, key, v)
            assert key not in n_table
            n_table[key] = int(frac)

    for g in pos:  # canonical order is height-increasing
        pairs = specials.get(g)
        if not pairs:
            continue
        a0, b0 = pairs[0]  # extraspecial
        set_orbit(a0, b0, rs.string_p(a0, b0) + 1)
        na0 = _vneg(a0)
        for xi, eta in pairs[1:]:
            # Jacobi on (X_{-a0}, X_xi, X_eta); every term lands in the
            # root space of b0 and every referenced constant is already known
            acc = 0
            d1 = tuple(x - y for x, y in zip(xi, a0))
            if rs.is_root(d1):
                acc += n_table[(na0, xi)] * n_table[(d1, eta)]
            d2 = tuple(x - y for x, y in zip(eta, a0))
            if rs.is_root(d2):
                acc += n_table[(eta, na0)] * n_table[(d2, xi)]
            val = Fraction(-acc, n_table[(g, na0)])
            set_orbit(xi, eta, val)

    # every constant must exhibit the root-string magnitude
    for (a, b), v in n_table.items():
        assert abs(v) == rs.string_p(a, b) + 1, (t, a, b, v)
        assert n_table[(b, a)] == -v
        assert n_table[(_vneg(a), _vneg(b))] == -v
    for a in rs.roots:
        for b in rs.roots:
            if rs.is_root(_vadd(a, b)):
                assert (a, b) in n_table

    # assemble the full bracket table
    rank = t.rank
    dim = rank + len(rs.roots)
    table: dict = {}
    for i in range(rank):
        for k, rho in enumerate(rs.roots):
            c = rs.pairing(rho, i)
            if c:
                table[(i, rank + k)] = ((rank + k, c),)
    nroots = len(rs.roots)
    npos = nroots // 2
    for k1 in range(nroots):
        rho = rs.roots[k1]
        for k2 in range(k1 + 1, nroots):
            sig = rs.roots[k2]
            s = _vadd(rho, sig)
            if all(v == 0 for v in s):
                # k1 indexes the positive root of the pair
                cor = rs.coroot_coords(rho)
                terms = tuple((m, cor[m]) for m in range(rank) if cor[m])
                table[(rank + k1, rank + k2)] = terms
            elif rs.is_root(s):
                table[(rank + k1, rank + k2)] = (
                    (rank + rs.root_index(s), n_table[(rho, sig)]),)
    labels = tuple("H%d" % (i + 1) for i in range(rank)) + tuple(
        "X[%s]" % ",".join(str(c) for c in rho) for rho in rs.roots)
    pres = ChevalleyPresentation(t, rs, dim, labels, table, n_table)
    verify_jacobi(pres)
    return pres


def verify_jacobi(pres: ChevalleyPresentation, mode="auto", seed: int = 0) -> int:
    """Check ad([b_i,b_j]) = [ad b_i, ad b_j]; returns pairs verified.

    One pair (i, j) certifies the Jacobi identity for all dim triples
    (i, j, k), so "full" mode is the complete triple loop.  "generators"
    checks the simple root vectors against the whole basis, which is
    still a complete proof: the set V of elements v with
    ad([v,w]) = [ad v, ad w] for all w is a submodule, saturated (the
    defect is linear in v over a torsion-free ring), and closed under
    bracket (expand [[ad y, ad z], ad w] by the operator Jacobi identity;
    every term reduces to ad of the defect of (y, z), which is zero for
    y, z in V).  V contains the simple root vectors, whose iterated
    brackets span a finite-index subalgebra, hence V is everything.
    An integer mode checks that many seeded random pairs.  "auto" is
    full at rank <= 4 and generators plus 200 seeded pairs above.
    """
    dim, rank = pres.dim, pres.rank
    ads = pres.ad_sparse()
    rs = pres.root_system
    if mode == "auto":
        mode = "full" if rank <= 4 else "generators"
    if mode == "full":
        pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    elif mode == "generators":
        gens = []
        for i in range(rank):
            simple = tuple(1 if j == i else 0 for j in range(rank))
            gens.append(pres.root_basis_index(simple))
            gens.append(pres.root_basis_index(_vneg(simple)))
        pairs = sorted({(min(g, j), max(g, j))
                        for g in gens for j in range(dim) if j != g})
        rng = random.Random(seed)
        extra = {tuple(sorted(rng.sample(range(dim), 2))) for _ in range(200)}
        pairs = sorted(set(pairs) | extra)
    else:
        rng = random.Random(seed)
        pairs = sorted({tuple(sorted(rng.sample(range(dim), 2)))
                        for _ in range(int(mode))})
    for i, j in pairs:
        diff = ads[i] @ ads[j] - ads[j] @ ads[i]
        for k, c in pres.bracket(i, j):
            diff = diff - c * ads[k]
        if diff.nnz:
            raise AssertionError("Jacobi fails at pair (%d, %d)" % (i, j))
    return len(pairs)


# ---------------------------------------------------------------------------
# classical matrix realizations
# ---------------------------------------------------------------------------

def _dmul(x: dict, y: dict, yrows=None) -> dict:
    if yrows is None:
        yrows = {}
        for (r, c), v in y.items():
            yrows.setdefault(r, []).append((c, v))
    out: dict = {}
    for (r, c), v in x.items():
        for c2, v2 in yrows.get(c, ()):
            k = (r, c2)
            nv = out.get(k, 0) + v * v2
            if nv:
                out[k] = nv
            elif k in out:
                del out[k]
    return out


def _dcomm(x: dict, y: dict) -> dict:
    out = dict(_dmul(x, y))
    for k, v in _dmul(y, x).items():
        nv = out.get(k, 0) - v
        if nv:
            out[k] = nv
        elif k in out:
            del out[k]
    return out


def _dsub(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        nv = out.get(k, 0) - v
        if nv:
            out[k] = nv
        elif k in out:
            del out[k]
    return out


def _dscale(x: dict, c: int) -> dict:
    return {k: c * v for k, v in x.items()} if c else {}


def _simple_triples(t: DynkinType):
    """(x_i, y_i, h_i) dict-matrices for each node, plus the module rank."""
    n = t.rank
    s = t.series
    if s == "A":
        m = n + 1
        trip = [({(i, i + 1): 1}, {(i + 1, i): 1},
                 {(i, i): 1, (i + 1, i + 1): -1}) for i in range(n)]
    elif s == "B":
        # so(2n+1) for x_0^2 + x_1 x_{n+1} + ... + x_n x_{2n}
        m = 2 * n + 1
        trip = []
        for i in range(1, n):
            trip.append((
                {(i, i + 1): 1, (n + i + 1, n + i): -1},
                {(i + 1, i): 1, (n + i, n + i + 1): -1},
                {(i, i): 1, (i + 1, i + 1): -1,
                 (n + i, n + i): -1, (n + i + 1, n + i + 1): 1}))
        trip.append((
            {(n, 0): 2, (0, 2 * n): -1},
            {(0, n): 1, (2 * n, 0): -2},
            {(n, n): 2, (2 * n, 2 * n): -2}))
    elif s == "C":
        m = 2 * n
        trip = []
        for i in range(n - 1):
            trip.append((
                {(i, i + 1): 1, (n + i + 1, n + i): -1},
                {(i + 1, i): 1, (n + i, n + i + 1): -1},
                {(i, i): 1, (i + 1, i + 1): -1,
                 (n + i, n + i): -1, (n + i + 1, n + i + 1): 1}))
        trip.append((
            {(n - 1, 2 * n - 1): 1},
            {(2 * n - 1, n - 1): 1},
            {(n - 1, n - 1): 1, (2 * n - 1, 2 * n - 1): -1}))
    elif s == "D":
        m = 2 * n
        trip = []
        for i in range(n - 1):
            trip.append((
                {(i, i + 1): 1, (n + i + 1, n + i): -1},
                {(i + 1, i): 1, (n + i, n + i + 1): -1},
                {(i, i): 1, (i + 1, i + 1): -1,
                 (n + i, n + i): -1, (n + i + 1, n + i + 1): 1}))
        trip.append((
            {(n - 2, 2 * n - 1): 1, (n - 1, 2 * n - 2): -1},
            {(2 * n - 1, n - 2): 1, (2 * n - 2, n - 1): -1},
            {(n - 2, n - 2): 1, (n - 1, n - 1): 1,
             (2 * n - 2, 2 * n - 2): -1, (2 * n - 1, 2 * n - 1): -1}))
    else:
        raise NotClassical("no defining realization for series %s" % s)
    return trip, m


@dataclass
class MatrixRealization:
    presentation: ChevalleyPresentation
    module_rank: int
    matrices: tuple  # Matrix over Integers, one per basis label

    @property
    def ring(self) -> RingSpec:
        return ZZ

    def stack_numpy(self) -> np.ndarray:
        return np.array([m.rows() for m in self.matrices], dtype=np.int64)


@lru_cache(maxsize=None)
def matrix_realization(t: DynkinType) -> MatrixRealization:
    if t.series not in "ABCD":
        raise NotClassical("no defining realization for series %s" % t.series)
    pres = chevalley_presentation(t)
    rs = pres.root_system
    trip, m = _simple_triples(t)
    rank = t.rank
    nroots = len(rs.roots)
    imgs = [None] * nroots
    for i, (x, y, _) in enumerate(trip):
        simple = tuple(1 if j == i else 0 for j in range(rank))
        imgs[rs.root_index(simple)] = x
        imgs[rs.root_index(_vneg(simple))] = y
    specials = _special_pairs(rs)
    for g in rs.positive_roots:
        pairs = specials.get(g)
        if not pairs:
            continue
        a, b = pairs[0]
        nval = pres.nconstants[(a, b)]
        prod = _dcomm(imgs[rs.root_index(a)], imgs[rs.root_index(b)])
        assert all(v % nval == 0 for v in prod.values()), (t, g)
        imgs[rs.root_index(g)] = {k: v // nval for k, v in prod.items()}
        nprod = _dcomm(imgs[rs.root_index(_vneg(a))],
                       imgs[rs.root_index(_vneg(b))])
        assert all(v % nval == 0 for v in nprod.values()), (t, g)
        imgs[rs.root_index(_vneg(g))] = {k: -v // nval for k, v in nprod.items()}
    mats = [trip[i][2] for i in range(rank)] + imgs
    # full bracket-compatibility check against the abstract constants
    for i in range(pres.dim):
        for j in range(i + 1, pres.dim):
            expect: dict = {}
            for k, c in pres.bracket(i, j):
                expect = _dsub(expect, _dscale(mats[k], -c))
            if _dsub(_dcomm(mats[i], mats[j]), expect):
                raise AssertionError("realization bracket mismatch at (%d,%d)"
                                     % (i, j))

    def to_matrix(d: dict) -> Matrix:
        rows = [[0] * m for _ in range(m)]
        for (r, c), v in d.items():
            rows[r][c] = v
        return Matrix.from_rows(ZZ, rows)

    return MatrixRealization(pres, m, tuple(to_matrix(d) for d in mats))


# ---------------------------------------------------------------------------
# automorphism builders
# ---------------------------------------------------------------------------

def chevalley_involution(pres: ChevalleyPresentation, ring: RingSpec) -> Matrix:
    """H_i -> -H_i, X_a -> -X_{-a}; an automorphism of any Chevalley form."""
    rank, dim = pres.rank, pres.dim
    rows = [[ring.zero()] * dim for _ in range(dim)]
    mone = ring.coerce(-1)
    for i in range(rank):
        rows[i][i] = mone
    for k, rho in enumerate(pres.root_system.roots):
        rows[pres.root_basis_index(_vneg(rho))][rank + k] = mone
    return Matrix.from_rows(ring, rows)


def torus_automorphism(pres: ChevalleyPresentation, ring: RingSpec, tval,
                       lam=None) -> Matrix:
    """H_i -> H_i, X_b -> t^(lam . coords(b)) X_b for a unit t."""
    tval = tval.value if isinstance(tval, Scalar) else ring.coerce(tval)
    if not ring.is_unit(tval):
        raise ValueError("torus parameter must be a unit")
    rank, dim = pres.rank, pres.dim
    if lam is None:
        lam = (1,) * rank
    tinv = ring.inv(tval)
    rows = [[ring.zero()] * dim for _ in range(dim)]
    for i in range(rank):
        rows[i][i] = ring.one()
    for k, rho in enumerate(pres.root_system.roots):
        e = sum(l * c for l, c in zip(lam, rho))
        base, e = (tval, e) if e >= 0 else (tinv, -e)
        v = ring.one()
        for _ in range(e):
            v = ring.mul(v, base)
        rows[rank + k][rank + k] = v
    return Matrix.from_rows(ring, rows)


def triple_flip(pres: ChevalleyPresentation, ring: RingSpec,
                alpha: tuple) -> Matrix:
    """An automorphism sending (H_alpha, X_alpha, X_{-alpha}) to
    (-H_alpha, X_{-alpha}, X_alpha).

    Composition of the involution with the sign character that is odd on
    alpha: X_b -> -(-1)^(lam . b) X_{-b}.
    """
    odd = next((i for i, c in enumerate(alpha) if c % 2), None)
    assert odd is not None, "root has no odd coordinate"
    rank, dim = pres.rank, pres.dim
    rows = [[ring.zero()] * dim for _ in range(dim)]
    mone = ring.coerce(-1)
    one = ring.one()
    for i in range(rank):
        rows[i][i] = mone
    for k, rho in enumerate(pres.root_system.roots):
        sign = one if rho[odd] % 2 else mone
        rows[pres.root_basis_index(_vneg(rho))][rank + k] = sign
    return Matrix.from_rows(ring, rows)

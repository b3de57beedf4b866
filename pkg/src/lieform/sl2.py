"""Weight modules over the p-local integers.

A WeightedModule is a full lattice in a rational ambient space together
with a direct-sum grading of the ambient space by integer weights, and
optionally matrices h, x, y satisfying the sl2 relations that realize
the grading.  The central algorithm extends the grading to the lattice
itself: it produces projectors with p-local entries decomposing the
lattice, or a certified witness vector showing no such decomposition
exists.  Also here: the graded chain modules generated by a highest
weight vector, the rank-(p+1) lattice on which the decomposition fails,
and the degree-truncated exponential of a nilpotent operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional

from .matrices import Matrix, inverse, rank, saturate, solve_linear
from .rings import (LocalizedAtP, QQ, RingSpec, format_rational, is_prime,
                    parse_rational, pvaluation)
from .roots import PTypeReport, classify_p_type
from .matrices import PrimeFieldCache


class OutOfRange(Exception):
    pass


class HypothesisNotMet(Exception):
    pass


class ActionMissing(Exception):
    pass


class NotNilpotentEnough(Exception):
    pass


class SchemaError(Exception):
    """Validation failure carrying a JSON-pointer to the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__("%s: %s" % (path or "/", message))
        self.path = path
        self.message = message


_ACTION_KEYS = ("h", "x", "y")


@dataclass(frozen=True)
class WeightedModule:
    p: int
    lattice: Matrix                  # rational, columns = lattice basis
    weights: tuple                   # strictly increasing integers
    pieces: dict                     # weight -> rational column basis of the
                                     # ambient weight space
    action: Optional[dict] = None    # {"h","x","y"} ambient matrices

    @property
    def ring(self) -> RingSpec:
        return LocalizedAtP(self.p)

    @property
    def ambient_dim(self) -> int:
        return self.lattice.nrows


def _p_integral(mat: Matrix, p: int) -> bool:
    return all(x.denominator % p != 0 for x in mat.data)


def _column_span_contains(basis: Matrix, vectors: Matrix) -> Optional[Matrix]:
    sol = solve_linear(basis, vectors)
    if sol is None or (basis @ sol) != vectors:
        return None
    return sol


def weighted_module(p: int, lattice: Matrix, weights, pieces: dict,
                    action: Optional[dict] = None) -> WeightedModule:
    """Validated constructor; all stated invariants are checked exactly."""
    if not is_prime(p):
        raise ValueError("%r is not prime" % (p,))
    if lattice.ring != QQ:
        raise ValueError("lattice must be rational")
    n = lattice.nrows
    if lattice.ncols != n or rank(lattice) != n:
        raise ValueError("lattice must be a square invertible matrix "
                         "(a full lattice in the ambient space)")
    ws = tuple(sorted(weights))
    if len(set(ws)) != len(ws) or not all(isinstance(w, int) for w in ws):
        raise ValueError("weights must be distinct integers")
    if set(pieces) != set(ws):
        raise ValueError("pieces must be keyed exactly by the weights")
    total = 0
    for w in ws:
        pc = pieces[w]
        if pc.ring != QQ or pc.nrows != n or pc.ncols == 0:
            raise ValueError("piece %d must be a nonempty rational basis "
                             "in the ambient space" % w)
        total += pc.ncols
    if total != n:
        raise ValueError("piece ranks sum to %d, ambient dimension is %d"
                         % (total, n))
    stacked = None
    for w in ws:
        stacked = pieces[w] if stacked is None else stacked.hstack(pieces[w])
    if rank(stacked) != n:
        raise ValueError("pieces do not form a direct sum of the ambient space")

    if action is not None:
        if set(action) != set(_ACTION_KEYS):
            raise ValueError("action must provide exactly h, x, y")
        for key in _ACTION_KEYS:
            a = action[key]
            if a.ring != QQ or (a.nrows, a.ncols) != (n, n):
                raise ValueError("action %r must be an ambient square matrix" % key)
            if not _p_integral(a, p):
                raise ValueError("action %r has a denominator divisible by %d"
                                 % (key, p))
        h, x, y = (action[k] for k in _ACTION_KEYS)
        two = Fraction(2)
        if (h @ x - x @ h) != x.scale(two):
            raise ValueError("[h, x] = 2x fails")
        if (h @ y - y @ h) != y.scale(-two):
            raise ValueError("[h, y] = -2y fails")
        if (x @ y - y @ x) != h:
            raise ValueError("[x, y] = h fails")
        for w in ws:
            pc = pieces[w]
            if (h @ pc) != pc.scale(Fraction(w)):
                raise ValueError("h does not act as %d on its weight piece" % w)
            for op, shift in ((x, 2), (y, -2)):
                img = op @ pc
                if w + shift in pieces:
                    if _column_span_contains(pieces[w + shift], img) is None:
                        raise ValueError(
                            "action does not shift weight %d by %+d" % (w, shift))
                elif not img.is_zero():
                    raise ValueError(
                        "action leaves the graded pieces at weight %d" % w)
        action = dict(action)
    return WeightedModule(p, lattice, ws, dict(pieces), action)


def lattice_closed_under_action(m: WeightedModule) -> bool:
    """True when h, x, y all map the lattice into itself over Z_(p)."""
    if m.action is None:
        return False
    for key in _ACTION_KEYS:
        coords = _column_span_contains(m.lattice, m.action[key] @ m.lattice)
        if coords is None or not _p_integral(coords, m.p):
            return False
    return True


# ---------------------------------------------------------------------------
# constructions

def chain_from_highest(j: int, p: int) -> WeightedModule:
    """The rank-(j+1) module with basis z_i = y^i(z_0)/i!:

        h z_i = (j-2i) z_i,  x z_i = (j-i+1) z_{i-1},  y z_i = (i+1) z_{i+1}.
    """
    if not is_prime(p):
        raise OutOfRange("%r is not prime" % (p,))
    if not 1 <= j <= p - 1:
        raise OutOfRange("highest weight %d outside [1, %d]" % (j, p - 1))
    n = j + 1
    lattice = Matrix.identity(QQ, n)
    pieces = {}
    hrows = [[0] * n for _ in range(n)]
    xrows = [[0] * n for _ in range(n)]
    yrows = [[0] * n for _ in range(n)]
    for i in range(n):
        w = j - 2 * i
        pieces[w] = Matrix.from_rows(QQ, [[1 if r == i else 0] for r in range(n)])
        hrows[i][i] = w
        if i >= 1:
            xrows[i - 1][i] = j - i + 1
        if i + 1 < n:
            yrows[i + 1][i] = i + 1
    action = {k: Matrix.from_rows(QQ, rows)
              for k, rows in (("h", hrows), ("x", xrows), ("y", yrows))}
    return weighted_module(p, lattice, pieces.keys(), pieces, action)


def counterexample_module(p: int) -> WeightedModule:
    """Degree-p symmetric power of the standard module, rank p+1 with
    monomial basis a_p, a_{p-2}, ..., a_{-p}, but with the lattice
    enlarged by (a_p + a_{-p})/p.

    The enlarged lattice is still closed under h, x, y, yet no weight
    decomposition of the lattice exists: the weight set contains p and
    -p, which collide with each other (and with 0 for p = 2) mod p.
    """
    if not is_prime(p):
        raise OutOfRange("%r is not prime" % (p,))
    n = p + 1
    lat_rows = [[0] * n for _ in range(n)]
    lat_rows[0][0] = Fraction(1, p)
    lat_rows[p][0] = Fraction(1, p)
    for c in range(1, n):
        lat_rows[c][c] = 1
    lattice = Matrix.from_rows(QQ, lat_rows)
    pieces = {}
    hrows = [[0] * n for _ in range(n)]
    xrows = [[0] * n for _ in range(n)]
    yrows = [[0] * n for _ in range(n)]
    for i in range(n):
        w = p - 2 * i
        pieces[w] = Matrix.from_rows(QQ, [[1 if r == i else 0] for r in range(n)])
        hrows[i][i] = w
        if i >= 1:
            xrows[i - 1][i] = i
        if i + 1 < n:
            yrows[i + 1][i] = p - i
    action = {k: Matrix.from_rows(QQ, rows)
              for k, rows in (("h", hrows), ("x", xrows), ("y", yrows))}
    m = weighted_module(p, lattice, pieces.keys(), pieces, action)
    assert lattice_closed_under_action(m)
    return m


def direct_sum(a: WeightedModule, b: WeightedModule) -> WeightedModule:
    if a.p != b.p:
        raise ValueError("summands live over different primes")
    na, nb = a.ambient_dim, b.ambient_dim
    n = na + nb

    def embed(mat_a: Optional[Matrix], mat_b: Optional[Matrix]) -> Matrix:
        ca = mat_a.ncols if mat_a is not None else 0
        cb = mat_b.ncols if mat_b is not None else 0
        rows = [[Fraction(0)] * (ca + cb) for _ in range(n)]
        if mat_a is not None:
            for r in range(na):
                for c in range(ca):
                    rows[r][c] = mat_a.raw(r, c)
        if mat_b is not None:
            for r in range(nb):
                for c in range(cb):
                    rows[na + r][ca + c] = mat_b.raw(r, c)
        return Matrix.from_rows(QQ, rows)

    lattice = embed(a.lattice, b.lattice)
    weights = sorted(set(a.weights) | set(b.weights))
    pieces = {w: embed(a.pieces.get(w), b.pieces.get(w)) for w in weights}
    action = None
    if a.action is not None and b.action is not None:
        action = {k: embed(a.action[k], b.action[k]) for k in _ACTION_KEYS}
    return weighted_module(a.p, lattice, weights, pieces, action)


def conjugate(m: WeightedModule, u: Matrix) -> WeightedModule:
    """Transport the whole structure along an ambient change of basis
    that is unimodular at p."""
    n = m.ambient_dim
    if u.ring != QQ or (u.nrows, u.ncols) != (n, n):
        raise ValueError("conjugator must be an ambient rational square matrix")
    from .matrices import det
    d = det(u)
    if d == 0 or not _p_integral(u, m.p) or pvaluation(d, m.p) != 0:
        raise ValueError("conjugator is not unimodular at %d" % m.p)
    ui = inverse(u)
    lattice = u @ m.lattice
    pieces = {w: u @ pc for w, pc in m.pieces.items()}
    action = None
    if m.action is not None:
        action = {k: u @ m.action[k] @ ui for k in _ACTION_KEYS}
    return weighted_module(m.p, lattice, m.weights, pieces, action)


# ---------------------------------------------------------------------------
# the torus-extension algorithm

@dataclass(frozen=True)
class DecompositionResult:
    success: bool
    pieces: dict                     # weight -> rational basis of M ∩ M_wK
    projectors: dict                 # weight -> Matrix over Z_(p), lattice coords
    failure_witness: Optional[tuple]  # (weight chain, ambient vector)
    report: PTypeReport
    path: str


def _grading_operator(m: WeightedModule) -> Matrix:
    if m.action is not None:
        return m.action["h"]
    stacked = None
    diag = []
    for w in m.weights:
        pc = m.pieces[w]
        stacked = pc if stacked is None else stacked.hstack(pc)
        diag.extend([w] * pc.ncols)
    n = m.ambient_dim
    drows = [[Fraction(diag[r]) if r == c else Fraction(0) for c in range(n)]
             for r in range(n)]
    return stacked @ Matrix.from_rows(QQ, drows) @ inverse(stacked)


def _mod_p(mat: Matrix, p: int) -> Matrix:
    return mat.map_to_ring(PrimeFieldCache.get(p))


def _span_check_mod_p(coords: Matrix, p: int):
    """First standard basis vector outside the mod-p column span of
    coords, as (index, rank), or None when coords spans everything."""
    red = _mod_p(coords, p)
    r = rank(red)
    if r == red.nrows:
        return None
    for k in range(red.nrows):
        ek = Matrix.from_rows(red.ring,
                              [[1 if i == k else 0] for i in range(red.nrows)])
        if rank(red.hstack(ek)) > r:
            return k, r
    raise AssertionError("rank deficit without an unreachable coordinate")


def _saturations(m: WeightedModule) -> dict:
    return {w: saturate(m.lattice, m.pieces[w], m.p) for w in m.weights}


def _assert_projector_family(projs: dict, n: int) -> None:
    ring = next(iter(projs.values())).ring
    ident = Matrix.identity(ring, n)
    total = Matrix.zeros(ring, n, n)
    for w, pi in projs.items():
        total = total + pi
        assert (pi @ pi) == pi, "projector %d not idempotent" % w
    assert total == ident, "projectors do not sum to the identity"
    items = sorted(projs.items())
    for i in range(len(items)):
        for jj in range(i + 1, len(items)):
            prod = items[i][1] @ items[jj][1]
            assert prod.is_zero(), "projectors %d, %d not orthogonal" % (
                items[i][0], items[jj][0])


def _lagrange_projectors(m: WeightedModule, h_lat: Matrix) -> dict:
    ws = m.weights
    d = len(ws)
    vrows = [[Fraction(w) ** c for c in range(d)] for w in ws]
    vand = Matrix.from_rows(QQ, vrows)
    coeffs = solve_linear(vand, Matrix.identity(QQ, d))
    assert coeffs is not None and _p_integral(coeffs, m.p)
    n = m.ambient_dim
    ident = Matrix.identity(QQ, n)
    projs = {}
    for col, w in enumerate(ws):
        acc = Matrix.zeros(QQ, n, n)
        for c in range(d - 1, -1, -1):
            acc = acc @ h_lat + ident.scale(coeffs.raw(c, col))
        projs[w] = acc
    return projs


def extend_torus(m: WeightedModule) -> DecompositionResult:
    """Decompose the lattice along the weight grading.

    Distinct weights mod p admit polynomial projectors in the grading
    operator (denominators of the interpolation coefficients are units).
    Otherwise the saturations M ∩ M_wK are assembled and checked to span
    the lattice mod p; when they do not, the defect is localized to a
    chain of weights congruent mod p and a witness vector inside the
    chain's saturation but outside the direct sum is returned.
    """
    p = m.p
    report = classify_p_type(set(m.weights), p)
    rp = LocalizedAtP(p)
    n = m.ambient_dim

    h_lat = solve_linear(m.lattice, _grading_operator(m) @ m.lattice)
    assert h_lat is not None
    h_ok = _p_integral(h_lat, p)

    if report.is_type1 and h_ok:
        projs = _lagrange_projectors(m, h_lat)
        _assert_projector_family(projs, n)
        sats = _saturations(m)
        for w, pi in projs.items():
            image = m.lattice @ pi
            coords = _column_span_contains(sats[w], image)
            assert coords is not None and _p_integral(coords, p)
            assert _span_check_mod_p(coords, p) is None
        return DecompositionResult(
            True, sats, {w: pi.map_to_ring(rp) for w, pi in projs.items()},
            None, report, "polynomial-projectors")

    if m.action is None:
        if report.is_type2 or report.is_type3:
            raise ActionMissing(
                "weights collide mod %d; the saturation route needs the "
                "sl2 action" % p)
        if report.is_type1:
            raise HypothesisNotMet(
                "weights are distinct mod %d but the grading operator "
                "does not preserve the lattice" % p)
        raise HypothesisNotMet(
            "weight set fails every p-type and no action is given")

    sats = _saturations(m)
    stacked = None
    blocks = []
    for w in m.weights:
        sw = sats[w]
        blocks.append((w, sw.ncols))
        stacked = sw if stacked is None else stacked.hstack(sw)
    coords = _column_span_contains(m.lattice, stacked)
    assert coords is not None and _p_integral(coords, p)

    if rank(_mod_p(coords, p)) == n:
        ci = inverse(coords)
        assert _p_integral(ci, p)
        projs = {}
        offset = 0
        for w, width in blocks:
            sel = [[Fraction(1) if (r == c and offset <= r < offset + width)
                    else Fraction(0) for c in range(n)] for r in range(n)]
            projs[w] = coords @ Matrix.from_rows(QQ, sel) @ ci
            offset += width
        _assert_projector_family(projs, n)
        return DecompositionResult(
            True, sats, {w: pi.map_to_ring(rp) for w, pi in projs.items()},
            None, report, "saturation")

    # localize the defect along chains of weights congruent mod p
    chains = {}
    for w in m.weights:
        chains.setdefault(w % p, []).append(w)
    witness = None
    for res in sorted(chains, key=lambda r: -max(chains[r])):
        ws = chains[res]
        if len(ws) < 2:
            continue
        pk = None
        sk = None
        for w in ws:
            pk = m.pieces[w] if pk is None else pk.hstack(m.pieces[w])
            sk = sats[w] if sk is None else sk.hstack(sats[w])
        nchain = saturate(m.lattice, pk, p)
        cc = _column_span_contains(nchain, sk)
        assert cc is not None and _p_integral(cc, p)
        miss = _span_check_mod_p(cc, p)
        if miss is not None:
            witness = (tuple(ws), nchain.col(miss[0]))
            break
    if witness is None:
        miss = _span_check_mod_p(coords, p)
        assert miss is not None
        witness = (m.weights, m.lattice.col(miss[0]))
    return DecompositionResult(False, sats, {}, witness, report, "saturation")


# ---------------------------------------------------------------------------
# the truncated exponential

def exp_nilpotent(u: Matrix, p: int) -> Matrix:
    """Sum of u^l / l! for l < p; requires u^p = 0 so that the truncated
    sum is still multiplicative."""
    if u.nrows != u.ncols:
        raise ValueError("exponential of a non-square matrix")
    if not is_prime(p):
        raise OutOfRange("%r is not prime" % (p,))
    power = u
    for _ in range(p - 1):
        power = power @ u
    if not power.is_zero():
        raise NotNilpotentEnough("u^%d is nonzero" % p)
    ring = u.ring
    acc = Matrix.identity(ring, u.nrows)
    term = Matrix.identity(ring, u.nrows)
    for l in range(1, p):
        term = term @ u
        acc = acc + term.scale(ring.inv(ring.from_int(factorial(l))))
    return acc


def weight_scaling(m: WeightedModule, ring: RingSpec, t) -> Matrix:
    """The operator acting on the weight-w piece as t^w, over the given
    ring; t must be a unit there."""
    stacked = None
    exps = []
    for w in m.weights:
        pc = m.pieces[w]
        stacked = pc if stacked is None else stacked.hstack(pc)
        exps.extend([w] * pc.ncols)
    sr = stacked.map_to_ring(ring)
    tval = ring.coerce(t)
    tinv = ring.inv(tval)
    n = m.ambient_dim
    drows = [[ring.zero()] * n for _ in range(n)]
    for i, w in enumerate(exps):
        base, e = (tval, w) if w >= 0 else (tinv, -w)
        acc = ring.one()
        for _ in range(e):
            acc = ring.mul(acc, base)
        drows[i][i] = acc
    return sr @ Matrix.from_rows(ring, drows) @ inverse(sr)


# ---------------------------------------------------------------------------
# JSON interchange

def _format_matrix(mat: Matrix) -> list:
    return [[format_rational(mat.raw(r, c)) for c in range(mat.ncols)]
            for r in range(mat.nrows)]


def module_to_json(m: WeightedModule) -> dict:
    doc = {
        "p": m.p,
        "lattice": _format_matrix(m.lattice),
        "weights": list(m.weights),
        "pieces": {str(w): _format_matrix(m.pieces[w]) for w in m.weights},
    }
    if m.action is not None:
        doc["action"] = {k: _format_matrix(m.action[k]) for k in _ACTION_KEYS}
    return doc


def _parse_entry(v, path: str) -> Fraction:
    if isinstance(v, bool):
        raise SchemaError(path, "expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return parse_rational(v)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, "malformed rational %r" % v)
    raise SchemaError(path, "expected an integer or an 'a/b' string")


def _parse_matrix(rows, path: str) -> Matrix:
    if not isinstance(rows, list) or not rows:
        raise SchemaError(path, "expected a non-empty array of rows")
    width = None
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise SchemaError("%s/%d" % (path, r), "expected a non-empty row")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SchemaError("%s/%d" % (path, r),
                              "row length %d, expected %d" % (len(row), width))
        out.append([_parse_entry(v, "%s/%d/%d" % (path, r, c))
                    for c, v in enumerate(row)])
    return Matrix.from_rows(QQ, out)


def module_from_json(doc) -> WeightedModule:
    """Parse and validate the interchange form; schema violations carry a
    JSON-pointer, semantic violations surface as ValueError."""
    if not isinstance(doc, dict):
        raise SchemaError("", "expected an object")
    for key in ("p", "lattice", "weights", "pieces"):
        if key not in doc:
            raise SchemaError("/" + key, "missing")
    p = doc["p"]
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise SchemaError("/p", "expected a prime integer")
    lattice = _parse_matrix(doc["lattice"], "/lattice")
    if not isinstance(doc["weights"], list):
        raise SchemaError("/weights", "expected an array")
    weights = []
    for i, w in enumerate(doc["weights"]):
        if not isinstance(w, int) or isinstance(w, bool):
            raise SchemaError("/weights/%d" % i, "expected an integer")
        weights.append(w)
    if not isinstance(doc["pieces"], dict):
        raise SchemaError("/pieces", "expected an object keyed by weight")
    pieces = {}
    for key, rows in doc["pieces"].items():
        try:
            w = int(key)
        except ValueError:
            raise SchemaError("/pieces/%s" % key, "key is not an integer")
        pieces[w] = _parse_matrix(rows, "/pieces/%s" % key)
    action = None
    if "action" in doc:
        node = doc["action"]
        if not isinstance(node, dict):
            raise SchemaError("/action", "expected an object with h, x, y")
        for key in _ACTION_KEYS:
            if key not in node:
                raise SchemaError("/action/" + key, "missing")
        action = {k: _parse_matrix(node[k], "/action/" + k)
                  for k in _ACTION_KEYS}
    return weighted_module(p, lattice, weights, pieces, action)

"""Commutator recursion over resolvent matrices and pairwise extraction.

The family is indexed by a finite list of positive insertion indices, each
carrying a positive weight b. The empty list gives the resolvent itself;
removing the first listed index k1 and splitting the remainder into an
ordered pair of disjoint sublists (I, J) gives

    R_K = sum over I | J of [(lam^{b(k1)+1} R_J)_+, R_I]

the commutator with the polynomial part of the weight-(b+1) shift acting as
the flow generator. The shift exponent b+1 and the bracket order are pinned
by cross-checks against the direct cycle-sum engine; with either one flipped
the double trace sum lands on the wrong parity diagonal and misses every
admissible slot (the joint eps/lambda parity grading of the resolvent makes
that failure structural, not a small error).

When every weight equals the same b the sum collapses to binomial
coefficients and it pays to memoize per level instead of per subset.

Extraction: the double trace sum

    sum_t C(m, t) tr[R_t(lam1) R_{m-t}(lam2)] / (lam1 - lam2)^2

carries, at the coefficient of lam1^(-i-2) lam2^(-j-2) with i, j >= 1, the
correlator with m weight-b insertions plus one tau_i and one tau_j, up to
the factorial and eps normalization stripped off in extract_bij. The m = 0
case also subtracts 1/(lam1 - lam2)^2; that term only touches slots with a
non-negative exponent, never a doubly-negative one, so extraction with a
total-degree window pinned to the target diagonal can skip it outright.

Every eps exponent in sight is non-negative and the final normalization
divides by a fixed eps power, so dropping eps exponents above a cap chosen
from the target's genus range is exact. polygon_table exploits that; plain
r_family / rm_equal calls keep full coefficients.
"""

from dataclasses import dataclass

from .correlators import n_point, one_point, two_point
from .eps import EpsLaurent, EPS_ZERO
from .errors import (
    DepthExceeded,
    IndexOutOfRange,
    MalformedValue,
    UnstableExtraction,
)
from .rational import Rat, ZERO, binomial, factorial
from .resolvent import resolvent_bundle
from .series import LambdaSeries, Mat2, MultiSeries, inv_diff_expand

MAX_KEY = 6
ESCALATE_STEP = 4
ESCALATE_TRIES = 3


@dataclass(frozen=True)
class RecursionKey:
    """Ordered index set with one positive weight per index."""

    b_values: tuple
    indices: tuple

    def __post_init__(self):
        bs = tuple(int(b) for b in self.b_values)
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "b_values", bs)
        object.__setattr__(self, "indices", idx)
        if len(bs) != len(idx):
            raise MalformedValue("weights and indices must pair up")
        if len(idx) != len(set(idx)):
            raise MalformedValue("indices must be distinct")
        if any(i < 1 for i in idx):
            raise MalformedValue("indices must be positive")
        if any(b < 1 for b in bs):
            raise IndexOutOfRange("weights must be >= 1")
        if len(bs) > MAX_KEY:
            raise MalformedValue(f"at most {MAX_KEY} indices supported")


def _as_weights(key):
    if isinstance(key, RecursionKey):
        return key.b_values
    key = RecursionKey(tuple(key), tuple(range(1, len(tuple(key)) + 1)))
    return key.b_values


def _capped_eps(c: EpsLaurent, cap: int) -> EpsLaurent:
    top = c.max_exp()
    if top is None or top <= cap:
        return c
    return EpsLaurent._raw({e: v for e, v in c.terms.items() if e <= cap})


def _capped_series(ls: LambdaSeries, cap) -> LambdaSeries:
    if cap is None:
        return ls
    d = {}
    for e, c in ls.coeffs.items():
        cc = _capped_eps(c, cap)
        if cc:
            d[e] = cc
    return LambdaSeries._raw(d, ls.depth)


def _base_matrix(depth: int, cap) -> Mat2:
    r = resolvent_bundle(depth).r
    if cap is None:
        return r
    return r.map_entries(lambda s: _capped_series(s, cap))


def _shift_plus(mat: Mat2, b: int) -> Mat2:
    return mat.map_entries(lambda s: s.lam_shift(b + 1).plus_part())


_FAMILY_MEMO = {}
_EQUAL_MEMO = {}


def r_family(key, depth: int, eps_cap=None) -> Mat2:
    """Evaluate the subset recursion for an arbitrary weight listing.

    key is a RecursionKey or a bare sequence of weights (indices implied).
    The result depends only on the weights in listing order; permuted
    listings recompute from scratch, which is what the order-independence
    property test relies on.
    """
    if depth < 0:
        raise MalformedValue("depth must be >= 0")
    return _family(tuple(_as_weights(key)), depth, eps_cap)


def _family(bs, depth, cap):
    memo_key = (bs, depth, cap)
    got = _FAMILY_MEMO.get(memo_key)
    if got is not None:
        return got
    if not bs:
        out = _base_matrix(depth, cap)
    else:
        b1 = bs[0]
        rest = bs[1:]
        r = len(rest)
        out = None
        for mask in range(1 << r):
            left = tuple(rest[t] for t in range(r) if (mask >> t) & 1)
            right = tuple(rest[t] for t in range(r) if not (mask >> t) & 1)
            term = _shift_plus(_family(right, depth, cap), b1).commutator(
                _family(left, depth, cap)
            )
            out = term if out is None else out + term
        if cap is not None:
            out = out.map_entries(lambda s: _capped_series(s, cap))
    _FAMILY_MEMO[memo_key] = out
    return out


def rm_equal(b: int, m: int, depth: int, eps_cap=None) -> Mat2:
    """Level m of the equal-weight recursion, binomial-collapsed.

    Duplicate concurrent computation of a level is harmless: insertion into
    the memo is idempotent because the arithmetic is exact.
    """
    if b < 1:
        raise IndexOutOfRange(f"weight must be >= 1, got {b}")
    if m < 0:
        raise MalformedValue(f"level must be >= 0, got {m}")
    if depth < 0:
        raise MalformedValue("depth must be >= 0")
    memo_key = (b, m, depth, eps_cap)
    got = _EQUAL_MEMO.get(memo_key)
    if got is not None:
        return got
    if m == 0:
        out = _base_matrix(depth, eps_cap)
    else:
        out = None
        for i in range(m):
            term = _shift_plus(rm_equal(b, i, depth, eps_cap), b).commutator(
                rm_equal(b, m - 1 - i, depth, eps_cap)
            )
            w = binomial(m - 1, i)
            if w != 1:
                term = term * w
            out = term if out is None else out + term
        if eps_cap is not None:
            out = out.map_entries(lambda s: _capped_series(s, eps_cap))
    _EQUAL_MEMO[memo_key] = out
    return out


def default_extract_depth(b: int, m: int, i: int, j: int) -> int:
    return (b + 2) * (m + 2) + max(i, j) + 4


def _windowed_trace(left: Mat2, right: Mat2, band: int) -> MultiSeries:
    w = (band, band)
    return (
        left.a.mul(right.a, window=w)
        + left.b.mul(right.c, window=w)
        + left.c.mul(right.b, window=w)
        + left.d.mul(right.d, window=w)
    )


def _lift(mat: Mat2, var: int) -> Mat2:
    return mat.map_entries(lambda s: MultiSeries.from_lambda(s, 2, var))


def _extract_at_depth(b, m, i, j, depth, cap) -> EpsLaurent:
    hi, lo = (i, j) if i >= j else (j, i)
    # the double sum is symmetric in the two spectral slots, so the larger
    # target index can always ride the expansion's deep variable
    mats = [rm_equal(b, t, depth, cap) for t in range(m + 1)]
    lifts0 = [_lift(mat, 0) for mat in mats]
    lifts1 = [_lift(mat, 1) for mat in mats]
    band = -(hi + lo + 2)
    total = None
    for t in range(m + 1):
        term = _windowed_trace(lifts0[t], lifts1[m - t], band)
        w = binomial(m, t)
        if w != 1:
            term = term * w
        total = term if total is None else total + term
    # the m = 0 subtraction of 1/(lam1 - lam2)^2 never reaches the target
    # diagonal: its keys keep a non-negative exponent in the second slot
    inv = inv_diff_expand(2, (0, 1), 2, jmax=total.deg_plus(0) + hi + 2)
    t_total = -(hi + lo + 4)
    prod = total.mul(inv, window=(t_total, t_total))
    raw = prod.coeff((-hi - 2, -lo - 2))
    scale = factorial(i + 1) * factorial(j + 1) * factorial(b + 1) ** m
    return raw.shift(-(m + 2)) / scale


def extract_bij(b: int, m: int, i: int, j: int, depth=None, eps_cap=None) -> EpsLaurent:
    """Correlator of m weight-b insertions plus tau_i and tau_j.

    The generating identity only sums over i, j >= 1; whether its shallow
    slots also carry tau_0 data is not something this engine will guess.
    """
    if i < 1 or j < 1:
        raise IndexOutOfRange(f"extraction needs i, j >= 1, got ({i}, {j})")
    if b < 1:
        raise IndexOutOfRange(f"recursion route needs weight >= 1, got {b}")
    if m < 0:
        raise MalformedValue(f"level must be >= 0, got {m}")
    if depth is not None:
        return _extract_at_depth(b, m, i, j, depth, eps_cap)
    d = default_extract_depth(b, m, i, j)
    for attempt in range(ESCALATE_TRIES):
        try:
            return _extract_at_depth(b, m, i, j, d, eps_cap)
        except DepthExceeded:
            if attempt == ESCALATE_TRIES - 1:
                raise
            d += ESCALATE_STEP


def degree_for(b: int, n: int, g: int) -> int:
    """Degree pinned by the dimension constraint for n weight-b insertions."""
    if (b * n) % 2:
        raise MalformedValue("odd total weight admits no degree")
    return b * n // 2 + 1 - g


@dataclass(frozen=True)
class PolygonTable:
    b: int
    g_max: int
    rows: tuple  # rows[n - 1][g] is the (n, g) cell
    depth_used: int
    stability_verified: bool

    def cell(self, n: int, g: int) -> Rat:
        if not 1 <= n <= len(self.rows) or not 0 <= g <= self.g_max:
            raise MalformedValue(f"cell ({n}, {g}) outside the table")
        return self.rows[n - 1][g]


def _table_rows(b, n_max, g_max, depth, cap):
    rows = []
    for n in range(1, n_max + 1):
        if (b * n) % 2:
            rows.append((ZERO,) * (g_max + 1))
            continue
        if n == 1:
            series = one_point(b)
        elif b == 0:
            # index-0 insertions are outside the recursion route
            if n == 2:
                series = two_point(0, 0)
            else:
                series = n_point((0,) * n)
        else:
            series = extract_bij(b, n - 2, b, b, depth=depth, eps_cap=cap)
        rows.append(tuple(series.coeff(2 * g - 2) for g in range(g_max + 1)))
    return rows


def polygon_table(b: int, n_max: int, g_max=None, depth=None, stability: bool = True) -> PolygonTable:
    """Rows n = 1..n_max of the weight-b family, columns g = 0..g_max.

    Cell (n, g) is the genus-g invariant at the pinned degree bn/2 + 1 - g.
    One shared truncation depth serves every row so the per-level memo is hit
    across rows; with stability on, the whole table is recomputed four orders
    deeper and compared.
    """
    if b < 0:
        raise IndexOutOfRange(f"weight must be >= 0, got {b}")
    if n_max < 1:
        raise MalformedValue(f"need at least one row, got n_max={n_max}")
    if g_max is None:
        g_max = max(b * n_max // 2, 0)
    if g_max < 0:
        raise MalformedValue(f"g_max must be >= 0, got {g_max}")
    if depth is None:
        depth = (b + 2) * n_max + 4
    cap = n_max * (b + 1) + 2
    rows = _table_rows(b, n_max, g_max, depth, cap)
    verified = False
    if stability and b >= 1 and n_max >= 2:
        again = _table_rows(b, n_max, g_max, depth + ESCALATE_STEP, cap)
        if again != rows:
            raise UnstableExtraction(
                f"weight-{b} table changed between depths {depth} and "
                f"{depth + ESCALATE_STEP}"
            )
        verified = True
    return PolygonTable(b, g_max, tuple(rows), depth, verified)

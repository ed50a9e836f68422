"""Evaluators for the sharpened triangle inequalities and their scalar reductions.

Each evaluator returns an :class:`InequalityReport`.  The slack is signed and
scale-free: it is divided by max(|lhs|, |rhs|) and oriented so that a
non-negative slack means the inequality holds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import exponents
from .measure import DomainError, FunctionFamily, MeasureSpace, lp_mass, lp_norm
from .overlap import gamma_p, gamma_tilde_p, pair_sum

__all__ = [
    "DEFAULT_TOL",
    "Direction",
    "InequalityReport",
    "main_sides",
    "baseline_report",
    "main_report",
    "corollary_report",
    "p2_identity_residual",
    "clarkson_residual",
    "improved_triangle_report",
    "pair_bounds_report",
    "pre_scalar",
    "scalar_nf5",
    "scalar_nf5B",
    "scalar_final",
    "equivalence_nf5_nf5B",
    "tri3_limit",
    "replicated_bound",
]

DEFAULT_TOL = 1e-10


class Direction(str, enum.Enum):
    UPPER = "upper-bound"  # lhs <= rhs
    LOWER = "lower-bound"  # lhs >= rhs
    IDENTITY = "identity"  # lhs == rhs

    def __str__(self):
        return self.value


def signed_slack(lhs, rhs, direction: Direction):
    """Scale-normalized slack; works elementwise on arrays."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if direction is Direction.UPPER:
        diff = rhs - lhs
    elif direction is Direction.LOWER:
        diff = lhs - rhs
    else:
        diff = -np.abs(lhs - rhs)
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0), 0.0)
    # an infinite side: only the sign of the difference is meaningful
    out = np.where(np.isfinite(scale), out, np.sign(np.nan_to_num(diff, posinf=1.0, neginf=-1.0)))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class InequalityReport:
    label: str
    lhs: float
    rhs: float
    direction: Direction
    tol: float = DEFAULT_TOL
    N: int | None = None
    p: float | None = None
    r: float | None = None
    slack: float = field(init=False)
    holds: bool = field(init=False)

    def __post_init__(self):
        s = signed_slack(self.lhs, self.rhs, self.direction)
        object.__setattr__(self, "slack", s)
        object.__setattr__(self, "holds", bool(s >= -self.tol))

    def with_tol(self, tol: float) -> "InequalityReport":
        return InequalityReport(self.label, self.lhs, self.rhs, self.direction, tol, self.N, self.p, self.r)


def _regime(p: float) -> Direction:
    if p > 2:
        return Direction.UPPER
    if 1 < p < 2:
        return Direction.LOWER
    if p == 2:
        return Direction.IDENTITY
    raise DomainError(f"p must exceed 1, got {p}")


# -- N-function bounds ---------------------------------------------------------


def main_sides(values, weights, p: float, r: float, tilde: bool = False):
    """Both sides of the interpolating bound, batched over leading axes.

    ``values`` has shape (..., N, M) and ``weights`` (..., M).  Returns
    (lhs, rhs) with lhs = ||sum f_j||_p^p and
    rhs = [1 + (N-1) G^r]^(p-1) sum_j ||f_j||_p^p, where G is Gamma_p or, with
    ``tilde``, the pair-averaged Gamma~_p.
    """
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    n = values.shape[-2]
    w = weights[..., None, :]
    lhs = (weights * values.sum(axis=-2) ** p).sum(axis=-1)
    total = (w * values**p).sum(axis=(-2, -1))
    if tilde:
        acc = np.zeros(values.shape[:-2])
        for i in range(n - 1):
            prod = values[..., i : i + 1, :] * values[..., i + 1 :, :]
            acc = acc + (w * prod ** (p / 2)).sum(axis=(-2, -1))
        num = acc / comb(n, 2)
    else:
        num = (weights * (pair_sum(values) / comb(n, 2)) ** (p / 2)).sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        gamma = num / (total / n)
    rhs = (1 + (n - 1) * gamma**r) ** (p - 1) * total
    return lhs, rhs


def _require_nonzero(fam: FunctionFamily):
    if fam.is_zero():
        raise DomainError("the family is identically zero")


def baseline_report(fam: FunctionFamily, p: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """||sum f_j||_p^p <= N^(p-1) sum ||f_j||_p^p, the plain convexity bound."""
    if p <= 1:
        raise DomainError("the convexity bound needs p > 1")
    lhs = lp_mass(fam.total(), p, fam.space)
    rhs = fam.n ** (p - 1) * sum(lp_mass(f, p, fam.space) for f in fam.values)
    return InequalityReport("basconv2", lhs, rhs, Direction.UPPER, tol, fam.n, p, None)


def main_report(fam: FunctionFamily, p: float, r: float | None = None, tol: float = DEFAULT_TOL) -> InequalityReport:
    """The N-function bound with Gamma_p^r; ``r`` defaults to ``r_main(N, p)``.

    Upper bound for p > 2, lower bound for 1 < p < 2, identity at p = 2.
    """
    direction = _regime(p)
    _require_nonzero(fam)
    if r is None:
        r = exponents.r_main(fam.n, p)
    if r <= 0:
        raise DomainError("the exponent r must be positive")
    g = gamma_p(fam, p)
    lhs = lp_mass(fam.total(), p, fam.space)
    total = sum(lp_mass(f, p, fam.space) for f in fam.values)
    rhs = (1 + (fam.n - 1) * g**r) ** (p - 1) * total
    return InequalityReport("main", lhs, rhs, direction, tol, fam.n, p, r)


def corollary_report(fam: FunctionFamily, p: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """The simplified bound with Gamma~_p and exponent 1/(p-1)."""
    direction = _regime(p)
    _require_nonzero(fam)
    r = exponents.r_limit(p)
    g = gamma_tilde_p(fam, p)
    lhs = lp_mass(fam.total(), p, fam.space)
    total = sum(lp_mass(f, p, fam.space) for f in fam.values)
    rhs = (1 + (fam.n - 1) * g**r) ** (p - 1) * total
    return InequalityReport("corollary", lhs, rhs, direction, tol, fam.n, p, r)


def p2_identity_residual(fam: FunctionFamily, relative: bool = False) -> float:
    """|lhs - rhs| of the p = 2 identity (r = 1); optionally divided by the scale."""
    rep = main_report(fam, 2.0, 1.0)
    res = abs(rep.lhs - rep.rhs)
    if relative:
        scale = max(abs(rep.lhs), abs(rep.rhs))
        return res / scale if scale else 0.0
    return res


# -- two-function inequalities -------------------------------------------------


def clarkson_residual(g, h, p: float, space: MeasureSpace, tol: float = DEFAULT_TOL) -> InequalityReport:
    """||(g+h)/2||_p^p + ||(g-h)/2||_p^p <= (||g||_p^p + ||h||_p^p) / 2 for p >= 2."""
    if p < 2:
        raise DomainError("Clarkson's inequality is checked for p >= 2")
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    lhs = lp_mass((g + h) / 2, p, space) + lp_mass((g - h) / 2, p, space)
    rhs = (lp_mass(g, p, space) + lp_mass(h, p, space)) / 2
    direction = Direction.IDENTITY if p == 2 else Direction.UPPER
    return InequalityReport("clarkson", lhs, rhs, direction, tol, 2, p, None)


def _overlap_half_power(g, h, p, space):
    """(||g||_p, ||h||_p, ||u v||_{p/2}^{p/2}) for the p-normalized moduli u, v."""
    ng = lp_norm(g, p, space)
    nh = lp_norm(h, p, space)
    if ng == 0 or nh == 0:
        raise DomainError("g and h must both be nonzero")
    u = np.abs(g) / ng
    v = np.abs(h) / nh
    return ng, nh, space.integrate((u * v) ** (p / 2))


def improved_triangle_report(g, h, p: float, space: MeasureSpace, tol: float = DEFAULT_TOL) -> InequalityReport:
    """||g+h||_p <= (1 - lam(1-lam) ||u^(p/2) - v^(p/2)||_2^2)^(1/p) (||g||_p + ||h||_p).

    lam = ||g||_p / (||g||_p + ||h||_p); u, v are |g|, |h| scaled to unit norm.
    """
    if p <= 2:
        raise DomainError("the improved triangle inequality needs p > 2")
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    ng, nh, _ = _overlap_half_power(g, h, p, space)
    lam = ng / (ng + nh)
    u = np.abs(g) / ng
    v = np.abs(h) / nh
    dist2 = space.integrate((u ** (p / 2) - v ** (p / 2)) ** 2)
    factor = max(1 - lam * (1 - lam) * dist2, 0.0)
    rhs = factor ** (1 / p) * (ng + nh)
    lhs = lp_norm(g + h, p, space)
    return InequalityReport("tri5", lhs, rhs, Direction.UPPER, tol, 2, p, None)


def tri3_limit(g, h, p: float, space: MeasureSpace) -> float:
    """lam^2 + (1-lam)^2 + 2 lam (1-lam) ||uv||_{p/2}^{p/2}: the N -> infinity bound
    on (|| |g| + |h| ||_p / (||g||_p + ||h||_p))^p."""
    ng, nh, ov = _overlap_half_power(np.asarray(g, float), np.asarray(h, float), p, space)
    lam = ng / (ng + nh)
    return lam**2 + (1 - lam) ** 2 + 2 * lam * (1 - lam) * ov


def replicated_bound(g, h, p: float, space: MeasureSpace, N: int) -> float:
    """Corollary bound for m_N copies of u and N - m_N copies of v, m_N = round(lam N).

    Returns the bound on the mean-power of (1/N) sum f_j, which tends to
    ``tri3_limit`` with error O(1/N).
    """
    if N < 2:
        raise DomainError("N must be >= 2")
    ng, nh, ov = _overlap_half_power(np.asarray(g, float), np.asarray(h, float), p, space)
    lam = ng / (ng + nh)
    m = int(round(lam * N))
    same = (comb(m, 2) + comb(N - m, 2)) / comb(N, 2)
    gt = same + (1 - same) * ov
    return (1 / N + (N - 1) / N * gt ** (1 / (p - 1))) ** (p - 1)


def pair_bounds_report(f, g, p: float, space: MeasureSpace, tol: float = DEFAULT_TOL) -> list[InequalityReport]:
    """Three N = 2 upper bounds on integral |f+g|^p, weakest first.

    carb uses ||fg||_{p/2} / (||f||_p ||g||_p), carb+ uses Gamma_p^(2/p), carb++
    is the two-branch optimal profile.  Moduli are taken first; carb is
    omitted when f or g vanishes.
    """
    if p <= 2:
        raise DomainError("the N = 2 suite is checked for p > 2")
    f = np.abs(np.asarray(f, dtype=float))
    g = np.abs(np.asarray(g, dtype=float))
    fam = FunctionFamily(space, np.vstack([f, g]))
    _require_nonzero(fam)
    lhs = lp_mass(f + g, p, space)
    mf, mg = lp_mass(f, p, space), lp_mass(g, p, space)
    total = mf + mg
    gam = min(max(gamma_p(fam, p), 0.0), 1.0)
    reports = []
    if mf > 0 and mg > 0:
        ratio = lp_norm(f * g, p / 2, space) / (mf ** (1 / p) * mg ** (1 / p)) if np.any(f * g > 0) else 0.0
        reports.append(InequalityReport("carb", lhs, (1 + ratio) ** (p - 1) * total, Direction.UPPER, tol, 2, p, None))
    reports.append(
        InequalityReport("carb+", lhs, (1 + gam ** (2 / p)) ** (p - 1) * total, Direction.UPPER, tol, 2, p, 2 / p)
    )
    reports.append(InequalityReport("carb++", lhs, _two_branch(gam, p) * total, Direction.UPPER, tol, 2, p, None))
    return reports


def _two_branch(gamma: float, p: float) -> float:
    s = np.sqrt(1 - gamma**2)
    hi = (1 + s) / 2
    lo = gamma**2 / (2 * (1 + s))  # (1 - s) / 2 without cancellation
    return float((hi ** (1 / p) + lo ** (1 / p)) ** p)


def pre_scalar(gamma: float, p: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """Two-branch profile <= (1 + gamma^(2/p))^(p-1) for 0 <= gamma <= 1, p >= 2."""
    if not 0 <= gamma <= 1:
        raise DomainError(f"gamma must lie in [0, 1], got {gamma}")
    if p < 2:
        raise DomainError("pre_scalar needs p >= 2")
    return InequalityReport(
        "pre", _two_branch(gamma, p), (1 + gamma ** (2 / p)) ** (p - 1), Direction.UPPER, tol, 2, p, 2 / p
    )


# -- scalar reductions ---------------------------------------------------------


def _range_check(val, lo, hi, name):
    slop = 1e-12 * max(abs(lo), abs(hi), 1.0)
    if not lo - slop <= val <= hi + slop:
        raise DomainError(f"{name}={val} outside [{lo}, {hi}]")
    return min(max(val, lo), hi)


def scalar_nf5(B: float, N: int, p: float, r: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """1 <= (1 + (N-1) Q^r)^(p-1) B with Q = N (1 - B^(1/(p-1)))^(p/2) / (N(N-1))^(p/2) / B.

    B = sum_j integral f_j^p for a normalized family, so N^(1-p) <= B <= 1.
    """
    direction = _regime(p)
    if r <= 0:
        raise DomainError("r must be positive")
    B = _range_check(B, N ** (1 - p), 1.0, "B")
    base = max(1 - B ** (1 / (p - 1)), 0.0) / (N * (N - 1))
    q = N * base ** (p / 2) / B
    rhs = (1 + (N - 1) * q**r) ** (p - 1) * B
    return InequalityReport("nf5", 1.0, rhs, direction, tol, N, p, r)


def nf5B_ratio(x, N: int, p: float):
    """(1 - Nx/(N-1))^(p/2) / (1 + Nx)^(p-1)."""
    x = np.asarray(x, dtype=float)
    return np.maximum(1 - N * x / (N - 1), 0.0) ** (p / 2) / (1 + N * x) ** (p - 1)


def nf5B_rhs(x, N: int, p: float, r: float):
    x = np.asarray(x, dtype=float)
    return (1 + (N - 1) * nf5B_ratio(x, N, p) ** r) * (1 + N * x)


def scalar_nf5B(x: float, N: int, p: float, r: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """N <= (1 + (N-1) ratio(x)^r)(1 + Nx), the reduced form after B = (1/N + x)^(p-1)."""
    direction = _regime(p)
    if r <= 0:
        raise DomainError("r must be positive")
    x = _range_check(x, 0.0, (N - 1) / N, "x")
    return InequalityReport("nf5B", float(N), float(nf5B_rhs(x, N, p, r)), direction, tol, N, p, r)


def scalar_final(x: float, N: int, tol: float = DEFAULT_TOL) -> InequalityReport:
    """1 + Nx <= (1 - Nx/(N-1))^(1-N) on 0 <= x < (N-1)/N."""
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    if not 0 <= x < (N - 1) / N:
        raise DomainError(f"x={x} outside [0, (N-1)/N)")
    rhs = (1 - N * x / (N - 1)) ** (1 - N)
    return InequalityReport("final", 1 + N * x, rhs, Direction.UPPER, tol, N, None, None)


def equivalence_nf5_nf5B(x: float, N: int, p: float, r: float, tol: float = DEFAULT_TOL) -> bool:
    """Check that the B-form and x-form agree under B = (1/N + x)^(p-1).

    Both verdicts must match and the right sides must satisfy
    rhs_B = (rhs_x / N)^(p-1).
    """
    rep_x = scalar_nf5B(x, N, p, r, tol)
    B = min((1 / N + min(max(x, 0.0), (N - 1) / N)) ** (p - 1), 1.0)
    rep_b = scalar_nf5(B, N, p, r, tol)
    mapped = (rep_x.rhs / N) ** (p - 1)
    close = abs(mapped - rep_b.rhs) <= 1e-12 * max(abs(mapped), abs(rep_b.rhs), 1.0)
    same_sign = (rep_x.slack >= 0) == (rep_b.slack >= 0) or max(abs(rep_x.slack), abs(rep_b.slack)) <= tol
    return bool(close and same_sign)

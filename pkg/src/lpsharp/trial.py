"""The symmetric extremal trial family and its K-function.

On [0, 1) split into N equal cells, f_j equals ``a`` on cell j and
(1 - a)/(N - 1) elsewhere.  Because every f_j is constant on cells, the family
is represented exactly on N atoms of mass 1/N.  Sum f_j = 1 identically; a = 1/N
makes all functions equal and a = 1 makes their supports disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measure import DomainError, FunctionFamily, MeasureSpace

__all__ = ["TrialConfig", "make_trial", "trial_closed_forms", "trial_gamma_tilde", "K_value", "taylor_coeffs"]


@dataclass(frozen=True)
class TrialConfig:
    N: int
    p: float
    a: float
    r: float

    def __post_init__(self):
        _check(self.N, self.a)
        if self.p <= 1:
            raise DomainError("trial configurations need p > 1")
        if self.r <= 0:
            raise DomainError("r must be positive")

    @property
    def t(self) -> float:
        """Offset from the all-equal point."""
        return self.a - 1 / self.N

    def K(self) -> float:
        return K_value(self.N, self.p, self.a, self.r)


def _check(N, a):
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N}")
    if np.any(np.asarray(a) < 0) or np.any(np.asarray(a) > 1):
        raise DomainError("a must lie in [0, 1]")


def make_trial(N: int, a: float) -> FunctionFamily:
    _check(N, a)
    values = np.full((N, N), (1 - a) / (N - 1))
    np.fill_diagonal(values, a)
    return FunctionFamily(MeasureSpace.uniform(N), values)


def trial_closed_forms(N: int, p: float, a):
    """(sum_j f_j^p, mean pair product, Gamma_p) for the trial family.

    Vectorized over ``a``.  All three are constant in the space variable.
    """
    _check(N, a)
    a = np.asarray(a, dtype=float)
    sum_fp = a**p + (N - 1) ** (1 - p) * (1 - a) ** p
    pair_mean = 1 / N**2 - (a - 1 / N) ** 2 / (N - 1) ** 2
    # exactly 0 at a = 1; clip rounding below zero
    pair_mean = np.maximum(pair_mean, 0.0)
    gamma = N * pair_mean ** (p / 2) / sum_fp
    if a.ndim == 0:
        return float(sum_fp), float(pair_mean), float(gamma)
    return sum_fp, pair_mean, gamma


def trial_gamma_tilde(N: int, p: float, a):
    """Pair-averaged overlap Gamma~_p of the trial family.

    Each pair product equals a*b on two cells and b^2 on the other N - 2, with
    b = (1 - a)/(N - 1).  For N >= 3 and p != 2 this is strictly different
    from Gamma_p except at a = 1/N and a = 1.
    """
    _check(N, a)
    a = np.asarray(a, dtype=float)
    b = (1 - a) / (N - 1)
    sum_fp = a**p + (N - 1) * b**p
    out = (2 * (a * b) ** (p / 2) + (N - 2) * b**p) / sum_fp
    return float(out) if out.ndim == 0 else out


def K_value(N: int, p: float, a, r: float):
    """(1 + (N-1) Gamma^r)^(p-1) sum f_j^p on the trial family.

    The interpolating bound with exponent r holds on this family iff K >= 1.
    """
    sum_fp, _, gamma = trial_closed_forms(N, p, a)
    out = (1 + (N - 1) * np.asarray(gamma) ** r) ** (p - 1) * sum_fp
    return float(out) if np.ndim(out) == 0 else out


def taylor_coeffs(N: int, p: float) -> tuple[float, float]:
    """t^2 and t^3 coefficients of N^(p-1) sum f_j^p around a = 1/N (t = a - 1/N).

    The cubic coefficient vanishes only at N = 2 (or p = 2).
    """
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    c2 = p * (p - 1) * N**2 / (2 * (N - 1))
    c3 = p * (p - 1) * (p - 2) * N**3 * (N - 2) / (6 * (N - 1) ** 2)
    return c2, c3

"""Closed-form exponents governing the sharpened inequality.

``r_main`` is the exponent for which the N-function bound is proved,
``r_tilde`` the local threshold coming from the symmetric trial family,
``r_limit`` their common large-N limit 1/(p-1), and ``nec_bound`` the
constraint obtained from the trial family at a = 0.
"""

from __future__ import annotations

from math import log

from .measure import DomainError

__all__ = ["r_main", "r_tilde", "r_limit", "nec_bound", "alpha_coeff", "exponent_row"]


def _check_n(N: int, least: int = 2) -> None:
    if int(N) != N or N < least:
        raise DomainError(f"N must be an integer >= {least}, got {N}")


def r_main(N: int, p: float) -> float:
    """2N / (2N + (p-2)(2N-1)); equals 1 at p = 2 for every N."""
    _check_n(N)
    den = 2 * N + (p - 2) * (2 * N - 1)
    if den <= 0:
        raise DomainError(f"r_main undefined for N={N}, p={p} (p <= 2 - 2N/(2N-1))")
    return 2 * N / den


def r_tilde(N: int, p: float) -> float:
    """N / (N + (p-2)(N-1)).  At N = 2 this is 2/p."""
    _check_n(N)
    den = N + (p - 2) * (N - 1)
    if den <= 0:
        raise DomainError(f"r_tilde undefined for N={N}, p={p}")
    return N / den


def r_limit(p: float) -> float:
    if p <= 1:
        raise DomainError("r_limit needs p > 1")
    return 1.0 / (p - 1)


def nec_bound(N: int, p: float) -> float:
    """Largest r for which K_{N,p}(0) >= 1.

    Only defined for N >= 3: at N = 2 the trial family is symmetric about
    a = 1/2 and K(0) = 1 for every r.
    """
    _check_n(N, 3)
    if p <= 2:
        raise DomainError("nec_bound needs p > 2")
    h = p / 2
    num = log(N - 1) - log(N - 2)
    den = (h - 1) * log(N) + log(N - 1) - h * log(N - 2)
    return num / den


def alpha_coeff(N: int, p: float) -> float:
    """Minus the x-derivative at x = 0 of (1 - Nx/(N-1))^(p/2) / (1 + Nx)^(p-1).

    Equal to N((p-2)(2N-1) + 2N) / (2(N-1)), so that N^2 / ((N-1) alpha)
    reproduces ``r_main``.  The widely reproduced "+3N" form of the bracket
    does not satisfy that identity.
    """
    _check_n(N)
    return N * ((p - 2) * (2 * N - 1) + 2 * N) / (2 * (N - 1))


def exponent_row(N: int, p: float) -> dict:
    """All exponents for one (N, p); undefined entries are None."""

    def safe(fn, *args):
        try:
            return fn(*args)
        except DomainError:
            return None

    return {
        "N": N,
        "p": p,
        "r_main": safe(r_main, N, p),
        "r_tilde": safe(r_tilde, N, p),
        "r_limit": safe(r_limit, p),
        "nec_bound": safe(nec_bound, N, p),
    }

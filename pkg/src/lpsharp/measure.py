"""Discrete measure spaces, L^p masses and the normalization reduction.

Every integral in this package is a finite weighted sum over atoms, so all
quantities are exact up to floating point.  ``lp_norm`` is defined for every
``p != 0``; for ``p < 1`` it is only a quasi-norm, and for ``p < 0`` the sum
runs over the support of the function.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "DomainError",
    "MeasureSpace",
    "FunctionFamily",
    "lp_mass",
    "lp_norm",
    "normalize_family",
    "parse_scenario",
    "load_scenario",
    "format_scenario",
]


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def _frozen(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float, ndmin=ndim)
    if arr.ndim != ndim:
        raise DomainError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """Finitely many atoms with strictly positive masses."""

    weights: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weights, 1, "weights")
        if w.size == 0:
            raise DomainError("a measure space needs at least one atom")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise DomainError("atom weights must be finite and > 0")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, m: int, total: float = 1.0) -> "MeasureSpace":
        return cls(np.full(m, total / m))

    @property
    def size(self) -> int:
        return self.weights.size

    def total_mass(self) -> float:
        return float(self.weights.sum())

    def integrate(self, f) -> float:
        return float(self.weights @ np.asarray(f, dtype=float))


@dataclass(frozen=True, eq=False)
class FunctionFamily:
    """N >= 2 non-negative functions sampled on a shared measure space.

    ``values[j, m]`` is the value of the j-th function at atom m.
    """

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values, 2, "values")
        if v.shape[0] < 2:
            raise DomainError(f"a family needs N >= 2 functions, got {v.shape[0]}")
        if v.shape[1] != self.space.size:
            raise DomainError(
                f"rows have {v.shape[1]} entries but the space has {self.space.size} atoms"
            )
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise DomainError("family values must be finite and non-negative")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_arrays(cls, weights, values) -> "FunctionFamily":
        return cls(MeasureSpace(weights), values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def weights(self) -> np.ndarray:
        return self.space.weights

    def total(self) -> np.ndarray:
        """Pointwise sum of the family."""
        return self.values.sum(axis=0)

    def scaled(self, c: float) -> "FunctionFamily":
        return FunctionFamily(self.space, c * self.values)

    def is_zero(self) -> bool:
        return not np.any(self.values > 0)


def _check_p(p: float) -> None:
    if p == 0 or not np.isfinite(p):
        raise DomainError("p must be a finite nonzero real")


def lp_mass(f, p: float, space: MeasureSpace) -> float:
    """Return the integral of |f|^p over ``space``.

    For ``p < 0`` only atoms where ``f > 0`` contribute; a function vanishing
    identically then has no support and is rejected.
    """
    _check_p(p)
    f = np.abs(np.asarray(f, dtype=float))
    if f.shape != space.weights.shape:
        raise DomainError(f"row has shape {f.shape}, space has {space.size} atoms")
    if p > 0:
        return float(space.weights @ f**p)
    support = f > 0
    if not np.any(support):
        raise DomainError("negative-exponent mass of the zero function is undefined")
    return float(space.weights[support] @ f[support] ** p)


def lp_norm(f, p: float, space: MeasureSpace) -> float:
    """(integral of |f|^p)^(1/p); a quasi-norm for p < 1."""
    return lp_mass(f, p, space) ** (1.0 / p)


def normalize_family(fam: FunctionFamily, p: float) -> FunctionFamily:
    """Reduce ``fam`` to the case of a probability space with sum f_j = 1.

    The new measure has density |sum f_j|^p / ||sum f_j||_p^p and each f_j is
    divided by the sum.  Atoms where the sum vanishes carry no new mass and are
    dropped.
    """
    _check_p(p)
    total = fam.total()
    keep = total > 0
    if not np.any(keep):
        raise DomainError("cannot normalize an identically zero family")
    s = total[keep]
    dens = fam.weights[keep] * s**p
    weights = dens / dens.sum()
    values = fam.values[:, keep] / s
    return FunctionFamily(MeasureSpace(weights), values)


def parse_scenario(text: str) -> tuple[FunctionFamily, float]:
    """Parse the plain-text scenario format.

    Layout: a header ``N M p``, one line of M weights, then N lines of M
    non-negative values, all whitespace separated.
    """
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise DomainError("empty scenario")
    header = lines[0]
    if len(header) != 3:
        raise DomainError("scenario header must be 'N M p'")
    try:
        n, m, p = int(header[0]), int(header[1]), float(header[2])
    except ValueError as exc:
        raise DomainError(f"bad scenario header: {' '.join(header)}") from exc
    body = lines[1:]
    if len(body) != n + 1:
        raise DomainError(f"expected {n + 1} data lines after the header, found {len(body)}")
    try:
        rows = [[float(tok) for tok in row] for row in body]
    except ValueError as exc:
        raise DomainError("scenario data must be decimal numbers") from exc
    if any(len(row) != m for row in rows):
        raise DomainError(f"every data line must have M = {m} entries")
    return FunctionFamily.from_arrays(rows[0], rows[1:]), p


def load_scenario(path) -> tuple[FunctionFamily, float]:
    return parse_scenario(Path(path).read_text())


def format_scenario(fam: FunctionFamily, p: float) -> str:
    def line(xs):
        return " ".join(repr(float(x)) for x in xs)

    out = [f"{fam.n} {fam.m} {p!r}", line(fam.weights)]
    out.extend(line(row) for row in fam.values)
    return "\n".join(out) + "\n"

"""Overlap functionals Gamma_p and its pair-averaged variant.

Both are 0 when the functions have pairwise disjoint supports and 1 when all
functions coincide.  For p > 2, Gamma_p <= Gamma~_p; for 0 < p < 2 the order
reverses.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .measure import DomainError, FunctionFamily

__all__ = ["pairwise_product_mean", "gamma_p", "gamma_tilde_p", "pair_sum"]


def pair_sum(values: np.ndarray) -> np.ndarray:
    """Sum of f_i * f_j over i < j along axis -2 of ``values`` (shape ... x N x M).

    Products are summed term by term; the shortcut (S^2 - sum f^2) / 2 cancels
    catastrophically for nearly disjoint families.
    """
    n = values.shape[-2]
    out = np.zeros(values.shape[:-2] + values.shape[-1:])
    for i in range(n - 1):
        out += values[..., i, :] * values[..., i + 1 :, :].sum(axis=-2)
    return out


def pairwise_product_mean(fam: FunctionFamily) -> np.ndarray:
    """Pointwise mean of |f_i f_j| over the C(N, 2) pairs i < j."""
    return pair_sum(fam.values) / comb(fam.n, 2)


def _check(fam: FunctionFamily, p: float) -> float:
    if not p > 0 or not np.isfinite(p):
        raise DomainError("overlap functionals are defined here for finite p > 0")
    masses = fam.values**p @ fam.weights
    denom = masses.mean()
    if denom <= 0:
        raise DomainError("overlap of an identically zero family is undefined")
    return denom


def gamma_p(fam: FunctionFamily, p: float) -> float:
    """||mean_{i<j} f_i f_j||_{p/2}^{p/2} divided by the mean of ||f_j||_p^p."""
    denom = _check(fam, p)
    num = fam.weights @ pairwise_product_mean(fam) ** (p / 2)
    return float(num / denom)


def gamma_tilde_p(fam: FunctionFamily, p: float) -> float:
    """Like ``gamma_p`` but averages the pair masses ||f_i f_j||_{p/2}^{p/2}."""
    denom = _check(fam, p)
    v = fam.values
    total = 0.0
    for i in range(fam.n - 1):
        total += float(((v[i] * v[i + 1 :]) ** (p / 2) @ fam.weights).sum())
    return total / comb(fam.n, 2) / denom

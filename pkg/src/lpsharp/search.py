"""Empirical recovery of sharp exponents and counterexample hunting.

``max_r_scalar`` and ``max_r_trial`` bisect on r.  Both predicates are
monotone in r because the quantity raised to the power r never exceeds 1.
``fuzz_main`` looks for violations of the N-function bound on random
discrete families, followed by a coordinate-wise descent on the slack.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import exponents
from .inequalities import Direction, main_report, main_sides, nf5B_rhs, signed_slack
from .measure import DomainError, FunctionFamily
from .trial import K_value

__all__ = ["SearchResult", "x_grid", "a_grid", "max_r_scalar", "max_r_trial", "fuzz_main"]

# admissible-side tolerance of the grid predicates (relative slack)
PREDICATE_TOL = 1e-12
MAX_ATOMS = 16


@dataclass
class SearchResult:
    target: str
    r_star: float
    certificate: dict
    slack: float
    iterations: int
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(d.pop("extra"))
        return d


def _bisect(holds, lo: float, hi: float, tol: float):
    """Largest r in [lo, hi] with holds(r), to within tol / 8."""
    if not holds(lo):
        raise RuntimeError(f"predicate already fails at the lower bracket r={lo}")
    if holds(hi):
        return hi, hi, 0
    steps = 0
    while hi - lo > tol / 8:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            lo = mid
        else:
            hi = mid
        steps += 1
    return lo, hi, steps


def x_grid(N: int, n: int = 1000) -> np.ndarray:
    """Points of [0, (N-1)/N]: uniform plus geometric refinement towards x = 0."""
    top = (N - 1) / N
    n_geo = n * 2 // 5
    pts = np.concatenate([np.linspace(0.0, top, n - n_geo), np.geomspace(1e-6, top, n_geo)])
    return np.unique(pts)


def a_grid(N: int, n: int = 1000) -> np.ndarray:
    """Points of [0, 1]: uniform plus geometric refinement around a = 1/N and a = 0."""
    c = 1 / N
    n_geo = n // 8
    offs = np.geomspace(1e-6, 1.0, n_geo)
    pts = np.concatenate([np.linspace(0.0, 1.0, n - 3 * n_geo), c + offs, c - offs, offs])
    return np.unique(np.clip(pts, 0.0, 1.0))


def _nf5B_slack(x, N, p, r):
    return signed_slack(float(N), nf5B_rhs(x, N, p, r), Direction.UPPER)


def _trial_slack(a, N, p, r):
    return signed_slack(1.0, K_value(N, p, a, r), Direction.UPPER)


def _grid_search(target, slack_fn, grid, N, p, tol, point_name):
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    if p <= 2:
        raise DomainError("exponent search is for p > 2")
    if tol <= 0:
        raise DomainError("tol must be positive")

    def holds(r):
        return bool(np.all(slack_fn(grid, N, p, r) >= -PREDICATE_TOL))

    lo = exponents.r_limit(p)
    r_star, r_fail, steps = _bisect(holds, lo, 2.0, tol)
    probe = r_star + tol
    s = slack_fn(grid, N, p, probe)
    worst = int(np.argmin(s))
    bad = grid[s < -PREDICATE_TOL]
    cert = {
        point_name: float(grid[worst]),
        "r": probe,
        "slack": float(s[worst]),
        "violations": int(bad.size),
        f"first_violation_{point_name}": float(bad.min()) if bad.size else None,
        f"last_violation_{point_name}": float(bad.max()) if bad.size else None,
    }
    return SearchResult(
        target=target,
        r_star=r_star,
        certificate=cert,
        slack=float(s[worst]),
        iterations=steps,
        extra={"N": N, "p": p, "tol": tol, "r_fail": r_fail},
    )


def max_r_scalar(N: int, p: float, tol: float = 1e-3, n_points: int = 1000) -> SearchResult:
    """Largest r for which the reduced single-variable form holds on a grid.

    The certificate is evaluated at r_star + tol and records the worst grid
    point together with the smallest violating x.
    """
    return _grid_search("nf5B", _nf5B_slack, x_grid(N, n_points), N, p, tol, "x")


def max_r_trial(N: int, p: float, tol: float = 1e-3, n_points: int = 1000) -> SearchResult:
    """Largest r with K_{N,p}(a) >= 1 over an a-grid.

    This bounds from above the best exponent for the interpolating inequality.
    """
    return _grid_search("trial", _trial_slack, a_grid(N, n_points), N, p, tol, "a")


# -- fuzzing -------------------------------------------------------------------

_KINDS = ("dense", "heavy", "sparse", "disjoint", "near_equal", "one_dominant")


def _sample_batch(rng: np.random.Generator, size: int, N: int):
    """Random families padded to MAX_ATOMS atoms; padded atoms hold zeros."""
    M = rng.integers(2, MAX_ATOMS + 1, size=size)
    kind = rng.integers(0, len(_KINDS), size=size)
    shape = (size, N, MAX_ATOMS)
    dense = rng.random(shape)
    heavy = rng.lognormal(0.0, 2.0, shape)
    sparse = rng.random(shape) * (rng.random(shape) < 0.35)
    owner = rng.integers(0, N, size=(size, 1, MAX_ATOMS))
    disjoint = (np.arange(N)[None, :, None] == owner) * rng.random(shape)
    leak = rng.random((size, 1, 1)) < 0.3
    disjoint = disjoint + leak * 1e-4 * rng.random(shape)
    noise = np.geomspace(1e-8, 1e-1, 8)[rng.integers(0, 8, size=(size, 1, 1))]
    common = rng.random((size, 1, MAX_ATOMS))
    near_equal = common * (1 + noise * rng.standard_normal(shape)).clip(min=0)
    dominant = rng.random(shape) * 1e-3
    dominant[:, 0, :] += rng.random((size, MAX_ATOMS))

    values = np.choose(kind[:, None, None], [dense, heavy, sparse, disjoint, near_equal, dominant])
    pad = np.arange(MAX_ATOMS)[None, :] >= M[:, None]
    values = np.where(pad[:, None, :], 0.0, values)
    empty = ~np.any(values > 0, axis=(1, 2))
    values[empty, 0, 0] = 1.0
    weights = np.where(rng.random((size, 1)) < 0.5, rng.uniform(0.05, 1.0, (size, MAX_ATOMS)),
                       rng.lognormal(0.0, 1.5, (size, MAX_ATOMS)))
    return values, weights


def _direction(p):
    if p > 2:
        return Direction.UPPER
    if 1 < p < 2:
        return Direction.LOWER
    if p == 2:
        return Direction.IDENTITY
    raise DomainError("fuzzing needs p > 1")


def _batch_slack(values, weights, p, r, direction):
    lhs, rhs = main_sides(values, weights, p, r)
    s = signed_slack(lhs, rhs, direction)
    return np.where(np.isfinite(s), s, np.inf)


def _descend(values, weights, p, r, direction, steps):
    """Greedy coordinate-wise perturbation descent on the slack of one family."""
    v, w = values.copy(), weights.copy()
    best = float(_batch_slack(v[None], w[None], p, r, direction)[0])
    step = 0.5
    nv = v.size
    for _ in range(steps):
        if step < 1e-4:
            break
        fac = np.exp(np.array([step, -step]))
        cand_v = np.repeat(v[None], 3 * nv, axis=0).reshape(3 * nv, -1)
        idx = np.arange(nv)
        cand_v[idx, idx] *= fac[0]
        cand_v[nv + idx, idx] *= fac[1]
        cand_v[2 * nv + idx, idx] = 0.0
        cand_v = cand_v.reshape((3 * nv,) + v.shape)
        cand_w = np.repeat(w[None], 3 * nv, axis=0)
        m = w.size
        wv = np.repeat(v[None], 2 * m, axis=0)
        ww = np.repeat(w[None], 2 * m, axis=0)
        ww[np.arange(m), np.arange(m)] *= fac[0]
        ww[m + np.arange(m), np.arange(m)] *= fac[1]
        all_v = np.concatenate([cand_v, wv])
        all_w = np.concatenate([cand_w, ww])
        s = _batch_slack(all_v, all_w, p, r, direction)
        k = int(np.argmin(s))
        if s[k] < best:
            best = float(s[k])
            v, w = all_v[k], all_w[k]
        else:
            step /= 2
    return v, w, best


def _fuzz_batch(seed, batch, size, N, p, r, direction, polish, descent_steps):
    rng = np.random.default_rng([seed, batch])
    values, weights = _sample_batch(rng, size, N)
    s = _batch_slack(values, weights, p, r, direction)
    order = np.argsort(s, kind="stable")[:polish]
    best = (float(s[order[0]]), values[order[0]], weights[order[0]])
    for k in order:
        v, w, sk = _descend(values[k], weights[k], p, r, direction, descent_steps)
        if sk < best[0]:
            best = (sk, v, w)
    return best


def fuzz_main(
    N: int,
    p: float,
    r: float | None = None,
    seed: int = 0,
    iters: int = 10_000,
    batch_size: int = 1000,
    polish: int = 2,
    descent_steps: int = 25,
    workers: int = 1,
) -> SearchResult:
    """Search random families for the smallest slack of the N-function bound.

    Each batch draws from its own stream seeded by (seed, batch index), so
    results do not depend on ``workers``.  Batches are merged by minimum slack,
    ties going to the lowest batch index.  The returned slack is re-evaluated
    on the certificate family with ``main_report``.
    """
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    if iters < 1:
        raise DomainError("iters must be >= 1")
    direction = _direction(p)
    if r is None:
        r = exponents.r_main(N, p)
    sizes = [min(batch_size, iters - start) for start in range(0, iters, batch_size)]
    jobs = [(seed, b, size, N, p, r, direction, polish, descent_steps) for b, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda a: _fuzz_batch(*a), jobs))
    else:
        results = [_fuzz_batch(*a) for a in jobs]
    b = min(range(len(results)), key=lambda i: (results[i][0], i))
    _, v, w = results[b]
    keep = np.any(v > 0, axis=0)
    fam = FunctionFamily.from_arrays(w[keep], v[:, keep])
    rep = main_report(fam, p, r)
    cert = {
        "weights": fam.weights.tolist(),
        "values": fam.values.tolist(),
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "direction": str(rep.direction),
        "batch": b,
    }
    return SearchResult(
        target="main",
        r_star=r,
        certificate=cert,
        slack=rep.slack,
        iterations=iters,
        seed=seed,
        extra={"N": N, "p": p},
    )

"""Dense real state-vector simulation of the Grover forgery search over the
curve-class index space.

The oracle is a +-1 phase flip and the start state is real, so amplitudes
stay real throughout.  The marked set is computed once per search from the
forgery predicate; iteration planning uses the exact target count when
available, or the class-number lower bound otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import classnum, curves, forgery
from .curves import NonResidueTable
from .fp_arith import FpContext
from .forgery import OracleConfig, SerialNumber


class NoTarget(ValueError):
    """The serial number marks no class at all."""


def init_uniform(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one basis state")
    return np.full(n, 1.0 / math.sqrt(n))


def apply_oracle(v: np.ndarray, marked) -> np.ndarray:
    idx = np.asarray(sorted(marked), dtype=np.int64) if not isinstance(marked, np.ndarray) else marked
    if idx.size and (idx.min() < 0 or idx.max() >= v.size):
        raise IndexError("marked index outside the amplitude space")
    out = v.copy()
    out[idx] = -out[idx]
    return out


def diffuse(v: np.ndarray) -> np.ndarray:
    return 2.0 * v.mean() - v


def grover_success(n: int, m: int, k: int) -> float:
    """Closed form sin^2((2k+1) asin(sqrt(M/N)))."""
    theta = math.asin(math.sqrt(m / n))
    return math.sin((2 * k + 1) * theta) ** 2


@dataclass(frozen=True)
class SearchPlan:
    N: int
    M: float  # exact count, or the estimate the plan was based on
    iterations: int
    basis: str  # "exact_M" | "class_number_bounds"
    iteration_sandwich: tuple[float, float] | None = None
    paper_iterations: float | None = None  # sqrt(2p/h), no pi/4 factor


def optimal_iterations(n: int, m: float) -> int:
    """floor(pi/4 sqrt(N/M)), minimum 1 when M < N, 0 when M = N."""
    if m >= n:
        return 0
    return max(1, math.floor(math.pi / 4 * math.sqrt(n / m)))


def plan_iterations(
    ctx: FpContext,
    s: SerialNumber,
    h: int | None = None,
    bounds: classnum.ClassNumberReport | None = None,
) -> SearchPlan:
    """Iteration plan over the full (j, b) class space.

    With the exact marked count h the plan is the rounded Grover optimum.
    With bounds only, h is replaced by its lower bound (clamped to 1 target),
    which is conservative: fewer assumed targets, more iterations.
    """
    n = curves.class_count(ctx)
    if bounds is None:
        bounds = classnum.class_number_report(ctx.p, s.sigma, with_exact=False)
    sandwich = (bounds.iteration_lower, bounds.iteration_upper)
    if h is not None:
        if h == 0:
            raise NoTarget(f"sigma={s.sigma} marks no class over F_{ctx.p}")
        paper = math.sqrt(2 * ctx.p / h)
        return SearchPlan(n, h, optimal_iterations(n, h), "exact_M", sandwich, paper)
    m_est = max(bounds.tatuzawa_lower, 1.0)
    paper = math.sqrt(2 * ctx.p / m_est)
    return SearchPlan(n, m_est, optimal_iterations(n, m_est),
                      "class_number_bounds", sandwich, paper)


@dataclass
class SearchResult:
    success_probability: float
    marked_indices: np.ndarray
    conditional_distribution: np.ndarray  # over marked indices, in order
    sample_index: int
    sample_class: curves.CurveClass
    iterations: int


def run_search(
    ctx: FpContext,
    s: SerialNumber,
    plan: SearchPlan,
    cfg: OracleConfig,
    seed: int = 0,
    nr: NonResidueTable | None = None,
    classes: list[curves.CurveClass] | None = None,
    marked: np.ndarray | None = None,
) -> SearchResult:
    """Run plan.iterations rounds of oracle + diffusion and measure once."""
    nr = nr if nr is not None else NonResidueTable.for_prime(ctx)
    classes = classes if classes is not None else curves.enumerate_classes(ctx)
    if marked is None:
        marked = forgery.batch_marked(ctx, classes, s, cfg, nr)
    marked = np.asarray(marked, dtype=bool)
    if marked.size != len(classes):
        raise ValueError("marked mask size mismatch")
    if not marked.any():
        raise NoTarget(f"sigma={s.sigma} marks no class over F_{ctx.p}")
    idx = np.flatnonzero(marked)
    v = init_uniform(len(classes))
    for _ in range(plan.iterations):
        v = apply_oracle(v, idx)
        v = diffuse(v)
    mass = v[idx] ** 2
    success = float(mass.sum())
    conditional = mass / mass.sum()
    rng = np.random.default_rng(np.uint64(seed))
    probs = v**2
    sample = int(rng.choice(len(v), p=probs / probs.sum()))
    return SearchResult(
        success_probability=success,
        marked_indices=idx,
        conditional_distribution=conditional,
        sample_index=sample,
        sample_class=classes[sample],
        iterations=plan.iterations,
    )

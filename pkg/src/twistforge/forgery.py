"""The attack predicate: G, the tau-fold aggregate F, and the decision
version of the search oracle over (j, b) classes.

G checks annihilation of the point above x by sigma on the curve itself when
x^3+Ax+B is a square, and by 2p+2-sigma on the quadratic twist otherwise.
F scans x = 0, 1, ..., tau-1; in strict_or mode a single nonzero G settles
the answer, in paper_sum mode the field sum of all tau terms is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import curves
from .curves import CurveClass, NonResidueTable, WeierstrassCurve
from .divpoly import BatchAmbient, eval_division_poly
from .fp_arith import FpContext, MultCounter, Residue

MODES = ("paper_sum", "strict_or")


class InvalidSerial(ValueError):
    """sigma outside the punctured Hasse band 0 < |sigma - p - 1| <= 2 sqrt(p)."""


@dataclass(frozen=True)
class SerialNumber:
    sigma: int
    p: int

    def __post_init__(self):
        t = self.sigma - self.p - 1
        if t == 0:
            raise InvalidSerial(f"sigma = p+1 = {self.sigma} is excluded")
        if t * t > 4 * self.p:
            raise InvalidSerial(
                f"sigma={self.sigma} outside the Hasse band around p+1={self.p + 1}"
            )

    @property
    def trace(self) -> int:
        return self.sigma - self.p - 1

    @property
    def twist_sigma(self) -> int:
        return 2 * self.p + 2 - self.sigma


def default_tau(p: int) -> int:
    return 3 * math.ceil(math.log2(p))


@dataclass(frozen=True)
class OracleConfig:
    tau: int
    mode: str = "strict_or"

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    @classmethod
    def for_prime(cls, p: int, mode: str = "strict_or", tau: int | None = None) -> "OracleConfig":
        return cls(tau if tau is not None else default_tau(p), mode)


def G(ctx: FpContext, E: WeierstrassCurve, x: int, s: SerialNumber,
      ctr: MultCounter) -> int:
    """The single-x annihilation probe; 0 means 'consistent with sigma'."""
    p = ctx.p
    x %= p
    w = (x * x % p * x + E.A * x + E.B) % p
    kind = ctx.euler_criterion(w, ctr)
    if kind is Residue.ZERO:
        # (x, 0) has order 2; sigma and 2p+2-sigma share parity.
        return 0 if s.sigma % 2 == 0 else 1
    ell = s.sigma if kind is Residue.RESIDUE else s.twist_sigma
    return eval_division_poly(ctx, E, x, ell, ctr).c


def F(ctx: FpContext, E: WeierstrassCurve, s: SerialNumber, cfg: OracleConfig,
      ctr: MultCounter, start_x: int = 0) -> int:
    """Aggregate of G over start_x .. start_x+tau-1.

    strict_or returns 0 iff every term vanishes (short-circuiting on the
    first nonzero term); paper_sum returns the field sum of all tau terms,
    mirroring the register accumulation of the quantum circuit.
    """
    if cfg.mode == "strict_or":
        for i in range(cfg.tau):
            if G(ctx, E, start_x + i, s, ctr) != 0:
                return 1
        return 0
    total = 0
    for i in range(cfg.tau):
        total = (total + G(ctx, E, start_x + i, s, ctr)) % ctx.p
    return total


def oracle_predicate(ctx: FpContext, c: CurveClass, s: SerialNumber,
                     cfg: OracleConfig, nr: NonResidueTable,
                     ctr: MultCounter | None = None) -> int:
    """1 iff the class would have its phase flipped (F vanishes)."""
    ctr = ctr if ctr is not None else MultCounter()
    E = curves.get_weierstrass_pair(ctx, c, nr, ctr)
    return 1 if F(ctx, E, s, cfg, ctr) == 0 else 0


# ---------------------------------------------------------------------------
# Vectorized sweeps over many classes at once.
# ---------------------------------------------------------------------------


def _batch_G_zero(ctx: FpContext, A: np.ndarray, B: np.ndarray, x: int,
                  s: SerialNumber) -> np.ndarray:
    """Boolean array: G(A_i, B_i, x) == 0, vectorized."""
    p = ctx.p
    xv = np.full(A.shape, x % p, dtype=np.int64)
    w = (xv * xv % p * xv + A * xv + B) % p
    sq = curves.squares_table(ctx)
    zero_w = w == 0
    residue = sq[w] & ~zero_w
    nonres = ~sq[w]
    out = np.zeros(A.shape, dtype=bool)
    out[zero_w] = s.sigma % 2 == 0
    for mask, ell in ((residue, s.sigma), (nonres, s.twist_sigma)):
        if mask.any():
            amb = BatchAmbient(ctx, A[mask], B[mask], xv[mask])
            out[mask] = amb.eval(ell) == 0
    return out


def batch_marked(ctx: FpContext, classes: list[CurveClass], s: SerialNumber,
                 cfg: OracleConfig, nr: NonResidueTable) -> np.ndarray:
    """oracle_predicate over a class list, as a boolean numpy array.

    Agrees with the scalar predicate on every input (tested); the vector
    route only changes the cost profile, not the decision.
    """
    A = np.empty(len(classes), dtype=np.int64)
    B = np.empty(len(classes), dtype=np.int64)
    for i, c in enumerate(classes):
        E = curves.get_weierstrass_pair(ctx, c, nr)
        A[i], B[i] = E.A, E.B
    if cfg.mode == "paper_sum":
        return _batch_paper_sum(ctx, A, B, s, cfg) == 0
    alive = np.arange(len(classes))
    for x in range(cfg.tau):
        if alive.size == 0:
            break
        ok = _batch_G_zero(ctx, A[alive], B[alive], x, s)
        alive = alive[ok]
    marked = np.zeros(len(classes), dtype=bool)
    marked[alive] = True
    return marked


def _batch_paper_sum(ctx: FpContext, A: np.ndarray, B: np.ndarray,
                     s: SerialNumber, cfg: OracleConfig) -> np.ndarray:
    p = ctx.p
    total = np.zeros(A.shape, dtype=np.int64)
    sq = curves.squares_table(ctx)
    for x in range(cfg.tau):
        xv = np.full(A.shape, x % p, dtype=np.int64)
        w = (xv * xv % p * xv + A * xv + B) % p
        g = np.zeros(A.shape, dtype=np.int64)
        zero_w = w == 0
        g[zero_w] = 0 if s.sigma % 2 == 0 else 1
        residue = sq[w] & ~zero_w
        nonres = ~sq[w]
        for mask, ell in ((residue, s.sigma), (nonres, s.twist_sigma)):
            if mask.any():
                amb = BatchAmbient(ctx, A[mask], B[mask], xv[mask])
                g[mask] = amb.eval(ell)
        total = (total + g) % p
    return total


def g_zero_fraction(ctx: FpContext, E: WeierstrassCurve, s: SerialNumber) -> float:
    """Exact fraction of x in F_p with G(A, B, x) = 0 (vectorized over x)."""
    p = ctx.p
    A = np.full(p, E.A, dtype=np.int64)
    B = np.full(p, E.B, dtype=np.int64)
    x = np.arange(p, dtype=np.int64)
    w = (x * x % p * x + A * x + B) % p
    sq = curves.squares_table(ctx)
    zero_w = w == 0
    residue = sq[w] & ~zero_w
    nonres = ~sq[w]
    zeros = np.zeros(p, dtype=bool)
    zeros[zero_w] = s.sigma % 2 == 0
    for mask, ell in ((residue, s.sigma), (nonres, s.twist_sigma)):
        if mask.any():
            amb = BatchAmbient(ctx, A[mask], B[mask], x[mask])
            zeros[mask] = amb.eval(ell) == 0
    return float(zeros.sum()) / p


def per_x_zero_bound(p: int) -> float:
    """Corollary bound on the per-x G-zero probability for a non-target:
    3/4 plus the explicit slack (p+1+2 sqrt p)/(4p+4) - 1/4."""
    return 0.5 + (p + 1 + 2 * math.sqrt(p)) / (4 * p + 4)


@dataclass
class FalsePositiveRow:
    tau: int
    rate: float
    bound: float
    zero_curves: int = 0
    total_curves: int = 0
    witnesses: list = field(default_factory=list)


def false_positive_experiment(
    ctx: FpContext,
    s: SerialNumber,
    tau_range: list[int],
    trials: int,
    seed: int = 0,
    mode: str = "strict_or",
) -> list[FalsePositiveRow]:
    """Measured F = 0 rates among non-target classes with random start x.

    trials <= 0 means 'all non-target classes, start x = 0' (exhaustive).
    tau = 0 rows report rate 1 by convention (empty conjunction).
    """
    import random

    nr = NonResidueTable.for_prime(ctx)
    classes = curves.enumerate_classes(ctx)
    pairs = [(c, curves.get_weierstrass_pair(ctx, c, nr)) for c in classes]
    cards = curves.count_points_batch(
        ctx,
        np.array([E.A for _, E in pairs], dtype=np.int64),
        np.array([E.B for _, E in pairs], dtype=np.int64),
    )
    nontargets = [(c, E) for (c, E), n in zip(pairs, cards) if n != s.sigma]
    rng = random.Random(seed)
    rows = []
    for tau in tau_range:
        if tau == 0:
            rows.append(FalsePositiveRow(0, 1.0, 1.0, len(nontargets), len(nontargets)))
            continue
        cfg = OracleConfig(tau, mode)
        if trials <= 0:
            sample = [(c, E, 0) for c, E in nontargets]
        else:
            sample = [
                (*nontargets[rng.randrange(len(nontargets))], rng.randrange(ctx.p))
                for _ in range(trials)
            ]
        zeros = 0
        witnesses = []
        for c, E, x0 in sample:
            if F(ctx, E, s, cfg, MultCounter(), start_x=x0) == 0:
                zeros += 1
                witnesses.append((ctx.p, s.sigma, c.j, c.b, x0))
        rows.append(FalsePositiveRow(
            tau, zeros / len(sample), per_x_zero_bound(ctx.p) ** tau,
            zeros, len(sample), witnesses,
        ))
    return rows

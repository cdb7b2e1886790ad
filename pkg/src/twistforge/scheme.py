"""Desk-scale classical analogue of the quantum money scheme.

A banknote's "uniform superposition" is represented extensionally as the
support set of classes sharing the serial cardinality.  Minting samples a
class uniformly (so serials appear in proportion to their class counts,
mirroring the measurement statistics) and retries until the Frobenius
discriminant is square-free and exceeds 3p.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import numpy as np

from . import classnum, curves, forgery, grover
from .curves import CurveClass, CurveTableRow, NonResidueTable
from .fp_arith import FpContext, MultCounter
from .forgery import OracleConfig, SerialNumber


class Exhausted(RuntimeError):
    """No acceptable serial was found within the retry cap."""


@dataclass(frozen=True)
class Banknote:
    p: int
    serial: SerialNumber
    support: tuple[CurveClass, ...]


def _cardinalities(ctx: FpContext, table: list[CurveTableRow] | None):
    if table is None:
        table = curves.build_curve_table(ctx, with_structure=False)
    classes = [CurveClass(r.j, r.b) for r in table]
    cards = np.array([r.cardinality for r in table], dtype=np.int64)
    return classes, cards


def mint(
    ctx: FpContext,
    seed: int,
    table: list[CurveTableRow] | None = None,
) -> Banknote:
    """Sample classes until the Frobenius-discriminant predicate accepts."""
    classes, cards = _cardinalities(ctx, table)
    rng = random.Random(seed)
    for _ in range(10 * len(classes)):
        i = rng.randrange(len(classes))
        sigma = int(cards[i])
        if sigma == ctx.p + 1:
            continue
        if classnum.frobenius_discriminant(ctx.p, sigma).accepted:
            support = tuple(c for c, n in zip(classes, cards) if n == sigma)
            return Banknote(ctx.p, SerialNumber(sigma, ctx.p), support)
    raise Exhausted(f"no acceptable sigma over F_{ctx.p} within the draw cap")


def check_serial(
    ctx: FpContext,
    c: CurveClass,
    s: SerialNumber,
    cfg: OracleConfig,
    nr: NonResidueTable | None = None,
    ctr: MultCounter | None = None,
) -> int:
    """CheckSerialNumber: 1 iff F vanishes on the class.

    Extensionally identical to the forgery oracle's decision: verifying a
    serial and recognizing a forgery target are the same predicate.
    """
    nr = nr if nr is not None else NonResidueTable.for_prime(ctx)
    return forgery.oracle_predicate(ctx, c, s, cfg, nr, ctr)


@dataclass
class ForgeResult:
    banknote: Banknote
    success_probability: float
    oracle_queries: int
    sample: CurveClass
    sample_passes: bool


def forge(
    ctx: FpContext,
    s: SerialNumber,
    cfg: OracleConfig,
    seed: int = 0,
    use_exact_m: bool = True,
) -> ForgeResult:
    """End-to-end attack: plan, search, sample, re-verify, rebuild support."""
    nr = NonResidueTable.for_prime(ctx)
    classes = curves.enumerate_classes(ctx)
    marked = forgery.batch_marked(ctx, classes, s, cfg, nr)
    m = int(marked.sum())
    if m == 0:
        raise grover.NoTarget(f"sigma={s.sigma} marks no class over F_{ctx.p}")
    plan = grover.plan_iterations(ctx, s, h=m if use_exact_m else None)
    result = grover.run_search(ctx, s, plan, cfg, seed=seed, nr=nr,
                               classes=classes, marked=marked)
    sample = result.sample_class
    passes = check_serial(ctx, sample, s, cfg, nr) == 1
    support = tuple(c for c, hit in zip(classes, marked) if hit)
    note = Banknote(ctx.p, s, support)
    return ForgeResult(note, result.success_probability, plan.iterations,
                       sample, passes)


def banknote_to_json(note: Banknote) -> str:
    """JSON wire format {p, sigma, support:[{j,b}...]}, decimal strings."""
    return json.dumps({
        "p": str(note.p),
        "sigma": str(note.serial.sigma),
        "support": [{"j": str(c.j), "b": str(c.b)} for c in note.support],
    })


def banknote_from_json(text: str) -> Banknote:
    obj = json.loads(text)
    p = int(obj["p"])
    sigma = int(obj["sigma"])
    support = tuple(CurveClass(int(e["j"]), int(e["b"])) for e in obj["support"])
    return Banknote(p, SerialNumber(sigma, p), support)

"""Elliptic-curve classes over F_p.

(j,b) class enumeration, conversion to short Weierstrass form, affine point
arithmetic, quadratic twists, and exhaustive ground-truth point counting.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .fp_arith import FpContext, MultCounter, Residue

# An affine point (x, y); None is the point at infinity.
CurvePoint = Optional[tuple[int, int]]
INFINITY: CurvePoint = None


class InvalidClass(ValueError):
    """(j, b) outside the legal b-range."""


class SingularCurve(ValueError):
    """4A^3 + 27B^2 == 0."""


class NotANonResidue(ValueError):
    """Twist parameter is a square (or zero)."""


@dataclass(frozen=True)
class CurveClass:
    j: int
    b: int


@dataclass(frozen=True)
class WeierstrassCurve:
    A: int
    B: int


def make_curve(ctx: FpContext, A: int, B: int) -> WeierstrassCurve:
    A %= ctx.p
    B %= ctx.p
    if (4 * A * A % ctx.p * A + 27 * B * B) % ctx.p == 0:
        raise SingularCurve(f"4A^3+27B^2 = 0 for (A,B)=({A},{B}) mod {ctx.p}")
    return WeierstrassCurve(A, B)


def squares_table(ctx: FpContext) -> np.ndarray:
    """Boolean table: squares_table(ctx)[v] iff v is a square mod p (0 included)."""
    return _squares_table(ctx.p)


@lru_cache(maxsize=32)
def _squares_table(p: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64)
    tbl = np.zeros(p, dtype=bool)
    tbl[x * x % p] = True
    return tbl


@lru_cache(maxsize=32)
def _cubes_table(p: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64)
    tbl = np.zeros(p, dtype=bool)
    tbl[x * x % p * x % p] = True
    return tbl


@lru_cache(maxsize=32)
def _fourth_table(p: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64)
    x4 = x * x % p
    x4 = x4 * x4 % p
    tbl = np.zeros(p, dtype=bool)
    tbl[x4] = True
    return tbl


@lru_cache(maxsize=32)
def _sixth_table(p: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64)
    x2 = x * x % p
    x6 = x2 * x2 % p * x2 % p
    tbl = np.zeros(p, dtype=bool)
    tbl[x6] = True
    return tbl


class NonResidueTable:
    """The twist parameters alpha_2 (quadratic), alpha_4, alpha_6 for a prime.

    alpha_4 / alpha_6 are the smallest elements generating F_p*/(F_p*)^4
    resp. F_p*/(F_p*)^6 when those quotients are nontrivial (p = 1 mod 4 /
    mod 3); otherwise they fall back to the quadratic nonresidue.  A
    generator is in particular a quartic / sextic nonresidue, which is
    verified exhaustively at construction.
    """

    __slots__ = ("alpha2", "alpha4", "alpha6")

    def __init__(self, alpha2: int, alpha4: int, alpha6: int):
        self.alpha2 = alpha2
        self.alpha4 = alpha4
        self.alpha6 = alpha6

    @classmethod
    def for_prime(cls, ctx: FpContext) -> "NonResidueTable":
        p = ctx.p
        sq = _squares_table(p)
        alpha2 = next(a for a in range(2, p) if not sq[a])
        if p % 4 == 1:
            # A nonsquare generates the order-4 quotient F_p*/(F_p*)^4.
            alpha4 = alpha2
            assert not _fourth_table(p)[alpha4]
        else:
            alpha4 = alpha2
        if p % 3 == 1:
            cubes = _cubes_table(p)
            alpha6 = next(a for a in range(2, p) if not sq[a] and not cubes[a])
            assert not _sixth_table(p)[alpha6]
        else:
            alpha6 = alpha2
        return cls(alpha2, alpha4, alpha6)


def b_range(ctx: FpContext, j: int) -> int:
    """Number of legal b values at a given j."""
    p = ctx.p
    if j % p == 1728 % p and p % 4 == 1:
        return 4
    if j % p == 0 and p % 3 == 1:
        return 6
    return 2


def class_count(ctx: FpContext) -> int:
    """Total number of (j, b) classes over F_p."""
    n = 2 * ctx.p
    if ctx.p % 4 == 1:
        n += 2
    if ctx.p % 3 == 1:
        n += 4
    return n


def enumerate_classes(ctx: FpContext) -> list[CurveClass]:
    """Every legal (j, b) exactly once, in lexicographic order."""
    out = []
    for j in range(ctx.p):
        for b in range(b_range(ctx, j)):
            out.append(CurveClass(j, b))
    return out


def get_weierstrass_pair(
    ctx: FpContext,
    c: CurveClass,
    nr: NonResidueTable,
    ctr: MultCounter | None = None,
) -> WeierstrassCurve:
    """Recover the (A, B) realization of the class (j, b)."""
    p = ctx.p
    ctr = ctr if ctr is not None else MultCounter()
    j = c.j % p
    if not (0 <= c.b < b_range(ctx, j)):
        raise InvalidClass(f"b={c.b} out of range for j={j} mod {p}")
    if j == 0:
        return WeierstrassCurve(0, ctx.pow(nr.alpha6, c.b, ctr))
    if j == 1728 % p:
        return WeierstrassCurve(ctx.pow(nr.alpha4, c.b, ctr), 0)
    denom = ctx.inv((1728 - j) % p)
    a2b = ctx.pow(nr.alpha2, 2 * c.b, ctr)
    a3b = ctx.pow(nr.alpha2, 3 * c.b, ctr)
    A = 3 * j * a2b % p * denom % p
    B = 2 * j * a3b % p * denom % p
    ctr.tick(6)  # 3j*a2b, *denom, 2j*a3b, *denom and the j products
    return WeierstrassCurve(A, B)


def j_invariant(ctx: FpContext, E: WeierstrassCurve) -> int:
    p = ctx.p
    a3 = 4 * pow(E.A, 3, p) % p
    disc = (a3 + 27 * E.B * E.B) % p
    if disc == 0:
        raise SingularCurve("singular curve has no j-invariant")
    return 1728 * a3 % p * ctx.inv(disc) % p


def chi(ctx: FpContext, v: int) -> int:
    """Quadratic character with chi(0) = 0, via the cached squares table."""
    v %= ctx.p
    if v == 0:
        return 0
    return 1 if _squares_table(ctx.p)[v] else -1


def count_points(ctx: FpContext, E: WeierstrassCurve) -> int:
    """#E(F_p) by the character sum 1 + sum_x (1 + chi(x^3+Ax+B))."""
    p = ctx.p
    x = np.arange(p, dtype=np.int64)
    w = (x * x % p * x + E.A * x + E.B) % p
    sq = _squares_table(p)
    ch = np.where(w == 0, 0, np.where(sq[w], 1, -1))
    return int(p + 1 + ch.sum())


def count_points_batch(ctx: FpContext, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Cardinalities for many curves at once; A, B are int64 arrays."""
    p = ctx.p
    x = np.arange(p, dtype=np.int64)
    x3 = x * x % p * x % p
    sq = _squares_table(p)
    w = (x3[:, None] + A[None, :] * x[:, None] + B[None, :]) % p
    ch = np.where(w == 0, 0, np.where(sq[w], 1, -1))
    return (p + 1 + ch.sum(axis=0)).astype(np.int64)


def point_neg(ctx: FpContext, P: CurvePoint) -> CurvePoint:
    if P is None:
        return None
    return (P[0], (-P[1]) % ctx.p)


def point_add(ctx: FpContext, P: CurvePoint, Q: CurvePoint, E: WeierstrassCurve) -> CurvePoint:
    if P is None:
        return Q
    if Q is None:
        return P
    p = ctx.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + E.A) * ctx.inv(2 * y1) % p
    else:
        lam = (y2 - y1) * ctx.inv((x2 - x1) % p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def scalar_mul(ctx: FpContext, P: CurvePoint, k: int, E: WeierstrassCurve) -> CurvePoint:
    """[k]P by double-and-add; [0]P is the point at infinity."""
    if k < 0:
        return scalar_mul(ctx, point_neg(ctx, P), -k, E)
    result: CurvePoint = None
    addend = P
    while k:
        if k & 1:
            result = point_add(ctx, result, addend, E)
        addend = point_add(ctx, addend, addend, E)
        k >>= 1
    return result


def is_on_curve(ctx: FpContext, P: CurvePoint, E: WeierstrassCurve) -> bool:
    if P is None:
        return True
    x, y = P
    return (y * y - (x * x % ctx.p * x + E.A * x + E.B)) % ctx.p == 0


def affine_points(ctx: FpContext, E: WeierstrassCurve) -> list[tuple[int, int]]:
    """All affine points, by exhaustive x-scan."""
    p = ctx.p
    sq = _squares_table(p)
    pts = []
    roots: dict[int, int] = {}
    for y in range(p // 2 + 1):
        roots.setdefault(y * y % p, y)
    for x in range(p):
        w = (x * x % p * x + E.A * x + E.B) % p
        if w == 0:
            pts.append((x, 0))
        elif sq[w]:
            y = roots[w]
            pts.append((x, y))
            pts.append((x, p - y))
    return pts


def quadratic_twist(ctx: FpContext, E: WeierstrassCurve, alpha: int) -> WeierstrassCurve:
    """The twist y^2 = x^3 + alpha^-2 A x + alpha^-3 B."""
    if ctx.euler_criterion(alpha, MultCounter()) is not Residue.NONRESIDUE:
        raise NotANonResidue(f"{alpha} is not a quadratic nonresidue mod {ctx.p}")
    ai = ctx.inv(alpha)
    ai2 = ai * ai % ctx.p
    return WeierstrassCurve(ai2 * E.A % ctx.p, ai2 * ai % ctx.p * E.B % ctx.p)


def _factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def point_order(ctx: FpContext, P: CurvePoint, E: WeierstrassCurve, n: int,
                factors: dict[int, int] | None = None) -> int:
    """Order of P given the group cardinality n."""
    if P is None:
        return 1
    factors = factors if factors is not None else _factorize(n)
    order = n
    for q in factors:
        while order % q == 0 and scalar_mul(ctx, P, order // q, E) is None:
            order //= q
    return order


def group_structure(ctx: FpContext, E: WeierstrassCurve, n: int | None = None) -> tuple[int, int]:
    """(m, k) with E(F_p) = Z/m x Z/mk, m | p-1, m^2 k = #E."""
    if n is None:
        n = count_points(ctx, E)
    factors = _factorize(n)
    exponent = 1
    for P in affine_points(ctx, E):
        exponent = math.lcm(exponent, point_order(ctx, P, E, n, factors))
        if exponent == n:
            break
    m = n // exponent
    k = exponent // m
    assert m * m * k == n
    assert (ctx.p - 1) % m == 0
    return m, k


@dataclass(frozen=True)
class CurveTableRow:
    j: int
    b: int
    A: int
    B: int
    cardinality: int
    m: int
    k: int


def build_curve_table(ctx: FpContext, with_structure: bool = True) -> list[CurveTableRow]:
    """Ground truth for every class: (A, B), cardinality and group shape."""
    nr = NonResidueTable.for_prime(ctx)
    classes = enumerate_classes(ctx)
    curves = [get_weierstrass_pair(ctx, c, nr) for c in classes]
    cards = count_points_batch(
        ctx,
        np.array([E.A for E in curves], dtype=np.int64),
        np.array([E.B for E in curves], dtype=np.int64),
    )
    rows = []
    for c, E, card in zip(classes, curves, cards):
        if with_structure:
            m, k = group_structure(ctx, E, int(card))
        else:
            m, k = 0, 0
        rows.append(CurveTableRow(c.j, c.b, E.A, E.B, int(card), m, k))
    return rows


CURVE_TABLE_FIELDS = ["j", "b", "A", "B", "cardinality", "m", "k"]


def write_curve_table(path, rows: list[CurveTableRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CURVE_TABLE_FIELDS)
        for r in rows:
            writer.writerow([r.j, r.b, r.A, r.B, r.cardinality, r.m, r.k])


def read_curve_table(path) -> list[CurveTableRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CURVE_TABLE_FIELDS:
            raise ValueError(f"unexpected curve-table header: {header}")
        return [CurveTableRow(*map(int, row)) for row in reader]

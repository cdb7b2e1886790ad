"""Division polynomials evaluated in the reduced ring F_p[y]/(y^2 - w).

Values are carried as c * y^eps with the ambient w = x^3 + Ax + B, so the
evaluation never needs a square root.  psi_l for large l is produced by the
windowed doubling schedule: a 10-tuple of consecutive psi values is doubled
per step, each output entry costing one g1 or g2 call (at most 8 counted
multiplications), hence at most 80 multiplications per doubling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .curves import WeierstrassCurve
from .fp_arith import FpContext, MultCounter


class ParityMismatch(ValueError):
    """Nonzero TwistedValues of unequal parity were added."""


class TwoTorsionAmbient(ArithmeticError):
    """w = 0: the x is a two-torsion abscissa, division by 2y is impossible."""


class IndexOutOfRange(IndexError):
    """base_psi index outside [-1, 14]."""


class TwistedValue(NamedTuple):
    """c * y^parity in F_p[y]/(y^2 - w); the zero element is (0, 0)."""

    c: int
    parity: int


TV_ZERO = TwistedValue(0, 0)
TV_ONE = TwistedValue(1, 0)


def _tv(c: int, parity: int) -> TwistedValue:
    return TV_ZERO if c == 0 else TwistedValue(c, parity)


class Ambient:
    """Fixed (A, B, x) evaluation context with its w and billing counter."""

    __slots__ = ("ctx", "A", "B", "x", "w", "ctr", "_inv2w")

    def __init__(self, ctx: FpContext, E: WeierstrassCurve, x: int, ctr: MultCounter):
        self.ctx = ctx
        self.A = E.A
        self.B = E.B
        self.x = x % ctx.p
        self.ctr = ctr
        x2 = ctx.mul(self.x, self.x, ctr)
        x3 = ctx.mul(x2, self.x, ctr)
        ax = ctx.mul(self.A, self.x, ctr)
        self.w = (x3 + ax + self.B) % ctx.p
        self._inv2w = None

    @property
    def inv2w(self) -> int:
        if self._inv2w is None:
            if self.w == 0:
                raise TwoTorsionAmbient(f"x={self.x} is a two-torsion abscissa")
            self._inv2w = self.ctx.inv(2 * self.w)
        return self._inv2w

    def mul(self, u: TwistedValue, v: TwistedValue) -> TwistedValue:
        c = self.ctx.mul(u.c, v.c, self.ctr)
        if u.parity and v.parity:
            return _tv(self.ctx.mul(c, self.w, self.ctr), 0)
        return _tv(c, u.parity | v.parity)

    def sq(self, u: TwistedValue) -> TwistedValue:
        return self.mul(u, u)

    def cube(self, u: TwistedValue) -> TwistedValue:
        return self.mul(self.sq(u), u)

    def add(self, u: TwistedValue, v: TwistedValue) -> TwistedValue:
        if u.c == 0:
            return v
        if v.c == 0:
            return u
        if u.parity != v.parity:
            raise ParityMismatch(f"cannot add parities {u.parity} and {v.parity}")
        return _tv((u.c + v.c) % self.ctx.p, u.parity)

    def sub(self, u: TwistedValue, v: TwistedValue) -> TwistedValue:
        return self.add(u, self.neg(v))

    def neg(self, u: TwistedValue) -> TwistedValue:
        return _tv((-u.c) % self.ctx.p, u.parity)

    def div_psi2(self, u: TwistedValue) -> TwistedValue:
        """u / (2y): with u = (c, 0), c/(2y) = c*y/(2w), flipping parity."""
        if u.c == 0:
            return TV_ZERO
        return _tv(self.ctx.mul(u.c, self.inv2w, self.ctr), u.parity ^ 1)


def g1(amb: Ambient, v: tuple[TwistedValue, ...]) -> TwistedValue:
    """psi_{2n+1} = psi_{n+2} psi_n^3 - psi_{n-1} psi_{n+1}^3 from 4 inputs."""
    if len(v) != 4:
        raise ValueError("g1 takes psi_{n-1}..psi_{n+2}")
    t1 = amb.mul(v[3], amb.cube(v[1]))
    t2 = amb.mul(v[0], amb.cube(v[2]))
    return amb.sub(t1, t2)


def g2(amb: Ambient, v: tuple[TwistedValue, ...]) -> TwistedValue:
    """psi_{2n} = psi_n (psi_{n-1}^2 psi_{n+2} - psi_{n-2} psi_{n+1}^2) / psi_2."""
    if len(v) != 5:
        raise ValueError("g2 takes psi_{n-2}..psi_{n+2}")
    t1 = amb.mul(amb.sq(v[1]), v[4])
    t2 = amb.mul(v[0], amb.sq(v[3]))
    return amb.div_psi2(amb.mul(amb.sub(t1, t2), v[2]))


def expected_parity(n: int) -> int:
    """psi_n carries a y factor iff n is even and nonzero."""
    return 1 if (n % 2 == 0 and n != 0) else 0


def psi_sequence(amb: Ambient, upto: int) -> list[TwistedValue]:
    """psi_{-1} .. psi_upto by the direct recurrence; entry [i] is psi_{i-1}.

    This is the naive O(l) evaluation used both to seed base windows and as
    the reference the doubling schedule is checked against.
    """
    ctx, p = amb.ctx, amb.ctx.p
    x, A, B, w = amb.x, amb.A, amb.B, amb.w
    ctr = amb.ctr

    psi: list[TwistedValue] = [TwistedValue(p - 1, 0), TV_ZERO, TV_ONE]
    if upto >= 2:
        psi.append(TwistedValue(2 % p, 1))
    if upto >= 3:
        x2 = ctx.mul(x, x, ctr)
        x4 = ctx.mul(x2, x2, ctr)
        ax2 = ctx.mul(A, x2, ctr)
        bx = ctx.mul(B, x, ctr)
        a2 = ctx.mul(A, A, ctr)
        psi.append(_tv((3 * x4 + 6 * ax2 + 12 * bx - a2) % p, 0))
    if upto >= 4:
        x6 = ctx.mul(x4, x2, ctr)
        ax4 = ctx.mul(A, x4, ctr)
        bx3 = ctx.mul(bx, x2, ctr)
        a2x2 = ctx.mul(a2, x2, ctr)
        abx = ctx.mul(A, bx, ctr)
        a3 = ctx.mul(a2, A, ctr)
        b2 = ctx.mul(B, B, ctr)
        inner = (2 * x6 + 10 * ax4 + 40 * bx3 - 10 * a2x2 - 8 * abx - 2 * a3 - 16 * b2) % p
        psi.append(_tv(2 * inner % p, 1))
    for m in range(5, upto + 1):
        if m % 2:
            n = (m - 1) // 2
            psi.append(g1(amb, tuple(psi[n:n + 4])))
        else:
            n = m // 2
            psi.append(g2(amb, tuple(psi[n - 1:n + 4])))
    return psi[:upto + 2]


def base_psi(amb: Ambient, n: int) -> TwistedValue:
    """psi_n for n in [-1, 14]: explicit bases plus small-index recurrence."""
    if not -1 <= n <= 14:
        raise IndexOutOfRange(f"base_psi index {n} outside [-1, 14]")
    return psi_sequence(amb, max(n, 1))[n + 1]


@dataclass(frozen=True)
class PsiWindow:
    """psi_base .. psi_{base+9} in one tuple."""

    base: int
    entries: tuple[TwistedValue, ...]

    def __post_init__(self):
        if len(self.entries) != 10:
            raise ValueError("window holds exactly 10 entries")

    def __getitem__(self, i: int) -> TwistedValue:
        return self.entries[i]


@dataclass(frozen=True)
class DoublingSchedule:
    """sigma_0 > sigma_1 > ... > sigma_r <= 5 plus forward branch bits."""

    sigmas: list[int]
    branch_bits: list[int]


def make_schedule(sigma: int) -> DoublingSchedule:
    if sigma < 1:
        raise ValueError("sigma must be >= 1")
    sigmas = [sigma]
    while sigmas[-1] > 5:
        s = sigmas[-1]
        sigmas.append((s - 4) // 2 if s % 2 == 0 else (s - 5) // 2)
    # branch to apply when moving from sigma_{i+1} up to sigma_i
    bits = [1 if s % 2 == 0 else 2 for s in sigmas[:-1]]
    return DoublingSchedule(sigmas, bits[::-1])


def base_window(amb: Ambient, base: int) -> PsiWindow:
    psi = psi_sequence(amb, base + 9)
    return PsiWindow(base, tuple(psi[base + 1:base + 11]))


def window_double(amb: Ambient, win: PsiWindow, branch: int) -> PsiWindow:
    """One doubling step: branch 1 maps base k to 2k+4, branch 2 to 2k+5."""
    if branch not in (1, 2):
        raise ValueError("branch must be 1 or 2")
    k = win.base
    new_base = 2 * k + 4 if branch == 1 else 2 * k + 5
    entries = []
    for i in range(10):
        m = new_base + i
        if m % 2 == 0:
            n = m // 2
            off = n - 2 - k
            entries.append(g2(amb, win.entries[off:off + 5]))
        else:
            n = (m - 1) // 2
            off = n - 1 - k
            entries.append(g1(amb, win.entries[off:off + 4]))
    return PsiWindow(new_base, tuple(entries))


def eval_division_poly(
    ctx: FpContext,
    E: WeierstrassCurve,
    x: int,
    ell: int,
    ctr: MultCounter,
) -> TwistedValue:
    """psi_ell(A, B, x) via the doubling schedule; O(log ell) multiplications."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    amb = Ambient(ctx, E, x, ctr)
    if amb.w == 0:
        raise TwoTorsionAmbient(f"x={x} is a two-torsion abscissa on this curve")
    sched = make_schedule(ell)
    win = base_window(amb, sched.sigmas[-1])
    for branch in sched.branch_bits:
        win = window_double(amb, win, branch)
    assert win.base == ell
    return win[0]


def eval_division_poly_direct(
    ctx: FpContext,
    E: WeierstrassCurve,
    x: int,
    ell: int,
    ctr: MultCounter,
) -> TwistedValue:
    """psi_ell by the naive O(ell) recurrence; reference for the schedule."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    amb = Ambient(ctx, E, x, ctr)
    if amb.w == 0:
        raise TwoTorsionAmbient(f"x={x} is a two-torsion abscissa on this curve")
    return psi_sequence(amb, ell)[ell + 1]


# ---------------------------------------------------------------------------
# Vectorized evaluation over many (A, B, x) ambients at once.  Same formulas
# as above with the parity tracked structurally by index; products of two
# elements of [0, p) with p < 2**31 fit in int64.
# ---------------------------------------------------------------------------


def _vec_pow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def _vec_g1(v: list[np.ndarray], n: int, w: np.ndarray, p: int) -> np.ndarray:
    c_nm1, c_n, c_np1, c_np2 = v
    t1 = c_np2 * (c_n * c_n % p) % p * c_n % p
    t2 = c_nm1 * (c_np1 * c_np1 % p) % p * c_np1 % p
    w2 = w * w % p
    if n % 2 == 0:
        t1 = t1 * w2 % p
    else:
        t2 = t2 * w2 % p
    return (t1 - t2) % p


def _vec_g2(v: list[np.ndarray], w: np.ndarray, inv2w: np.ndarray, p: int) -> np.ndarray:
    c_nm2, c_nm1, c_n, c_np1, c_np2 = v
    inner = (c_nm1 * c_nm1 % p * c_np2 - c_nm2 * (c_np1 * c_np1 % p)) % p
    return inner * c_n % p * w % p * inv2w % p


class BatchAmbient:
    """Vectorized F_p[y]/(y^2 - w) ambients; callers must exclude w = 0."""

    def __init__(self, ctx: FpContext, A: np.ndarray, B: np.ndarray, x: np.ndarray):
        p = ctx.p
        self.p = p
        self.A = A % p
        self.B = B % p
        self.x = x % p
        self.w = (self.x * self.x % p * self.x + self.A * self.x + self.B) % p
        self.inv2w = _vec_pow(2 * self.w % p, p - 2, p)

    def psi_coeffs(self, upto: int) -> list[np.ndarray]:
        """Coefficient arrays of psi_{-1}..psi_upto; entry [i] is psi_{i-1}."""
        p, A, B, x, w = self.p, self.A, self.B, self.x, self.w
        one = np.ones_like(x)
        psi = [(p - 1) * one % p, np.zeros_like(x), one]
        if upto >= 2:
            psi.append(2 * one % p)
        if upto >= 3:
            x2 = x * x % p
            x4 = x2 * x2 % p
            psi.append((3 * x4 + 6 * (A * x2 % p) + 12 * (B * x % p) - A * A) % p)
        if upto >= 4:
            x6 = x4 * x2 % p
            a2 = A * A % p
            bx = B * x % p
            inner = (2 * x6 + 10 * (A * x4 % p) + 40 * (bx * x2 % p)
                     - 10 * (a2 * x2 % p) - 8 * (A * bx % p) - 2 * (a2 * A % p)
                     - 16 * (B * B % p)) % p
            psi.append(2 * inner % p)
        for m in range(5, upto + 1):
            if m % 2:
                n = (m - 1) // 2
                psi.append(_vec_g1(psi[n:n + 4], n, w, p))
            else:
                n = m // 2
                psi.append(_vec_g2(psi[n - 1:n + 4], w, self.inv2w, p))
        return psi[:upto + 2]

    def eval(self, ell: int) -> np.ndarray:
        """Coefficient array of psi_ell across all ambients."""
        if ell < 1:
            raise ValueError("ell must be >= 1")
        sched = make_schedule(ell)
        base = sched.sigmas[-1]
        psi = self.psi_coeffs(base + 9)
        win = psi[base + 1:base + 11]
        k = base
        for branch in sched.branch_bits:
            new_base = 2 * k + 4 if branch == 1 else 2 * k + 5
            out = []
            for i in range(10):
                m = new_base + i
                if m % 2 == 0:
                    n = m // 2
                    off = n - 2 - k
                    out.append(_vec_g2(win[off:off + 5], self.w, self.inv2w, self.p))
                else:
                    n = (m - 1) // 2
                    off = n - 1 - k
                    out.append(_vec_g1(win[off:off + 4], n, self.w, self.p))
            win, k = out, new_base
        assert k == ell
        return win[0]

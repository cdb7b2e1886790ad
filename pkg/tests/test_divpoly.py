import random

import numpy as np
import pytest

from twistforge import curves, divpoly
from twistforge.curves import WeierstrassCurve
from twistforge.divpoly import (
    Ambient, IndexOutOfRange, ParityMismatch, TV_ONE, TV_ZERO,
    TwistedValue, TwoTorsionAmbient,
)
from twistforge.fp_arith import FpContext, MultCounter


def make_ambient(p=101, A=2, B=3, x=5):
    ctx = FpContext(p)
    return ctx, Ambient(ctx, WeierstrassCurve(A, B), x, MultCounter())


def test_twisted_value_normalization():
    assert divpoly._tv(0, 1) == TV_ZERO
    assert divpoly._tv(3, 1) == TwistedValue(3, 1)


def test_ambient_w():
    ctx, amb = make_ambient(101, 2, 3, 5)
    assert amb.w == (125 + 10 + 3) % 101


def test_mul_parity_law():
    ctx, amb = make_ambient()
    u = TwistedValue(3, 1)
    v = TwistedValue(4, 1)
    prod = amb.mul(u, v)
    assert prod.parity == 0 and prod.c == 12 * amb.w % 101
    prod2 = amb.mul(TwistedValue(3, 0), v)
    assert prod2 == TwistedValue(12, 1)
    assert amb.mul(TV_ZERO, v) == TV_ZERO


def test_add_rules():
    ctx, amb = make_ambient()
    with pytest.raises(ParityMismatch):
        amb.add(TwistedValue(1, 0), TwistedValue(1, 1))
    assert amb.add(TV_ZERO, TwistedValue(1, 1)) == TwistedValue(1, 1)
    assert amb.add(TwistedValue(1, 1), TV_ZERO) == TwistedValue(1, 1)
    assert amb.add(TwistedValue(100, 0), TwistedValue(1, 0)) == TV_ZERO
    assert amb.sub(TwistedValue(5, 1), TwistedValue(2, 1)) == TwistedValue(3, 1)


def test_div_psi2_flips_parity():
    # div_psi2 divides a parity-0 value by 2y (the only case g2 produces):
    # c / (2y) = c*y / (2w), so multiplying back by 2y must recover c.
    ctx, amb = make_ambient()
    u = TwistedValue(6, 0)
    q = amb.div_psi2(u)
    assert q.parity == 1
    back = amb.mul(q, TwistedValue(2, 1))
    assert back == u
    assert amb.div_psi2(TV_ZERO) == TV_ZERO


def test_two_torsion_ambient():
    # y^2 = x^3 - x over F_101 has w = 0 at x = 0, 1, 100
    ctx = FpContext(101)
    E = WeierstrassCurve(100, 0)
    amb = Ambient(ctx, E, 1, MultCounter())
    assert amb.w == 0
    with pytest.raises(TwoTorsionAmbient):
        amb.inv2w
    with pytest.raises(TwoTorsionAmbient):
        divpoly.eval_division_poly(ctx, E, 1, 7, MultCounter())
    with pytest.raises(TwoTorsionAmbient):
        divpoly.eval_division_poly_direct(ctx, E, 1, 7, MultCounter())


def test_base_cases_worked_example():
    # psi_3 = 3x^4 + 6Ax^2 + 12Bx - A^2 at p=5, A=1, B=1, x=0 is -1 = 4
    ctx = FpContext(5)
    amb = Ambient(ctx, WeierstrassCurve(1, 1), 0, MultCounter())
    psi = divpoly.psi_sequence(amb, 4)
    assert psi[0] == TwistedValue(4, 0)   # psi_{-1} = -1
    assert psi[1] == TV_ZERO              # psi_0
    assert psi[2] == TV_ONE               # psi_1
    assert psi[3] == TwistedValue(2, 1)   # psi_2 = 2y
    assert psi[4] == TwistedValue(4, 0)   # psi_3(0) = -1 mod 5


def test_base_psi_range():
    ctx, amb = make_ambient()
    seq = divpoly.psi_sequence(amb, 14)
    for n in range(-1, 15):
        assert divpoly.base_psi(amb, n) == seq[n + 1]
    for n in (-2, 15):
        with pytest.raises(IndexOutOfRange):
            divpoly.base_psi(amb, n)


def test_parity_structure():
    ctx, amb = make_ambient()
    for n, v in enumerate(divpoly.psi_sequence(amb, 30), start=-1):
        if v.c:
            assert v.parity == divpoly.expected_parity(n)


def test_g1_g2_against_direct():
    ctx, amb = make_ambient()
    psi = divpoly.psi_sequence(amb, 10)
    # g1 at n=2 gives psi_5, g2 at n=3 gives psi_6 (index shift: psi[i] = psi_{i-1})
    assert divpoly.g1(amb, tuple(psi[2:6])) == psi[6]
    assert divpoly.g2(amb, tuple(psi[2:7])) == psi[7]
    with pytest.raises(ValueError):
        divpoly.g1(amb, tuple(psi[2:7]))
    with pytest.raises(ValueError):
        divpoly.g2(amb, tuple(psi[2:6]))


def test_make_schedule_worked_example():
    sched = divpoly.make_schedule(21)
    assert sched.sigmas == [21, 8, 2]
    assert sched.branch_bits == [1, 2]
    assert divpoly.make_schedule(4).sigmas == [4]
    with pytest.raises(ValueError):
        divpoly.make_schedule(0)


def test_schedule_reaches_every_ell():
    for ell in range(1, 400):
        sched = divpoly.make_schedule(ell)
        base = sched.sigmas[-1]
        assert 1 <= base <= 5
        for branch in sched.branch_bits:
            base = 2 * base + 4 if branch == 1 else 2 * base + 5
        assert base == ell


def test_window_double_matches_direct():
    ctx, amb = make_ambient()
    win = divpoly.base_window(amb, 3)
    ref = divpoly.psi_sequence(amb, 40)
    for branch, new_base in ((1, 10), (2, 11)):
        out = divpoly.window_double(amb, win, branch)
        assert out.base == new_base
        assert out.entries == tuple(ref[new_base + 1:new_base + 11])
    with pytest.raises(ValueError):
        divpoly.window_double(amb, win, 3)


def test_eval_matches_direct_small():
    ctx = FpContext(101)
    for A, B, x in ((2, 3, 5), (1, 6, 9), (40, 1, 77)):
        E = WeierstrassCurve(A, B)
        for ell in range(1, 60):
            got = divpoly.eval_division_poly(ctx, E, x, ell, MultCounter())
            want = divpoly.eval_division_poly_direct(ctx, E, x, ell, MultCounter())
            assert got == want, (A, B, x, ell)


def test_eval_is_deterministic():
    ctx = FpContext(1009)
    E = WeierstrassCurve(7, 11)
    a = divpoly.eval_division_poly(ctx, E, 5, 997, MultCounter())
    b = divpoly.eval_division_poly(ctx, E, 5, 997, MultCounter())
    assert a == b


def test_torsion_semantics_small_curve():
    """psi_ell(P) = 0 iff [ell]P = infinity, on a hand-checkable curve."""
    ctx = FpContext(101)
    E = WeierstrassCurve(1, 18)
    n = curves.count_points(ctx, E)
    for P in curves.affine_points(ctx, E):
        x, y = P
        if y == 0:
            continue
        order = curves.point_order(ctx, P, E, n)
        for ell in range(1, 30):
            v = divpoly.eval_division_poly(ctx, E, x, ell, MultCounter())
            assert (v.c == 0) == (ell % order == 0), (P, ell, order)


def test_cost_budget_eval():
    """The windowed eval stays within 80 multiplications per bit of ell."""
    ctx = FpContext(1048583)
    E = WeierstrassCurve(123456, 654321)
    for ell in (31, 257, 4999, 65537, 1048583):
        ctr = MultCounter()
        divpoly.eval_division_poly(ctx, E, 5, ell, ctr)
        bits = max(1, (ell - 1).bit_length())
        assert ctr.count <= 80 * bits, (ell, ctr.count)


def test_batch_matches_scalar():
    ctx = FpContext(101)
    rng = random.Random(7)
    rows = []
    while len(rows) < 50:
        A, B, x = rng.randrange(101), rng.randrange(101), rng.randrange(101)
        if (4 * A**3 + 27 * B * B) % 101 == 0:
            continue
        if (x**3 + A * x + B) % 101 == 0:
            continue
        rows.append((A, B, x))
    ba = divpoly.BatchAmbient(
        ctx,
        np.array([r[0] for r in rows], dtype=np.int64),
        np.array([r[1] for r in rows], dtype=np.int64),
        np.array([r[2] for r in rows], dtype=np.int64),
    )
    for ell in (1, 2, 3, 5, 8, 21, 103, 202):
        got = ba.eval(ell)
        for i, (A, B, x) in enumerate(rows):
            want = divpoly.eval_division_poly(
                ctx, WeierstrassCurve(A, B), x, ell, MultCounter())
            assert int(got[i]) == want.c, (A, B, x, ell)


def test_batch_psi_coeffs_match_scalar():
    ctx = FpContext(101)
    A, B, x = 2, 3, 5
    ba = divpoly.BatchAmbient(ctx, np.array([A], dtype=np.int64),
                              np.array([B], dtype=np.int64),
                              np.array([x], dtype=np.int64))
    coeffs = ba.psi_coeffs(30)
    amb = Ambient(ctx, WeierstrassCurve(A, B), x, MultCounter())
    for n, v in enumerate(divpoly.psi_sequence(amb, 30), start=-1):
        assert int(coeffs[n + 1][0]) == v.c, n

import pytest
from hypothesis import given, strategies as st

from twistforge.fp_arith import (
    FpContext, MultCounter, NoRoot, Residue, ZeroInverse, is_prime,
)


def test_context_rejects_bad_moduli():
    for bad in (0, 1, 2, 3, 4, 9, 12, 2**31, 2**31 + 11):
        with pytest.raises(ValueError):
            FpContext(bad)
    FpContext(5)
    FpContext(2**31 - 1)  # Mersenne prime, largest legal modulus


def test_is_prime_small():
    under_60 = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59}
    for n in range(-2, 60):
        assert is_prime(n) == (n in under_60)
    for n in (101, 499, 1009, 10007, 1048583):
        assert is_prime(n)
    assert not is_prime(1048581)


def test_mul_counts():
    ctx = FpContext(11)
    ctr = MultCounter()
    assert ctx.mul(7, 8, ctr) == 56 % 11
    assert ctx.mul(0, 5, ctr) == 0
    assert ctr.count == 2


def test_pow_counts_and_values():
    ctx = FpContext(101)
    ctr = MultCounter()
    assert ctx.pow(3, 0, ctr) == 1 and ctr.count == 0
    assert ctx.pow(0, 0, ctr) == 1  # 0**0 == 1 by convention
    for a in (2, 3, 99):
        for e in (1, 2, 7, 50, 100):
            ctr = MultCounter()
            assert ctx.pow(a, e, ctr) == pow(a, e, 101)
            assert ctr.count <= 2 * e.bit_length()
    with pytest.raises(ValueError):
        ctx.pow(2, -1, MultCounter())


def test_fermat_exhaustive_small_primes():
    for p in (5, 7, 11, 13, 101):
        ctx = FpContext(p)
        for a in range(1, p):
            assert ctx.pow(a, p - 1, MultCounter()) == 1


def test_inv():
    ctx = FpContext(101)
    for a in range(1, 101):
        assert a * ctx.inv(a) % 101 == 1
    with pytest.raises(ZeroInverse):
        ctx.inv(0)
    with pytest.raises(ZeroInverse):
        ctx.inv(101)


def test_euler_criterion_matches_sqrt():
    for p in (5, 7, 11, 13, 101):
        ctx = FpContext(p)
        squares = {x * x % p for x in range(1, p)}
        for w in range(p):
            kind = ctx.euler_criterion(w, MultCounter())
            if w == 0:
                assert kind is Residue.ZERO
                assert ctx.sqrt(w) == 0
            elif w in squares:
                assert kind is Residue.RESIDUE
                y = ctx.sqrt(w)
                assert y * y % p == w and y <= p // 2
            else:
                assert kind is Residue.NONRESIDUE
                with pytest.raises(NoRoot):
                    ctx.sqrt(w)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_counter_merge_sums(a, b):
    assert MultCounter(a).merge(MultCounter(b)) == MultCounter(a + b)


def test_counter_basics():
    c = MultCounter()
    c.tick()
    c.tick(4)
    assert c.count == 5
    assert repr(c) == "MultCounter(5)"
    with pytest.raises(ValueError):
        MultCounter(-1)

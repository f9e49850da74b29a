import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, P98
from qgstream.errors import CannotVerifyError, InvalidModulusError, NotInvertibleError
from qgstream.numtheory import (
    PrimeParams,
    find_generator,
    gen_pl_prime,
    is_generator,
    is_probable_prime,
    mod_inv,
    mod_pow,
    tonelli_shanks,
    xgcd,
)


def square_and_multiply(b, e, m):
    result, b = 1, b % m
    while e:
        if e & 1:
            result = result * b % m
        b = b * b % m
        e >>= 1
    return result % m


def test_mod_pow_worked_example():
    assert mod_pow(13, 10307, P) == 29656


@pytest.mark.parametrize("x", [1, 2, 13, 65536, 123456789])
def test_mod_pow_zero_exponent(x):
    assert mod_pow(x, 0, P) == 1


def test_mod_pow_fermat():
    assert mod_pow(13, 65536, P) == square_and_multiply(13, 65536, P) == 1


@given(st.integers(0, 2**800), st.integers(0, 2**800), st.integers(2, 2**800))
def test_mod_pow_matches_oracle(b, e, m):
    assert mod_pow(b, e, m) == square_and_multiply(b, e, m)


def test_mod_pow_bad_modulus():
    with pytest.raises(InvalidModulusError):
        mod_pow(3, 5, 1)


def test_mod_inv_trivial():
    assert mod_inv(1, P) == 1
    assert mod_inv(P - 1, P) == P - 1


def test_mod_inv_example():
    y = mod_inv(34750, P)
    assert 34750 * y % P == 1


@pytest.mark.parametrize("p", [P, P98])
def test_mod_inv_random(p):
    r = random.Random(p)
    for _ in range(1000):
        x = r.randrange(1, p)
        y = mod_inv(x, p)
        assert x * y % p == 1
        g, u, _ = xgcd(x, p)
        assert g == 1 and u % p == y


@pytest.mark.parametrize("x", [0, P, 2 * P])
def test_mod_inv_zero(x):
    with pytest.raises(NotInvertibleError):
        mod_inv(x, P)


@pytest.mark.parametrize("n,expected", [(65537, True), (65536, False), (259, False), (2, True), (1, False)])
def test_is_probable_prime_examples(n, expected):
    assert is_probable_prime(n, 40, random.Random(1)) is expected


def test_is_probable_prime_agrees_with_sympy():
    r = random.Random(7)
    for n in list(range(2, 3000)) + [r.getrandbits(128) | 1 for _ in range(200)]:
        assert is_probable_prime(n, 20, r) == sympy.isprime(n), n


def test_carmichael_numbers_rejected():
    for n in (561, 1105, 1729, 2465, 2821, 6601, 8911, 41041, 825265):
        assert not is_probable_prime(n)


def test_rounds_must_be_positive():
    with pytest.raises(ValueError):
        is_probable_prime(7, 0)


@pytest.mark.parametrize("l", [98, 213])
def test_gen_pl_prime_named(l):
    p = gen_pl_prime(l)
    assert p == 2 ** (8 * l) + 3
    # 2^(8l)+3 needs 8l+1 bits
    assert p.bit_length() == 8 * l + 1
    assert sympy.isprime(p)


def test_gen_pl_prime_251():
    assert gen_pl_prime(251).bit_length() == 2009


def test_gen_pl_prime_l1_composite():
    assert 259 == 7 * 37
    assert gen_pl_prime(1) is None


def test_generator_13_is_not_a_generator_of_65537():
    # 13 is a quadratic residue mod 65537, so its order divides 2^15
    assert pow(13, 32768, P) == 1
    assert not is_generator(13, P, [2])
    assert is_generator(3, P, [2])


def test_generator_rejects_minus_one():
    assert not is_generator(P - 1, P, [2])


def brute_force_generators(p):
    return {g for g in range(1, p) if len({pow(g, i, p) for i in range(p - 1)}) == p - 1}


def test_find_generator_p11():
    assert brute_force_generators(11) == {2, 6, 7, 8}
    r = random.Random(3)
    for _ in range(20):
        assert find_generator(11, [2, 5], r) in {2, 6, 7, 8}


@pytest.mark.parametrize("p", [q for q in range(3, 258) if sympy.isprime(q)])
def test_find_generator_exhaustive_small(p):
    g = find_generator(p, list(sympy.primefactors(p - 1)), random.Random(p))
    assert len({pow(g, i, p) for i in range(p - 1)}) == p - 1


@pytest.mark.parametrize("factors", [[], [5], [2, 3]])
def test_find_generator_refuses_bad_factorization(factors):
    with pytest.raises(CannotVerifyError):
        find_generator(11, factors)


def test_prime_params_verification():
    assert PrimeParams(11, 2, (2, 5)).generator_verified
    assert not PrimeParams(P, 13).generator_verified
    with pytest.raises(CannotVerifyError):
        PrimeParams(P, 13, (2,))
    with pytest.raises(InvalidModulusError):
        PrimeParams(259, 2)


def test_tonelli_shanks_examples():
    assert tonelli_shanks(4, P) == (2, 65535)
    assert tonelli_shanks(0, P) == (0, 0)


def test_tonelli_shanks_exhaustive_p11():
    squares = {}
    for x in range(11):
        squares.setdefault(x * x % 11, set()).add(x)
    for a in range(1, 11):
        got = tonelli_shanks(a, 11)
        if a in squares:
            assert set(got) == squares[a]
        else:
            assert got is None


@pytest.mark.parametrize("p", [P, P98, 2**255 - 19, 97])
def test_tonelli_shanks_random(p):
    r = random.Random(p)
    for _ in range(200):
        x = r.randrange(p)
        assert x in tonelli_shanks(x * x % p, p)


@pytest.mark.parametrize("p", [2, 15, 65536])
def test_tonelli_shanks_bad_modulus(p):
    with pytest.raises(InvalidModulusError):
        tonelli_shanks(4, p)


@settings(max_examples=200)
@given(st.integers(1, P - 1))
def test_fermat(alpha):
    assert mod_pow(alpha, P - 1, P) == 1

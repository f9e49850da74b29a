import pytest

from conftest import A_PRIV, ALPHA_A, P, P98
from qgstream import elgamal
from qgstream.elgamal import ElGamalCiphertext, KeyFileError, keygen
from qgstream.numtheory import PrimeParams

PUB = (65537, 13, 29656)


def test_keygen_worked_example(test_params):
    kp = keygen(test_params, a=A_PRIV)
    assert kp.alpha_a == ALPHA_A
    assert kp.public.triplet() == PUB


def test_keygen_edges(test_params):
    assert keygen(test_params, a=1).alpha_a == 13
    kp = keygen(test_params, a=P - 2)
    assert 13 * kp.alpha_a % P == 1


def test_keygen_random_range(test_params, rng):
    for _ in range(200):
        kp = keygen(test_params, rng)
        assert 1 <= kp.a <= P - 2


@pytest.mark.parametrize("m,e,expected", [
    (35469, 53882, (1845, 57308)),
    (41866, 19495, (13023, 32389)),
    (44005, 7737, (39691, 7691)),
    (27025, 4256, (14791, 21654)),
])
def test_encrypt_worked_example(m, e, expected):
    c = elgamal.encrypt(PUB, m, e_override=e)
    assert (c.gamma, c.delta) == expected


def test_encrypt_zero(rng):
    assert elgamal.encrypt(PUB, 0, rng).delta == 0


def test_encrypt_range():
    with pytest.raises(ValueError):
        elgamal.encrypt(PUB, P)
    with pytest.raises(ValueError):
        elgamal.encrypt(PUB, 5, e_override=0)


@pytest.mark.parametrize("c,m", [((1845, 57308), 35469), ((13023, 32389), 41866)])
def test_decrypt_worked_example(test_params, c, m):
    kp = keygen(test_params, a=A_PRIV)
    assert elgamal.decrypt(kp, ElGamalCiphertext(*c)) == m


def test_round_trip(test_params, p98_params, rng):
    for params in (test_params, p98_params):
        kp = keygen(params, rng)
        for _ in range(100):
            m = rng.randrange(params.p)
            assert elgamal.decrypt(kp, elgamal.encrypt(kp.public, m, rng)) == m


def test_decrypt_rejects_zero_gamma(test_params):
    kp = keygen(test_params, a=A_PRIV)
    with pytest.raises(ValueError):
        elgamal.decrypt(kp, ElGamalCiphertext(0, 5))


def test_expansion_factor_two(p98_params, rng):
    kp = keygen(p98_params, rng)
    width = (P98.bit_length() + 7) // 8
    c = elgamal.encrypt(kp.public, rng.randrange(P98), rng)
    raw = c.to_bytes(P98)
    assert len(raw) == 2 * width
    assert ElGamalCiphertext.from_bytes(raw, P98) == c


def test_key_file_round_trip(test_params, p98_params, rng):
    verified = PrimeParams(65537, 3, (2,))
    for params in (test_params, p98_params, verified):
        kp = keygen(params, rng)
        assert elgamal.load_key(elgamal.dump_key(kp)) == kp
        assert elgamal.load_key(elgamal.dump_key(kp.public)) == kp.public


def test_key_file_layout(test_params):
    kp = keygen(test_params, a=A_PRIV)
    raw = elgamal.dump_key(kp.public)
    assert raw[:4] == b"QGEK" and raw[4] == 1
    assert raw[5] == 0  # public, generator unverified
    assert raw[6:] == b"".join(elgamal.encode_int(v) for v in PUB)
    assert (29656).to_bytes(2, "big") in raw


@pytest.mark.parametrize("raw", [b"XXXX\x01\x00", b"QGEK\x09\x00", b"QGEK\x01\x00\x00\x00\x00\x09ab"])
def test_key_file_rejects_garbage(raw):
    with pytest.raises(KeyFileError):
        elgamal.load_key(raw)


def test_fingerprint_stable(test_params):
    kp = keygen(test_params, a=A_PRIV)
    assert kp.public.fingerprint() == keygen(test_params, a=A_PRIV).public.fingerprint()
    assert kp.public.fingerprint() != keygen(test_params, a=A_PRIV + 1).public.fingerprint()

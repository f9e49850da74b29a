import pytest

from conftest import A_PRIV, EXPONENTS, K_GOLD, LEADERS
from qgstream import elgamal
from qgstream.elgamal import ElGamalCiphertext, keygen
from qgstream.errors import HandshakeError, ParameterError
from qgstream.session import SessionOffer, accept_offer, make_offer


def golden_offer(test_params):
    kp = keygen(test_params, a=A_PRIV)
    offer, state = make_offer(kp.public, 3, K=K_GOLD, leaders=LEADERS, exponents=EXPONENTS)
    return kp, offer, state


def test_make_offer_worked_example(test_params):
    _, offer, state = golden_offer(test_params)
    assert (offer.c_K.gamma, offer.c_K.delta) == (1845, 57308)
    assert [(c.gamma, c.delta) for c in offer.c_leaders] == [(13023, 32389), (39691, 7691), (14791, 21654)]
    assert state.qg.K == K_GOLD and state.leaders == list(LEADERS)


def test_accept_offer_worked_example(test_params):
    kp, offer, _ = golden_offer(test_params)
    state = accept_offer(kp, offer)
    assert state.qg.K == K_GOLD
    assert state.leaders == list(LEADERS)


def test_k_floor(test_params, rng):
    kp = keygen(test_params, rng)
    with pytest.raises(ParameterError):
        make_offer(kp.public, 2, rng)
    offer, _ = make_offer(kp.public, 2, rng, unsafe_demo=True)
    with pytest.raises(HandshakeError):
        accept_offer(kp, offer)
    assert accept_offer(kp, offer, unsafe_demo=True).k == 2


def test_reject_K_zero(test_params, rng):
    kp, offer, _ = golden_offer(test_params)
    bad = SessionOffer(elgamal.encrypt(kp.public, 0, rng), offer.c_leaders)
    with pytest.raises(HandshakeError):
        accept_offer(kp, bad)


def test_reject_K_p_minus_1(test_params, rng):
    kp, offer, _ = golden_offer(test_params)
    bad = SessionOffer(elgamal.encrypt(kp.public, kp.params.p - 1, rng), offer.c_leaders)
    with pytest.raises(HandshakeError):
        accept_offer(kp, bad)


def test_reject_zero_leader(test_params, rng):
    kp, offer, _ = golden_offer(test_params)
    leaders = offer.c_leaders[:2] + (elgamal.encrypt(kp.public, 0, rng),)
    with pytest.raises(HandshakeError):
        accept_offer(kp, SessionOffer(offer.c_K, leaders))


def test_reject_garbage_ciphertext(test_params):
    kp, offer, _ = golden_offer(test_params)
    with pytest.raises(HandshakeError):
        accept_offer(kp, SessionOffer(ElGamalCiphertext(0, 1), offer.c_leaders))


@pytest.mark.parametrize("name,n", [("test65537", 100), ("p98", 100)])
def test_random_sessions_twin_states(name, n, rng, request):
    from qgstream.params import get_params

    params = get_params(name)
    kp = keygen(params, rng)
    for _ in range(n):
        k = rng.randint(3, 6)
        offer, bob = make_offer(kp.public, k, rng)
        alice = accept_offer(kp, offer)
        assert (alice.qg, alice.leaders, alice.blocks_processed) == (bob.qg, bob.leaders, bob.blocks_processed)
        assert 1 <= bob.qg.K <= params.p - 2
        assert all(1 <= a <= params.p - 2 for a in bob.leaders)


def test_fresh_exponent_per_ciphertext(test_params, rng):
    kp = keygen(test_params, rng)
    offer, _ = make_offer(kp.public, 5, rng)
    gammas = [offer.c_K.gamma] + [c.gamma for c in offer.c_leaders]
    assert len(set(gammas)) == len(gammas)


def test_override_lengths(test_params, rng):
    kp = keygen(test_params, rng)
    with pytest.raises(ParameterError):
        make_offer(kp.public, 3, rng, leaders=[1, 2])
    with pytest.raises(ParameterError):
        make_offer(kp.public, 3, rng, exponents=[1, 2, 3])

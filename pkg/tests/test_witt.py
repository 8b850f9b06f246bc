import random

import pytest

from nygaard.qbase import QBase
from nygaard.rings import (
    PerfTruncFp,
    PolyTruncFp,
    PolyTruncZ,
    RingError,
    ZModRing,
    ZRing,
)
from nygaard.witt import (
    FpSquareModel,
    LengthMismatch,
    QSquareModel,
    WittVector,
    build_perfectoid_square,
    eval_universal,
    frobenius_W,
    ghost,
    teichmuller,
    universal_witt_polynomials,
    verschiebung,
    witt,
    witt_add,
    witt_mul,
    witt_one,
    witt_scalar,
    witt_sub,
    witt_zero,
)

Z = ZRing()


# ---------------------------------------------------------------------------
# ghost map


def test_ghost_of_teichmuller():
    w = teichmuller(Z, 3, 2, 4)
    assert ghost(w) == (2, 2**3, 2**9, 2**27)


def test_ghost_direct_evaluation():
    w = witt(Z, 3, (0, 1))
    assert ghost(w) == (0, 3)


def test_ghost_additive_via_witt_add_over_Z():
    rng = random.Random(2)
    for _ in range(30):
        w = witt(Z, 2, tuple(rng.randint(-5, 5) for _ in range(3)))
        w2 = witt(Z, 2, tuple(rng.randint(-5, 5) for _ in range(3)))
        s = witt_add(w, w2)
        assert ghost(s) == tuple(a + b for a, b in zip(ghost(w), ghost(w2)))
        m = witt_mul(w, w2)
        assert ghost(m) == tuple(a * b for a, b in zip(ghost(w), ghost(w2)))


# ---------------------------------------------------------------------------
# arithmetic over torsion rings


def test_w2_f2_one_plus_one():
    F2 = PolyTruncFp(2, 1)  # just F_2
    one = witt_one(F2, 2, 2)
    s = witt_add(one, one)
    assert s.coords == (F2.zero, F2.one)


def test_teichmuller_multiplicative():
    F9ish = PolyTruncFp(3, 3)
    rng = random.Random(4)
    for _ in range(20):
        a = F9ish.random(rng)
        b = F9ish.random(rng)
        lhs = witt_mul(teichmuller(F9ish, 3, a, 3), teichmuller(F9ish, 3, b, 3))
        rhs = teichmuller(F9ish, 3, F9ish.mul(a, b), 3)
        assert lhs == rhs


def test_add_zero_is_identity():
    R = PolyTruncFp(5, 2)
    rng = random.Random(5)
    w = witt(R, 5, tuple(R.random(rng) for _ in range(3)))
    assert witt_add(w, witt_zero(R, 5, 3)) == w


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        witt_add(witt_one(Z, 2, 2), witt_one(Z, 2, 3))


# ---------------------------------------------------------------------------
# Frobenius and Verschiebung


def test_V_and_F_small():
    F3 = PolyTruncFp(3, 1)
    v = verschiebung(witt_one(F3, 3, 1))
    assert v.coords == (F3.zero, F3.one)
    f = frobenius_W(witt(F3, 3, (F3.zero, F3.one)))
    assert f.coords == (F3.zero,)  # p * 1 = 0 in W_1(F_3)


def test_F_of_teichmuller():
    R = PolyTruncFp(3, 4)
    rng = random.Random(6)
    for _ in range(10):
        a = R.random(rng)
        f = frobenius_W(teichmuller(R, 3, a, 4))
        ap = R.mul(R.mul(a, a), a)
        assert f == teichmuller(R, 3, ap, 3)


def test_FV_is_p_random():
    rng = random.Random(7)
    for p in (2, 3, 5):
        R = PolyTruncFp(p, 3)
        for _ in range(50):
            w = witt(R, p, tuple(R.random(rng) for _ in range(4)))
            fv = frobenius_W(verschiebung(w))
            assert fv == witt_scalar(p, w)


def test_V_projection_formula():
    # V(x) * y = V(x * F(y))
    rng = random.Random(8)
    for p in (2, 3):
        R = PolyTruncFp(p, 3)
        for _ in range(25):
            x = witt(R, p, tuple(R.random(rng) for _ in range(3)))
            y = witt(R, p, tuple(R.random(rng) for _ in range(4)))
            lhs = witt_mul(verschiebung(x), y)
            rhs = verschiebung(witt_mul(x, frobenius_W(y)))
            assert lhs == rhs


def test_F_ring_hom_V_additive():
    rng = random.Random(9)
    R = PolyTruncFp(2, 2)
    for _ in range(25):
        x = witt(R, 2, tuple(R.random(rng) for _ in range(3)))
        y = witt(R, 2, tuple(R.random(rng) for _ in range(3)))
        assert frobenius_W(witt_add(x, y)) == witt_add(frobenius_W(x), frobenius_W(y))
        assert frobenius_W(witt_mul(x, y)) == witt_mul(frobenius_W(x), frobenius_W(y))
        assert verschiebung(witt_add(x, y)) == witt_add(verschiebung(x), verschiebung(y))


def test_over_zmod_and_perfect_truncation():
    rng = random.Random(10)
    R = ZModRing(9)
    w = witt(R, 3, (5, 7))
    w2 = witt(R, 3, (2, 8))
    s = witt_add(w, w2)
    # oracle: lift to Z, add there, reduce
    lift_sum = witt_add(witt(Z, 3, (5, 7)), witt(Z, 3, (2, 8)))
    assert s.coords == tuple(c % 9 for c in lift_sum.coords)

    P = PerfTruncFp(2, 2, 3)
    a = P.monomial(1)  # x^{1/4}
    b = P.monomial(3)  # x^{3/4}
    w = teichmuller(P, 2, a, 2)
    w2 = teichmuller(P, 2, b, 2)
    prod = witt_mul(w, w2)
    assert prod == teichmuller(P, 2, P.monomial(4), 2)  # x^{1/4} x^{3/4} = x


# ---------------------------------------------------------------------------
# universal polynomials as an independent oracle


def test_universal_polynomials_against_ghost_route():
    rng = random.Random(11)
    for p, n in ((2, 3), (3, 2)):
        sums = universal_witt_polynomials(p, n, "add")
        prods = universal_witt_polynomials(p, n, "mul")
        R = PolyTruncFp(p, 2)
        for _ in range(10):
            xs = tuple(R.random(rng) for _ in range(n))
            ys = tuple(R.random(rng) for _ in range(n))
            w, w2 = witt(R, p, xs), witt(R, p, ys)
            s_fast = witt_add(w, w2)
            m_fast = witt_mul(w, w2)
            s_poly = tuple(eval_universal(R, S, xs, ys) for S in sums)
            m_poly = tuple(eval_universal(R, S, xs, ys) for S in prods)
            assert s_fast.coords == s_poly
            assert m_fast.coords == m_poly


def test_universal_polynomials_first_terms():
    sums = universal_witt_polynomials(2, 2, "add")
    # S_0 = x_0 + y_0; S_1 = x_1 + y_1 - x_0*y_0
    assert sums[0] == {(1, 0, 0, 0): 1, (0, 0, 1, 0): 1}
    assert sums[1] == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (1, 0, 1, 0): -1}


# ---------------------------------------------------------------------------
# perfect truncation Frobenius contract


def test_perfect_truncation_frobenius():
    P = PerfTruncFp(3, 2, 2)
    a = P.monomial(2)  # x^{2/9}
    assert P.frobenius(a) == P.monomial(6)  # x^{6/9}
    assert P.inv_frobenius(P.monomial(6)) == P.monomial(2)
    with pytest.raises(RingError):
        P.inv_frobenius(P.monomial(1))


# ---------------------------------------------------------------------------
# perfectoid presentation squares


def test_fp_square_relations():
    for p, n in ((2, 4), (3, 4), (5, 2)):
        sq = build_perfectoid_square(FpSquareModel(p, n))
        checks = sq.check_all()
        assert all(checks.values()), checks
        # phi(v) = p * sigma^{-1} in this model
        assert sq.phi_map((-1, 1)) == (-1, p)


def test_q_square_relations():
    for p, N in ((2, 4), (3, 4)):
        model = QSquareModel(p, 4, N)
        sq = build_perfectoid_square(model)
        checks = sq.check_all()
        assert all(checks.values()), checks


def test_q_model_xi_identities():
    B = QBase(3, 5)
    # xi_tilde = phi(xi) cross-checked against the direct expansion
    # [p]_{q^p} = 1 + q^p + q^{2p} + ... (independent of phi())
    direct = B.zero
    for t in range(B.p):
        direct = B.add(direct, B.q_pow(B.p * t))
    assert direct == B.xi_tilde
    # xi = p mod mu: constant coefficient p
    assert B.xi[0] == B.p
    # xi, xi_tilde are nonzerodivisors (constant coefficient p, injective
    # multiplication matrices over Z); mu is necessarily nilpotent in the
    # truncation, so decalage over B is only ever formed for xi and xi_tilde
    assert B.is_nonzerodivisor(B.xi)
    assert B.is_nonzerodivisor(B.xi_tilde)
    assert not B.is_nonzerodivisor(B.mu)


def test_q_integers():
    B = QBase(5, 4)
    assert B.q_integer(1) == B.one
    assert B.q_integer(0) == B.zero
    # [p]_q at q=1 is p
    assert B.evaluate_at_q1(B.xi) == 5
    # [-k]_q = -q^{-k} [k]_q
    for k in (1, 2, 7):
        lhs = B.q_integer(-k)
        rhs = B.neg(B.mul(B.q_pow(-k), B.q_integer(k)))
        assert lhs == rhs
    # [a+b]_q = [a]_q + q^a [b]_q
    for a, b in ((2, 3), (4, 1), (-2, 5)):
        lhs = B.q_integer(a + b)
        rhs = B.add(B.q_integer(a), B.mul(B.q_pow(a), B.q_integer(b)))
        assert lhs == rhs


def test_q_binomial_mod_p():
    # [p]_q = (q-1)^{p-1} mod p
    for p in (2, 3, 5):
        B = QBase(p, 6)
        lhs = B.reduce_mod_p(B.xi)
        rhs = B.reduce_mod_p(B.pow(B.mu, p - 1))
        assert lhs == rhs


def test_phi_of_mu():
    # phi(mu) = mu * xi exactly
    for p in (2, 3):
        B = QBase(p, 6)
        assert B.phi(B.mu) == B.mul(B.mu, B.xi)

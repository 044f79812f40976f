import itertools

import pytest

from qha.cartan import preset
from qha.conv import convolve, head_via_r, is_simple, mark_simple, shuffle_character
from qha.detmod import (chamber_conjecture, detmod_pair, e_star_max, gen_detmod, gen_detmod_word,
                        second_reduced_word)
from qha.modules import ModuleError, eps, eps_star, one_dim_module, psi_star, simple_L
from qha.conv import simple_Ln


def ch_iso(A, B):
    return A.character.shift_to(B.character) is not None


# -- generalized determinantial modules --------------------------------------------

@pytest.mark.parametrize("word,i,expected", [
    ((1, 2), 1, (1,)),        # <h_2, L1> = 0, then <h_1, L1> = 1
    ((2, 1), 1, (2, 1)),      # L(2) nabla L(1)
    ((1, 2, 1), 1, (2, 1)),   # the last s_1 contributes <h_1, L1 - a1 - a2> = 0
    ((2, 1), 2, (2,)),
    ((1, 2), 2, (1, 2)),
])
def test_a2_determinantial_modules(qA2, word, i, expected):
    c = qA2.cartan
    M = gen_detmod(qA2, c.weyl(word), c.fundamental(i))
    assert M.dim == 1 and M.basis[0] == (expected, 0)


def test_gen_detmod_requires_w_dominance(qA2):
    c = qA2.cartan
    with pytest.raises(ModuleError):
        gen_detmod(qA2, c.weyl((1, 2)), c.reflect(2, c.fundamental(2)) - c.alpha(1))


def test_gen_detmod_properties(qtables):
    for name in ("A2", "A3"):
        q = qtables[name]
        c = q.cartan
        for word in [(1, 2), (2, 1), (1, 2, 1), (2, 1, 2)] + ([(1, 2, 3), (3, 2, 1), (2, 1, 3, 2)] if name == "A3" else []):
            w = c.weyl(word)
            for coeffs in itertools.product(range(2), repeat=c.rank):
                lam = c.weight(fund=dict(zip(c.labels, coeffs)))
                if (lam - w.act(lam)).ht > 6:
                    continue
                M = gen_detmod(q, w, lam)
                if M.n == 0:
                    continue
                assert is_simple(M)
                assert M.character.bar() == M.character
                assert M.beta == lam - w.act(lam)
                for i in c.labels:
                    if c.pair(i, w.act(lam)) >= 0:
                        assert eps(M, i) == 0
                    if c.pair(i, lam) <= 0:
                        assert eps_star(M, i) == 0
                alt = second_reduced_word(w)
                if alt is not None:
                    assert gen_detmod_word(q, alt, lam).character == M.character


def test_psi_of_generalized_determinantial(qA2):
    c = qA2.cartan
    for word in [(1, 2), (2, 1), (1, 2, 1)]:
        w = c.weyl(word)
        for lam in (c.fundamental(1), c.fundamental(2), c.fundamental(1) + c.fundamental(2)):
            M = gen_detmod(qA2, w, lam)
            winv = w.inverse()
            assert psi_star(M).character == gen_detmod(qA2, winv, -w.act(lam)).character


def test_reality_of_dominant_case(qA2, qA1aff):
    c = qA2.cartan
    M = gen_detmod(qA2, c.weyl((1, 2)), c.fundamental(1) + c.fundamental(2))
    assert M.n == 3 and is_simple(convolve(M, M))
    ca = qA1aff.cartan
    N = gen_detmod(qA1aff, ca.weyl((0, 1)), ca.weight(fund={1: 1, 0: -1}))
    assert is_simple(N) and not is_simple(convolve(N, N))


# -- divided powers and pairs ----------------------------------------------------------

def test_e_star_max_examples(qA2):
    Y, n = e_star_max(one_dim_module(qA2, (1, 2)), 2)
    assert n == 1 and Y.character == simple_L(qA2, 1).character
    for k in (1, 2, 3):
        Y, n = e_star_max(simple_Ln(qA2, 2, k), 2)
        assert n == k and Y.n == 0
    M = one_dim_module(qA2, (1, 2))
    Y, n = e_star_max(M, 1)
    assert n == 0 and Y is M


def test_detmod_pair_examples(qA2):
    c = qA2.cartan
    w = c.weyl((1, 2, 1))
    L1 = c.fundamental(1)
    assert detmod_pair(qA2, w, w, L1).n == 0
    assert detmod_pair(qA2, w, c.weyl(()), L1).character == gen_detmod(qA2, w, L1).character
    A = detmod_pair(qA2, w, c.weyl((1,)), L1)
    assert A.character == simple_L(qA2, 2).character
    B = gen_detmod(qA2, c.weyl((1,)), L1)
    H = head_via_r(mark_simple(A, real=True), B)
    assert ch_iso(H, gen_detmod(qA2, w, L1))
    with pytest.raises(ModuleError):
        detmod_pair(qA2, c.weyl((1,)), c.weyl((2,)), L1)
    with pytest.raises(ModuleError):
        detmod_pair(qA2, w, c.weyl((1,)), c.reflect(1, L1))


@pytest.mark.parametrize("name", ["A2", "A3"])
def test_multiplicativity_with_shift(qtables, name):
    q = qtables[name]
    c = q.cartan
    w = c.weyl((1, 2, 1)) if name == "A2" else c.weyl((2, 1, 3))
    checked = 0
    for v in (c.weyl(()), c.weyl((1,)), c.weyl((2,))):
        for L1, L2 in itertools.product([c.fundamental(i) for i in c.labels], repeat=2):
            A, B = detmod_pair(q, w, v, L1), detmod_pair(q, w, v, L2)
            T = detmod_pair(q, w, v, L1 + L2)
            s = -c.form(v.act(L1), v.act(L2) - w.act(L2))
            assert shuffle_character(c, A.character, B.character) == T.character.shift(s)
            checked += 1
    assert checked > 0


def test_chamber_checker_reports(qA2):
    c = qA2.cartan
    out = chamber_conjecture(qA2, c.weyl((1, 2)), c.fundamental(1), c.fundamental(2))
    assert set(out) == {"same_side", "commute"}

import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qha.conv import (convolve, convolve_all, hconv, head, head_via_r, is_real, is_simple,
                      is_simple_trace, shuffle_character, simple_Ln, socle, strongly_commute)
from qha.modules import (ResourceError, check_relations, dual, eps, eps_star, one_dim_module, restrict,
                         simple_L, stats)
from qha.rmatrix import is_unmixed
from qha.suites import catalog


def ch_iso(A, B):
    return A.character.shift_to(B.character) is not None


# -- convolution -------------------------------------------------------------------

def test_two_letter_convolution(qA2):
    c = qA2.cartan
    V = convolve(simple_L(qA2, 1), simple_L(qA2, 2))
    assert V.dim == 2
    degs = {w: d for w, d in V.basis}
    # the tau_1 stratum sits at degree -(alpha_1, alpha_2) relative to the identity stratum
    assert degs[(2, 1)] - degs[(1, 2)] == -c.ip(1, 2) == 1
    r = restrict(V, c.alpha(1), c.alpha(2))
    assert r.dim == 1 and V.basis[r.indices[0]][0] == (1, 2)


seq = st.lists(st.sampled_from((1, 2)), min_size=1, max_size=2)


@settings(max_examples=25, deadline=None)
@given(a=seq, b=seq, c=st.lists(st.sampled_from((1, 2)), max_size=1))
def test_convolution_properties(qA2, a, b, c):
    M = convolve_all([simple_L(qA2, i) for i in a])
    N = convolve_all([simple_L(qA2, i) for i in b])
    V = convolve(M, N)
    assert V.dim == comb(M.n + N.n, M.n) * M.dim * N.dim
    assert V.character == shuffle_character(qA2.cartan, M.character, N.character)
    assert check_relations(V) == []
    if c:
        P = simple_L(qA2, c[0])
        assert convolve(V, P).character == convolve(M, convolve(N, P)).character


def test_height_cap(qA2, monkeypatch):
    monkeypatch.setenv("QHA_HT_MAX", "2")
    with pytest.raises(ResourceError):
        convolve(simple_L(qA2, 1), one_dim_module(qA2, (1, 2)))


# -- heads, socles, simplicity -------------------------------------------------------

def test_head_examples(qA2):
    V = convolve(simple_L(qA2, 1), simple_L(qA2, 2))
    H = head(V)
    assert H.dim == 1 and ch_iso(H, one_dim_module(qA2, (1, 2)))
    L = one_dim_module(qA2, (2, 1))
    assert head(L).character == L.character
    assert not is_simple(V)
    assert is_simple(H)


@pytest.mark.parametrize("word", [(1, 2), (1, 1, 2), (2, 1, 1), (1, 2, 1), (1, 2, 2, 1)])
def test_socle_of_dual_is_dual_of_head(qA2, word):
    X = convolve_all([simple_L(qA2, i) for i in word])
    assert ch_iso(socle(dual(X)), dual(head(X)))


def test_reality(qA2, qA1aff):
    for i in (1, 2):
        L = simple_L(qA2, i)
        assert is_real(L)
        assert convolve(L, L).dim == simple_Ln(qA2, i, 2).dim == 2
    M = hconv(simple_L(qA1aff, 0), simple_L(qA1aff, 1))
    assert is_simple(M)
    assert not is_simple(convolve(M, M))


def test_simplicity_agrees_with_trace_radical(qtables):
    for name, h in (("A2", 3), ("A1^(1)", 3)):
        q = qtables[name]
        labels = q.cartan.labels
        for n in range(1, h + 1):
            for word in itertools.product(labels, repeat=n):
                V = convolve_all([simple_L(q, i) for i in word])
                assert is_simple(V, certify=False) == is_simple_trace(V)
        for S in catalog(q, h):
            assert is_simple_trace(S)


# -- invariants over a small corpus of simples ---------------------------------------

def corpus(q, h):
    return [S for S in catalog(q, h)]


@pytest.mark.parametrize("name,h", [("A2", 2), ("A3", 2), ("A1^(1)", 2)])
def test_unmixed_pairs_have_simple_head(qtables, name, h):
    q = qtables[name]
    count = 0
    for M, N in itertools.product(corpus(q, h), repeat=2):
        if not is_unmixed(M, N):
            continue
        count += 1
        H = head(convolve(M, N))
        assert is_simple(H)
        assert ch_iso(socle(convolve(N, M)), H)
    assert count > 0


@pytest.mark.parametrize("name,h", [("A2", 3), ("A1^(1)", 2)])
def test_i_string_heads_and_socles(qtables, name, h):
    q = qtables[name]
    checked = 0
    for M in corpus(q, h):
        for i in q.cartan.labels:
            d = stats(M, i).delta
            for a in range(d + 1):
                for b in range(d + 1 - a):
                    if a + b == 0 or M.n + a + b > 5:
                        continue
                    V = convolve_all([X for X in (simple_Ln(q, i, a), M, simple_Ln(q, i, b)) if X.n])
                    assert is_simple(head(V))
                    assert is_simple(socle(V))
                    checked += 1
    assert checked > 0


@pytest.mark.parametrize("name,h", [("A2", 3), ("A3", 2), ("A1^(1)", 3)])
def test_eps_of_head_with_i_power(qtables, name, h):
    q = qtables[name]
    c = q.cartan
    for M in corpus(q, h):
        for i in c.labels:
            for n in range(1, 3):
                if M.n + n > 5:
                    continue
                H = head_via_r(simple_Ln(q, i, n), M)  # L(i^n) is real: the head is psi-symmetric
                H2 = head(convolve(M, simple_Ln(q, i, n)))
                wt_i = c.pair(i, M.wt)
                assert eps(H2, i) == max(eps(M, i), n - wt_i - eps_star(M, i))
                # removing i's from the left lowers delta_i by n, down to 0
                assert stats(H, i).delta == max(stats(M, i).delta - n, 0)


def test_strong_commutation(qA2):
    L1, L2 = simple_L(qA2, 1), simple_L(qA2, 2)
    assert strongly_commute(L1, L1)
    assert not strongly_commute(L1, L2)

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qha.cartan import act_on_word, build_cartan, perm_lexmin_word, perm_of_word, preset, transposition
from qha.conv import convolve_all
from qha.linalg import add, scale
from qha.modules import simple_L
from qha.rewrite import (QTable, RewriteError, admissible_exponents, default_q_table, intertwiner,
                         straighten, word_degree)


def poly_mul(a, b):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def poly_sub(a, b):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) - c
    return {k: c for k, c in out.items() if c}


def normal_letters(u, a):
    return [("t", k) for k in perm_lexmin_word(u)] + \
        [("x", k + 1) for k, e in enumerate(a) for _ in range(e)]


def act_element(V, terms, v):
    out = {}
    for (u, a), c in terms.items():
        out = add(out, scale(V.act_word(normal_letters(u, a), v), c))
    return out


def sector_vectors(V, nu):
    return [{j: 1} for j, (w, _) in enumerate(V.basis) if w == tuple(nu)]


def induced(q, nu):
    return convolve_all([simple_L(q, i) for i in nu])


# -- Q tables ----------------------------------------------------------------------

def test_default_tables(qtables):
    assert qtables["A2"].Q(1, 2) == {(1, 0): 1, (0, 1): 1}
    assert qtables["A1^(1)"].Q(0, 1) == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    assert qtables["A2"].Q(1, 1) == {}


def test_admissible_exponents():
    c = preset("A2")
    assert admissible_exponents(c, 1, 2) == [(0, 1), (1, 0)]
    b2 = build_cartan([[2, -2], [-1, 2]], [1, 2])
    # p (a1,a1) + q (a2,a2) = -2 (a1,a2): 2p + 4q = 4
    assert sorted(admissible_exponents(b2, 1, 2)) == [(0, 1), (2, 0)]


@pytest.mark.parametrize("name", ["A2", "A3", "A1^(1)", "A2^(1)"])
def test_table_invariants(qtables, name):
    q = qtables[name]
    c = q.cartan
    for i, j in itertools.permutations(c.labels, 2):
        Qij, Qji = q.Q(i, j), q.Q(j, i)
        assert Qij == {(b, a): t for (a, b), t in Qji.items()}
        if c.a(i, j) != 0:
            assert Qij.get((-c.a(i, j), 0))
        # (u - w) Qbar(u, v, w) = Q(u, v) - Q(w, v), in exponents of (u, v, w)
        lhs = poly_mul({(1, 0, 0): 1, (0, 0, 1): -1}, q.Qbar(i, j))
        rhs = poly_sub({(p, r, 0): t for (p, r), t in Qij.items()},
                       {(0, r, p): t for (p, r), t in Qij.items()})
        assert lhs == rhs


def test_override_and_roundtrip():
    c = preset("A1^(1)")
    q = default_q_table(c, {(1, 0): {(2, 0): 3, (1, 1): -1, (0, 2): 2}})
    assert q.Q(0, 1) == {(0, 2): 3, (1, 1): -1, (2, 0): 2}
    assert QTable.from_json(c, q.to_json()) == q
    with pytest.raises(RewriteError):
        default_q_table(c, {(0, 1): {(3, 0): 1, (0, 2): 1}})
    with pytest.raises(RewriteError):
        default_q_table(c, {(0, 1): {(1, 1): 1, (0, 2): 1}})
    with pytest.raises(RewriteError):
        default_q_table(c, {(0, 0): {}})


# -- straightening -----------------------------------------------------------------

def test_tau_squared(qA2):
    e = straighten(qA2, [("t", 1), ("t", 1)], (1, 2))
    assert e.terms == {((1, 2), (1, 0)): 1, ((1, 2), (0, 1)): 1}
    assert e.degree == 2


def test_tau_x_commutation(qA2):
    lhs = straighten(qA2, [("t", 1), ("x", 1)], (1, 1))
    rhs = straighten(qA2, [(1, [("x", 2), ("t", 1)]), (-1, [])], (1, 1))
    assert lhs.terms == rhs.terms


def test_braid_with_correction(qtables):
    for name, nu in (("A2", (1, 2, 1)), ("A1^(1)", (0, 1, 0))):
        q = qtables[name]
        lhs = straighten(q, [("t", 2), ("t", 1), ("t", 2)], nu)
        i, j = nu[0], nu[1]
        corr = [(t, [("x", 1)] * a + [("x", 2)] * b + [("x", 3)] * c)
                for (a, b, c), t in q.Qbar(i, j).items()]
        rhs = straighten(q, [(1, [("t", 1), ("t", 2), ("t", 1)])] + corr, nu)
        assert lhs.terms == rhs.terms


def test_inhomogeneous_input_rejected(qA2):
    with pytest.raises(RewriteError):
        straighten(qA2, [(1, [("x", 1)]), (1, [])], (1, 2))


def test_word_degree(qA2):
    c = qA2.cartan
    assert word_degree(c, [("t", 1)], (1, 2)) == 1
    assert word_degree(c, [("t", 1)], (1, 1)) == -2
    assert word_degree(c, [("x", 1), ("t", 1)], (1, 2)) == 3


letters = st.lists(st.tuples(st.sampled_from("xt"), st.integers(1, 3)), max_size=5)


@pytest.mark.parametrize("name,nu", [("A2", (1, 2, 1)), ("A2", (1, 1, 2)), ("A1^(1)", (0, 1, 0)),
                                     ("A3", (1, 2, 3)), ("A2^(1)", (0, 1, 2))])
@settings(max_examples=30, deadline=None)
@given(word=letters)
def test_straighten_acts_like_the_word(qtables, name, nu, word):
    q = qtables[name]
    word = [(k, min(i, len(nu) if k == "x" else len(nu) - 1)) for k, i in word]
    V = induced(q, nu)
    el = straighten(q, [(1, word)], nu)
    for v in sector_vectors(V, nu):
        assert act_element(V, el.terms, v) == V.act_word(word, v)
    # idempotent on its own output
    again = straighten(q, [(c, normal_letters(u, a)) for (u, a), c in el.terms.items()], nu)
    assert again.terms == el.terms


@pytest.mark.parametrize("m", [1, 2])
def test_block_normal_form_agrees(qA2, m):
    nu = (1, 2, 1)
    word = [("t", 2), ("x", 1), ("t", 1), ("t", 2)]
    a = straighten(qA2, word, nu)
    b = straighten(qA2, word, nu, m=m)
    V = induced(qA2, nu)
    for v in sector_vectors(V, nu):
        tb = {}
        for w, vword, ex, c in b.block_terms():
            letters_ = [("t", k) for k in perm_lexmin_word(w) + vword] + \
                [("x", k + 1) for k, e in enumerate(ex) for _ in range(e)]
            tb = add(tb, scale(V.act_word(letters_, v), c))
        assert tb == act_element(V, a.terms, v)


# -- intertwiners ------------------------------------------------------------------

def test_intertwiner_examples(qA2):
    assert intertwiner(qA2, (1,), (1, 2)) == {((2, 1), (0, 0)): 1}
    assert intertwiner(qA2, (), (1, 2)) == {((1, 2), (0, 0)): 1}
    with pytest.raises(RewriteError):
        intertwiner(qA2, (1, 1), (1, 2))


@pytest.mark.parametrize("name,nu", [("A2", (1, 2)), ("A2", (1, 1)), ("A1^(1)", (0, 1))])
def test_intertwiner_square(qtables, name, nu):
    q = qtables[name]
    V = induced(q, nu)
    phi = intertwiner(q, (1,), nu)
    phi_back = intertwiner(q, (1,), (nu[1], nu[0]))
    i, j = nu
    expected = straighten(q, [(t, [("x", 1)] * a + [("x", 2)] * b) for (a, b), t in q.Q(i, j).items()]
                          + ([(1, [])] if i == j else []), nu)
    for v in sector_vectors(V, nu):
        assert act_element(V, phi_back, act_element(V, phi, v)) == act_element(V, expected.terms, v)


@pytest.mark.parametrize("name,nu", [("A2", (1, 2, 1)), ("A2", (1, 1, 1)), ("A2", (1, 1, 2)),
                                     ("A1^(1)", (0, 1, 0)), ("A3", (1, 2, 3))])
def test_intertwiner_braid_and_x_twist(qtables, name, nu):
    q = qtables[name]
    assert intertwiner(q, (1, 2, 1), nu) == intertwiner(q, (2, 1, 2), nu)
    V = induced(q, nu)
    n = len(nu)
    for word in [(1,), (2,), (1, 2), (2, 1), (1, 2, 1)]:
        w = perm_of_word(n, word)
        phi = intertwiner(q, word, nu)
        for k in range(1, n + 1):
            for v in sector_vectors(V, nu):
                lhs = act_element(V, phi, V.act("x", k, v))
                rhs = V.act("x", w[k - 1], act_element(V, phi, v))
                assert lhs == rhs

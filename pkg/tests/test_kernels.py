import subprocess
import sys

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qha import _kernels_py as py

try:
    from qha import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

coeff = st.integers(-4, 4).filter(bool).map(gmpy2.mpq)
vec = st.dictionaries(st.integers(0, 12), coeff, max_size=8)
mat = st.dictionaries(st.integers(0, 12), vec, max_size=8)


def dense_matvec(M, v):
    out = {}
    for j, c in v.items():
        for i, a in M.get(j, {}).items():
            out[i] = out.get(i, 0) + a * c
    return {i: c for i, c in out.items() if c}


@settings(max_examples=200, deadline=None)
@given(M=mat, v=vec)
def test_python_matvec_matches_reference(M, v):
    assert py.matvec(M, v) == dense_matvec(M, v)


@settings(max_examples=200, deadline=None)
@given(y=vec, a=st.integers(-3, 3).map(gmpy2.mpq), x=vec)
def test_python_axpy(y, a, x):
    expected = dict(y)
    for k, c in x.items():
        expected[k] = expected.get(k, 0) + a * c
    expected = {k: c for k, c in expected.items() if c}
    py.axpy(y, a, x)
    assert y == expected and all(y.values())


def echelon_rows(vectors):
    rows, combos = {}, {}
    for t, v in enumerate(vectors):
        v = dict(v)
        combo = {t: gmpy2.mpq(1)}
        py.reduce_by(v, rows, combo, combos)
        if v:
            p = min(v)
            inv = 1 / v[p]
            rows[p] = {k: c * inv for k, c in v.items()}
            combos[p] = {k: c * inv for k, c in combo.items()}
    return rows, combos


@settings(max_examples=100, deadline=None)
@given(vs=st.lists(vec, max_size=5), target=vec)
def test_python_reduce_by_leaves_no_pivots(vs, target):
    rows, combos = echelon_rows(vs)
    v = dict(target)
    py.reduce_by(v, rows, None, None)
    assert not set(v) & set(rows)


@needs_compiled
@settings(max_examples=200, deadline=None)
@given(M=mat, v=vec, y=vec, a=st.integers(-3, 3).map(gmpy2.mpq))
def test_compiled_matches_python(M, v, y, a):
    assert compiled.matvec(M, v) == py.matvec(M, v)
    y1, y2 = dict(y), dict(y)
    py.axpy(y1, a, v)
    compiled.axpy(y2, a, v)
    assert y1 == y2


@needs_compiled
@settings(max_examples=100, deadline=None)
@given(vs=st.lists(vec, max_size=5), target=vec)
def test_compiled_reduce_by_matches_python(vs, target):
    rows, combos = echelon_rows(vs)
    v1, v2 = dict(target), dict(target)
    c1, c2 = {}, {}
    py.reduce_by(v1, rows, c1, combos)
    compiled.reduce_by(v2, rows, c2, combos)
    assert v1 == v2 and c1 == c2


def test_backend_override():
    code = "import qha._kernels as k; print(k.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={"QHA_KERNELS": "python", "PATH": ""},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"

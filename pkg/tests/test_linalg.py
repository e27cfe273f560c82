import importlib

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

import qrec.homology
import qrec.linalg
from qrec import _fallback
from qrec.linalg import (FpMat, block, image_basis, inverse, kernel_basis, kron,
                         left_annihilator, right_inverse, rref, solve)

try:
    _compiled = importlib.import_module("qrec._kernels")
except ImportError:  # pragma: no cover
    _compiled = None

BACKENDS = [pytest.param(_fallback, id="python"),
            pytest.param(_compiled, id="cython",
                         marks=pytest.mark.skipif(_compiled is None, reason="extension not built"))]


@pytest.fixture(params=BACKENDS, autouse=True)
def backend(request, monkeypatch):
    monkeypatch.setattr(qrec.linalg, "kernels", request.param)
    monkeypatch.setattr(qrec.homology, "kernels", request.param)
    return request.param


def M(rows, p=2):
    return FpMat(p, rows)


def oracle(m: FpMat) -> DomainMatrix:
    return DomainMatrix.from_list(m.tolist(), GF(m.p)) if m.rows and m.cols else None


@st.composite
def matrices(draw, max_side=6, primes=(2, 3, 5, 7)):
    p = draw(st.sampled_from(primes))
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return FpMat(p, np.array(vals, dtype=np.int64).reshape(r, c))


# --- construction -------------------------------------------------------------------

def test_entries_reduced_and_prime_checked():
    assert M([[3, -1]], 2).tolist() == [[1, 1]]
    with pytest.raises(ValueError):
        FpMat(4, [[1]])


def test_zero_dimensional_matrices_are_zero_maps():
    z = FpMat.zeros(2, 0, 3)
    assert z.shape == (0, 3)
    assert (FpMat.zeros(2, 2, 0) @ z).shape == (2, 3)
    assert (FpMat.zeros(2, 2, 0) @ z).is_zero()


# --- rref ------------------------------------------------------------------------------

def test_rref_identity():
    red, piv, r = rref(FpMat.identity(2, 2))
    assert red == FpMat.identity(2, 2) and piv == [0, 1] and r == 2


def test_rref_rank_one_over_f2():
    red, piv, r = rref(M([[1, 1], [1, 1]]))
    assert red.tolist() == [[1, 1], [0, 0]] and piv == [0] and r == 1


def test_rref_empty():
    red, piv, r = rref(FpMat.zeros(2, 0, 3))
    assert red.shape == (0, 3) and piv == [] and r == 0


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_matches_oracle(m):
    red, piv, r = rref(m)
    o = oracle(m)
    if o is None:
        assert r == 0
        return
    ored, opiv = o.rref()
    assert red.tolist() == [[int(x) % m.p for x in row] for row in ored.to_Matrix().tolist()]
    assert tuple(piv) == tuple(opiv) and r == o.rank()


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rref_idempotent(m):
    red = rref(m)[0]
    assert rref(red)[0] == red


# --- kernel / image ----------------------------------------------------------------

def test_kernel_examples():
    assert kernel_basis(FpMat.identity(3, 3)).shape == (3, 0)
    assert kernel_basis(M([[1, 1]])).tolist() == [[1], [1]]
    assert kernel_basis(FpMat.zeros(2, 2, 2)) == FpMat.identity(2, 2)


def test_image_examples():
    assert image_basis(FpMat.identity(2, 2)) == FpMat.identity(2, 2)
    assert image_basis(M([[1, 0], [1, 0]])).tolist() == [[1], [1]]
    assert image_basis(FpMat.zeros(2, 2, 3)).cols == 0


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel_annihilated(m):
    k = kernel_basis(m)
    assert m.rank() + k.cols == m.cols
    assert (m @ k).is_zero()
    assert k.rank() == k.cols
    assert image_basis(m).cols == m.rank()


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_left_annihilator_kernel_is_column_space(m):
    q = left_annihilator(m)
    assert (q @ m).is_zero()
    assert q.rows + m.rank() == m.rows
    if q.rows:
        assert q @ right_inverse(q) == FpMat.identity(m.p, q.rows)


# --- solve ------------------------------------------------------------------------------

def test_solve_examples():
    b = M([[1, 0], [1, 1]])
    assert solve(FpMat.identity(2, 2), b) == b
    assert solve(M([[1, 1]]), M([[1]])).tolist() == [[1], [0]]
    assert solve(FpMat.zeros(2, 2, 2), M([[1], [0]])) is None


def test_solve_shape_mismatch():
    with pytest.raises(ValueError):
        solve(FpMat.identity(2, 2), FpMat.zeros(2, 3, 1))


@settings(max_examples=150, deadline=None)
@given(matrices(), st.integers(0, 3), st.data())
def test_solve_sound_and_complete(a, k, data):
    vals = data.draw(st.lists(st.integers(0, a.p - 1), min_size=a.cols * k, max_size=a.cols * k))
    x0 = FpMat(a.p, np.array(vals, dtype=np.int64).reshape(a.cols, k))
    b = a @ x0
    x = solve(a, b)
    assert x is not None and a @ x == b


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.data())
def test_inverse_roundtrip(p, n, data):
    vals = data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    m = FpMat(p, np.array(vals, dtype=np.int64).reshape(n, n))
    if m.rank() < n:
        with pytest.raises(ValueError):
            inverse(m)
    else:
        assert m @ inverse(m) == FpMat.identity(p, n)


# --- kron / block ----------------------------------------------------------------

def test_kron_examples():
    b = M([[1, 0], [1, 1]])
    assert kron(FpMat.identity(2, 1), b) == b
    assert kron(M([[1], [1]]), M([[1, 0]])).tolist() == [[1, 0], [1, 0]]


def test_block_examples():
    a, b = M([[1]]), M([[1, 1], [0, 1]])
    out = block([[a, FpMat.zeros(2, 1, 2)], [FpMat.zeros(2, 2, 1), b]])
    assert out.tolist() == [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
    with pytest.raises(ValueError):
        block([[a, b]])


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_kron_bilinear(p, data):
    def draw(r, c):
        vals = data.draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
        return FpMat(p, np.array(vals, dtype=np.int64).reshape(r, c))
    a, b, c = draw(2, 3), draw(1, 2), draw(1, 2)
    assert kron(a, b + c) == kron(a, b) + kron(a, c)


# --- backends agree ---------------------------------------------------------------

@pytest.mark.skipif(_compiled is None, reason="extension not built")
@settings(max_examples=100, deadline=None)
@given(matrices(max_side=7))
def test_backends_agree_on_rref(m):
    a1, a2 = m.a.copy(), m.a.copy()
    if not m.a.size:
        return
    assert list(_fallback.rref_inplace(a1, m.p)) == list(_compiled.rref_inplace(a2, m.p))
    assert np.array_equal(a1, a2)
    assert _fallback.rank_mod(m.a, m.p) == _compiled.rank_mod(m.a, m.p)


@pytest.mark.skipif(_compiled is None, reason="extension not built")
@pytest.mark.parametrize("mode", range(7))
def test_backends_agree_on_span_search(mode):
    rng = np.random.default_rng(mode)
    # one 2x2 block at offset 0 and one 1x2 block at offset 4
    blocks = np.array([[0, 2, 2], [4, 1, 2]], dtype=np.int64)
    for _ in range(25):
        basis = rng.integers(0, 3, size=(int(rng.integers(0, 4)), 6))
        r1 = _fallback.span_search(basis, blocks, 3, mode)
        r2 = _compiled.span_search(basis, blocks, 3, mode)
        assert (r1 is None) == (r2 is None)
        if r1 is not None:
            assert list(r1) == list(r2)
        for row in basis:
            assert _fallback.check_element(row, blocks, 3, mode) == _compiled.check_element(row, blocks, 3, mode)


@pytest.mark.parametrize("env,expected", [("1", "python"), ("0", None)])
def test_backend_selected_at_import(env, expected):
    import os
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-c", "import qrec; print(qrec.BACKEND)"],
                         env={**os.environ, "QREC_PURE_PYTHON": env}, capture_output=True, text=True, check=True)
    want = expected or ("cython" if _compiled is not None else "python")
    assert res.stdout.strip() == want

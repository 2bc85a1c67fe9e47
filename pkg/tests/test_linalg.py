"""Dense linear algebra kernels against numpy references."""

import numpy as np
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from xfid.errors import NotPSDError, ValidationError
from xfid.linalg import (
    PAULI,
    check_density_matrix,
    check_hermitian,
    hermitian_eigensystem,
    hermitian_eigenvalues,
    pauli_expectation,
    psd_sqrt,
    singular_values,
)


def random_hermitian(rng, n=4, scale=1.0):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (m + m.conj().T) / 2.0


def test_eigensystem_matches_numpy():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = random_hermitian(rng)
        vals, vecs = hermitian_eigensystem(m)
        ref = np.sort(np.linalg.eigvalsh(m))[::-1]
        assert_allclose(vals, ref, atol=1e-12, rtol=1e-12)
        # eigenvectors reconstruct the matrix
        assert_allclose(vecs @ np.diag(vals) @ vecs.conj().T, m, atol=1e-12)
        assert_allclose(vecs.conj().T @ vecs, np.eye(4), atol=1e-12)


def test_eigenvalues_batched():
    rng = np.random.default_rng(12)
    stack = np.array([random_hermitian(rng) for _ in range(50)])
    vals = hermitian_eigenvalues(stack)
    assert vals.shape == (50, 4)
    for i in range(50):
        assert_allclose(vals[i], np.sort(np.linalg.eigvalsh(stack[i]))[::-1],
                        atol=1e-12, rtol=1e-12)


@seed(1)
@settings(deadline=None, max_examples=60)
@given(
    entries=arrays(
        np.float64,
        (2, 4, 4),
        elements=st.floats(min_value=-10.0, max_value=10.0),
    )
)
def test_eigenvalue_sum_is_trace(entries):
    m = entries[0] + 1j * entries[1]
    m = (m + m.conj().T) / 2.0
    vals = hermitian_eigenvalues(m)
    assert abs(vals.sum() - np.trace(m).real) <= 1e-10 * max(1.0, abs(np.trace(m).real))


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(13)
    for _ in range(100):
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = b @ b.conj().T
        r = psd_sqrt(m)
        assert_allclose(r @ r, m, atol=1e-10)


def test_psd_sqrt_rejects_negative():
    m = np.diag([1.0, 0.5, 0.25, -0.1]).astype(complex)
    try:
        psd_sqrt(m)
        assert False, "expected NotPSDError"
    except NotPSDError:
        pass


def test_singular_values_match_numpy():
    rng = np.random.default_rng(14)
    for _ in range(100):
        t = rng.normal(size=(3, 3))
        assert_allclose(singular_values(t), np.linalg.svd(t, compute_uv=False),
                        atol=1e-12, rtol=1e-12)


def test_pauli_expectation_bell():
    # |phi+> has correlation diag(1, -1, 1)
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    rho = np.outer(v, v.conj())
    got = np.array([[pauli_expectation(rho, m, n) for n in (1, 2, 3)] for m in (1, 2, 3)])
    assert_allclose(got, np.diag([1.0, -1.0, 1.0]), atol=1e-14)
    assert PAULI[2][0, 0] == 1.0


def test_check_hermitian_rejects():
    m = np.eye(4, dtype=complex)
    m[0, 1] = 1e-6
    try:
        check_hermitian(m)
        assert False, "expected ValidationError"
    except ValidationError:
        pass
    try:
        check_hermitian(np.eye(3, dtype=complex)[:2])
        assert False, "expected ValidationError"
    except ValidationError:
        pass


def test_check_density_matrix():
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    out = check_density_matrix(rho)
    assert_allclose(out, rho)
    try:
        check_density_matrix(2.0 * rho)
        assert False, "expected ValidationError on trace"
    except ValidationError:
        pass

"""Fixed-size Hermitian linear algebra backing the dense-matrix oracles.

All routines accept stacked operands: an argument of shape (..., n, n) is
processed independently along the leading axes, so a batch of ten thousand
4x4 density matrices goes through one call.  Eigenvalue problems are solved
with a cyclic complex Jacobi iteration (off-diagonal threshold 1e-14, at
most 100 sweeps) instead of LAPACK, which keeps results deterministic
across BLAS builds at these tiny sizes.  Singular values use the one-sided
Jacobi variant on the columns.
"""

from __future__ import annotations

import numpy as np

from .errors import ConsistencyError, NonHermitianError, NotPSDError, ValidationError

OFFDIAG_TOL = 1e-14
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-12
PSD_EIG_FLOOR = -1e-8

PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)

# _KRON[n - 1][m - 1] = sigma_n on the first qubit, sigma_m on the second.
_KRON = tuple(tuple(np.kron(sn, sm) for sm in PAULI) for sn in PAULI)


def _as_square(m, name: str) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValidationError(f"{name}: expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag if np.iscomplexobj(a) else a.real)):
        raise ValidationError(f"{name}: entries must be finite")
    return a.astype(complex)


def check_hermitian(m, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity of a (stack of) square matrices.

    Raises NonHermitianError naming the worst offending entry pair.
    Returns the exactly hermitized copy (m + m^dagger) / 2.
    """
    a = _as_square(m, name)
    gap = np.abs(a - np.conj(np.swapaxes(a, -1, -2)))
    worst = float(np.max(gap))
    if worst > tol:
        idx = np.unravel_index(int(np.argmax(gap)), gap.shape)
        i, j = idx[-2], idx[-1]
        raise NonHermitianError(
            f"{name}: not Hermitian, entry pair ({i},{j})/({j},{i}) differs by {worst:.3e} (tol {tol:.1e})"
        )
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def _offdiag_max(a: np.ndarray) -> float:
    mask = ~np.eye(a.shape[-1], dtype=bool)
    return float(np.max(np.abs(a[..., mask]))) if a.size else 0.0


def _rotate_pair(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Apply one batched Jacobi rotation annihilating a[..., p, q]."""
    apq = a[..., p, q]
    mag = np.abs(apq)
    active = mag > 0.0
    safe = np.where(active, mag, 1.0)
    tau = (a[..., q, q].real - a[..., p, p].real) / (2.0 * safe)
    # Smaller-magnitude root of t^2 + 2*tau*t - 1 = 0 for stability.
    sign = np.where(tau >= 0.0, 1.0, -1.0)
    t = sign / (np.abs(tau) + np.hypot(1.0, tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = (t * c) * (apq / safe)
    c = np.where(active, c, 1.0)
    s = np.where(active, s, 0.0)
    cc = c[..., None]
    ss = s[..., None]

    colp = a[..., :, p].copy()
    colq = a[..., :, q].copy()
    a[..., :, p] = colp * cc - colq * np.conj(ss)
    a[..., :, q] = colp * ss + colq * cc
    rowp = a[..., p, :].copy()
    rowq = a[..., q, :].copy()
    a[..., p, :] = rowp * cc - rowq * ss
    a[..., q, :] = rowp * np.conj(ss) + rowq * cc
    # The targeted pair is zero by construction; store exact zeros.
    a[..., p, q] = np.where(active, 0.0, a[..., p, q])
    a[..., q, p] = np.where(active, 0.0, a[..., q, p])

    vp = v[..., :, p].copy()
    vq = v[..., :, q].copy()
    v[..., :, p] = vp * cc - vq * np.conj(ss)
    v[..., :, q] = vp * ss + vq * cc


def _jacobi(a: np.ndarray) -> np.ndarray:
    """Diagonalize Hermitian stack a in place; returns accumulated rotations."""
    n = a.shape[-1]
    v = np.zeros_like(a)
    v[..., np.arange(n), np.arange(n)] = 1.0
    thresh = OFFDIAG_TOL * max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    for _ in range(MAX_SWEEPS):
        if _offdiag_max(a) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate_pair(a, v, p, q)
    else:
        raise ConsistencyError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
    return v


def _sort_descending(vals: np.ndarray, vecs: np.ndarray | None):
    order = np.argsort(-vals, axis=-1, kind="stable")
    svals = np.take_along_axis(vals, order, axis=-1)
    if vecs is None:
        return svals, None
    svecs = np.take_along_axis(vecs, order[..., None, :], axis=-1)
    return svals, svecs


def hermitian_eigensystem(m, name: str = "matrix"):
    """Eigenvalues (descending) and eigenvectors of a Hermitian stack.

    Parameters
    ----------
    m : array_like, shape (..., n, n)
        Hermitian within 1e-12 entrywise.

    Returns
    -------
    vals : ndarray, shape (..., n)
        Real eigenvalues sorted in descending order; ties keep the
        pre-sort index order.
    vecs : ndarray, shape (..., n, n)
        Column k is the eigenvector for vals[..., k].
    """
    a = check_hermitian(m, name=name)
    v = _jacobi(a)
    vals = np.real(a[..., np.arange(a.shape[-1]), np.arange(a.shape[-1])])
    return _sort_descending(vals, v)


def hermitian_eigenvalues(m, name: str = "matrix") -> np.ndarray:
    """Descending real eigenvalues of a Hermitian stack (..., n, n) -> (..., n)."""
    return hermitian_eigensystem(m, name=name)[0]


def psd_sqrt(m, name: str = "matrix") -> np.ndarray:
    """Principal square root of a Hermitian positive-semidefinite stack.

    Eigenvalues in [-1e-8, 0) are clamped to zero before the square root;
    anything below -1e-8 raises NotPSDError.
    """
    vals, vecs = hermitian_eigensystem(m, name=name)
    low = float(np.min(vals))
    if low < PSD_EIG_FLOOR:
        raise NotPSDError(f"{name}: eigenvalue {low:.3e} below PSD tolerance {PSD_EIG_FLOOR:.1e}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    out = (vecs * root[..., None, :]) @ np.conj(np.swapaxes(vecs, -1, -2))
    return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))


def singular_values(t) -> np.ndarray:
    """Singular values of a real matrix stack via one-sided Jacobi.

    Parameters
    ----------
    t : array_like, shape (..., n, n)
        Real entries (the 3x3 correlation matrices in practice).

    Returns
    -------
    ndarray, shape (..., n)
        Nonnegative singular values in descending order.
    """
    a = np.asarray(t, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValidationError(f"singular_values: expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("singular_values: entries must be finite")
    a = a.copy()
    n = a.shape[-1]
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(MAX_SWEEPS):
        worst = 0.0
        for p, q in pairs:
            cp = a[..., :, p]
            cq = a[..., :, q]
            app = np.sum(cp * cp, axis=-1)
            aqq = np.sum(cq * cq, axis=-1)
            apq = np.sum(cp * cq, axis=-1)
            denom = np.sqrt(app * aqq)
            rel = np.abs(apq) / np.where(denom > 0.0, denom, 1.0)
            worst = max(worst, float(np.max(rel)) if rel.size else 0.0)
        if worst <= 1e-15:
            break
        for p, q in pairs:
            cp = a[..., :, p].copy()
            cq = a[..., :, q].copy()
            app = np.sum(cp * cp, axis=-1)
            aqq = np.sum(cq * cq, axis=-1)
            apq = np.sum(cp * cq, axis=-1)
            active = np.abs(apq) > 1e-300
            safe = np.where(active, apq, 1.0)
            tau = (aqq - app) / (2.0 * safe)
            sign = np.where(tau >= 0.0, 1.0, -1.0)
            tpar = sign / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + tpar * tpar)
            s = tpar * c
            c = np.where(active, c, 1.0)[..., None]
            s = np.where(active, s, 0.0)[..., None]
            a[..., :, p] = cp * c - cq * s
            a[..., :, q] = cp * s + cq * c
    sv = np.sqrt(np.sum(a * a, axis=-2))
    return _sort_descending(sv, None)[0]


def pauli_expectation(rho, m: int, n: int):
    """Expectation Tr[rho (sigma_n tensor sigma_m)] for indices in 1..3.

    sigma_n acts on the first qubit and sigma_m on the second.  The trace
    of a Hermitian observable against a density matrix is real; an
    imaginary residue at or above 1e-10 raises ConsistencyError, smaller
    residues are discarded.
    """
    if m not in (1, 2, 3) or n not in (1, 2, 3):
        raise ValidationError(f"pauli_expectation: indices must be in 1..3, got m={m}, n={n}")
    a = _as_square(rho, "rho")
    if a.shape[-1] != 4:
        raise ValidationError(f"pauli_expectation: expected 4x4 matrices, got shape {a.shape}")
    val = np.einsum("...ij,ji->...", a, _KRON[n - 1][m - 1])
    resid = float(np.max(np.abs(val.imag))) if val.size else 0.0
    if resid >= 1e-10:
        raise ConsistencyError(f"pauli_expectation: imaginary residue {resid:.3e} exceeds 1e-10")
    out = val.real
    return float(out) if np.ndim(out) == 0 else out


def check_density_matrix(rho, name: str = "rho") -> np.ndarray:
    """Validate a (stack of) 4x4 density matrices.

    Checks Hermiticity within 1e-12, unit trace within 1e-12 and
    eigenvalues >= -1e-10.  Returns the hermitized array.
    """
    a = check_hermitian(rho, name=name)
    if a.shape[-1] != 4:
        raise ValidationError(f"{name}: expected 4x4 matrices, got shape {a.shape}")
    tr = np.einsum("...ii->...", a).real
    gap = float(np.max(np.abs(tr - 1.0)))
    if gap > 1e-12:
        raise ValidationError(f"{name}: trace deviates from 1 by {gap:.3e} (tol 1e-12)")
    low = float(np.min(hermitian_eigenvalues(a, name=name)))
    if low < -1e-10:
        raise NotPSDError(f"{name}: eigenvalue {low:.3e} below -1e-10")
    return a

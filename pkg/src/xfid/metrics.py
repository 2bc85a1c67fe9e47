"""Closed-form metrics for X states and their dense-matrix oracles.

Every quantity ships in two independent routes.  The closed route
evaluates algebraic formulas in the parametrization (broadcastable over
numpy arrays).  The oracle route works on the assembled 4x4 density
matrix with generic linear algebra and never sees the closed formulas.
report() runs both and refuses to return if they disagree.

Metrics: purity Tr(rho^2); Wootters concurrence; optimal teleportation
fidelity (1/2)(1 + N/3) with N the trace norm of the Pauli correlation
matrix; Uhlmann fidelity to the four Bell states, reported as the best
candidate with a deterministic tie-break.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .linalg import (
    PAULI,
    check_density_matrix,
    hermitian_eigenvalues,
    psd_sqrt,
    singular_values,
)
from .xstate import (
    RankClass,
    XParams,
    block_weight_a,
    classify_rank,
    coeff_f,
    coeff_fprime,
    coeff_k,
    to_density,
)

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")
BELL_TIE_TOL = 1e-12
REPORT_TOL = 1e-6

_SQ2 = 1.0 / math.sqrt(2.0)
_BELL_VECTORS = {
    "phi+": np.array([_SQ2, 0.0, 0.0, _SQ2]),
    "phi-": np.array([_SQ2, 0.0, 0.0, -_SQ2]),
    "psi+": np.array([0.0, _SQ2, _SQ2, 0.0]),
    "psi-": np.array([0.0, _SQ2, -_SQ2, 0.0]),
}

# sigma_y (x) sigma_y, the spin-flip conjugator; real antidiagonal.
_YY = np.kron(PAULI[1], PAULI[1]).real

# K[m, n] = sigma_{m+1} (x) sigma_{n+1} for the correlation matrix trace.
_PAULI_KRON = np.array([[np.kron(a, b) for b in PAULI] for a in PAULI])


def bell_vector(label: str) -> np.ndarray:
    if label not in _BELL_VECTORS:
        raise ValueError(f"unknown Bell label {label!r}, expected one of {BELL_LABELS}")
    return _BELL_VECTORS[label].copy()


def bell_density(label: str) -> np.ndarray:
    v = bell_vector(label).astype(complex)
    return np.outer(v, v.conj())


# --- closed formulas (broadcast over arrays) ---------------------------------

def purity_formula(theta, phi, psi, x, y):
    """Tr(rho^2) from the parameters.

    Expanding the square gives 1 - 2(AB + G - y + H - x): the block
    cross term plus the distances of each coherence from its cap.
    """
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta) ** 2
    a_w = s * (1.0 - np.sin(phi) ** 2 * np.sin(psi) ** 2)
    cap_x = s * (1.0 - s) * np.sin(phi) ** 2 * np.sin(psi) ** 2
    cap_y = (s * coeff_f(phi, psi)) ** 2
    return 1.0 - 2.0 * (a_w * (1.0 - a_w) + (cap_y - np.asarray(y)) + (cap_x - np.asarray(x)))


def concurrence_formula(theta, phi, psi, x, y):
    """Wootters concurrence: max(0, 2(sqrt(x) - sqrt(G)), 2(sqrt(y) - sqrt(H)))."""
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta) ** 2
    sqrt_g = s * coeff_f(phi, psi)
    sqrt_h = np.sqrt(s * (1.0 - s)) * coeff_fprime(phi, psi)
    outer = 2.0 * (np.sqrt(np.asarray(x, dtype=float)) - sqrt_g)
    inner = 2.0 * (np.sqrt(np.asarray(y, dtype=float)) - sqrt_h)
    return np.maximum(0.0, np.maximum(outer, inner))


def fidelity_formula(theta, phi, psi, x, y):
    """Optimal teleportation fidelity (1/6)(3 + 4 sqrt(max(x, y)) + |k|).

    The Pauli correlation matrix of an X state is block diagonal with
    singular values 2(sqrt(x) + sqrt(y)), 2|sqrt(x) - sqrt(y)| and |k|,
    independent of the coherence phases; their sum is 4 sqrt(max(x, y)) + |k|.
    """
    a = np.maximum(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    k = coeff_k(np.asarray(theta, dtype=float), phi, psi)
    return (3.0 + 4.0 * np.sqrt(a) + np.abs(k)) / 6.0


def uhlmann_candidates_formula(theta, phi, psi, x, y, mu, nu):
    """Bell-state overlaps <B|rho|B>, stacked (..., 4) in BELL_LABELS order.

    For rank-deficient Bell targets the Uhlmann fidelity reduces to the
    plain overlap: B/2 +- sqrt(x) cos(mu) for phi+-, A/2 +- sqrt(y) cos(nu)
    for psi+-.
    """
    theta, phi, psi, x, y, mu, nu = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (theta, phi, psi, x, y, mu, nu))
    )
    a_w = block_weight_a(theta, phi, psi)
    b_w = 1.0 - a_w
    re_outer = np.sqrt(x) * np.cos(mu)
    re_inner = np.sqrt(y) * np.cos(nu)
    return np.stack(
        [
            b_w / 2.0 + re_outer,
            b_w / 2.0 - re_outer,
            a_w / 2.0 + re_inner,
            a_w / 2.0 - re_inner,
        ],
        axis=-1,
    )


def pick_bell(candidates, tol: float = BELL_TIE_TOL):
    """Index of the best candidate; ties go to the earliest label in order."""
    c = np.asarray(candidates, dtype=float)
    vmax = c.max(axis=-1, keepdims=True)
    idx = (c >= vmax - tol).argmax(axis=-1)
    return idx


# --- per-state closed wrappers ------------------------------------------------

def purity_closed(p: XParams) -> float:
    return float(purity_formula(p.theta, p.phi, p.psi, p.x, p.y))


def concurrence_closed(p: XParams) -> float:
    return float(concurrence_formula(p.theta, p.phi, p.psi, p.x, p.y))


def fidelity_closed(p: XParams) -> float:
    return float(fidelity_formula(p.theta, p.phi, p.psi, p.x, p.y))


def uhlmann_closed(p: XParams) -> tuple[float, str]:
    cands = uhlmann_candidates_formula(p.theta, p.phi, p.psi, p.x, p.y, p.mu, p.nu)
    idx = int(pick_bell(cands))
    return float(cands[idx]), BELL_LABELS[idx]


# --- dense-matrix oracles -----------------------------------------------------

def purity_oracle(rho) -> np.ndarray | float:
    rho = np.asarray(rho, dtype=complex)
    val = np.einsum("...ij,...ji->...", rho, rho).real
    return float(val) if val.ndim == 0 else val


def spin_flip(rho) -> np.ndarray:
    """(sigma_y (x) sigma_y) conj(rho) (sigma_y (x) sigma_y)."""
    rho = np.asarray(rho, dtype=complex)
    return _YY @ np.conj(rho) @ _YY


# Eigenvalues of products of unit-trace PSD factors carry absolute noise
# near the solver threshold; taking square roots amplifies it to ~1e-8,
# so the oracles treat eigenvalues below this floor as exact zeros of a
# rank-deficient product.  States genuinely within 1e-13 of a rank drop
# lose at most ~3e-7 of accuracy, far inside their own conditioning.
EIG_NOISE_FLOOR = 1e-13


def concurrence_oracle(rho) -> np.ndarray | float:
    """Wootters concurrence from eigenvalues of sqrt(rho) rho~ sqrt(rho)."""
    rho = np.asarray(rho, dtype=complex)
    sr = psd_sqrt(rho)
    m = sr @ spin_flip(rho) @ sr
    vals = hermitian_eigenvalues(m)
    vals = np.where(vals < EIG_NOISE_FLOOR, 0.0, vals)
    lam = np.sqrt(vals)
    c = 2.0 * lam[..., 0] - lam.sum(axis=-1)
    c = np.maximum(0.0, c)
    return float(c) if c.ndim == 0 else c


def correlation_matrix(rho) -> np.ndarray:
    """3x3 Pauli correlation matrix T[m, n] = Tr(rho sigma_m (x) sigma_n)."""
    rho = np.asarray(rho, dtype=complex)
    t = np.einsum("...ij,mnji->...mn", rho, _PAULI_KRON)
    if np.abs(t.imag).max() > 1e-10:
        raise ConsistencyError(f"correlation matrix has imaginary part {np.abs(t.imag).max():.3e}")
    t = t.real
    if np.abs(t).max() > 1.0 + 1e-12:
        raise ConsistencyError(f"correlation entry {np.abs(t).max()!r} outside [-1, 1]")
    return t


def fidelity_oracle(rho) -> np.ndarray | float:
    """Optimal teleportation fidelity via the correlation-matrix trace norm."""
    sv = singular_values(correlation_matrix(rho))
    f = 0.5 * (1.0 + sv.sum(axis=-1) / 3.0)
    return float(f) if f.ndim == 0 else f


def trace_norm_correlation(rho) -> np.ndarray | float:
    """N = sum of singular values of the correlation matrix."""
    n = singular_values(correlation_matrix(rho)).sum(axis=-1)
    return float(n) if n.ndim == 0 else n


def uhlmann_oracle(rho, sigma) -> np.ndarray | float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    The trace is taken over eigenvalues of the inner product matrix,
    floored like in concurrence_oracle (the inner matrix is rank
    deficient whenever sigma is).
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    sr = psd_sqrt(rho)
    vals = hermitian_eigenvalues(sr @ sigma @ sr)
    vals = np.where(vals < EIG_NOISE_FLOOR, 0.0, vals)
    tr = np.sqrt(vals).sum(axis=-1)
    val = tr * tr
    return float(val) if val.ndim == 0 else val


def uhlmann_bell_oracle(rho) -> np.ndarray:
    """Uhlmann fidelities to the four Bell states, stacked (..., 4)."""
    rho = np.asarray(rho, dtype=complex)
    vals = [np.asarray(uhlmann_oracle(rho, bell_density(lbl))) for lbl in BELL_LABELS]
    return np.stack(vals, axis=-1)


# --- combined report ------------------------------------------------------------

@dataclass(frozen=True)
class MetricsReport:
    """Closed and oracle values side by side for one state."""

    purity_closed: float
    purity_oracle: float
    concurrence_closed: float
    concurrence_oracle: float
    fidelity_closed: float
    fidelity_oracle: float
    uhlmann_closed: float
    uhlmann_oracle: float
    uhlmann_argmax: str
    rank: RankClass
    max_abs_discrepancy: float
    equality_regime: bool

    def to_dict(self) -> dict:
        d = {
            "purity_closed": self.purity_closed,
            "purity_oracle": self.purity_oracle,
            "concurrence_closed": self.concurrence_closed,
            "concurrence_oracle": self.concurrence_oracle,
            "fidelity_closed": self.fidelity_closed,
            "fidelity_oracle": self.fidelity_oracle,
            "uhlmann_closed": self.uhlmann_closed,
            "uhlmann_oracle": self.uhlmann_oracle,
            "uhlmann_argmax": self.uhlmann_argmax,
            "rank": self.rank.to_dict(),
            "max_abs_discrepancy": self.max_abs_discrepancy,
            "equality_regime": self.equality_regime,
        }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def report(p: XParams) -> MetricsReport:
    """Evaluate every metric along both routes and cross-check them.

    Raises ConsistencyError when any closed/oracle pair differs by more
    than 1e-6, naming the worst metric.
    """
    rho = to_density(p)
    check_density_matrix(rho)
    pc, po = purity_closed(p), purity_oracle(rho)
    cc, co = concurrence_closed(p), concurrence_oracle(rho)
    fc, fo = fidelity_closed(p), fidelity_oracle(rho)
    cands = uhlmann_candidates_formula(p.theta, p.phi, p.psi, p.x, p.y, p.mu, p.nu)
    oracle_cands = uhlmann_bell_oracle(rho)
    idx = int(pick_bell(cands))
    uc = float(cands[idx])
    uo = float(oracle_cands.max())
    diffs = {
        "purity": abs(pc - po),
        "concurrence": abs(cc - co),
        "fidelity": abs(fc - fo),
        "uhlmann": float(np.abs(np.asarray(cands) - oracle_cands).max()),
    }
    worst = max(diffs, key=diffs.get)
    if diffs[worst] > REPORT_TOL:
        raise ConsistencyError(
            f"closed and oracle routes disagree on {worst}: |delta|={diffs[worst]:.3e} > {REPORT_TOL:.0e}"
        )
    return MetricsReport(
        purity_closed=pc,
        purity_oracle=float(po),
        concurrence_closed=cc,
        concurrence_oracle=float(co),
        fidelity_closed=fc,
        fidelity_oracle=float(fo),
        uhlmann_closed=uc,
        uhlmann_oracle=uo,
        uhlmann_argmax=BELL_LABELS[idx],
        rank=classify_rank(p),
        max_abs_discrepancy=diffs[worst],
        equality_regime=bool(trace_norm_correlation(rho) > 1.0),
    )

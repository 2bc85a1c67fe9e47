"""Two-qubit X-state parametrization, validation and rank classification.

A state is described by three angles theta, phi, psi in [0, pi/2] fixing
the diagonal

    rho = diag(cos^2(theta),
               sin^2(theta) cos^2(phi),
               sin^2(theta) sin^2(phi) cos^2(psi),
               sin^2(theta) sin^2(phi) sin^2(psi))

plus two anti-diagonal coherences rho14 = sqrt(x) e^{i mu} (outer block)
and rho23 = sqrt(y) e^{i nu} (inner block).  Positivity caps the squared
magnitudes at x <= H = rho11 rho44 and y <= G = rho22 rho33; whether those
caps are saturated, together with the block weights A = rho22 + rho33 and
B = rho11 + rho44, decides the matrix rank.

The scalar helper functions in this module broadcast over numpy arrays so
that batches of parameter sets evaluate in one call.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .errors import ConsistencyError, ShapeError, ValidationError
from .linalg import check_density_matrix

HALF_PI = math.pi / 2
TWO_PI = 2 * math.pi

ANGLE_SLACK = 1e-12
BOUND_SLACK = 1e-12
RANK_TOL = 1e-10
X_SHAPE_TOL = 1e-10


# --- broadcastable coefficient formulas -------------------------------------

def weight_w(phi, psi):
    """sin^2(phi) sin^2(psi), the inner anti-diagonal weight of sin^2(theta)."""
    return np.sin(phi) ** 2 * np.sin(psi) ** 2


def x_bound(theta, phi, psi):
    """H = rho11 rho44, the positivity cap on x."""
    s = np.sin(theta) ** 2
    return s * (1.0 - s) * weight_w(phi, psi)


def y_bound(theta, phi, psi):
    """G = rho22 rho33, the positivity cap on y."""
    s = np.sin(theta) ** 2
    return s * s * coeff_f(phi, psi) ** 2


def block_weight_a(theta, phi, psi):
    """A = rho22 + rho33, the inner-block probability weight."""
    return np.sin(theta) ** 2 * (1.0 - weight_w(phi, psi))


def coeff_f(phi, psi):
    """f = cos(phi) sin(phi) cos(psi); sqrt(G) equals f sin^2(theta)."""
    return np.cos(phi) * np.sin(phi) * np.cos(psi)


def coeff_fprime(phi, psi):
    """f' = sin(phi) sin(psi); sqrt(H) equals f' sin(theta) cos(theta)."""
    return np.sin(phi) * np.sin(psi)


def coeff_e(phi, psi):
    """e = cos^2(phi) + sin^2(phi) cos(2 psi) = 1 - 2 w."""
    return np.cos(phi) ** 2 + np.sin(phi) ** 2 * np.cos(2.0 * psi)


def coeff_d(phi, psi):
    """d = 1 - w + w^2, the quadratic purity coefficient when y saturates G."""
    w = weight_w(phi, psi)
    return 1.0 - w + w * w


def coeff_u(phi, psi):
    """u = (1 - w)^2 - f^2, the quadratic purity coefficient when x saturates H."""
    w = weight_w(phi, psi)
    return (1.0 - w) ** 2 - coeff_f(phi, psi) ** 2


def coeff_g(phi, psi):
    """g = 1 - w + w^2 - f^2 = d - f^2, the rank-4 purity coefficient."""
    return coeff_d(phi, psi) - coeff_f(phi, psi) ** 2


def coeff_k(theta, phi, psi):
    """k = cos^2(theta) - e sin^2(theta), the zz correlation t33."""
    s = np.sin(theta) ** 2
    return 1.0 - s - coeff_e(phi, psi) * s


class Kind(str, Enum):
    FIRST = "First"
    SECOND = "Second"
    THIRD = "Third"
    SOLE = "Sole"


@dataclass(frozen=True)
class RankClass:
    rank: int
    kind: Kind

    def __str__(self) -> str:
        return f"rank {self.rank} ({self.kind.value})"

    def to_dict(self) -> dict:
        return {"rank": self.rank, "kind": self.kind.value}


@dataclass(frozen=True)
class XParams:
    """Validated X-state parameters; construct through validate()."""

    theta: float
    phi: float
    psi: float
    x: float
    y: float
    mu: float = 0.0
    nu: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def validate(theta, phi, psi, x, y, mu=0.0, nu=0.0) -> XParams:
    """Check ranges and positivity caps; return an XParams on success.

    Raises ValidationError naming the violated bound and the numeric slack.
    """
    vals = dict(theta=theta, phi=phi, psi=psi, x=x, y=y, mu=mu, nu=nu)
    for name, v in vals.items():
        if not isinstance(v, (int, float)) or not math.isfinite(float(v)):
            raise ValidationError(f"{name}={v!r} is not a finite real number")
    theta, phi, psi, x, y, mu, nu = (float(vals[k]) for k in ("theta", "phi", "psi", "x", "y", "mu", "nu"))
    for name, v in (("theta", theta), ("phi", phi), ("psi", psi)):
        if v < -ANGLE_SLACK or v > HALF_PI + ANGLE_SLACK:
            raise ValidationError(f"{name}={v!r} outside [0, pi/2] by {max(-v, v - HALF_PI):.3e}")
    for name, v in (("mu", mu), ("nu", nu)):
        if v < -ANGLE_SLACK or v > TWO_PI + ANGLE_SLACK:
            raise ValidationError(f"{name}={v!r} outside [0, 2*pi] by {max(-v, v - TWO_PI):.3e}")
    if x < 0.0:
        raise ValidationError(f"x={x!r} must be nonnegative")
    if y < 0.0:
        raise ValidationError(f"y={y!r} must be nonnegative")
    cap_x = float(x_bound(theta, phi, psi))
    cap_y = float(y_bound(theta, phi, psi))
    if x > cap_x + BOUND_SLACK:
        raise ValidationError(
            f"x={x!r} exceeds the outer positivity bound H={cap_x!r} by {x - cap_x:.3e} (slack {BOUND_SLACK:.0e})"
        )
    if y > cap_y + BOUND_SLACK:
        raise ValidationError(
            f"y={y!r} exceeds the inner positivity bound G={cap_y!r} by {y - cap_y:.3e} (slack {BOUND_SLACK:.0e})"
        )
    return XParams(theta, phi, psi, x, y, mu, nu)


def density_from_arrays(theta, phi, psi, x, y, mu, nu) -> np.ndarray:
    """Assemble (..., 4, 4) density matrices from broadcastable parameters."""
    theta, phi, psi, x, y, mu, nu = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (theta, phi, psi, x, y, mu, nu))
    )
    s = np.sin(theta) ** 2
    sp = np.sin(phi) ** 2
    cps = np.cos(psi) ** 2
    rho = np.zeros(theta.shape + (4, 4), dtype=complex)
    rho[..., 0, 0] = 1.0 - s
    rho[..., 1, 1] = s * (1.0 - sp)
    rho[..., 2, 2] = s * sp * cps
    rho[..., 3, 3] = s * sp * (1.0 - cps)
    rho[..., 0, 3] = np.sqrt(x) * np.exp(1j * mu)
    rho[..., 3, 0] = np.conj(rho[..., 0, 3])
    rho[..., 1, 2] = np.sqrt(y) * np.exp(1j * nu)
    rho[..., 2, 1] = np.conj(rho[..., 1, 2])
    return rho


def to_density(p: XParams) -> np.ndarray:
    """4x4 complex density matrix of an X state (exact zeros off pattern)."""
    return density_from_arrays(p.theta, p.phi, p.psi, p.x, p.y, p.mu, p.nu)


def from_density(rho) -> XParams:
    """Recover XParams from a valid X-shaped density matrix.

    Conventions for degenerate fibers: theta from rho11, phi from
    rho22 / (1 - rho11), psi from (rho33, rho44); an angle whose defining
    denominator vanishes (below 1e-12) is set to 0, and a zero coherence
    magnitude gets phase 0.  Raises ShapeError listing any entries outside
    the X pattern above 1e-10.
    """
    a = check_density_matrix(rho)
    if a.ndim != 2:
        raise ValidationError("from_density expects a single 4x4 matrix")
    bad = []
    for i, j in ((0, 1), (0, 2), (1, 3), (2, 3)):
        mag = abs(a[i, j])
        if mag > X_SHAPE_TOL:
            bad.append(f"({i + 1},{j + 1})={mag:.3e}")
    if bad:
        raise ShapeError("matrix is not X shaped, off-pattern entries: " + ", ".join(bad))

    r11 = min(max(a[0, 0].real, 0.0), 1.0)
    theta = math.acos(math.sqrt(r11))
    rest = 1.0 - r11
    if rest < 1e-12:
        phi = 0.0
        psi = 0.0
    else:
        ratio = min(max(a[1, 1].real / rest, 0.0), 1.0)
        phi = math.acos(math.sqrt(ratio))
        r33 = max(a[2, 2].real, 0.0)
        r44 = max(a[3, 3].real, 0.0)
        if r33 + r44 < 1e-12:
            psi = 0.0
        else:
            psi = math.atan2(math.sqrt(r44), math.sqrt(r33))
    x = abs(a[0, 3]) ** 2
    y = abs(a[1, 2]) ** 2
    mu = math.atan2(a[0, 3].imag, a[0, 3].real) % TWO_PI if x > 0.0 else 0.0
    nu = math.atan2(a[1, 2].imag, a[1, 2].real) % TWO_PI if y > 0.0 else 0.0
    return validate(theta, phi, psi, x, y, mu, nu)


def classify_rank(p: XParams, tol: float = RANK_TOL) -> RankClass:
    """Rank and kind from saturation of the caps and the block weights.

    Equalities hold within tol.  The case table is exhaustive for valid
    parameters; if nothing matches, a ConsistencyError reports the
    distance to each case.
    """
    cap_x = float(x_bound(p.theta, p.phi, p.psi))
    cap_y = float(y_bound(p.theta, p.phi, p.psi))
    a_w = float(block_weight_a(p.theta, p.phi, p.psi))
    b_w = 1.0 - a_w
    x_sat = cap_x - p.x <= tol
    y_sat = cap_y - p.y <= tol
    x_zero = p.x <= tol
    y_zero = p.y <= tol
    a_zero = a_w <= tol
    b_zero = b_w <= tol

    if (x_sat and y_zero and a_zero) or (x_zero and y_sat and b_zero):
        return RankClass(1, Kind.SOLE)
    if not x_sat and y_zero and a_zero:
        return RankClass(2, Kind.FIRST)
    if x_zero and not y_sat and b_zero:
        return RankClass(2, Kind.SECOND)
    if x_sat and y_sat and not a_zero and not b_zero:
        return RankClass(2, Kind.THIRD)
    if not x_sat and y_sat and not a_zero:
        return RankClass(3, Kind.FIRST)
    if x_sat and not y_sat and not b_zero:
        return RankClass(3, Kind.SECOND)
    if not x_sat and not y_sat and not a_zero and not b_zero:
        return RankClass(4, Kind.SOLE)
    raise ConsistencyError(
        "parameters match no rank case within tolerance: "
        f"H-x={cap_x - p.x:.3e}, G-y={cap_y - p.y:.3e}, x={p.x:.3e}, y={p.y:.3e}, A={a_w:.3e}, B={b_w:.3e}"
    )


@dataclass(frozen=True)
class DerivedCoefficients:
    """Scalar coefficients entering the closed-form metric relations."""

    H: float
    G: float
    A: float
    B: float
    f: float
    fprime: float
    p: float
    q: float
    e: float
    r: float
    d: float
    t: float
    u: float
    g: float
    alpha: float
    beta: float
    k: float
    a: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def derived_coefficients(theta, phi, psi, x=0.0, y=0.0) -> DerivedCoefficients:
    """All derived coefficients at one parameter point.

    Ranges on the (phi, psi) square: d in [3/4, 1], e in [-1, 1] and
    f in [0, 1/2], with the endpoints attained.
    """
    theta, phi, psi, x, y = (float(v) for v in (theta, phi, psi, x, y))
    w = float(weight_w(phi, psi))
    f = float(coeff_f(phi, psi))
    fp = float(coeff_fprime(phi, psi))
    sp = math.sin(phi) ** 2
    q = sp * ((1.0 - sp) * math.cos(psi) ** 2 - math.sin(psi) ** 2)
    g = float(coeff_g(phi, psi))
    return DerivedCoefficients(
        H=float(x_bound(theta, phi, psi)),
        G=float(y_bound(theta, phi, psi)),
        A=float(block_weight_a(theta, phi, psi)),
        B=1.0 - float(block_weight_a(theta, phi, psi)),
        f=f,
        fprime=fp,
        p=w,
        q=q,
        e=float(coeff_e(phi, psi)),
        r=w - 1.0,
        d=float(coeff_d(phi, psi)),
        t=1.0 - w,
        u=float(coeff_u(phi, psi)),
        g=g,
        alpha=2.0 * g - 2.0 * fp * fp,
        beta=2.0 * fp * fp - 2.0,
        k=float(coeff_k(theta, phi, psi)),
        a=max(x, y),
    )

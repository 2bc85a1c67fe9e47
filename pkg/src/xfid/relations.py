"""Fidelity from purity and concurrence, one closed relation per rank class.

Each relation takes metric targets (purity P, concurrence C, an auxiliary
coherence magnitude where needed, and the block angles phi, psi for rank
3 and 4) and recovers sin^2(theta) from the class-specific purity
polynomial, then evaluates the teleportation fidelity display for that
class.  Every root is materialized into an actual parameter set and kept
only if the state reproduces the targets and the display value within
RESIDUAL_TOL; roots that violate the display assumptions (nonnegative
zz correlation, the assumed dominant coherence) fail that check and are
dropped rather than silently reported.

Branch policy: the displays are decreasing in sin^2(theta), so the
"minus" quadratic root is the default; when it is rejected the surviving
"plus" root is used and the result is flagged.  The rank-4 quartic has up
to four admissible roots and reports them all, choosing the one with the
best fidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleTargetError, ValidationError
from .metrics import concurrence_closed, fidelity_closed, purity_closed
from .xstate import (
    Kind,
    XParams,
    coeff_d,
    coeff_e,
    coeff_f,
    coeff_fprime,
    coeff_g,
    coeff_u,
    validate,
    weight_w,
)

RESIDUAL_TOL = 1e-8
COEFF_TOL = 1e-12
BRANCH_ORDER = ("minus", "plus", "linear", "sole")


def pure_fidelity(concurrence):
    """Fidelity of a pure entangled state, (2 + C) / 3.  Broadcastable."""
    c = np.asarray(concurrence, dtype=float)
    if np.any(c < -COEFF_TOL) or np.any(c > 1.0 + COEFF_TOL):
        raise DomainError(f"concurrence must lie in [0, 1], got extremes {c.min()!r}, {c.max()!r}")
    out = (2.0 + c) / 3.0
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class InverseSolveResult:
    """Roots of an inverse relation that survive back-substitution.

    sin2theta_roots holds sin^2(theta) per surviving root, branches the
    quadratic branch labels, fidelity_per_root the display values and
    residuals the worst target mismatch after materializing each root.
    chosen_root maximizes the fidelity; params is its parameter set, or
    None when the chosen root's fiber admits no positive-semidefinite
    state (the quartic relation keeps such roots on formula grounds).
    flagged is set when the default branch was rejected or params is None.
    """

    relation: str
    sin2theta_roots: tuple[float, ...]
    branches: tuple[str, ...]
    fidelity_per_root: tuple[float, ...]
    residuals: tuple[float, ...]
    optimal_fidelity: float
    chosen_root: float
    chosen_branch: str
    params: XParams | None
    flagged: bool = False

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "sin2theta_roots": list(self.sin2theta_roots),
            "branches": list(self.branches),
            "fidelity_per_root": list(self.fidelity_per_root),
            "residuals": list(self.residuals),
            "optimal_fidelity": self.optimal_fidelity,
            "chosen_root": self.chosen_root,
            "chosen_branch": self.chosen_branch,
            "params": None if self.params is None else self.params.to_dict(),
            "flagged": self.flagged,
        }


def _quad_roots(qa: float, qb: float, qc: float) -> list[tuple[float, str]]:
    """Real roots of qa v^2 + qb v + qc with display-branch labels.

    "minus" is the root with -sqrt(disc) in the numerator, matching the
    written form of the relations regardless of the sign of qa.  A
    discriminant in [-1e-12, 0) is treated as a double root; a vanishing
    leading coefficient falls back to the linear root.
    """
    if abs(qa) < COEFF_TOL:
        if abs(qb) < COEFF_TOL:
            return []
        return [(-qc / qb, "linear")]
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        if disc < -1e-12:
            return []
        disc = 0.0
    r = math.sqrt(disc)
    return [((-qb - r) / (2.0 * qa), "minus"), ((-qb + r) / (2.0 * qa), "plus")]


def _try_root(s, branch, phi, psi, x_of_s, y_of_s, f_display, p_target, c_target):
    """Materialize one root; return (s, branch, F, residual, params) or None.

    The residual is the worst mismatch among purity, concurrence (when
    targeted) and the fidelity display against the materialized state;
    display assumptions (sign of the zz correlation, dominant coherence)
    show up here as fidelity mismatches, so violating roots are rejected.
    """
    if not -1e-12 <= s <= 1.0 + 1e-12:
        return None
    s = min(max(s, 0.0), 1.0)
    x = x_of_s(s)
    y = y_of_s(s)
    if x < 0.0:
        if x < -1e-15:
            return None
        x = 0.0
    if y < 0.0:
        if y < -1e-15:
            return None
        y = 0.0
    try:
        params = validate(math.asin(math.sqrt(s)), phi, psi, x, y)
    except ValidationError:
        return None
    fid = f_display(s)
    residual = max(
        abs(purity_closed(params) - p_target),
        abs(fidelity_closed(params) - fid),
    )
    if c_target is not None:
        residual = max(residual, abs(concurrence_closed(params) - c_target))
    if residual > RESIDUAL_TOL:
        return None
    return (s, branch, fid, residual, params)


def _assemble(relation: str, candidates: list, context: str,
              default_branch: str | None = "minus") -> InverseSolveResult:
    """Pick the max-fidelity root; flag when the default branch lost out."""
    kept = [c for c in candidates if c is not None]
    if not kept:
        raise InfeasibleTargetError(f"{relation}: no admissible root for {context}")
    # a root with an actual state behind it beats any formula-only fiber,
    # whatever the display value says
    pool = [c for c in kept if c[4] is not None] or kept
    best = max(pool, key=lambda c: (c[2], -BRANCH_ORDER.index(c[1]) if c[1] in BRANCH_ORDER else 0))
    return InverseSolveResult(
        relation=relation,
        sin2theta_roots=tuple(c[0] for c in kept),
        branches=tuple(c[1] for c in kept),
        fidelity_per_root=tuple(c[2] for c in kept),
        residuals=tuple(c[3] for c in kept),
        optimal_fidelity=best[2],
        chosen_root=best[0],
        chosen_branch=best[1],
        params=best[4],
        flagged=(default_branch is not None and best[1] != default_branch) or best[4] is None,
    )


def _check_targets(purity, concurrence=None, aux=None, names=("purity", "concurrence", "aux")):
    if not 0.25 - COEFF_TOL <= purity <= 1.0 + COEFF_TOL:
        raise DomainError(f"{names[0]}={purity!r} outside [1/4, 1]")
    if concurrence is not None and not -COEFF_TOL <= concurrence <= 1.0 + COEFF_TOL:
        raise DomainError(f"{names[1]}={concurrence!r} outside [0, 1]")
    if aux is not None and not -COEFF_TOL <= aux <= 0.25 + COEFF_TOL:
        raise DomainError(f"{names[2]}={aux!r} outside [0, 1/4]")


# --- rank 1 -------------------------------------------------------------------

def solve_rank1(purity: float, concurrence: float) -> InverseSolveResult:
    """Pure entangled state hitting a given concurrence; purity must be 1."""
    _check_targets(purity, concurrence)
    if abs(purity - 1.0) > 1e-9:
        raise InfeasibleTargetError(f"rank1: purity must equal 1 for a pure state, got {purity!r}")
    c = min(max(concurrence, 0.0), 1.0)
    s = (1.0 - math.sqrt(1.0 - c * c)) / 2.0
    cand = _try_root(
        s, "sole", math.pi / 2, math.pi / 2,
        lambda _s: c * c / 4.0, lambda _s: 0.0,
        lambda _s: (2.0 + c) / 3.0, 1.0, c,
    )
    return _assemble("rank1", [cand], f"C={concurrence!r}", default_branch="sole")


# --- rank 2 -------------------------------------------------------------------

def _solve_rank2_first(purity: float, concurrence: float) -> InverseSolveResult:
    """Outer-block rank-2 state: fidelity (2 + C) / 3, purity fixes theta."""
    c = min(max(concurrence, 0.0), 1.0)
    x = c * c / 4.0
    roots = _quad_roots(2.0, -2.0, 1.0 + 2.0 * x - purity)
    cands = [
        _try_root(s, br, math.pi / 2, math.pi / 2,
                  lambda _s: x, lambda _s: 0.0,
                  lambda _s: (2.0 + c) / 3.0, purity, c)
        for s, br in roots
    ]
    return _assemble("rank2_first", cands, f"P={purity!r}, C={concurrence!r}")


def _solve_rank2_second(purity: float, concurrence: float) -> InverseSolveResult:
    """Inner-block rank-2 state: theta = pi/2, psi = 0, purity fixes phi."""
    c = min(max(concurrence, 0.0), 1.0)
    y = c * c / 4.0
    v = 2.0 * (1.0 + 2.0 * y - purity)
    if not -COEFF_TOL <= v <= 1.0 + COEFF_TOL:
        raise InfeasibleTargetError(
            f"rank2_second: sin^2(2 phi) = {v!r} outside [0, 1] for P={purity!r}, C={concurrence!r}"
        )
    half = math.asin(math.sqrt(min(max(v, 0.0), 1.0))) / 2.0
    cands = []
    for phi, br in ((half, "minus"), (math.pi / 2 - half, "plus")):
        try:
            params = validate(math.pi / 2, phi, 0.0, 0.0, y)
        except ValidationError:
            continue
        fid = (2.0 + c) / 3.0
        residual = max(
            abs(purity_closed(params) - purity),
            abs(concurrence_closed(params) - c),
            abs(fidelity_closed(params) - fid),
        )
        if residual <= RESIDUAL_TOL:
            cands.append((1.0, br, fid, residual, params))
    return _assemble("rank2_second", cands, f"P={purity!r}, C={concurrence!r}")


def solve_theta_rank2k3(purity: float, concurrence: float, aux_y: float) -> InverseSolveResult:
    """Doubly saturated rank-2 state from (P, C, y).

    The two nonzero eigenvalues are the block weights, so A solves
    A^2 + (1 - A)^2 = P (purity at least 1/2).  The outer coherence is
    x = (C/2 + sqrt(y))^2 and the diagonal angles follow from two nested
    quadratics; all sign combinations are tried and scored.  The fidelity
    display (3 + 2C + 4 sqrt(y) + sqrt(2P - 1)) / 6 is root-independent.
    """
    _check_targets(purity, concurrence, aux_y)
    if purity < 0.5 - COEFF_TOL:
        raise InfeasibleTargetError(
            f"rank2_third: purity {purity!r} below 1/2 is unreachable with two eigenvalues"
        )
    c = min(max(concurrence, 0.0), 1.0)
    y = max(aux_y, 0.0)
    root_p = math.sqrt(max(2.0 * purity - 1.0, 0.0))
    x = (c / 2.0 + math.sqrt(y)) ** 2
    fid = (3.0 + 2.0 * c + 4.0 * math.sqrt(y) + root_p) / 6.0
    cands = []
    for a_sign, a_br in ((-1.0, "minus"), (1.0, "plus")):
        a_w = (1.0 + a_sign * root_p) / 2.0
        for s, s_br in _quad_roots(1.0, -(1.0 + a_w), a_w + x):
            if not 1e-12 < s <= 1.0 + 1e-12:
                continue
            s = min(s, 1.0)
            w = (s - a_w) / s
            if not -1e-12 <= w <= 1.0 + 1e-12:
                continue
            w = min(max(w, 0.0), 1.0)
            for sp, p_br in _quad_roots(1.0, -(1.0 + w), w + y / (s * s)):
                if not 1e-12 < sp <= 1.0 + 1e-12:
                    continue
                sp = min(sp, 1.0)
                spsi = w / sp
                if spsi > 1.0 + 1e-12:
                    continue
                phi = math.asin(math.sqrt(sp))
                psi = math.asin(math.sqrt(min(spsi, 1.0)))
                branch = f"A{a_br}/s{s_br}/phi{p_br}"
                cand = _try_root(
                    s, branch, phi, psi,
                    lambda _s: x, lambda _s: y,
                    lambda _s: fid, purity, c,
                )
                if cand is not None:
                    cands.append(cand)
    if not cands:
        raise InfeasibleTargetError(
            f"rank2_third: no admissible root for P={purity!r}, C={concurrence!r}, y={aux_y!r}"
        )
    return _assemble("rank2_third", [cands[0]], "", default_branch=None)


def solve_rank2(kind, purity: float, concurrence: float, aux_y: float | None = None) -> InverseSolveResult:
    kind = Kind(kind.capitalize()) if isinstance(kind, str) else kind
    _check_targets(purity, concurrence, aux_y)
    if kind is Kind.FIRST:
        return _solve_rank2_first(purity, concurrence)
    if kind is Kind.SECOND:
        return _solve_rank2_second(purity, concurrence)
    if kind is Kind.THIRD:
        if aux_y is None:
            raise ValidationError("rank2_third needs the inner coherence aux_y")
        return solve_theta_rank2k3(purity, concurrence, aux_y)
    raise ValidationError(f"rank 2 has kinds First, Second, Third, not {kind!r}")


def _formula_roots(qa: float, qb: float, qc: float, relation: str, context: str) -> list[float]:
    """Roots of the purity quadratic clipped to [0, 1] for formula display.

    The display functions evaluate the written relations on these roots
    without materializing a state; solve_* adds the positivity caps.
    """
    roots = [
        min(max(s, 0.0), 1.0)
        for s, _ in _quad_roots(qa, qb, qc)
        if -1e-12 <= s <= 1.0 + 1e-12
    ]
    if not roots:
        raise InfeasibleTargetError(f"{relation}: no root of the purity relation lies in [0, 1] for {context}")
    return roots


def rank2_fidelity(kind, concurrence: float, purity: float, aux_y: float | None = None) -> float:
    """Fidelity display of a rank-2 state from (C, P) and, for the doubly
    saturated kind, the inner coherence y.

    Kinds First and Second always evaluate to (2 + C) / 3 once the purity
    is reachable; the doubly saturated kind adds the sqrt(2P - 1) term.
    This is the written relation; solve_rank2 also materializes a state.
    """
    kind = Kind(kind.capitalize()) if isinstance(kind, str) else kind
    _check_targets(purity, concurrence, aux_y)
    c = min(max(concurrence, 0.0), 1.0)
    floor = 0.5 + c * c / 2.0
    if kind in (Kind.FIRST, Kind.SECOND):
        if purity < floor - COEFF_TOL:
            raise InfeasibleTargetError(
                f"rank2 {kind.value}: purity {purity!r} below the class floor 1/2 + C^2/2 = {floor!r}"
            )
        return (2.0 + c) / 3.0
    if kind is Kind.THIRD:
        if aux_y is None:
            raise ValidationError("rank2_third needs the inner coherence aux_y")
        if purity < 0.5 - COEFF_TOL:
            raise InfeasibleTargetError(
                f"rank2 Third: purity {purity!r} below 1/2 is unreachable with two eigenvalues"
            )
        y = max(aux_y, 0.0)
        return (3.0 + 2.0 * c + 4.0 * math.sqrt(y) + math.sqrt(max(2.0 * purity - 1.0, 0.0))) / 6.0
    raise ValidationError(f"rank 2 has kinds First, Second, Third, not {kind!r}")


# --- rank 3 -------------------------------------------------------------------

def solve_rank3_kind1(purity: float, concurrence: float, phi: float, psi: float) -> InverseSolveResult:
    """Inner cap saturated (y = G), outer concurrence dominant.

    sin^2(theta) solves (2d + 2f^2) s^2 - 2(1 - fC) s + (1 + C^2/2 - P) = 0
    and the display is F = (4 + 2C - (1 + e - 4f) s) / 6.
    """
    _check_targets(purity, concurrence)
    c = min(max(concurrence, 0.0), 1.0)
    f = float(coeff_f(phi, psi))
    d = float(coeff_d(phi, psi))
    e = float(coeff_e(phi, psi))
    roots = _quad_roots(2.0 * d + 2.0 * f * f, -2.0 * (1.0 - f * c), 1.0 + c * c / 2.0 - purity)
    cands = [
        _try_root(s, br, phi, psi,
                  lambda s: (c / 2.0 + f * s) ** 2, lambda s: (f * s) ** 2,
                  lambda s: (4.0 + 2.0 * c - (1.0 + e - 4.0 * f) * s) / 6.0,
                  purity, c)
        for s, br in roots
    ]
    return _assemble("rank3_kind1", cands, f"P={purity!r}, C={concurrence!r}, phi={phi!r}, psi={psi!r}")


def solve_rank3_kind1_ycase(purity: float, aux_x: float, phi: float, psi: float) -> InverseSolveResult:
    """Inner cap saturated with the inner coherence dominant; x is input.

    sin^2(theta) solves 2d s^2 - 2s + (1 + 2x - P) = 0; the concurrence is
    implied by the root and the display is F = (4 + (4f - 1 - e) s) / 6.
    """
    _check_targets(purity, None, aux_x)
    x = max(aux_x, 0.0)
    f = float(coeff_f(phi, psi))
    d = float(coeff_d(phi, psi))
    e = float(coeff_e(phi, psi))
    roots = _quad_roots(2.0 * d, -2.0, 1.0 + 2.0 * x - purity)
    cands = [
        _try_root(s, br, phi, psi,
                  lambda s: x, lambda s: (f * s) ** 2,
                  lambda s: (4.0 + (4.0 * f - 1.0 - e) * s) / 6.0,
                  purity, None)
        for s, br in roots
    ]
    return _assemble("rank3_kind1_ycase", cands, f"P={purity!r}, x={aux_x!r}, phi={phi!r}, psi={psi!r}")


def solve_rank3_kind2(purity: float, aux_y: float, phi: float, psi: float) -> InverseSolveResult:
    """Outer cap saturated (x = H); y is input and the concurrence implied.

    sin^2(theta) solves 2u s^2 - 2t s + (1 + 2y - P) = 0 with t = 1 - w and
    u = t^2 - f^2 (linear root (1 + 2y - P) / 2t when u vanishes); the
    display is F = (4 + 4f' sqrt(s(1-s)) - (1 + e) s) / 6.
    """
    _check_targets(purity, None, aux_y)
    y = max(aux_y, 0.0)
    fp = float(coeff_fprime(phi, psi))
    e = float(coeff_e(phi, psi))
    t = 1.0 - float(weight_w(phi, psi))
    u = float(coeff_u(phi, psi))
    roots = _quad_roots(2.0 * u, -2.0 * t, 1.0 + 2.0 * y - purity)
    cands = [
        _try_root(s, br, phi, psi,
                  lambda s: fp * fp * s * (1.0 - s), lambda s: y,
                  lambda s: (4.0 + 4.0 * fp * math.sqrt(s * (1.0 - s)) - (1.0 + e) * s) / 6.0,
                  purity, None)
        for s, br in roots
    ]
    return _assemble("rank3_kind2", cands, f"P={purity!r}, y={aux_y!r}, phi={phi!r}, psi={psi!r}")


def rank3_kind1_fidelity(purity: float, concurrence: float, phi: float, psi: float) -> float:
    """Written relation for the inner-saturated, outer-dominant class.

    Takes the best in-range root of the purity quadratic; the display is
    decreasing in sin^2(theta), so this is the minus branch whenever it
    lies in [0, 1].  Use solve_rank3_kind1 for a materialized state.
    """
    _check_targets(purity, concurrence)
    c = min(max(concurrence, 0.0), 1.0)
    f = float(coeff_f(phi, psi))
    d = float(coeff_d(phi, psi))
    e = float(coeff_e(phi, psi))
    roots = _formula_roots(2.0 * d + 2.0 * f * f, -2.0 * (1.0 - f * c), 1.0 + c * c / 2.0 - purity,
                           "rank3_kind1", f"P={purity!r}, C={concurrence!r}")
    return max((4.0 + 2.0 * c - (1.0 + e - 4.0 * f) * s) / 6.0 for s in roots)


def rank3_kind1_fidelity_ycase(purity: float, aux_x: float, phi: float, psi: float) -> float:
    """Written relation for the inner-saturated, inner-dominant class."""
    _check_targets(purity, None, aux_x)
    f = float(coeff_f(phi, psi))
    d = float(coeff_d(phi, psi))
    e = float(coeff_e(phi, psi))
    roots = _formula_roots(2.0 * d, -2.0, 1.0 + 2.0 * max(aux_x, 0.0) - purity,
                           "rank3_kind1_ycase", f"P={purity!r}, x={aux_x!r}")
    return max((4.0 + (4.0 * f - 1.0 - e) * s) / 6.0 for s in roots)


def rank3_kind2_fidelity(purity: float, aux_y: float, phi: float, psi: float) -> float:
    """Written relation for the outer-saturated class (concurrence implied)."""
    _check_targets(purity, None, aux_y)
    fp = float(coeff_fprime(phi, psi))
    e = float(coeff_e(phi, psi))
    t = 1.0 - float(weight_w(phi, psi))
    u = float(coeff_u(phi, psi))
    roots = _formula_roots(2.0 * u, -2.0 * t, 1.0 + 2.0 * max(aux_y, 0.0) - purity,
                           "rank3_kind2", f"P={purity!r}, y={aux_y!r}")
    return max((4.0 + 4.0 * fp * math.sqrt(s * (1.0 - s)) - (1.0 + e) * s) / 6.0 for s in roots)


# --- rank 4 -------------------------------------------------------------------

def _rank4_quad(purity, c, phi, psi, aux_y):
    d = float(coeff_d(phi, psi))
    f = float(coeff_f(phi, psi))
    return _quad_roots(2.0 * d, -2.0 * (1.0 - f * c), 1.0 + 2.0 * aux_y + c * c / 2.0 - purity)


def solve_rank4_xcase(purity: float, concurrence: float, phi: float, psi: float,
                      aux_y: float = 0.0) -> InverseSolveResult:
    """Neither cap saturated, outer coherence dominant; y is input.

    sin^2(theta) solves 2d s^2 - 2(1 - fC) s + (1 + 2y + C^2/2 - P) = 0
    and the display is F = (4 + 2C - (1 + e - 4f) s) / 6.
    """
    _check_targets(purity, concurrence, aux_y)
    c = min(max(concurrence, 0.0), 1.0)
    y = max(aux_y, 0.0)
    f = float(coeff_f(phi, psi))
    e = float(coeff_e(phi, psi))
    cands = [
        _try_root(s, br, phi, psi,
                  lambda s: (c / 2.0 + f * s) ** 2, lambda s: y,
                  lambda s: (4.0 + 2.0 * c - (1.0 + e - 4.0 * f) * s) / 6.0,
                  purity, c)
        for s, br in _rank4_quad(purity, c, phi, psi, y)
    ]
    return _assemble("rank4_xcase", cands, f"P={purity!r}, C={concurrence!r}, y={aux_y!r}")


def solve_rank4_ycase(purity: float, concurrence: float, phi: float, psi: float,
                      aux_y: float) -> InverseSolveResult:
    """Same quadratic as the x case but with the inner coherence dominant,
    so the display reads F = (4 + 4 sqrt(y) - (1 + e) s) / 6."""
    _check_targets(purity, concurrence, aux_y)
    c = min(max(concurrence, 0.0), 1.0)
    y = max(aux_y, 0.0)
    f = float(coeff_f(phi, psi))
    e = float(coeff_e(phi, psi))
    cands = [
        _try_root(s, br, phi, psi,
                  lambda s: (c / 2.0 + f * s) ** 2, lambda s: y,
                  lambda s: (4.0 + 4.0 * math.sqrt(y) - (1.0 + e) * s) / 6.0,
                  purity, c)
        for s, br in _rank4_quad(purity, c, phi, psi, y)
    ]
    return _assemble("rank4_ycase", cands, f"P={purity!r}, C={concurrence!r}, y={aux_y!r}")


def rank4_fidelity_xcase(purity: float, concurrence: float, phi: float, psi: float,
                         aux_y: float = 0.0) -> float:
    """Written relation for the unsaturated outer-dominant class."""
    _check_targets(purity, concurrence, aux_y)
    c = min(max(concurrence, 0.0), 1.0)
    f = float(coeff_f(phi, psi))
    e = float(coeff_e(phi, psi))
    roots = _formula_roots(2.0 * float(coeff_d(phi, psi)), -2.0 * (1.0 - f * c),
                           1.0 + 2.0 * max(aux_y, 0.0) + c * c / 2.0 - purity,
                           "rank4_xcase", f"P={purity!r}, C={concurrence!r}, y={aux_y!r}")
    return max((4.0 + 2.0 * c - (1.0 + e - 4.0 * f) * s) / 6.0 for s in roots)


def rank4_fidelity_ycase_xconc(purity: float, concurrence: float, phi: float, psi: float,
                               aux_y: float) -> float:
    """Written relation for the unsaturated class with the inner coherence
    largest while the outer concurrence branch is active."""
    _check_targets(purity, concurrence, aux_y)
    c = min(max(concurrence, 0.0), 1.0)
    f = float(coeff_f(phi, psi))
    e = float(coeff_e(phi, psi))
    y = max(aux_y, 0.0)
    roots = _formula_roots(2.0 * float(coeff_d(phi, psi)), -2.0 * (1.0 - f * c),
                           1.0 + 2.0 * y + c * c / 2.0 - purity,
                           "rank4_ycase", f"P={purity!r}, C={concurrence!r}, y={aux_y!r}")
    return max((4.0 + 4.0 * math.sqrt(y) - (1.0 + e) * s) / 6.0 for s in roots)


def rank4_quartic_solve(purity: float, concurrence: float, phi: float, psi: float,
                        aux_x: float = 0.0) -> InverseSolveResult:
    """Neither cap saturated, inner concurrence branch dominant; x is input.

    Substituting sqrt(y) = C/2 + f' sqrt(s(1-s)) into the purity relation
    and squaring out the radical leaves a quartic in s with coefficients
    built from alpha = 2g - 2f'^2, beta = 2f'^2 - 2 and Q = 1 + 2x +
    C^2/2 - P.  Roots are taken from the companion matrix, restricted to
    real values in [0, 1] whose radical sign survived the squaring, and
    kept only when back-substituting into the closed purity form
    reproduces P (spurious squaring artifacts fail this).  Surviving
    roots whose fiber is an actual state additionally carry params;
    fibers violating positivity (y past its cap, or a different dominant
    coherence) keep their formula fidelity but report params=None.
    """
    _check_targets(purity, concurrence, aux_x)
    c = min(max(concurrence, 0.0), 1.0)
    x = max(aux_x, 0.0)
    fp = float(coeff_fprime(phi, psi))
    g = float(coeff_g(phi, psi))
    e = float(coeff_e(phi, psi))
    alpha = 2.0 * g - 2.0 * fp * fp
    beta = 2.0 * fp * fp - 2.0
    q = 1.0 + 2.0 * x + c * c / 2.0 - purity
    coeffs = [
        alpha * alpha,
        2.0 * alpha * beta,
        beta * beta + 2.0 * alpha * q + 4.0 * c * c * fp * fp,
        2.0 * beta * q - 4.0 * c * c * fp * fp,
        q * q,
    ]
    if all(abs(co) < COEFF_TOL for co in coeffs):
        raise InfeasibleTargetError("rank4_quartic: degenerate coefficients, relation is vacuous")

    def radical_eq(s):
        return alpha * s * s + beta * s + q + 2.0 * c * fp * math.sqrt(max(s * (1.0 - s), 0.0))

    def polish(s):
        # companion-matrix roots of the squared quartic split double
        # roots by ~1e-8 and can push them slightly complex; Newton on
        # the unsquared radical equation recovers full precision and
        # drops wrong-radical-sign artifacts at the same time
        for _ in range(12):
            t = s * (1.0 - s)
            rad = math.sqrt(max(t, 0.0))
            h = alpha * s * s + beta * s + q + 2.0 * c * fp * rad
            if abs(h) < 1e-15:
                break
            dh = 2.0 * alpha * s + beta
            if c * fp > 0.0 and rad > 1e-8:
                dh += c * fp * (1.0 - 2.0 * s) / rad
            if dh == 0.0:
                break
            step = h / dh
            nxt = min(max(s - step, 0.0), 1.0)
            if abs(nxt - s) < 1e-16:
                s = nxt
                break
            s = nxt
        return s

    polished = []
    for r in np.roots(coeffs):
        if abs(r.imag) > 1e-6:
            continue
        s = float(r.real)
        if not -1e-6 <= s <= 1.0 + 1e-6:
            continue
        s = polish(min(max(s, 0.0), 1.0))
        if abs(radical_eq(s)) > RESIDUAL_TOL:
            continue
        if any(abs(s - kept) <= 1e-9 for kept in polished):
            continue
        polished.append(s)

    def sqrt_y(s):
        return c / 2.0 + fp * math.sqrt(max(s * (1.0 - s), 0.0))

    # The written display carries the zz correlation k = 1 - (1 + e) s
    # bare; past its sign change only |k| reproduces the true fidelity,
    # so roots there are reported with the absolute value rather than
    # rejected (the radical equation stays the ground truth).
    cands = []
    for i, sc in enumerate(sorted(polished)):
        cand = _try_root(
            sc, f"root{i}", phi, psi,
            lambda s: x, lambda s: sqrt_y(s) ** 2,
            lambda s: (3.0 + 4.0 * sqrt_y(s) + abs(1.0 - (1.0 + e) * s)) / 6.0,
            purity, c,
        )
        if cand is None:
            # genuine root of the radical equation whose fiber is not a
            # state; keep the formula value with no parameter set
            fid = (3.0 + 4.0 * sqrt_y(sc) + abs(1.0 - (1.0 + e) * sc)) / 6.0
            cand = (sc, f"root{i}", fid, abs(radical_eq(sc)), None)
        cands.append(cand)
    return _assemble("rank4_quartic", cands,
                     f"P={purity!r}, C={concurrence!r}, x={aux_x!r}, phi={phi!r}, psi={psi!r}",
                     default_branch=None)


# --- dispatch -----------------------------------------------------------------

@dataclass(frozen=True)
class RelationInput:
    """Targets for one inverse relation, dispatched on (rank, variant).

    aux is the free coherence magnitude of the relation: y for rank-2
    Third, the rank-4 x and y cases; x for the rank-3 inner-dominant case
    and the rank-4 quartic.  variant selects among the sub-relations of a
    rank; "auto" means the outer-dominant default.
    """

    rank: int
    purity_target: float
    concurrence_target: float | None = None
    phi: float | None = None
    psi: float | None = None
    aux: float | None = None
    variant: str = "auto"


_RANK2_KINDS = {"auto": Kind.THIRD, "third": Kind.THIRD, "first": Kind.FIRST, "second": Kind.SECOND}


def synthesize_state(inp: RelationInput) -> InverseSolveResult:
    """Route a RelationInput to its solver; see RelationInput for the map."""
    v = inp.variant.lower()
    p, c, aux = inp.purity_target, inp.concurrence_target, inp.aux

    def need(value, name):
        if value is None:
            raise ValidationError(f"rank {inp.rank} variant {v!r} needs {name}")
        return value

    if inp.rank == 1:
        return solve_rank1(p, need(c, "a concurrence target"))
    if inp.rank == 2:
        if v not in _RANK2_KINDS:
            raise ValidationError(f"rank 2 variants are {sorted(_RANK2_KINDS)}, not {v!r}")
        kind = _RANK2_KINDS[v]
        if kind is Kind.THIRD:
            return solve_theta_rank2k3(p, need(c, "a concurrence target"), need(aux, "aux (inner coherence y)"))
        return solve_rank2(kind, p, need(c, "a concurrence target"))
    if inp.rank == 3:
        phi, psi = need(inp.phi, "phi"), need(inp.psi, "psi")
        if v in ("auto", "xcase"):
            return solve_rank3_kind1(p, need(c, "a concurrence target"), phi, psi)
        if v == "ycase":
            return solve_rank3_kind1_ycase(p, need(aux, "aux (outer coherence x)"), phi, psi)
        if v == "second":
            return solve_rank3_kind2(p, need(aux, "aux (inner coherence y)"), phi, psi)
        raise ValidationError(f"rank 3 variants are ['auto', 'second', 'xcase', 'ycase'], not {v!r}")
    if inp.rank == 4:
        phi, psi = need(inp.phi, "phi"), need(inp.psi, "psi")
        if v in ("auto", "xcase"):
            return solve_rank4_xcase(p, need(c, "a concurrence target"), phi, psi, aux or 0.0)
        if v == "ycase":
            return solve_rank4_ycase(p, need(c, "a concurrence target"), phi, psi, need(aux, "aux (inner coherence y)"))
        if v == "quartic":
            return rank4_quartic_solve(p, need(c, "a concurrence target"), phi, psi, aux or 0.0)
        raise ValidationError(f"rank 4 variants are ['auto', 'quartic', 'xcase', 'ycase'], not {v!r}")
    raise ValidationError(f"rank must be 1, 2, 3 or 4, not {inp.rank!r}")

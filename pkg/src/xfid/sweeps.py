"""Sweep engine regenerating the figure datasets as deterministic CSV.

A SweepSpec names a relation, the swept variable (purity P, concurrence
C, or the block-shape coefficients e and f), the grid and the fixed
inputs.  run_sweep materializes every grid point through the strict
solvers, verifies each materialized state against the dense-matrix
oracle and emits one row per point; points whose targets are infeasible
or whose oracle residual exceeds 1e-8 become skip records instead of
crashing the sweep.  figure_preset(1..10) reproduces the ten built-in
figure configurations, probing the feasible range of the swept variable
first.

CSV contract: header `<swept>,fidelity[,uhlmann],oracle_residual,skipped`,
UTF-8, LF line endings, shortest round-trip float formatting; skipped
rows leave the numeric cells empty and give a reason without commas.
The emitted bytes are a pure function of the SweepSpec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleTargetError, ValidationError
from .metrics import (
    concurrence_oracle,
    fidelity_oracle,
    purity_oracle,
    uhlmann_closed,
)
from . import relations
from .xstate import to_density

RELATION_NAMES = (
    "rank2k3",
    "rank3k1",
    "rank3k1_ycase",
    "rank3k2",
    "rank4_xcase",
    "rank4_ycase",
    "rank4_quartic",
    "uhlmann_vs_e",
)

SWEEP_COLUMNS = {"P": "purity", "C": "concurrence", "e": "e", "f": "f"}
ORACLE_TOL = 1e-8
PROBE_POINTS = 513
DEFAULT_POINTS = 201

# natural domains of the swept variables before feasibility probing;
# f caps at 1/2 globally, the tighter 4f <= 1 + e cut is handled per point
_DOMAIN = {"P": (0.25, 1.0), "C": (0.0, 1.0), "e": (-1.0, 1.0), "f": (0.0, 0.5)}


@dataclass(frozen=True)
class SweepSpec:
    relation: str
    sweep_variable: str
    sweep_range: tuple
    fixed: dict = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        if self.relation not in RELATION_NAMES:
            raise ValidationError(f"relation {self.relation!r} not one of {RELATION_NAMES}")
        if self.sweep_variable not in SWEEP_COLUMNS:
            raise ValidationError(f"sweep variable {self.sweep_variable!r} not one of {tuple(SWEEP_COLUMNS)}")
        lo, hi, n = self.sweep_range
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise ValidationError(f"bad sweep range {self.sweep_range!r}")
        if int(n) < 2:
            raise ValidationError("sweep needs at least 2 points")

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "sweep_variable": self.sweep_variable,
            "sweep_range": list(self.sweep_range),
            "fixed": dict(self.fixed),
            "notes": self.notes,
        }


@dataclass(frozen=True)
class SweepRow:
    value: float
    fidelity: float | None
    uhlmann: float | None
    oracle_residual: float | None
    skipped: str = ""


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple

    @property
    def n_points(self) -> int:
        return len(self.rows)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "rows": [
                {
                    "value": r.value,
                    "fidelity": r.fidelity,
                    "uhlmann": r.uhlmann,
                    "oracle_residual": r.oracle_residual,
                    "skipped": r.skipped,
                }
                for r in self.rows
            ],
        }


def angles_from_e_f(e: float, f: float) -> tuple[float, float]:
    """(phi, psi) realizing the coefficients e and f.

    With w = (1 - e)/2, sin^2(phi) solves z^2 - (1 + w) z + (w + f^2) = 0
    (smaller root; both give the same d, e, f, f') and sin^2(psi) = w / z.
    Real solutions need e >= 4f - 1.
    """
    if not -1.0 - 1e-12 <= e <= 1.0 + 1e-12:
        raise ValidationError(f"e={e!r} outside [-1, 1]")
    if not -1e-12 <= f <= 0.5 + 1e-12:
        raise ValidationError(f"f={f!r} outside [0, 1/2]")
    w = (1.0 - e) / 2.0
    # f = 0 means psi = pi/2 exactly; the quadratic route would put
    # sin^2(psi) an ulp below 1 and arcsin amplifies that to ~1e-8
    if abs(f) <= 1e-15:
        return math.asin(math.sqrt(w)), math.pi / 2
    disc = (1.0 + w) ** 2 - 4.0 * (w + f * f)
    if disc < 0.0:
        if disc < -1e-12:
            raise InfeasibleTargetError(f"no angles give e={e!r} with f={f!r} (need e >= 4f - 1)")
        disc = 0.0
    z = ((1.0 + w) - math.sqrt(disc)) / 2.0
    z = min(max(z, w), 1.0)
    if z < 1e-15:
        return 0.0, math.pi / 2
    spsi = min(w / z, 1.0)
    return math.asin(math.sqrt(z)), math.asin(math.sqrt(spsi))


def _point_inputs(spec: SweepSpec, value: float) -> dict:
    """Solver inputs for one grid point: fixed values plus the swept one."""
    vals = dict(spec.fixed)
    vals[spec.sweep_variable] = value
    if "phi" not in vals and ("e" in vals or "f" in vals):
        vals["phi"], vals["psi"] = angles_from_e_f(vals.get("e", 0.0), vals.get("f", 0.0))
    return vals


def _solve_point(relation: str, v: dict) -> tuple[relations.InverseSolveResult, float | None]:
    """Run the strict solver for one point; returns (result, uhlmann)."""
    if relation == "rank2k3":
        return relations.solve_theta_rank2k3(v["P"], v["C"], v["y"]), None
    if relation == "rank3k1":
        return relations.solve_rank3_kind1(v["P"], v["C"], v["phi"], v["psi"]), None
    if relation == "rank3k1_ycase":
        return relations.solve_rank3_kind1_ycase(v["P"], v["x"], v["phi"], v["psi"]), None
    if relation == "rank3k2":
        return relations.solve_rank3_kind2(v["P"], v["y"], v["phi"], v["psi"]), None
    if relation == "rank4_xcase":
        return relations.solve_rank4_xcase(v["P"], v["C"], v["phi"], v["psi"], v.get("y", 0.0)), None
    if relation == "rank4_ycase":
        return relations.solve_rank4_ycase(v["P"], v["C"], v["phi"], v["psi"], v["y"]), None
    if relation == "rank4_quartic":
        return relations.rank4_quartic_solve(v["P"], v["C"], v["phi"], v["psi"], v.get("x", 0.0)), None
    if relation == "uhlmann_vs_e":
        res = relations.solve_rank4_xcase(v["P"], v["C"], v["phi"], v["psi"], v.get("y", 0.0))
        return res, uhlmann_closed(res.params)[0]
    raise ValidationError(f"unknown relation {relation!r}")


def _evaluate_point(spec: SweepSpec, value: float, with_oracle: bool = True) -> SweepRow:
    try:
        vals = _point_inputs(spec, value)
        result, uhl = _solve_point(spec.relation, vals)
    except (InfeasibleTargetError, ValidationError) as exc:
        reason = str(exc).replace(",", ";").replace("\n", " ")
        return SweepRow(value, None, None, None, f"infeasible: {reason}")
    if result.params is None:
        return SweepRow(value, None, None, None,
                        "infeasible: no positive-semidefinite state on the chosen root")
    if not with_oracle:
        return SweepRow(value, result.optimal_fidelity, uhl, None)
    rho = to_density(result.params)
    residual = abs(result.optimal_fidelity - float(fidelity_oracle(rho)))
    p_target = vals.get("P")
    if p_target is not None:
        residual = max(residual, abs(p_target - float(purity_oracle(rho))))
    c_target = vals.get("C")
    if c_target is not None and spec.relation not in ("rank3k1_ycase", "rank3k2"):
        residual = max(residual, abs(c_target - float(concurrence_oracle(rho))))
    if residual > ORACLE_TOL:
        return SweepRow(value, None, None, residual,
                        f"oracle residual {residual:.3e} exceeds {ORACLE_TOL:.0e}")
    return SweepRow(value, result.optimal_fidelity, uhl, residual)


def probe_feasible_range(relation: str, sweep_variable: str, fixed: dict,
                         points: int = PROBE_POINTS) -> tuple[float, float]:
    """First and last feasible grid value over the variable's natural domain."""
    lo, hi = _DOMAIN[sweep_variable]
    spec = SweepSpec(relation, sweep_variable, (lo, hi, points), fixed)
    grid = np.linspace(lo, hi, points)
    feasible = [v for v in grid if not _evaluate_point(spec, float(v), with_oracle=False).skipped]
    if not feasible:
        raise InfeasibleTargetError(
            f"{relation}: no feasible {sweep_variable} in [{lo}, {hi}] with fixed {fixed!r}"
        )
    return float(feasible[0]), float(feasible[-1])


_PRESETS = {
    1: ("rank2k3", "P", {"C": 0.2, "y": 0.01},
        "doubly saturated rank-2 fidelity against purity"),
    2: ("rank2k3", "C", {"P": 0.7, "y": 0.001},
        "doubly saturated rank-2 fidelity against concurrence; y is pinned "
        "to 0.001 because at y = 0.01 this class admits no state with "
        "P > 0.68 (the block weight must satisfy 2*sqrt(y) <= A "
        "<= 1 - C - 2*sqrt(y)), which would leave the fixed purity 0.7 "
        "unreachable"),
    3: ("rank3k1", "P", {"C": 0.2, "phi": math.pi / 4, "psi": math.pi / 2},
        "inner-saturated rank-3 fidelity against purity"),
    4: ("rank3k1", "C", {"P": 0.7, "phi": math.pi / 4, "psi": math.pi / 2},
        "inner-saturated rank-3 fidelity against concurrence"),
    5: ("rank3k1", "e", {"C": 0.2, "P": 0.7, "f": 0.0},
        "inner-saturated rank-3 fidelity against the zz-shape coefficient e at f = 0"),
    6: ("rank3k1", "f", {"C": 0.2, "P": 0.7, "e": 0.0},
        "inner-saturated rank-3 fidelity against the inner-cap coefficient f at e = 0"),
    7: ("rank4_xcase", "P", {"C": 0.2, "phi": math.pi / 4, "psi": math.pi / 4, "y": 0.0},
        "unsaturated rank-4 fidelity against purity"),
    8: ("rank4_xcase", "C", {"P": 0.7, "phi": math.pi / 4, "psi": math.pi / 4, "y": 0.0},
        "unsaturated rank-4 fidelity against concurrence; phi = psi = pi/4 "
        "locks the zz-shape coefficient at e = 1/2, so no e = 0 slice "
        "exists for this class at these angles and the dataset encodes the "
        "concurrence sweep instead"),
    9: ("rank4_quartic", "P", {"C": 0.2, "phi": math.pi / 4, "psi": math.pi / 4, "x": 0.0},
        "rank-4 fidelity against purity with the inner concurrence branch dominant"),
    10: ("uhlmann_vs_e", "e", {"C": 0.2, "P": 0.7, "f": 1.0 / (2.0 * math.sqrt(2.0)), "y": 0.0},
         "teleportation fidelity and best Bell overlap against e at fixed f"),
}


def figure_preset(figure: int, points: int = DEFAULT_POINTS) -> SweepSpec:
    """SweepSpec for one of the ten built-in figures, range probed first."""
    if figure not in _PRESETS:
        raise ValidationError(f"figure must be 1..10, got {figure!r}")
    relation, var, fixed, notes = _PRESETS[figure]
    lo, hi = probe_feasible_range(relation, var, fixed)
    return SweepSpec(relation, var, (lo, hi, points), fixed, notes)


def run_sweep(spec: SweepSpec) -> SweepResult:
    lo, hi, n = spec.sweep_range
    grid = np.linspace(lo, hi, int(n))
    rows = tuple(_evaluate_point(spec, float(v)) for v in grid)
    if all(r.skipped for r in rows):
        raise InfeasibleTargetError(
            f"{spec.relation}: every grid point in [{lo}, {hi}] is infeasible"
        )
    return SweepResult(spec, rows)


def _cell(v) -> str:
    if v is None:
        return ""
    return repr(float(v))


def csv_text(result: SweepResult) -> str:
    """The CSV document for a sweep, byte-deterministic for a given spec."""
    with_uhlmann = result.spec.relation == "uhlmann_vs_e"
    swept = SWEEP_COLUMNS[result.spec.sweep_variable]
    cols = [swept, "fidelity"] + (["uhlmann"] if with_uhlmann else []) + ["oracle_residual", "skipped"]
    lines = [",".join(cols)]
    for r in result.rows:
        cells = [_cell(r.value), _cell(r.fidelity)]
        if with_uhlmann:
            cells.append(_cell(r.uhlmann))
        cells += [_cell(r.oracle_residual), r.skipped]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def emit_csv(result: SweepResult, destination) -> int:
    """Write the CSV document; returns the number of bytes written."""
    data = csv_text(result).encode("utf-8")
    if hasattr(destination, "write"):
        destination.write(data)
        return len(data)
    with open(destination, "wb") as fh:
        fh.write(data)
    return len(data)

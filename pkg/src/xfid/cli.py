"""Command-line front door for the X-state fidelity library.

Subcommands: analyze a state, classify its rank, solve an inverse
relation, run a figure sweep, run the closed-vs-oracle verification
harness, and print the built-in worked examples with pass/fail marks.

Exit codes: 0 on success, 2 on validation errors (including bad flags),
3 on infeasible targets.  --json emits exactly one JSON document on
stdout.  Angles are radians unless --degrees is given.  A --config file
holds key=value lines for any long option; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import relations
from .errors import InfeasibleTargetError, ValidationError, XFidError
from .metrics import report, uhlmann_closed
from .sweeps import DEFAULT_POINTS, emit_csv, figure_preset, run_sweep
from .verify import run_verification
from .xstate import classify_rank, derived_coefficients, validate

VERIFY_TOL = 1e-8
PHASE_TOL = 1e-10
EXAMPLE_TOL = 1e-6

_ANGLE_KEYS = ("theta", "phi", "psi", "mu", "nu")
_FLOAT_KEYS = _ANGLE_KEYS + ("x", "y", "purity", "concurrence", "aux")
_INT_KEYS = ("figure", "points", "seed")
_BOOL_KEYS = ("json", "csv", "degrees")
_STR_KEYS = ("relation", "out", "config")

# relation name -> (required target flags, optional-with-default flags)
_RELATIONS = {
    "rank1": (("purity", "concurrence"), ()),
    "rank2k1": (("purity", "concurrence"), ()),
    "rank2k2": (("purity", "concurrence"), ()),
    "rank2k3": (("purity", "concurrence"), ("aux",)),
    "rank3k1": (("purity", "concurrence", "phi", "psi"), ()),
    "rank3k1_ycase": (("purity", "aux", "phi", "psi"), ()),
    "rank3k2": (("purity", "aux", "phi", "psi"), ()),
    "rank4_xcase": (("purity", "concurrence", "phi", "psi"), ("aux",)),
    "rank4_ycase": (("purity", "concurrence", "phi", "psi"), ("aux",)),
    "rank4_quartic": (("purity", "concurrence", "phi", "psi"), ("aux",)),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xfid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", default=None,
                       help="emit one JSON document on stdout")
        p.add_argument("--config", help="key=value file supplying defaults for any flag")

    def state_flags(p):
        for name in ("theta", "phi", "psi", "x", "y", "mu", "nu"):
            p.add_argument(f"--{name}", type=float)
        p.add_argument("--degrees", action="store_true", default=None,
                       help="interpret angle flags as degrees")

    p = sub.add_parser("analyze", help="metrics report for one state")
    state_flags(p)
    common(p)

    p = sub.add_parser("classify", help="rank class and derived coefficients")
    state_flags(p)
    common(p)

    p = sub.add_parser("solve", help="invert a fidelity relation")
    p.add_argument("--relation", choices=sorted(_RELATIONS))
    p.add_argument("--purity", type=float)
    p.add_argument("--concurrence", type=float)
    p.add_argument("--aux", type=float, help="auxiliary coherence (x or y, relation dependent)")
    p.add_argument("--phi", type=float)
    p.add_argument("--psi", type=float)
    p.add_argument("--degrees", action="store_true", default=None)
    common(p)

    p = sub.add_parser("sweep", help="regenerate one figure dataset as CSV")
    p.add_argument("--figure", type=int, help="figure preset 1..10")
    p.add_argument("--points", type=int, help=f"grid size (default {DEFAULT_POINTS})")
    p.add_argument("--out", help="CSV destination path (default stdout)")
    p.add_argument("--csv", action="store_true", default=None,
                   help="force CSV output (the default)")
    common(p)

    p = sub.add_parser("verify", help="closed forms against the dense oracle")
    p.add_argument("--points", type=int, help="states per rank class (default 1000)")
    p.add_argument("--seed", type=int, help="RNG seed (default 42)")
    common(p)

    p = sub.add_parser("examples", help="built-in worked examples with pass/fail marks")
    common(p)

    return parser


def _coerce(key: str, raw: str):
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _INT_KEYS:
        return int(raw)
    if key in _BOOL_KEYS:
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValidationError(f"config value for {key} must be boolean-like, got {raw!r}")
    if key in _STR_KEYS:
        return raw
    raise ValidationError(f"unknown config key {key!r}")


def _apply_config(args: argparse.Namespace) -> None:
    """Fill options the command line left unset from the key=value file."""
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config file: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ValidationError(f"config line {lineno} is not key=value: {text!r}")
        key, _, raw = text.partition("=")
        key = key.strip().replace("-", "_")
        value = _coerce(key, raw.strip())
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            setattr(args, key, value)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValidationError("missing required option(s): " + ", ".join(f"--{n}" for n in missing))


def _angles_to_radians(args) -> None:
    if getattr(args, "degrees", None):
        for name in _ANGLE_KEYS:
            value = getattr(args, name, None)
            if value is not None:
                setattr(args, name, math.radians(value))


def _state_from_args(args):
    _require(args, "theta", "phi", "psi")
    _angles_to_radians(args)
    return validate(args.theta, args.phi, args.psi,
                    args.x or 0.0, args.y or 0.0, args.mu or 0.0, args.nu or 0.0)


def _emit(args, doc: dict, human: str) -> None:
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(human)


def cmd_analyze(args) -> int:
    params = _state_from_args(args)
    rep = report(params)
    lines = [
        f"state: {params.to_dict()}",
        f"rank class: {rep.rank}",
        f"purity:       closed {rep.purity_closed!r}  oracle {rep.purity_oracle!r}",
        f"concurrence:  closed {rep.concurrence_closed!r}  oracle {rep.concurrence_oracle!r}",
        f"fidelity:     closed {rep.fidelity_closed!r}  oracle {rep.fidelity_oracle!r}",
        f"uhlmann:      closed {rep.uhlmann_closed!r}  oracle {rep.uhlmann_oracle!r}  best {rep.uhlmann_argmax}",
        f"max closed-vs-oracle discrepancy: {rep.max_abs_discrepancy:.3e}",
        f"beats classical teleportation: {rep.equality_regime}",
    ]
    _emit(args, {"params": params.to_dict(), "report": rep.to_dict()}, "\n".join(lines))
    return 0


def cmd_classify(args) -> int:
    params = _state_from_args(args)
    rank = classify_rank(params)
    coeffs = derived_coefficients(params.theta, params.phi, params.psi, params.x, params.y)
    doc = {"params": params.to_dict(), "rank": rank.to_dict(), "coefficients": coeffs.to_dict()}
    coeff_text = "\n".join(f"  {k}: {v!r}" for k, v in coeffs.to_dict().items())
    _emit(args, doc, f"rank class: {rank}\ncoefficients:\n{coeff_text}")
    return 0


def _solve_from_args(args) -> relations.InverseSolveResult:
    _require(args, "relation")
    required, optional = _RELATIONS[args.relation]
    _require(args, *required)
    _angles_to_radians(args)
    r = args.relation
    aux = args.aux if args.aux is not None else 0.0
    if r == "rank1":
        return relations.solve_rank1(args.purity, args.concurrence)
    if r in ("rank2k1", "rank2k2"):
        kind = "first" if r == "rank2k1" else "second"
        return relations.solve_rank2(kind, args.purity, args.concurrence)
    if r == "rank2k3":
        return relations.solve_theta_rank2k3(args.purity, args.concurrence, aux)
    if r == "rank3k1":
        return relations.solve_rank3_kind1(args.purity, args.concurrence, args.phi, args.psi)
    if r == "rank3k1_ycase":
        return relations.solve_rank3_kind1_ycase(args.purity, aux, args.phi, args.psi)
    if r == "rank3k2":
        return relations.solve_rank3_kind2(args.purity, aux, args.phi, args.psi)
    if r == "rank4_xcase":
        return relations.solve_rank4_xcase(args.purity, args.concurrence, args.phi, args.psi, aux)
    if r == "rank4_ycase":
        return relations.solve_rank4_ycase(args.purity, args.concurrence, args.phi, args.psi, aux)
    return relations.rank4_quartic_solve(args.purity, args.concurrence, args.phi, args.psi, aux)


def cmd_solve(args) -> int:
    result = _solve_from_args(args)
    roots = ", ".join(
        f"{s!r} ({b}, F={f!r})"
        for s, b, f in zip(result.sin2theta_roots, result.branches, result.fidelity_per_root)
    )
    lines = [
        f"relation: {result.relation}",
        f"optimal fidelity: {result.optimal_fidelity!r}",
        f"chosen sin^2(theta): {result.chosen_root!r} ({result.chosen_branch})",
        f"all roots: {roots}",
        f"state: {None if result.params is None else result.params.to_dict()}",
        f"flagged: {result.flagged}",
    ]
    _emit(args, result.to_dict(), "\n".join(lines))
    return 0


def cmd_sweep(args) -> int:
    _require(args, "figure")
    points = args.points if args.points is not None else DEFAULT_POINTS
    if points < 2:
        raise ValidationError("--points must be at least 2")
    spec = figure_preset(args.figure, points)
    result = run_sweep(spec)
    if args.json:
        print(json.dumps(result.to_dict(), indent=2))
        return 0
    if args.out:
        emit_csv(result, args.out)
    else:
        emit_csv(result, sys.stdout.buffer)
        sys.stdout.buffer.flush()
    return 0


def cmd_verify(args) -> int:
    n = args.points if args.points is not None else 1000
    if n < 1:
        raise ValidationError("--points must be at least 1")
    seed = args.seed if args.seed is not None else 42
    rep = run_verification(n_per_class=n, seed=seed)
    ok = rep.worst <= VERIFY_TOL and rep.phase_invariance <= PHASE_TOL
    if args.json:
        doc = rep.to_dict()
        doc["ok"] = ok
        print(json.dumps(doc, indent=2))
    else:
        lines = [f"{n} states per rank class, seed {seed}"]
        for name, metrics in rep.per_class.items():
            worst_metric = max(metrics[m] for m in ("purity", "concurrence", "fidelity", "uhlmann"))
            lines.append(f"  {name:14s} worst metric discrepancy {worst_metric:.3e}")
        lines.append(f"phase invariance drift: {rep.phase_invariance:.3e}")
        lines.append(f"worst overall: {rep.worst:.3e} at {rep.worst_case}")
        lines.append("PASS" if ok else "FAIL")
        print("\n".join(lines))
    return 0 if ok else 2


def _golden_entries() -> list[dict]:
    """The built-in worked examples, recomputed and marked."""
    entries = []

    def state_entry(name, params, expected):
        rep = report(params)
        computed = {
            "purity": rep.purity_closed,
            "concurrence": rep.concurrence_closed,
            "fidelity": rep.fidelity_closed,
            "uhlmann": rep.uhlmann_closed,
        }
        ok = all(abs(computed[k] - expected[k]) <= EXAMPLE_TOL for k in expected)
        entries.append({"name": name, "kind": "state", "params": params.to_dict(),
                        "expected": expected, "computed": computed, "pass": ok})

    # equal purity 5/9 and concurrence 1/3, different fidelity: the
    # two-Bell mixture beats the Bell-plus-ground mixture
    g1 = validate(math.pi / 2, math.pi / 4, 0.0, 0.0, 1.0 / 36.0, 0.0, math.pi)
    g2 = validate(math.acos(math.sqrt(2.0 / 3.0)), math.pi / 4, 0.0, 0.0, 1.0 / 36.0, 0.0, 0.0)
    state_entry("two-Bell mixture", g1,
                {"purity": 5 / 9, "concurrence": 1 / 3, "fidelity": 7 / 9, "uhlmann": 2 / 3})
    state_entry("Bell-plus-ground mixture", g2,
                {"purity": 5 / 9, "concurrence": 1 / 3, "fidelity": 2 / 3, "uhlmann": 1 / 3})

    def pair_entry(name, first, second, expected_first, expected_second):
        ok = (abs(first - expected_first) <= EXAMPLE_TOL
              and abs(second - expected_second) <= EXAMPLE_TOL)
        entries.append({"name": name, "kind": "comparison",
                        "expected": {"first": expected_first, "second": expected_second},
                        "computed": {"first": first, "second": second},
                        "pass": ok and second != first})

    # purer but less entangled wins within the doubly saturated rank-2 class
    lo = relations.solve_theta_rank2k3(0.6, 0.2, 0.001).optimal_fidelity
    hi = relations.solve_theta_rank2k3(0.7, 0.15, 0.001).optimal_fidelity
    pair_entry("doubly saturated purity-vs-entanglement crossing",
               lo, hi, 0.6622841169844488, 0.676491106406735)

    # a state lower in both purity and concurrence wins via its block shape
    win = relations.solve_rank3_kind1(0.6, 0.2, math.pi / 4, math.pi / 2).optimal_fidelity
    lose = relations.rank3_kind1_fidelity(0.64, 0.22, math.pi / 2, 2.0 * math.pi / 25.0)
    pair_entry("inner-saturated block-shape crossing",
               win, lose, 0.6898084725588691, 0.6612430977674011)

    return entries


def cmd_examples(args) -> int:
    entries = _golden_entries()
    all_pass = all(e["pass"] for e in entries)
    if args.json:
        print(json.dumps({"examples": entries, "all_pass": all_pass}, indent=2))
    else:
        lines = []
        for e in entries:
            mark = "pass" if e["pass"] else "FAIL"
            if e["kind"] == "state":
                vals = "  ".join(f"{k}={e['computed'][k]:.6f}" for k in e["expected"])
                lines.append(f"[{mark}] {e['name']}: {vals}")
            else:
                lines.append(f"[{mark}] {e['name']}: "
                             f"F_first={e['computed']['first']:.6f} "
                             f"F_second={e['computed']['second']:.6f}")
        lines.append("all examples pass" if all_pass else "SOME EXAMPLES FAIL")
        print("\n".join(lines))
    return 0 if all_pass else 2


_COMMANDS = {
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "examples": cmd_examples,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return _COMMANDS[args.command](args)
    except InfeasibleTargetError as exc:
        print(f"infeasible target: {exc}", file=sys.stderr)
        return 3
    except XFidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # contract: no tracebacks, everything maps to 2 or 3
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
CORE: CLI
- Data-emitting front end: JSON for reports, CSV (12 significant digits) for tables.
- Exit codes: 0 success, 1 usage error, 2 domain error.
- Logs go to stderr, data to stdout or --out.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import yaml
from pydantic import ValidationError

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent))
from config.channel_manager import ChannelManager, get_numerics
from core.capacity import Ensemble, capacity_decomposition, holevo_capacity, v_axis_ensemble
from core.channels import RateParams, bloch_rates, parse_channel_config
from core.dampingbasis import affine_map, channel_apply, propagate
from core.entanglement import critical_times, e3_curve, mmax_family
from core.errors import ChannelError, ParameterError
from core.gates import run_gates
from core.geometry import BlochVector, bloch_to_rho, ellipsoid_surface, rho_to_bloch
from core.kraus import cp_inequalities, svc_kraus, t3_bound_check, verify_appendix_equations
from core.lindblad import build_spec, c_matrix_positive
from core.oracle import bloch_trajectory

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.12g"
DEFAULT_FORMATS = {
    "show": "json", "evolve": "csv", "ellipsoid": "csv", "kraus": "json",
    "capacity": "json", "entangle": "csv", "validate": "json",
}


class CLIParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _complex(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _matrix(a) -> List[List[List[float]]]:
    return [[_complex(z) for z in row] for row in np.asarray(a)]


def _time_grid(t_max: float, dt: float) -> np.ndarray:
    if t_max < 0 or dt <= 0:
        raise ParameterError(f"time grid needs t_max >= 0 and dt > 0, got t_max={t_max}, dt={dt}")
    n = int(round(t_max / dt))
    return np.round(np.arange(n + 1) * dt, 12)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"✅ Wrote {out}")
    else:
        sys.stdout.write(text)


def emit_json(payload: Dict[str, Any], out: Optional[str]) -> None:
    _write(json.dumps(payload, indent=2) + "\n", out)


def emit_frame(frame: pd.DataFrame, fmt: str, out: Optional[str]) -> None:
    if fmt == "csv":
        _write(frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT), out)
    else:
        emit_json({"rows": frame.to_dict(orient="records")}, out)


def load_channel(args):
    """Channel config from --config, else the named --preset."""
    raw = ChannelManager.load_file(args.config) if args.config else ChannelManager.get_preset(args.preset)
    config = parse_channel_config(raw)
    return config, config.to_rates()


def _rates_payload(r: RateParams) -> Dict[str, Any]:
    inv_tu, inv_tv, inv_tw = bloch_rates(r)
    return {
        "rates": r.model_dump(),
        "bloch_rates": {"inv_Tu": inv_tu, "inv_Tv": inv_tv, "inv_Tw": inv_tw},
    }


def cmd_channel_show(args) -> int:
    config, r = load_channel(args)
    spec = build_spec(r)
    payload = {"kind": config.channel_kind.value, "params": config.template_params()}
    payload.update(_rates_payload(r))
    payload.update({
        "w_eq": r.w_eq,
        "c_matrix": np.real(spec.c).tolist(),
        "c_matrix_positive": c_matrix_positive(spec),
        "t3_bound": t3_bound_check(r),
        "unital": r.is_unital,
    })
    emit_json(payload, args.out)
    return 0


def cmd_evolve(args) -> int:
    _, r = load_channel(args)
    b0 = BlochVector(*args.bloch)
    rho0 = bloch_to_rho(b0)
    grid = _time_grid(args.t_max, args.dt)
    logger.info(f"🚀 Evolving {b0} over {len(grid)} times with method '{args.method}'")

    if args.method == "rk4":
        states = bloch_trajectory(r, b0, grid, dt=args.rk4_dt)
    elif args.method == "exp":
        states = [rho_to_bloch(0.5 * (x + x.conj().T)) for x in (propagate(r, t, rho0) for t in grid)]
    else:
        states = [rho_to_bloch(channel_apply(r, t, rho0)) for t in grid]

    frame = pd.DataFrame([(t, b.u, b.v, b.w) for t, b in zip(grid, states)], columns=["t", "u", "v", "w"])
    emit_frame(frame, args.format, args.out)
    return 0


def cmd_ellipsoid(args) -> int:
    _, r = load_channel(args)
    if any(t < 0 for t in args.times):
        raise ParameterError("times must be non-negative")
    frame = ellipsoid_surface(r, args.times, n_points=args.points, progress=not args.quiet)
    emit_frame(frame, args.format, args.out)
    return 0


def cmd_kraus(args) -> int:
    _, r = load_channel(args)
    m = affine_map(r, args.t)
    k = svc_kraus(m)
    cp = cp_inequalities(m.Lambda)
    payload = {
        "t": args.t,
        "Lambda": list(m.Lambda),
        "shift": list(m.shift),
        "ops": [_matrix(A) for A in k.ops],
        "constants": {name: _complex(value) for name, value in k.constants.items()},
        "completeness_residual": k.completeness_residual,
        "appendix_residual": verify_appendix_equations(k, m).max_residual,
        "cp_inequalities": {"passed": cp.passed, "slacks": list(cp.slacks)},
    }
    emit_json(payload, args.out)
    return 0


def _ensemble_payload(e: Ensemble) -> List[Dict[str, Any]]:
    return [{"p": p, "bloch": [b.u, b.v, b.w]} for p, b in e.members]


def cmd_capacity(args) -> int:
    config, r = load_channel(args)
    decomposition = capacity_decomposition(r, args.t)
    result = holevo_capacity(r, args.t, max_states=args.max_states, progress=not args.quiet)
    payload = {
        "C": decomposition.capacity,
        "ensemble": _ensemble_payload(v_axis_ensemble()),
        "C_max": result.C,
        "argmax": {
            "C": result.C,
            "ensemble": _ensemble_payload(result.ensemble),
            "degenerate": result.degenerate,
        },
        "decomposition": {
            "ideal": decomposition.ideal,
            "shift_error": decomposition.shift_error,
            "mixing_error": decomposition.mixing_error,
        },
        "params": {"kind": config.channel_kind.value, "t": args.t, **config.template_params()},
    }
    logger.info(f"📊 C = {decomposition.capacity:.4f} (v-axis pair), optimized {result.C:.4f}")
    emit_json(payload, args.out)
    return 0


def cmd_entangle(args) -> int:
    config, _ = load_channel(args)
    reservoir = config.reservoir()
    A, N = (reservoir.A, reservoir.N) if reservoir is not None else (1.0, 1.0)
    family = mmax_family(A=A, N=N, fraction=args.fraction)
    frame = e3_curve(family, _time_grid(args.t_max, args.dt), progress=not args.quiet)
    times = critical_times(family)
    for label, t_c in times.items():
        logger.info(f"📊 {label}: critical time {t_c:.6f}")

    if args.format == "csv":
        _write(frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT), args.out)
    else:
        emit_json({"A": A, "N": N, "critical_times": times, "curves": frame.to_dict(orient="records")}, args.out)
    return 0


def cmd_validate(args) -> int:
    print("🧪 CHANNEL ACCEPTANCE GATES", file=sys.stderr)
    print("=" * 40, file=sys.stderr)
    results = run_gates()
    for result in results:
        status = "✅ PASS" if result.passed else "❌ FAIL"
        print(f"[{status}] {result.name}", file=sys.stderr)
        print(f"      Detail: {result.detail}", file=sys.stderr)

    emit_json({"gates": [{"name": g.name, "passed": g.passed, "detail": g.detail} for g in results]}, args.out)
    if all(g.passed for g in results):
        print("\n🏁 ALL GATES PASSED", file=sys.stderr)
        return 0
    return 2


COMMANDS = {
    "show": cmd_channel_show,
    "evolve": cmd_evolve,
    "ellipsoid": cmd_ellipsoid,
    "kraus": cmd_kraus,
    "capacity": cmd_capacity,
    "entangle": cmd_entangle,
    "validate": cmd_validate,
}


def build_parser() -> CLIParser:
    grid = get_numerics("entanglement")
    common = CLIParser(add_help=False)
    common.add_argument("--config", help="Channel config file (JSON or YAML)")
    common.add_argument("--preset", default="svc",
                        help=f"Named preset when --config is absent ({', '.join(ChannelManager.list_available_presets())})")
    common.add_argument("--t", type=float, default=1.0, help="Channel time")
    common.add_argument("--t-max", type=float, default=grid["t_max"], help="End of the time grid")
    common.add_argument("--dt", type=float, default=grid["dt"], help="Time grid step")
    common.add_argument("--format", choices=["json", "csv"], help="Output format")
    common.add_argument("--out", help="Output path (default: stdout)")
    common.add_argument("--method", choices=["closed", "exp", "rk4"], default="closed",
                        help="Evolution method for 'evolve'")
    common.add_argument("--verbose", action="store_true", help="Debug logging")
    common.add_argument("--quiet", action="store_true", help="Warnings only, no progress bars")

    parser = CLIParser(description="Qubit squeezed-vacuum channel toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CLIParser)

    sub.add_parser("show", parents=[common], help="Rates, c-matrix and positivity of a channel")

    evolve = sub.add_parser("evolve", parents=[common], help="Bloch trajectory on a time grid")
    evolve.add_argument("--bloch", type=float, nargs=3, default=[1.0, 0.0, 0.0], metavar=("U", "V", "W"))
    evolve.add_argument("--rk4-dt", type=float, default=get_numerics("oracle")["dt"], help="RK4 inner step")

    ellipsoid = sub.add_parser("ellipsoid", parents=[common], help="Image of the Bloch sphere over time")
    ellipsoid.add_argument("--times", type=float, nargs="+", default=[0.0, 0.5, 1.0])
    ellipsoid.add_argument("--points", type=int, default=get_numerics("geometry")["surface_points"])

    sub.add_parser("kraus", parents=[common], help="Kraus operators and residual checks")

    capacity = sub.add_parser("capacity", parents=[common], help="Holevo capacity and its decomposition")
    capacity.add_argument("--max-states", type=int, choices=[2, 3, 4],
                          default=get_numerics("capacity")["max_states"])

    entangle = sub.add_parser("entangle", parents=[common], help="e3 curves and critical times")
    entangle.add_argument("--fraction", type=float, default=grid["mmax_fraction"],
                          help="Middle curve squeezing as a fraction of Mmax")

    sub.add_parser("validate", parents=[common], help="Run the acceptance gates")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s', stream=sys.stderr)
    logging.getLogger().setLevel(level)
    args.format = args.format or DEFAULT_FORMATS[args.command]

    try:
        return COMMANDS[args.command](args)
    except (ChannelError, ValidationError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2
    except (FileNotFoundError, yaml.YAMLError, ValueError) as e:
        print(f"❌ Invalid config: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

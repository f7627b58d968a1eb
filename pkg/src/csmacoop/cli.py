"""Command-line interface.

Subcommands: analytic (closed-form operating points), simulate (one
seeded run), curve (timesharing tradeoff grids), converge (small-slot
sweep at tau = c*sqrt(sigma)), verify (closed-form vs brute-force phase
enumeration). All structured output is CSV with fixed headers and
column order; floats are written with repr so equal runs emit equal
bytes. Exit codes: 0 success, 2 validation error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from .analytic import (
    CsmaParams,
    OperatingPoint,
    asymptotic_performance,
    csma_performance,
    csma_phase_expectations,
    rr_performance,
    timeshare,
)
from .errors import ProtocolError, SimulationError, ValidationError
from .metrics import finalize, node_throughputs, relative_to
from .oracle import enumerate_phase
from .scenario import Scenario, load_scenario
from .simengine import Engine, SimConfig
from .topology import MODES, classify

ORACLE_TOLERANCE = 1e-12


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(header: list[str], rows: list[list], out_path: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    data = buf.getvalue()
    if out_path:
        Path(out_path).write_text(data)
    else:
        sys.stdout.write(data)


def _require(value, flag: str):
    if value is None:
        raise ValidationError(
            f"{flag} is required (pass the flag or add a default to the scenario)"
        )
    return value


def _resolved_params(args, scenario: Scenario) -> CsmaParams:
    sigma = args.sigma if args.sigma is not None else scenario.defaults.sigma
    tau = args.tau if args.tau is not None else scenario.defaults.tau
    return CsmaParams(_require(sigma, "--sigma"), _require(tau, "--tau"))


def _node_class(assign, k: str) -> str:
    if assign.helper[k] is not None:
        return "relayed"
    return "helper" if assign.help_count[k] > 0 else "direct"


def _point_rows(prefix: list, point: OperatingPoint, per_node_s: dict | None = None) -> list[list]:
    rows = []
    for k in point.nodes():
        s = per_node_s[k] if per_node_s is not None else point.throughput
        rows.append(prefix + [k, s, point.bit_cost[k], point.avg_power[k]])
    return rows


def cmd_analytic(args) -> int:
    scenario = load_scenario(args.scenario)
    net = scenario.network
    assign = classify(net)
    modes = MODES if args.mode == "both" else (args.mode,)
    params = None
    if args.sigma is not None or args.tau is not None or (
        scenario.defaults.sigma is not None and scenario.defaults.tau is not None
    ):
        params = _resolved_params(args, scenario)
    header = [
        "mode", "variant", "sigma", "tau", "node", "class", "helper",
        "help_count", "throughput", "bit_cost", "avg_power",
    ]
    rows = []
    for mode in modes:
        variants = [("rr", None, rr_performance(net, assign, mode))]
        if params is not None:
            variants.append(("csma", params, csma_performance(net, assign, mode, params)))
        variants.append(("asymptotic", None, asymptotic_performance(net, assign, mode)))
        for variant, p, point in variants:
            for k in net.nodes:
                rows.append([
                    mode, variant,
                    p.sigma if p else None, p.tau if p else None,
                    k, _node_class(assign, k), assign.helper[k],
                    assign.help_count[k],
                    point.throughput, point.bit_cost[k], point.avg_power[k],
                ])
    _emit(header, rows, args.out)
    return 0


def _baseline_point(name: str, net, assign, params: CsmaParams) -> OperatingPoint | None:
    if name == "rr-direct":
        return rr_performance(net, assign, "direct")
    if name == "csma-direct":
        return csma_performance(net, assign, "direct", params)
    return None


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    net = scenario.network
    assign = classify(net)
    params = _resolved_params(args, scenario)
    d = scenario.defaults
    seed = args.seed if args.seed is not None else d.seed
    cfg = SimConfig(
        params=params,
        protocol=args.protocol,
        seed=_require(seed, "--seed"),
        phases=args.phases if args.phases is not None else (d.phases or 30_000),
        pending_limit=args.pending if args.pending is not None else (
            d.pending if d.pending is not None else 10
        ),
        forward_max=args.forward_max if args.forward_max is not None else (
            d.forward_max if d.forward_max is not None else 0
        ),
        count_idle_phases=args.count_idle_phases,
        max_slots=args.max_slots,
    )
    trace = Engine(net, assign, cfg).run()
    point = finalize(trace, net.power)
    per_node_s = node_throughputs(trace)
    base = _baseline_point(args.baseline, net, assign, params)

    header = [
        "protocol", "sigma", "tau", "pending", "forward_max", "phases", "seed",
        "node", "throughput", "bit_cost", "avg_power",
        "throughput_gain_pct", "bit_cost_increase_pct",
    ]
    is_fair = args.protocol == "fairmac"
    prefix = [
        args.protocol, params.sigma, params.tau,
        cfg.pending_limit if is_fair else None,
        cfg.forward_max if is_fair else None,
        cfg.phases, cfg.seed,
    ]
    rows = []
    for k in net.nodes:
        gain = cost = None
        if base is not None:
            gain = 100.0 * (per_node_s[k] / base.throughput - 1.0)
            cost = 100.0 * (point.bit_cost[k] / base.bit_cost[k] - 1.0)
        rows.append(prefix + [k, per_node_s[k], point.bit_cost[k], point.avg_power[k], gain, cost])
    mean_cost = sum(point.bit_cost.values()) / len(net)
    mean_power = sum(point.avg_power.values()) / len(net)
    mean_gain = relative_to(point, base).throughput_gain_pct if base is not None else None
    rows.append(prefix + ["mean", point.throughput, mean_cost, mean_power, mean_gain, None])
    _emit(header, rows, args.out)
    return 0


def cmd_curve(args) -> int:
    scenario = load_scenario(args.scenario)
    net = scenario.network
    assign = classify(net)
    if args.alpha_steps < 2:
        raise ValidationError(f"--alpha-steps must be >= 2, got {args.alpha_steps}")
    params = _resolved_params(args, scenario)
    pairs = [
        ("rr", None,
         rr_performance(net, assign, "cooperative"),
         rr_performance(net, assign, "direct")),
        ("csma", params,
         csma_performance(net, assign, "cooperative", params),
         csma_performance(net, assign, "direct", params)),
    ]
    header = ["curve", "alpha", "sigma", "tau", "node", "throughput", "bit_cost", "avg_power"]
    rows = []
    for name, p, coop, direct in pairs:
        for i in range(args.alpha_steps):
            alpha = i / (args.alpha_steps - 1)
            point = timeshare(coop, direct, alpha)
            prefix = [name, alpha, p.sigma if p else None, p.tau if p else None]
            rows.extend(_point_rows(prefix, point))
    _emit(header, rows, args.out)
    return 0


def cmd_converge(args) -> int:
    scenario = load_scenario(args.scenario)
    net = scenario.network
    assign = classify(net)
    coeff = args.tau_coeff
    if coeff is None or coeff <= 0:
        raise ValidationError("--tau-coeff must be a positive number")
    sigmas = []
    for token in args.sigma_list.split(","):
        try:
            sigma = float(token)
        except ValueError:
            raise ValidationError(f"--sigma: expected a number, got {token!r}") from None
        if not 0 < sigma < 1:
            raise ValidationError(f"sigma values must lie in (0, 1), got {token!r}")
        sigmas.append(sigma)
    header = ["mode", "sigma", "tau", "node", "throughput", "bit_cost", "avg_power", "error"]
    rows = []
    for mode in MODES:
        for sigma in sigmas:
            tau = coeff * math.sqrt(sigma)
            if tau >= 1.0:
                rows.append([mode, sigma, tau, None, None, None, None, "tau-out-of-range"])
                continue
            point = csma_performance(net, assign, mode, CsmaParams(sigma, tau))
            for k in net.nodes:
                rows.append([mode, sigma, tau, k, point.throughput,
                             point.bit_cost[k], point.avg_power[k], None])
        limit = asymptotic_performance(net, assign, mode)
        for k in net.nodes:
            rows.append([mode, 0.0, None, k, limit.throughput,
                         limit.bit_cost[k], limit.avg_power[k], None])
    _emit(header, rows, args.out)
    return 0


def cmd_verify(args) -> int:
    scenario = load_scenario(args.scenario)
    net = scenario.network
    assign = classify(net)
    params = _resolved_params(args, scenario)
    header = ["mode", "sigma", "tau", "quantity", "analytic", "enumerated", "abs_diff"]
    rows = []
    worst = 0.0
    for mode in MODES:
        closed = csma_phase_expectations(net, assign, mode, params)
        brute = enumerate_phase(net, assign, mode, params)
        for quantity in ("p_success", "p_idle", "t_idle", "t_success", "t_collision"):
            a = getattr(closed, quantity)
            b = getattr(brute, quantity)
            diff = abs(a - b)
            worst = max(worst, diff)
            rows.append([mode, params.sigma, params.tau, quantity, a, b, diff])
    _emit(header, rows, args.out)
    if worst >= ORACLE_TOLERANCE:
        raise SimulationError(
            f"closed-form phase expectations deviate from enumeration by {worst!r}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csmacoop",
        description="Cooperative slotted-CSMA throughput/bit-cost toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--scenario", required=True, help="scenario file path")
        p.add_argument("--out", default=None, help="write CSV here instead of stdout")

    p = sub.add_parser("analytic", help="closed-form operating points and classification")
    add_common(p)
    p.add_argument("--mode", choices=("direct", "cooperative", "both"), default="both")
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="one seeded simulation run")
    add_common(p)
    p.add_argument("--protocol", choices=("direct", "coopmac", "fairmac"), required=True)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--phases", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--pending", type=int, default=None, help="fairMAC pending limit P")
    p.add_argument("--forward-max", type=int, default=None, help="fairMAC bundle limit Q")
    p.add_argument("--baseline", choices=("rr-direct", "csma-direct", "none"), default="none")
    p.add_argument("--count-idle-phases", action="store_true",
                   help="count idle phases towards --phases as well")
    p.add_argument("--max-slots", type=int, default=200_000_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("curve", help="timesharing tradeoff curves (RR and CSMA pairs)")
    add_common(p)
    p.add_argument("--alpha-steps", type=int, default=13)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("converge", help="CSMA points along tau = c*sqrt(sigma)")
    add_common(p)
    p.add_argument("--tau-coeff", type=float, required=True, help="coefficient c")
    p.add_argument("--sigma", dest="sigma_list", required=True,
                   help="comma-separated slot lengths")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("verify", help="cross-check closed forms against enumeration")
    add_common(p)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SimulationError, ProtocolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface: analyze, sweep, and evolve subcommands.

All three read a key=value config file. ``analyze`` reports equilibria
and the payment regime, ``sweep`` emits closed-form equilibrium
components across a parameter range, and ``evolve`` runs the
agent-based simulation. CSV goes to stdout or ``--out``; ``--plot``
additionally renders a figure next to the delimited output.

Exit codes: 0 success (evolve: converged), 1 config error, 2 evolve hit
the round cap without converging.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from . import equilibrium as eq
from .config import RunConfig, parse_config
from .dynamics import FixedPayment, evolve
from .errors import NoValidEquilibrium, ParseError, RepGameError, ValidationError
from .game import (
    GameParams,
    GameVariant,
    PopulationCounts,
    Strategy,
    validate_params,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_CONVERGENCE = 2


def _fmt(x: float) -> str:
    """12 significant digits, '.' decimal separator (bit-stable diffs)."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def _write(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _analysis_counts(config: RunConfig) -> PopulationCounts:
    from .dynamics import _largest_remainder_counts

    c = _largest_remainder_counts(config.init, config.params.n)
    return PopulationCounts(int(c[0]), int(c[1]), int(c[2]))


def cmd_analyze(config: RunConfig, out_path: str | None, csv: bool) -> int:
    counts = _analysis_counts(config)
    pure = eq.pure_nash(config.variant, config.params, counts)
    try:
        mixed = eq.mixed_closed_form(config.variant, config.params)
    except NoValidEquilibrium:
        mixed = []
    report = eq.regime(config.variant, config.params, counts)

    if csv:
        lines = ["kind,x_r,x_c,x_d,valid,note"]
        for m in mixed:
            lines.append(
                ",".join(
                    [
                        "mixed",
                        _fmt(m.state.x_r),
                        _fmt(m.state.x_c),
                        _fmt(m.state.x_d),
                        _fmt(m.valid),
                        m.validity_note.replace(",", ";"),
                    ]
                )
            )
        _write("\n".join(lines) + "\n", out_path)
        return EXIT_OK

    lines = [
        f"game variant: {config.variant.name}",
        f"params: d={_fmt(config.params.d)} a={_fmt(config.params.a)} "
        f"alpha={_fmt(config.params.alpha)} beta={_fmt(config.params.beta)} "
        f"p={_fmt(config.params.p)} N={config.params.n}",
        f"counts: n_r={counts.n_r:g} n_c={counts.n_c:g} n_d={counts.n_d:g}",
        "",
        "pure symmetric profiles:",
    ]
    for r in pure:
        s = r.profile[0].name
        lines.append(
            f"  ({s},{s}): nash={str(r.is_nash).lower()} "
            f"strict={str(r.is_strict).lower()} ess={str(r.is_ess).lower()}"
        )
    lines.append("")
    lines.append("mixed equilibria (closed form):")
    if not mixed:
        lines.append("  none")
    for m in mixed:
        lines.append(
            f"  x_r={_fmt(m.state.x_r)} x_c={_fmt(m.state.x_c)} "
            f"x_d={_fmt(m.state.x_d)} valid={str(m.valid).lower()} [{m.validity_note}]"
        )
    lines.append("")
    lines.append(f"regime: {report.regime.value}")
    lines.append(f"  condition: {report.triggered_condition}")
    if report.drift_note:
        lines.append(f"  drift: {report.drift_note}")
    _write("\n".join(lines) + "\n", out_path)
    return EXIT_OK


def _sweep_rows(config: RunConfig) -> list[dict]:
    lo, hi, steps = config.sweep_from, config.sweep_to, config.sweep_steps
    rows = []
    for k in range(steps):
        value = lo + (hi - lo) * k / (steps - 1)
        params = replace(config.params, **{config.sweep_param: value})
        row = {"param_value": value, "x_r": math.nan, "x_c": math.nan,
               "x_d": math.nan, "valid": False}
        try:
            validate_params(params)
            candidates = eq.mixed_closed_form(config.variant, params)
        except RepGameError:
            rows.append(row)
            continue
        full = next(
            (m for m in candidates if m.validity_note.startswith("full support")),
            candidates[0],
        )
        row.update(
            x_r=full.state.x_r, x_c=full.state.x_c, x_d=full.state.x_d,
            valid=full.valid,
        )
        rows.append(row)
    return rows


def cmd_sweep(config: RunConfig, out_path: str | None, plot_path: str | None) -> int:
    if config.sweep_param is None:
        raise ValidationError("sweep_param", "sweep block required for the sweep command")
    rows = _sweep_rows(config)
    lines = ["param_value,x_r,x_c,x_d,valid"]
    for r in rows:
        lines.append(
            ",".join(_fmt(r[k]) for k in ("param_value", "x_r", "x_c", "x_d", "valid"))
        )
    _write("\n".join(lines) + "\n", out_path)
    if plot_path:
        from .plots import plot_sweep

        plot_sweep(rows, config.sweep_param, plot_path)
    return EXIT_OK


def cmd_evolve(
    config: RunConfig,
    out_path: str | None,
    plot_path: str | None,
    seed: int | None = None,
) -> int:
    traj = evolve(config.evolve_config(seed=seed))
    rows = []
    for rec in traj.records:
        rows.append(
            {
                "round": rec.round,
                "x_r": rec.state.x_r,
                "x_c": rec.state.x_c,
                "x_d": rec.state.x_d,
                "p": rec.payment,
                "pr_hat": rec.realized.p_r,
                "pc_hat": rec.realized.p_c,
                "pd_hat": rec.realized.p_d,
                "pool_burned": rec.pool_burned,
            }
        )
    lines = ["round,x_r,x_c,x_d,p,pr_hat,pc_hat,pd_hat,pool_burned"]
    for r in rows:
        lines.append(
            ",".join(
                [str(r["round"])]
                + [_fmt(r[k]) for k in ("x_r", "x_c", "x_d", "p", "pr_hat",
                                        "pc_hat", "pd_hat")]
                + [_fmt(r["pool_burned"])]
            )
        )
    _write("\n".join(lines) + "\n", out_path)
    if plot_path:
        from .plots import plot_trajectory

        plot_trajectory(rows, plot_path)
    return EXIT_OK if traj.terminal == "Converged" else EXIT_NO_CONVERGENCE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repgame",
        description="Reputation-game equilibria and evolutionary dynamics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("analyze", "pure/mixed equilibria and payment regime"),
        ("sweep", "closed-form equilibrium components over a parameter range"),
        ("evolve", "agent-based evolution, one CSV row per round"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="path to key=value config file")
        cmd.add_argument("--out", help="write output here instead of stdout")
        cmd.add_argument("--plot", help="also render a figure to this path")
        if name == "analyze":
            cmd.add_argument("--csv", action="store_true",
                             help="machine-readable CSV instead of the text report")
        if name == "evolve":
            cmd.add_argument("--seed", type=int, help="override the config seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            config = parse_config(fh.read())
        if args.command == "analyze":
            return cmd_analyze(config, args.out, args.csv)
        if args.command == "sweep":
            return cmd_sweep(config, args.out, args.plot)
        return cmd_evolve(config, args.out, args.plot, seed=args.seed)
    except (ParseError, ValidationError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

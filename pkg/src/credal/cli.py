"""Command line interface.

Subcommands::

    credal binomial-test   head-count test: reference table, ratio curve, density
    credal converge        higher-order tower spread per order
    credal urn             exact urn posterior predictive after a draw history
    credal dilation        conditional spread of the coin-matching example
    credal tvu-density     uniformity density of the head-count family

Every subcommand accepts ``--seed`` (falling back to the ``CREDAL_SEED``
environment variable, then 0), ``--threads``, ``--out`` and ``--format
{csv,json}``, and finishes by writing a ``manifest.json`` recording the
command, flags, seed, package version, duration, and a SHA-256 digest
of every file it wrote.  With a fixed seed and fixed flags all data
outputs are byte-identical across runs and thread counts.

Exit codes: 0 success; 2 usage or validation error; 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import CredalError
from .inference import UrnState, binomial_test, urn_update
from .io import format_float, format_value, sha256_file, write_csv, write_json
from .svg import write_line_chart
from .tower import TowerConfig, build_tower, convergence_stats, dilation_profile
from .tvuniform import _density_rows, binomial_family, build_measure, coin_match_family

__all__ = ["main"]

_ORDINALS = [
    "first", "second", "third", "fourth", "fifth",
    "sixth", "seventh", "eighth", "ninth", "tenth",
]

# The concentration band used by the dilation summary.
_BAND = (0.25, 0.75)


def _order_name(i: int) -> str:
    return f"{_ORDINALS[i - 1]}order" if i <= len(_ORDINALS) else f"order{i}"


@dataclass
class RunManifest:
    command: str
    flags: dict
    seed: int
    threads: int
    version: str
    duration_s: float
    outputs: dict


class _Run:
    """Collects output files and writes the manifest at the end."""

    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.out = Path(args.out)
        self.t0 = time.perf_counter()
        self.files: list[Path] = []

    def record(self, path: Path) -> Path:
        self.files.append(Path(path))
        return path

    def csv(self, name: str, header, rows) -> Path:
        return self.record(write_csv(self.out / name, header, rows))

    def json(self, name: str, payload) -> Path:
        return self.record(write_json(self.out / name, payload))

    def finish(self) -> None:
        skip = {"func", "out", "command"}
        flags = {
            k: (str(v) if isinstance(v, Path) else v)
            for k, v in vars(self.args).items()
            if k not in skip and not callable(v)
        }
        manifest = RunManifest(
            command=self.command,
            flags=flags,
            seed=self.args.seed,
            threads=self.args.threads,
            version=__version__,
            duration_s=time.perf_counter() - self.t0,
            outputs={p.name: sha256_file(p) for p in sorted(self.files)},
        )
        write_json(self.out / "manifest.json", asdict(manifest))


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("CREDAL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CredalError(f"CREDAL_SEED must be an integer, got {env!r}") from None
    return 0


def _common_flags(sub: argparse.ArgumentParser, svg: bool = True) -> None:
    sub.add_argument("--seed", type=int, default=None,
                     help="RNG seed (default: $CREDAL_SEED or 0)")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads; never changes results (default 1)")
    sub.add_argument("--out", default=".", help="output directory (default .)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="data file format (default csv)")
    if svg:
        sub.add_argument("--svg", action="store_true", help="also write SVG charts")


# ---------------------------------------------------------------------------
# binomial-test
# ---------------------------------------------------------------------------


def _cmd_binomial_test(args) -> int:
    run = _Run(args, "binomial-test")
    report = binomial_test(
        args.n, args.k, resolution=args.resolution, grid_step=args.grid_step
    )
    if args.format == "json":
        run.json("report.json", report.to_payload())
    else:
        run.csv("reference.csv", ["heads", "prob"],
                [(i, v) for i, v in enumerate(report.reference)])
        run.csv("hocs.csv", ["param", "ratio"],
                zip(report.grid, report.ratios))
        run.csv("density.csv", ["param", "density"],
                zip(report.grid, report.density))
    if getattr(args, "svg", False):
        run.record(write_line_chart(
            run.out / "hocs.svg", report.grid, {"ratio": report.ratios},
            title=f"evidence ratio, {args.k} of {args.n} heads",
            xlabel="null bias p", ylabel="ratio"))
        run.record(write_line_chart(
            run.out / "density.svg", report.grid, {"density": report.density},
            title=f"uniformity density, n={args.n}",
            xlabel="bias p", ylabel="density"))
    run.finish()
    print(f"n={args.n} k={args.k} Z={format_float(report.z)}")
    print(f"reference[{args.k}]={format_float(report.observed_reference())}")
    print(f"ratio[p=0]={format_float(report.ratios[0])} "
          f"ratio[p=1]={format_float(report.ratios[-1])}")
    return 0


# ---------------------------------------------------------------------------
# converge
# ---------------------------------------------------------------------------


def _parse_events(text: str, n: int) -> list[int]:
    try:
        ks = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise CredalError(f"--events must be comma-separated integers, got {text!r}")
    if not ks or any(not 0 <= k <= n for k in ks):
        raise CredalError(f"--events entries must lie in 0..{n}")
    return ks


def _cmd_converge(args) -> int:
    run = _Run(args, "converge")
    events = _parse_events(args.events, args.n)
    family = binomial_family(args.n)
    measure = build_measure(family, resolution=args.resolution)
    cfg = TowerConfig(
        base=measure,
        base_samples=args.base_samples,
        order_samples=args.order_samples,
        max_order=args.max_order,
        seed=args.seed,
        base_mode=args.base_mode,
        base_atoms=args.base_atoms,
    )
    tower = build_tower(cfg, n_jobs=args.threads)

    single = len(events) == 1
    payload = {"n": args.n, "events": {}}
    for k in events:
        event = family.space.event([k])
        reference = measure.event_prob(event)
        stats = convergence_stats(tower, event, reference=reference)
        sorted_cols = [np.sort(s.values) for s in stats]
        depth = max(c.size for c in sorted_cols)
        header = ["functionidx"] + [_order_name(s.order) for s in stats]
        rows = [
            [j] + [format_float(c[j]) if j < c.size else "" for c in sorted_cols]
            for j in range(depth)
        ]
        stat_header = ["order", "mean", "sd", "max_dev_from_reference"]
        stat_rows = [(s.order, s.mean, s.sd, s.max_dev_from_reference) for s in stats]
        suffix = "" if single else f"_heads{k}"
        if args.format == "json":
            payload["events"][str(k)] = {
                "reference": reference,
                "stats": [
                    {"order": s.order, "n": s.n, "mean": s.mean, "sd": s.sd,
                     "max_dev_from_reference": s.max_dev_from_reference}
                    for s in stats
                ],
                "sorted_values": {str(s.order): c.tolist()
                                  for s, c in zip(stats, sorted_cols)},
            }
        else:
            run.csv(f"table{suffix}.csv", header, rows)
            run.csv(f"stats{suffix}.csv", stat_header, stat_rows)
        if getattr(args, "svg", False):
            run.record(write_line_chart(
                run.out / f"table{suffix}.svg",
                np.arange(depth),
                {_order_name(s.order): np.pad(c, (0, depth - c.size),
                                              constant_values=np.nan)
                 for s, c in zip(stats, sorted_cols)},
                title=f"implied probability of {k} heads by order",
                xlabel="sorted particle index", ylabel="implied probability"))
        print(f"event: {k} heads of {args.n}  reference={format_float(reference)}")
        for s in stats:
            print(f"  order {s.order}: n={s.n} mean={format_float(s.mean)} "
                  f"sd={format_float(s.sd)} "
                  f"max_dev={format_float(s.max_dev_from_reference)}")
    if args.format == "json":
        run.json("converge.json", payload)
    run.finish()
    return 0


# ---------------------------------------------------------------------------
# urn
# ---------------------------------------------------------------------------


def _cmd_urn(args) -> int:
    run = _Run(args, "urn")
    colors = tuple(c for c in args.colors.split(",") if c)
    history = tuple(c for c in args.history.split(",") if c)
    state = UrnState(colors=colors, ball_total=args.balls, history=history)
    predictive = urn_update(state, mode=args.mode)
    printable = {c: format_value(v) for c, v in predictive.items()}
    if args.format == "json":
        run.json("urn.json", {
            "colors": list(colors), "ball_total": args.balls,
            "history": list(history), "mode": args.mode,
            "predictive": printable,
        })
    else:
        run.csv("urn.csv", ["color", "prob"],
                [(c, v) for c, v in predictive.items()])
    run.finish()
    print(json.dumps(printable, indent=2, sort_keys=False))
    return 0


# ---------------------------------------------------------------------------
# dilation
# ---------------------------------------------------------------------------


def _cmd_dilation(args) -> int:
    run = _Run(args, "dilation")
    family = coin_match_family()
    space = family.space
    pre = space.event(["H1H2", "H1T2"])      # coin 1 came up heads
    match = space.event(["H1H2", "T1T2"])    # the two coins agree
    cfg = TowerConfig(
        base=family,
        base_samples=args.grid,
        order_samples=args.samples,
        max_order=args.orders,
        seed=args.seed,
        base_mode=args.base_mode,
    )
    tower = build_tower(cfg, n_jobs=args.threads)
    profile = dilation_profile(tower, pre, match)

    lo, hi = _BAND
    summary_header = ["order", "n", "n_excluded", "mean", "sd", "weighted_mean",
                      "vmin", "vmax", "band_fraction"]
    summary_rows = [
        (o.order, o.n, o.n_excluded, o.mean, o.sd, o.weighted_mean,
         o.vmin, o.vmax, o.band_fraction(lo, hi))
        for o in profile.orders
    ]
    if args.format == "json":
        run.json("dilation.json", {
            "pre_event": list(profile.pre_event.labels),
            "query_event": list(profile.query_event.labels),
            "n_dropped": profile.n_dropped,
            "band": [lo, hi],
            "orders": [
                {"order": o.order, "n": o.n, "n_excluded": o.n_excluded,
                 "mean": o.mean, "sd": o.sd, "weighted_mean": o.weighted_mean,
                 "vmin": o.vmin, "vmax": o.vmax,
                 "band_fraction": o.band_fraction(lo, hi),
                 "values": o.values.tolist()}
                for o in profile.orders
            ],
        })
    else:
        run.csv("profile.csv", ["order", "particle", "value"],
                ((o.order, j, v) for o in profile.orders
                 for j, v in enumerate(o.values)))
        run.csv("summary.csv", summary_header, summary_rows)
    if getattr(args, "svg", False):
        depth = max(o.n for o in profile.orders)
        run.record(write_line_chart(
            run.out / "dilation.svg",
            np.arange(depth),
            {_order_name(o.order): np.pad(np.sort(o.values),
                                          (0, depth - o.n),
                                          constant_values=np.nan)
             for o in profile.orders},
            title="conditional match probability by order",
            xlabel="sorted particle index", ylabel="P(match | coin 1 heads)"))
    run.finish()
    o1 = profile.order(1)
    print(f"order 1 range: [{format_float(o1.vmin)}, {format_float(o1.vmax)}] "
          f"(dropped {profile.n_dropped})")
    for o in profile.orders:
        print(f"  order {o.order}: weighted_mean={format_float(o.weighted_mean)} "
              f"sd={format_float(o.sd)} "
              f"band({lo},{hi})={format_float(o.band_fraction(lo, hi))}")
    return 0


# ---------------------------------------------------------------------------
# tvu-density
# ---------------------------------------------------------------------------


def _cmd_tvu_density(args) -> int:
    run = _Run(args, "tvu-density")
    family = binomial_family(args.n)
    measure = build_measure(family, resolution=args.resolution)
    grid = np.linspace(0.0, 1.0, args.points)
    density = _density_rows(family, grid[:, None])
    if args.format == "json":
        run.json("density.json", {
            "n": args.n, "z": measure.z,
            "param": grid.tolist(), "density": density.tolist(),
        })
    else:
        run.csv("density.csv", ["param", "density"], zip(grid, density))
    if getattr(args, "svg", False):
        run.record(write_line_chart(
            run.out / "density.svg", grid, {"density": density},
            title=f"uniformity density, n={args.n}",
            xlabel="bias p", ylabel="density"))
    run.finish()
    print(f"n={args.n} Z={format_float(measure.z)}")
    return 0


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="credal",
        description="Credal-set calculations: uniform measures over "
                    "parametrized families, higher-order towers, exact urn "
                    "updating, and evidence-ratio tests.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("binomial-test",
                        help="head-count test for n tosses, k heads")
    p.add_argument("--n", type=int, default=10, help="number of tosses")
    p.add_argument("--k", type=int, default=1, help="observed head count")
    p.add_argument("--resolution", type=int, default=24,
                   help="starting quadrature panels (default 24)")
    p.add_argument("--grid-step", type=float, default=0.001,
                   help="null-bias grid step (default 0.001)")
    _common_flags(p)
    p.set_defaults(func=_cmd_binomial_test)

    p = subs.add_parser("converge", help="per-order spread of a tower")
    p.add_argument("--n", type=int, default=10, help="number of tosses")
    p.add_argument("--events", default="1",
                   help="comma-separated head counts (default '1')")
    p.add_argument("--base-samples", type=int, default=1601)
    p.add_argument("--order-samples", type=int, default=1601)
    p.add_argument("--max-order", type=int, default=5)
    p.add_argument("--base-mode", choices=("tvu", "grid"), default="tvu",
                   help="level-1 source: density sampling or uniform grid")
    p.add_argument("--base-atoms", type=int, default=None,
                   help="atoms for density sampling (default 1601)")
    p.add_argument("--resolution", type=int, default=24)
    _common_flags(p)
    p.set_defaults(func=_cmd_converge)

    p = subs.add_parser("urn", help="exact urn posterior predictive")
    p.add_argument("--history", default="",
                   help="comma-separated colors drawn so far")
    p.add_argument("--colors", default="red,yellow,blue")
    p.add_argument("--balls", type=int, default=90, help="total balls (default 90)")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    _common_flags(p, svg=False)
    p.set_defaults(func=_cmd_urn)

    p = subs.add_parser("dilation",
                        help="conditional spread of the coin-matching example")
    p.add_argument("--grid", type=int, default=101,
                   help="level-1 grid size (default 101)")
    p.add_argument("--samples", type=int, default=1000,
                   help="particles per higher order (default 1000)")
    p.add_argument("--orders", type=int, default=5)
    p.add_argument("--base-mode", choices=("grid", "tvu"), default="grid")
    _common_flags(p)
    p.set_defaults(func=_cmd_dilation)

    p = subs.add_parser("tvu-density", help="uniformity density table")
    p.add_argument("--n", type=int, default=10, help="number of tosses")
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--resolution", type=int, default=24)
    _common_flags(p)
    p.set_defaults(func=_cmd_tvu_density)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors with exit 2
        return int(exc.code or 0)
    try:
        args.seed = _resolve_seed(args.seed)
        return args.func(args)
    except CredalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

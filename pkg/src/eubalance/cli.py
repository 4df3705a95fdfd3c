"""Command-line interface: balance reports, curve fits, stability analysis.

Exit codes: 0 success, 2 usage or configuration error, 3 data validation
failure, 4 solver failure, 5 no curve intersection in range. Output files
are written in both comma-separated and aligned-text form; runs with the
same inputs produce byte-identical files.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import accounting, dataset, expfit, reports, stability

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_SOLVER = 4
EXIT_NO_INTERSECTION = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eubalance",
        description="EU balance accounting, exponential fits, and "
                    "surplus-deficit stability analysis")
    parser.add_argument("--data-dir", type=Path, default=None,
                        help="directory with gdp.csv, cab_pct.csv, ggb.csv "
                             "(default: bundled dataset)")
    parser.add_argument("--regions", type=Path, default=None,
                        help="JSON file mapping region names to country "
                             "codes (default: bundled regions)")
    parser.add_argument("--out", type=Path, default=Path("."),
                        help="output directory (default: current directory)")
    parser.add_argument("--format", choices=("csv", "text"), default="text",
                        help="rendering echoed to stdout (files always get "
                             "both forms)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="emit one of the tables 1-12")
    p_report.add_argument("--table", type=int, choices=range(1, 13),
                          required=True, metavar="N",
                          help="table number, 1-12")

    p_fit = sub.add_parser("fit", help="fit one cumulative balance series")
    p_fit.add_argument("--series", choices=sorted(reports.FIT_SERIES),
                       required=True)
    p_fit.add_argument("--level", type=float, default=0.95,
                       help="confidence level for parameter and prediction "
                            "intervals (default 0.95)")

    p_stab = sub.add_parser("stability",
                            help="gap analysis for one surplus/deficit pair")
    p_stab.add_argument("--scope", choices=sorted(reports.STABILITY_SCOPES),
                        required=True)
    p_stab.add_argument("--band-level", type=float,
                        default=stability.DEFAULT_BAND_LEVEL,
                        help="per-band confidence level (default "
                             f"{stability.DEFAULT_BAND_LEVEL})")
    return parser


def _check_config(parser: argparse.ArgumentParser,
                  args: argparse.Namespace) -> None:
    if args.data_dir is not None:
        for name in ("gdp.csv", "cab_pct.csv", "ggb.csv"):
            if not (args.data_dir / name).is_file():
                parser.error(f"missing data file {args.data_dir / name}")
    if args.regions is not None and not args.regions.is_file():
        parser.error(f"regions file {args.regions} does not exist")
    level = getattr(args, "level", None)
    if level is not None and not 0.0 < level < 1.0:
        parser.error(f"--level must lie in (0, 1), got {level}")
    band = getattr(args, "band_level", None)
    if band is not None and not 0.0 < band < 1.0:
        parser.error(f"--band-level must lie in (0, 1), got {band}")


def _load(args: argparse.Namespace):
    if args.data_dir is None:
        ds = dataset.load_bundled()
    else:
        ds = dataset.load_files(args.data_dir / "gdp.csv",
                                args.data_dir / "cab_pct.csv",
                                args.data_dir / "ggb.csv")
    if args.regions is None:
        regions = accounting.bundled_regions()
    else:
        regions = accounting.load_regions(args.regions)
    return ds, regions


def _write(out_dir: Path, stem: str, table: reports.Table,
           text_form: bool = True) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    csv_path = out_dir / f"{stem}.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(reports.to_csv(table))
    paths.append(csv_path)
    if text_form:
        txt_path = out_dir / f"{stem}.txt"
        with open(txt_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(reports.to_text(table))
        paths.append(txt_path)
    return paths


def _echo(args: argparse.Namespace, table: reports.Table) -> None:
    if args.format == "csv":
        sys.stdout.write(reports.to_csv(table))
        return
    text = reports.to_text(table)
    if sys.stdout.isatty() and not os.environ.get("NO_COLOR"):
        first, rest = text.split("\n", 1)
        text = f"\x1b[1m{first}\x1b[0m\n{rest}"
    sys.stdout.write(text)


def _cmd_report(args: argparse.Namespace) -> int:
    ds, regions = _load(args)
    table = reports.build_table(ds, regions, args.table)
    _write(args.out, f"table_{args.table}", table)
    _echo(args, table)
    return EXIT_OK


def _cmd_fit(args: argparse.Namespace) -> int:
    ds, regions = _load(args)
    points = reports.fit_series_points(ds, regions, args.series)
    model = expfit.fit_exponential(points)
    summary = reports.fit_summary_table(args.series, model, args.level)
    predictions = reports.prediction_table(args.series, model, points,
                                           args.level)
    _write(args.out, f"fit_{args.series}_summary", summary)
    _write(args.out, f"fit_{args.series}_predictions", predictions)
    _echo(args, summary)
    _echo(args, predictions)
    return EXIT_OK


def _cmd_stability(args: argparse.Namespace) -> int:
    ds, regions = _load(args)
    surplus_key, deficit_key = reports.STABILITY_SCOPES[args.scope]
    surplus_points = reports.fit_series_points(ds, regions, surplus_key)
    deficit_points = reports.fit_series_points(ds, regions, deficit_key)
    analysis = stability.GapAnalysis(
        surplus_model=expfit.fit_exponential(surplus_points),
        deficit_model=expfit.fit_exponential(deficit_points))
    interval = stability.uncertainty_interval(analysis, args.band_level)
    latest_t = max(t for t, _ in surplus_points)
    table = reports.stability_table(args.scope, analysis, interval, latest_t)
    plot = reports.plot_data_table(args.scope, analysis, args.band_level)
    _write(args.out, f"stability_{args.scope}", table)
    _write(args.out, f"plot_{args.scope}", plot, text_form=False)
    _echo(args, table)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _check_config(parser, args)
    handlers = {"report": _cmd_report, "fit": _cmd_fit,
                "stability": _cmd_stability}
    try:
        return handlers[args.command](args)
    except (expfit.NoConvergence, expfit.SingularJacobian) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (stability.NoIntersection, stability.RootNotBracketed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_INTERSECTION
    except (dataset.DatasetError, accounting.AccountingError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
geomorph command line

    python main.py select german_present
    python main.py train german_full --eta 0.1 --error-driven
    python main.py compose german_plurals --learn --seed 3
    python main.py rotate nuer --runs 100 --seed 7 --format json --out nuer.json
    python main.py report nuer.json --format xlsx --out nuer.xlsx
    python main.py serve
"""
import argparse
import logging
import sys
from dataclasses import fields
from pathlib import Path

from commands import COMMANDS, CommandOptions, cmd_report
from composition import AngleModel
from environment_config import get_environment_config
from errors import GeomorphError
from reports import EXIT_INPUT_ERROR, EXIT_OK, export_workbook, to_tsv
from visualizer import ParadigmVisualizer

logger = logging.getLogger(__name__)

FORMATS = ("tsv", "json", "xlsx")


def _add_common(p):
    p.add_argument("fixture", help="paradigm file path or bundled fixture name (unique prefix is enough)")
    p.add_argument("--format", choices=FORMATS, default="tsv")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--plot", help="also write a plotly chart to this .html file")
    p.add_argument("--min-lexemes", type=int, default=3, help="class size threshold for the base configuration")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="geomorph", description="Geometric inflectional morphology")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="smart initialization of B from a paradigm or class inventory")
    _add_common(p)

    p = sub.add_parser("select", help="competition, winners and margins under smart init")
    _add_common(p)

    p = sub.add_parser("train", help="Delta-rule training from smart init")
    _add_common(p)
    p.add_argument("--eta", type=float, default=0.1, help="learning rate")
    p.add_argument("--max-iters", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--error-driven", dest="error_driven", action="store_const", const=True, default=True,
                      help="update only on mispredicted rows (default)")
    mode.add_argument("--all-rows", dest="error_driven", action="store_const", const=False,
                      help="visit every row each step")
    p.add_argument("--trace", help="write per-iteration records as JSON lines")

    p = sub.add_parser("compose", help="stem + affix selection in a feature plane")
    _add_common(p)
    p.add_argument("--learn", action="store_true", help="learn angles even when the file gives them")
    p.add_argument("--stepsize", type=float, default=0.01)
    p.add_argument("--margin", type=float, default=0.05)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--seed", type=int, help="defaults to GEOMORPH_SEED")

    p = sub.add_parser("rotate", help="learn class rotations, or apply the deponent transform")
    _add_common(p)
    p.add_argument("--increment", type=float, default=0.1, help="base rotation angle in radians")
    p.add_argument("--margin-floor", type=float, default=0.02)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--seed", type=int, help="defaults to GEOMORPH_SEED")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("report", help="re-render a saved JSON report")
    p.add_argument("path")
    p.add_argument("--format", choices=FORMATS, default="tsv")
    p.add_argument("--out")
    p.add_argument("--plot")
    p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("serve", help="run the HTTP API with the Flask development server")
    p.add_argument("--port", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def options_from_args(args):
    names = {f.name for f in fields(CommandOptions)}
    return CommandOptions(**{k: v for k, v in vars(args).items() if k in names})


def render(report, fmt, out=None):
    if fmt == "xlsx":
        if not out:
            raise GeomorphError("--format xlsx needs --out <path>")
        export_workbook(report, out)
        return
    text = report.to_json() if fmt == "json" else to_tsv(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("Wrote %s report to %s", fmt, out)
    else:
        sys.stdout.write(text)


def write_plot(report, path):
    viz = ParadigmVisualizer()
    if report.command == "compose":
        table = report.tables["angles"]
        angles = {label: row[0] for label, row in zip(table["row_labels"], table["entries"])}
        cfg = report.config
        model = AngleModel(angles, tuple(cfg["plane"]), list(cfg["stems"]), list(cfg["affixes"]))
        pairs = [(r["stem"], r["selected"]) for r in report.records]
        fig = viz.create_angle_chart(model, pairs, title=f"{report.fixture}: stems, affixes and forms")
    elif report.command == "rotate" and report.records and "class" in report.records[0]:
        fig = viz.create_rotation_summary_chart(report.records, title=f"{report.fixture}: class rotations")
    elif "competition" in report.tables:
        fig = viz.create_competition_heatmap(report.tables["competition"], title=f"{report.fixture}: competition")
    else:
        raise GeomorphError(f"nothing to plot for '{report.command}'")
    viz.save(fig, path)


def serve(port=None):
    from app import app

    app.run(host='0.0.0.0', port=port or get_environment_config().port, debug=False)


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = get_environment_config()
        level = "DEBUG" if args.verbose else config.log_level
        logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(message)s')

        if args.command == "serve":
            serve(args.port)
            return EXIT_OK
        if args.command == "report":
            report = cmd_report(args.path)
        else:
            report = COMMANDS[args.command](options_from_args(args))
        render(report, args.format, args.out)
        if args.plot:
            write_plot(report, args.plot)
    except (GeomorphError, OSError, ValueError) as e:
        # ValueError: unreadable saved report
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if report.exit_code != EXIT_OK:
        logger.info("%s %s finished with status %s", report.command, report.fixture, report.status)
    return report.exit_code


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()

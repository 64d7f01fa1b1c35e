"""Command-line interface.

Exit codes: 0 success, 1 usage error (bad flags, unparseable colors),
2 runtime error (I/O failures, unreadable logs, port already bound).

Environment:
  AFTERIMAGE_OUT_DIR  default output directory for file-writing commands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .colors import Rgb, format_color, parse_color
from .experiment import ExperimentStore, ScoreTable, NEW_FIELD_COLORS, TEST_FIELD_COLORS
from .model import BaselineScheme, StimulusSpec, complementary_baseline, predict
from .reference import CaseEvaluation, evaluate_references, max_component_gap
from .render import BlurSettings, Geometry, encode_png, render_figure

PANEL_LETTERS = ("a", "b", "c", "d")


class CliUsageError(Exception):
    """Raised instead of argparse's SystemExit so main() can return 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CliUsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _fmt_color(c: Rgb) -> str:
    return "(" + ", ".join(_fmt(v) for v in c) + ")"


def _color_arg(text: str) -> Rgb:
    try:
        return parse_color(text)
    except ValueError as exc:
        raise CliUsageError(str(exc)) from exc


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out if args.out is not None else os.environ.get("AFTERIMAGE_OUT_DIR", "."))
    if not out.is_dir():
        if args.no_mkdir:
            raise RuntimeError(f"output directory does not exist: {out}")
        out.mkdir(parents=True, exist_ok=True)
    return out


def _color_token(c: Rgb) -> str:
    from .colors import color_name

    name = color_name(c)
    return name if name else "_".join(_fmt(v) for v in c)


# -- predict --------------------------------------------------------------


def cmd_predict(args: argparse.Namespace) -> int:
    spec = StimulusSpec(c_ot=args.test, c_oi=args.inducing, c_n=args.new)
    prediction = predict(spec)
    p = prediction.params
    if args.json:
        payload = {
            "c_ot": spec.c_ot.components(),
            "c_oi": spec.c_oi.components(),
            "c_n": spec.c_n.components(),
            "params": {
                "alpha": float(p.alpha),
                "beta_t": float(p.beta_t),
                "beta_i": float(p.beta_i),
                "provenance": p.provenance.value,
            },
            "c_mt": prediction.c_mt.components(),
            "c_at": prediction.c_at.components(),
            "c_ai": prediction.c_ai.components(),
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"stimulus: test {format_color(spec.c_ot)}, inducing {format_color(spec.c_oi)}, "
          f"new {format_color(spec.c_n)}")
    print(f"params:   alpha={_fmt(float(p.alpha))} beta_t={_fmt(float(p.beta_t))} "
          f"beta_i={_fmt(float(p.beta_i))} ({p.provenance.value})")
    print(f"c_mt:     {_fmt_color(prediction.c_mt)}")
    print(f"c_at:     {_fmt_color(prediction.c_at)}")
    print(f"c_ai:     {_fmt_color(prediction.c_ai)}")
    return 0


# -- figure ---------------------------------------------------------------


def _write_panels(out: Path, stem: str, spec: StimulusSpec, scheme: BaselineScheme,
                  geometry: Geometry, blur: BlurSettings) -> list[Path]:
    panels = render_figure(spec, scheme, geometry, blur)
    written = []
    for letter, image in panels.as_dict().items():
        path = out / f"{stem}_{letter}.png"
        path.write_bytes(encode_png(image))
        written.append(path)
    return written


def cmd_figure(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    # Keep the figure's proportions fixed as --size changes resolution.
    geometry = Geometry(
        width=args.size, height=args.size, circle_radius=args.size * (100.0 / 512.0)
    )
    blur = BlurSettings(sigma=args.sigma)
    scheme = BaselineScheme(args.scheme)
    written: list[Path] = []
    if args.all_paper_figures:
        from .reference import reference_cases

        for case in reference_cases():
            written += _write_panels(out, case.case_id, case.spec, scheme, geometry, blur)
    else:
        if args.test is None or args.inducing is None or args.new is None:
            raise CliUsageError("figure requires --test, --inducing and --new "
                                "(or --all-paper-figures)")
        spec = StimulusSpec(c_ot=args.test, c_oi=args.inducing, c_n=args.new)
        stem = args.stem or "-".join(
            _color_token(c) for c in (spec.c_ot, spec.c_oi, spec.c_n)
        )
        written += _write_panels(out, stem, spec, scheme, geometry, blur)
    for path in written:
        print(path)
    return 0


# -- report ---------------------------------------------------------------


def _value_report_lines(evaluations: list[CaseEvaluation]) -> list[str]:
    lines = []
    lines.append("reference values (test-field color):")
    header = f"  {'case':<18} {'published':<22} {'computed':<22} status"
    lines.append(header)
    for ev in evaluations:
        status = "ok" if ev.c_at_reproduced else "MISMATCH"
        lines.append(
            f"  {ev.case.case_id:<18} {_fmt_color(ev.case.published_c_at):<22} "
            f"{_fmt_color(ev.prediction.c_at):<22} {status}"
        )
        if not ev.c_at_reproduced and ev.case.note:
            lines.append(f"      note: {ev.case.note}")
    ai_rows = [ev for ev in evaluations if ev.case.published_c_ai is not None]
    if ai_rows:
        lines.append("")
        lines.append("reference values (inducing-field color):")
        lines.append(f"  {'case':<18} {'published':<22} {'computed':<22} status")
        for ev in ai_rows:
            status = "ok" if ev.c_ai_reproduced else "MISMATCH"
            lines.append(
                f"  {ev.case.case_id:<18} {_fmt_color(ev.case.published_c_ai):<22} "
                f"{_fmt_color(ev.prediction.c_ai):<22} {status}"
            )
    ct_rows = [ev for ev in evaluations if ev.case.published_c_ct is not None]
    if ct_rows:
        lines.append("")
        lines.append("reference values (baseline test-field color, opposite-color scheme):")
        lines.append(f"  {'case':<18} {'published':<22} {'computed':<22} status")
        for ev in ct_rows:
            c_ct, _ = complementary_baseline(ev.case.spec, BaselineScheme.GROUP2)
            gap = max_component_gap(c_ct, ev.case.published_c_ct)
            status = "ok" if gap <= 1e-6 else "MISMATCH"
            lines.append(
                f"  {ev.case.case_id:<18} {_fmt_color(ev.case.published_c_ct):<22} "
                f"{_fmt_color(c_ct):<22} {status}"
            )
    return lines


def _score_report_lines(table: ScoreTable, session_count: int) -> list[str]:
    lines = [f"aggregate scores over {session_count} session(s):"]
    lines.append(f"  {'test color':<12} {'new color':<12} {'S1':>8} {'S2':>8} {'trials':>8}")
    for ot in TEST_FIELD_COLORS:
        for cn in NEW_FIELD_COLORS:
            cell = table.cell(ot.rgb, cn.rgb)
            lines.append(
                f"  {ot.name.lower():<12} {cn.name.lower():<12} "
                f"{cell.s1_total:>8.1f} {cell.s2_total:>8.1f} {cell.completed:>8}"
            )
    return lines


def cmd_report(args: argparse.Namespace) -> int:
    evaluations = evaluate_references()
    if args.json:
        payload: dict = {
            "reference_cases": [
                {
                    "case_id": ev.case.case_id,
                    "published_c_at": ev.case.published_c_at.components(),
                    "computed_c_at": ev.prediction.c_at.components(),
                    "c_at_reproduced": ev.c_at_reproduced,
                    "published_c_ai": (
                        ev.case.published_c_ai.components() if ev.case.published_c_ai else None
                    ),
                    "computed_c_ai": ev.prediction.c_ai.components(),
                    "c_ai_reproduced": ev.c_ai_reproduced,
                    "note": ev.case.note,
                }
                for ev in evaluations
            ]
        }
    else:
        for line in _value_report_lines(evaluations):
            print(line)
    if args.log:
        store = ExperimentStore()
        for log_path in args.log:
            store.load_log(log_path)
        table = store.aggregate_scores()
        count = len(store.sessions())
        if args.json:
            payload["scores"] = {
                "sessions": count,
                "cells": [
                    {
                        "c_ot": ot.components(),
                        "c_n": cn.components(),
                        "s1_total": cell.s1_total,
                        "s2_total": cell.s2_total,
                        "completed": cell.completed,
                    }
                    for (ot, cn), cell in table.cells.items()
                ],
            }
        else:
            print()
            for line in _score_report_lines(table, count):
                print(line)
    if args.json:
        print(json.dumps(payload, indent=2))
    return 0


# -- serve ----------------------------------------------------------------


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    store = ExperimentStore(log_path=args.log)
    static_dir = args.static_dir or os.environ.get("AFTERIMAGE_STATIC_DIR")
    if static_dir is None:
        bundled = Path(__file__).parent / "static"
        if bundled.is_dir():
            static_dir = bundled
    app = create_app(store, static_dir=static_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits nonzero on bind failure
        return 0 if not exc.code else 2
    return 0


# -- parser ---------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="afterimage", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add_color_flags(p: _Parser, required: bool) -> None:
        p.add_argument("--test", type=_color_arg, required=required, default=None,
                       help="old test-field color (name or r,g,b)")
        p.add_argument("--inducing", type=_color_arg, required=required, default=None,
                       help="old inducing-field color (name or r,g,b)")
        p.add_argument("--new", type=_color_arg, required=required, default=None,
                       help="new stimulating color (name or r,g,b)")

    p_predict = sub.add_parser("predict", help="print predicted afterimage colors")
    add_color_flags(p_predict, required=True)
    p_predict.add_argument("--json", action="store_true", help="machine-readable output")
    p_predict.set_defaults(func=cmd_predict)

    p_figure = sub.add_parser("figure", help="render 4-panel comparison figures as PNG")
    add_color_flags(p_figure, required=False)
    p_figure.add_argument("--all-paper-figures", action="store_true",
                          help="render every published reference case")
    p_figure.add_argument("--scheme", choices=["group1", "group2"], default="group2",
                          help="complementary-baseline scheme for panel (c)")
    p_figure.add_argument("--out", default=None, help="output directory "
                          "(default: $AFTERIMAGE_OUT_DIR or .)")
    p_figure.add_argument("--no-mkdir", action="store_true",
                          help="fail instead of creating a missing output directory")
    p_figure.add_argument("--size", type=int, default=512, help="image side in pixels")
    p_figure.add_argument("--sigma", type=float, default=4.0, help="blur sigma in pixels")
    p_figure.add_argument("--stem", default=None, help="output filename stem")
    p_figure.set_defaults(func=cmd_figure)

    p_report = sub.add_parser("report", help="published-value comparison and score tables")
    p_report.add_argument("--log", action="append", default=[],
                          help="event-log file to aggregate (repeatable)")
    p_report.add_argument("--json", action="store_true", help="machine-readable output")
    p_report.set_defaults(func=cmd_report)

    p_serve = sub.add_parser("serve", help="run the experiment HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--log", default="afterimage-events.jsonl",
                         help="append-only event-log file")
    p_serve.add_argument("--static-dir", default=None,
                         help="directory of UI assets to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - runtime failures become exit 2
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

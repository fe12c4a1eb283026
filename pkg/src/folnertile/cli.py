"""Command-line front end.

Every report carries a header with the tool version, the subcommand, the
seed and an echo of the resolved configuration, so that a report alone is
enough to rerun it. Reports are byte-identical across runs with the same
configuration; wall-clock time goes to stderr unless ``--timestamp`` asks
for it to be embedded.

A plain ``key = value`` file passed with ``--config`` supplies defaults for
any subcommand option (dashes or underscores); flags on the command line
win over the file.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .dynamics import (
    BernoulliShift,
    convergence_study,
    doubling_schedule,
    loglog_slope,
    make_action,
    make_observable,
    verify_tiling_property,
)
from .foelner import FamilyError, FolnerSequence, ratio_table, tempelman_constant
from .group import FiniteGroupSet, boundary
from .kernels import BACKEND
from .scales import ScaleFamilyError, parse_scales
from .tiler import DEFAULT_CELL_BUDGET, LADDERS, BandSelectionError, LadderInfeasible, cell_map_rows, \
    run_cascade, state_report
from .vitali import ScaleError, verify_vitali, vitali_cover

OUTPUT_DIR_ENV = "FOLNERTILE_OUTPUT_DIR"
FAMILIES = ("box", "centered")

# options that only steer where/how a report is written; kept out of the echo
_PLUMBING = {"output", "fmt", "timestamp", "cellmap"}


def frac(x: Fraction):
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "float": float(x)}


def read_config(path) -> dict:
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise click.BadParameter(f"line {lineno}: expected key = value", param_hint="--config")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _seq(family: str, dim: int) -> FolnerSequence:
    return FolnerSequence.named(family, dim)


def _default_C(seq: FolnerSequence, N: int = 64) -> int:
    """Analytic constant 2^d for boxes, otherwise the prefix-N evidence."""
    if seq.is_box_family:
        return 2 ** seq.dim
    return tempelman_constant(seq, N)


class Report:
    """Collects one run's output and writes it once at the end."""

    def __init__(self, ctx: click.Context, fmt: str):
        self.ctx = ctx
        self.fmt = fmt
        self.started = time.perf_counter()
        self.command = ctx.info_name
        self.config = {k: v for k, v in sorted(ctx.params.items()) if k not in _PLUMBING}
        self.seed = ctx.params.get("seed", 0)

    def header(self) -> dict:
        head = {
            "tool": "folnertile",
            "version": __version__,
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
        }
        if self.ctx.params.get("timestamp"):
            head["wall_clock"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return head

    def render_json(self, body: dict) -> str:
        doc = dict(self.header())
        doc.update(body)
        return json.dumps(doc, indent=2) + "\n"

    def render_csv(self, columns, rows, trailer=()) -> str:
        buf = io.StringIO()
        for k, v in self.header().items():
            if k == "config":
                v = " ".join(f"{a}={json.dumps(b)}" for a, b in v.items())
            buf.write(f"# {k}: {v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        for line in trailer:
            buf.write(f"# {line}\n")
        return buf.getvalue()

    def emit(self, text: str):
        path = self.ctx.params.get("output")
        if path is None and os.environ.get(OUTPUT_DIR_ENV):
            path = Path(os.environ[OUTPUT_DIR_ENV]) / f"{self.command}.{self.fmt}"
        if path is None:
            click.echo(text, nl=False)
        else:
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        click.echo(f"[{self.command}] {time.perf_counter() - self.started:.2f}s (backend {BACKEND})", err=True)


def report_options(formats=("json",), default=None):
    """--seed, --format, --output, --timestamp."""
    def deco(fn):
        fn = click.option("--timestamp", is_flag=True, help="Embed the wall-clock time (breaks byte-identity).")(fn)
        fn = click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path),
                          help=f"Report path (default: stdout, or ${OUTPUT_DIR_ENV}/<command>.<format>).")(fn)
        fn = click.option("--format", "fmt", type=click.Choice(formats), default=default or formats[0],
                          show_default=True)(fn)
        fn = click.option("--seed", type=int, default=0, show_default=True, help="Root seed, echoed in the report.")(fn)
        return fn
    return deco


def group_options(fn):
    fn = click.option("--family", type=click.Choice(FAMILIES), default="box", show_default=True,
                      help="Følner family: [0,n)^d boxes or centred boxes.")(fn)
    fn = click.option("--dim", "-d", type=click.IntRange(1, 6), default=1, show_default=True)(fn)
    return fn


@click.group()
@click.version_option(__version__, prog_name="folnertile")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Plain key = value file with option defaults; flags override it.")
@click.pass_context
def main(ctx, config_path):
    """Følner sets, Vitali coverings and tilings of Z^d, with exact certificates."""
    if config_path:
        cfg = read_config(config_path)
        known = set()
        default_map = {}
        for name, cmd in main.commands.items():
            params = {p.name for p in cmd.params}
            known |= params
            default_map[name] = {k: v for k, v in cfg.items() if k in params}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise click.BadParameter(f"unknown key(s): {', '.join(unknown)}", param_hint="--config")
        ctx.default_map = default_map


@main.command()
@group_options
@click.option("--N", "N", type=click.IntRange(min=1), default=64, show_default=True, help="Prefix length.")
@report_options(("csv", "json"))
@click.pass_context
def tempelman(ctx, dim, family, N, seed, fmt, output, timestamp):
    """Tempelman and tempered ratio table for the prefix F_1..F_N."""
    seq = _seq(family, dim)
    t, s, rows = ratio_table(seq, N)
    rep = Report(ctx, fmt)
    ok = t.analytic_constant is None or t.sup_ratio <= t.analytic_constant
    summary = {
        "least_integer_C": t.least_integer_C,
        "sup_ratio": frac(t.sup_ratio),
        "tempered_least_integer_C": s.least_integer_C,
        "tempered_sup_ratio": frac(s.sup_ratio),
        "analytic_constant": t.analytic_constant,
        "label": t.label,
        "within_analytic_bound": ok,
    }
    columns = ["n", "|F_n|", "tempelman_ratio_num", "tempelman_ratio_den", "tempered_ratio_num", "tempered_ratio_den"]
    if fmt == "csv":
        trailer = [f"{k}: {json.dumps(v)}" for k, v in summary.items()]
        rep.emit(rep.render_csv(columns, rows, trailer))
    else:
        rep.emit(rep.render_json({"rows": [dict(zip(columns, r)) for r in rows], "summary": summary}))
    ctx.exit(0 if ok else 1)


def _load_json(path, what):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.BadParameter(f"cannot read {what}: {exc}", param_hint="--instance")


def _point_list(raw, key, dim=None):
    if not isinstance(raw, list) or not all(isinstance(p, list) and p and all(type(c) is int for c in p)
                                            for p in raw):
        raise click.BadParameter(f"'{key}' must be a list of integer coordinate lists", param_hint="--instance")
    dims = {len(p) for p in raw}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise click.BadParameter(f"'{key}' mixes dimensions {sorted(dims)}", param_hint="--instance")
    return [tuple(p) for p in raw]


@main.command(name="boundary")
@click.option("--instance", type=click.Path(exists=True, dir_okay=False), required=True,
              help='JSON {"R": [[ints]], "S": [[ints]]}.')
@report_options(("json", "csv"))
@click.pass_context
def boundary_cmd(ctx, instance, seed, fmt, output, timestamp):
    """R-boundary of S: points s with R*s meeting both S and its complement."""
    doc = _load_json(instance, "instance")
    if not isinstance(doc, dict) or set(doc) != {"R", "S"}:
        raise click.BadParameter("instance must have exactly the keys 'R' and 'S'", param_hint="--instance")
    R = _point_list(doc["R"], "R")
    if not R:
        raise click.BadParameter("'R' must be nonempty", param_hint="--instance")
    S = _point_list(doc["S"], "S", len(R[0]))
    d = len(R[0])
    B = boundary(FiniteGroupSet(R, dim=d), FiniteGroupSet(S, dim=d))
    rep = Report(ctx, fmt)
    rep.config["instance_R"] = sorted(R)
    rep.config["instance_S"] = sorted(S)
    pts = [list(p) for p in B.array.tolist()]
    if fmt == "csv":
        cols = [f"x{i}" for i in range(d)]
        rep.emit(rep.render_csv(cols, pts, [f"size: {len(B)}"]))
    else:
        rep.emit(rep.render_json({"size": len(B), "boundary": pts}))


@main.command()
@click.option("--instance", type=click.Path(exists=True, dir_okay=False), required=True,
              help='JSON {"points": [[ints]], "scales": [int]}.')
@click.option("--family", type=click.Choice(FAMILIES), default="box", show_default=True)
@click.option("--C", "C", type=click.IntRange(min=1), default=None, help="Tempelman integer (default 2^d for boxes).")
@report_options(("json", "csv"))
@click.pass_context
def vitali(ctx, instance, family, C, seed, fmt, output, timestamp):
    """Greedy Vitali covering of an instance, checked by verify_vitali."""
    doc = _load_json(instance, "instance")
    if not isinstance(doc, dict) or not {"points", "scales"} <= set(doc):
        raise click.BadParameter("instance needs 'points' and 'scales'", param_hint="--instance")
    pts = _point_list(doc["points"], "points")
    scales = doc["scales"]
    if not pts:
        raise click.BadParameter("'points' must be nonempty", param_hint="--instance")
    if not isinstance(scales, list) or not all(type(t) is int for t in scales):
        raise click.BadParameter("'scales' must be a list of integers", param_hint="--instance")
    if len(scales) != len(pts):
        raise click.BadParameter(f"{len(pts)} points but {len(scales)} scales", param_hint="--instance")
    if len(set(pts)) != len(pts):
        raise click.BadParameter("'points' has duplicates", param_hint="--instance")
    d = len(pts[0])
    seq = _seq(family, d)
    if C is None:
        C = _default_C(seq)
    table = dict(zip(pts, scales))
    S = FiniteGroupSet(pts, dim=d)
    try:
        res = vitali_cover(S, table, seq, C)
    except (ScaleError, FamilyError) as exc:
        raise click.BadParameter(str(exc), param_hint="--instance")
    verdict = verify_vitali(res, S, table, C, seq)
    rep = Report(ctx, fmt)
    rep.config.update(C=C, dim=d, instance_points=[list(p) for p in pts], instance_scales=scales)
    records = [t.as_record() for t in res.tiles]
    if fmt == "csv":
        rows = [r["center"] + [r["scale"], r["footprint_size"]] for r in records]
        cols = [f"x{i}" for i in range(d)] + ["scale", "footprint_size"]
        trailer = [f"certificate: {res.certificate.numerator}/{res.certificate.denominator}",
                   f"verified: {json.dumps(verdict.ok)}"]
        rep.emit(rep.render_csv(cols, rows, trailer))
    else:
        rep.emit(rep.render_json({
            "tiles": records,
            "covered": len(res.K),
            "union_size": len(S.tuples() | res.K.tuples()),
            "certificate": frac(res.certificate),
            "verification": verdict.as_dict(),
        }))
    ctx.exit(0 if verdict.ok else 1)


def _ladder_options(fn):
    fn = click.option("--min-window", type=click.IntRange(min=1), default=1, show_default=True,
                      help="Smallest window index to accept.")(fn)
    fn = click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_CELL_BUDGET, show_default=True,
                      help="Cell budget for any single Følner set.")(fn)
    fn = click.option("--ladder", type=click.Choice(LADDERS), default="compact", show_default=True)(fn)
    fn = click.option("--C", "C", type=click.IntRange(min=2), default=None,
                      help="Tempelman integer (default 2^d for boxes).")(fn)
    fn = click.option("--epsilon", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=0.3,
                      show_default=True)(fn)
    return fn


def _failure(rep, exc):
    if isinstance(exc, LadderInfeasible):
        return {"error": {"constraint": exc.constraint, "detail": exc.detail}}
    return {"error": {"constraint": "band_top", "detail": str(exc)}}


@main.command()
@group_options
@_ladder_options
@click.option("--scales", default="index", show_default=True,
              help="Synthetic scale family: index | affine:A,B | sparse:Q[,SALT].")
@click.option("--window", type=click.IntRange(min=1), default=None,
              help="Force T = F_window; the window condition is then only recorded.")
@click.option("--cellmap", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Also write the x,y,pass cell map (Z^2 only).")
@report_options(("json",))
@click.pass_context
def tile(ctx, dim, family, epsilon, C, ladder, budget, min_window, scales, window, cellmap, seed, fmt, output,
         timestamp):
    """Run the r-pass tiling cascade on one window and certify it."""
    if cellmap is not None and dim != 2:
        raise click.BadParameter("cell maps need --dim 2", param_hint="--cellmap")
    try:
        ell = parse_scales(scales)
    except (ScaleFamilyError, ValueError) as exc:
        raise click.BadParameter(str(exc), param_hint="--scales")
    seq = _seq(family, dim)
    if C is None:
        C = _default_C(seq)
    rep = Report(ctx, fmt)
    rep.config["C"] = C
    try:
        params, state, cert = run_cascade(epsilon, C, seq, ell, None, ladder, budget, min_window, window)
    except (LadderInfeasible, BandSelectionError) as exc:
        rep.emit(rep.render_json(_failure(rep, exc)))
        click.echo(f"infeasible: {_failure(rep, exc)['error']['constraint']}", err=True)
        ctx.exit(1)
    body = state_report(params, state, cert)
    rep.emit(rep.render_json(body))
    if cellmap is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "pass"])
        w.writerows(cell_map_rows(state))
        cellmap.parent.mkdir(parents=True, exist_ok=True)
        cellmap.write_text(buf.getvalue())
    ctx.exit(0 if cert.passed else 1)


def parse_schedule(text: str, action_kind: str) -> list:
    """``auto``, ``doubling:START,STOP`` or a comma list of indices."""
    if text == "auto":
        return doubling_schedule(100, 100000) if action_kind == "torus" else [5, 10, 20, 40, 80, 100]
    if text.startswith("doubling:"):
        a, _, b = text[len("doubling:"):].partition(",")
        return doubling_schedule(int(a), int(b))
    return [int(v) for v in text.split(",") if v.strip()]


@main.command()
@click.option("--action", "action_kind", type=click.Choice(("torus", "bernoulli")), default="torus",
              show_default=True)
@group_options
@click.option("--alpha", default=None, help="Comma-separated rotation vector (torus).")
@click.option("--p", "p", type=click.FloatRange(0, 1), default=0.5, show_default=True, help="Cell probability.")
@click.option("--observable", default=None, help="indicator | cell | constant:C (default per action).")
@click.option("--m", "m", type=click.IntRange(min=1), default=100, show_default=True, help="Sample points.")
@click.option("--schedule", default="auto", show_default=True, help="auto | doubling:A,B | n1,n2,...")
@report_options(("csv", "json"))
@click.pass_context
def ergodic(ctx, action_kind, dim, family, alpha, p, observable, m, schedule, seed, fmt, output, timestamp):
    """Ergodic-average deviation from the integral along a schedule of n."""
    alpha_vec = [float(a) for a in alpha.split(",")] if alpha else None
    try:
        action = make_action(action_kind, dim, alpha_vec, p)
        f = make_observable(observable or ("indicator" if action_kind == "torus" else "cell"), action)
        sched = parse_schedule(schedule, action_kind)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if not sched or min(sched) < 1:
        raise click.BadParameter("schedule must list indices >= 1", param_hint="--schedule")
    seq = _seq(family, dim)
    rows = convergence_study(action, f, seq, sched, m, seed)
    rep = Report(ctx, fmt)
    rep.config.update(action_params=action.describe(), observable_name=f.name, schedule_values=sched,
                      integral=f.integral_for(action))
    slope = loglog_slope(rows) if sum(r.mean_dev > 0 for r in rows) >= 2 else None
    cols = ["n", "|F_n|", "mean_dev", "max_dev"]
    data = [(r.n, r.size, repr(r.mean_dev), repr(r.max_dev)) for r in rows]
    if fmt == "csv":
        rep.emit(rep.render_csv(cols, data, [f"loglog_slope: {json.dumps(slope)}"]))
    else:
        rep.emit(rep.render_json({"rows": [dict(zip(cols, (r.n, r.size, r.mean_dev, r.max_dev))) for r in rows],
                                  "loglog_slope": slope}))


@main.command(name="verify-tiling")
@click.option("--action", "action_kind", type=click.Choice(("torus", "bernoulli")), default="bernoulli",
              show_default=True)
@group_options
@_ladder_options
@click.option("--scales", default="index", show_default=True,
              help="Scale family on the space: index | affine:A,B | sparse:Q[,SALT].")
@click.option("--m", "m", type=click.IntRange(min=1), default=50, show_default=True, help="Sample points.")
@report_options(("json",))
@click.pass_context
def verify_tiling(ctx, action_kind, dim, family, epsilon, C, ladder, budget, min_window, scales, m, seed, fmt,
                  output, timestamp):
    """Tile the window at m sampled points; pass when a 1 - epsilon share is covered to 1 - epsilon."""
    try:
        ell = parse_scales(scales)
    except (ScaleFamilyError, ValueError) as exc:
        raise click.BadParameter(str(exc), param_hint="--scales")
    action = make_action(action_kind, dim) if action_kind == "torus" else BernoulliShift(dim)
    seq = _seq(family, dim)
    if C is None:
        C = _default_C(seq)
    rep = Report(ctx, fmt)
    rep.config["C"] = C
    result = verify_tiling_property(action, ell, epsilon, m, seq, C, seed, ladder, budget, min_window)
    rep.emit(rep.render_json(result.as_dict()))
    ctx.exit(0 if result.passed else 1)


if __name__ == "__main__":  # pragma: no cover
    main()

"""Command-line front end.

Exit codes: 0 accept/success, 1 mathematical rejection, 2 usage or parse
error, 3 numeric failure (root finder did not converge).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import conescan, hull, realize
from .polyroots import RootFindingError, roots, truncated_binomial
from .ulc_core import (
    EXACT,
    NUMERIC,
    CoeffSequence,
    QuermassTuple,
    SteinerRejection,
    check_ulc,
    validate_steiner,
)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

TABLE_MAX_N = 20  # rows beyond this have no published counterpart
CSV_HEADER = ["n", "j", "k", "re_gamma", "im_gamma", "alpha"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    n_range: tuple | None = None
    seed: int = conescan.DEFAULT_SEED
    samples: int = conescan.DEFAULT_SAMPLES
    tol: float = 1e-9
    out: str | None = None
    format: str = "text"
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_range"] = list(self.n_range) if self.n_range else None
        return d


def parse_complex(text: str) -> complex:
    """``"a+bi"``, ``"-1+0.5i"``, ``"2"``, ``"i"``; ``j`` is accepted too."""
    t = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a complex number") from None


def parse_range(text: str) -> tuple[int, int]:
    """``"3..20"``, ``"3-20"`` or a single integer."""
    for sep in ("..", ":", "-"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            try:
                lo, hi = int(lo), int(hi)
            except ValueError:
                break
            if lo > hi:
                raise UsageError(f"empty range {text!r}")
            return lo, hi
    try:
        v = int(text)
    except ValueError:
        raise UsageError(f"cannot parse range {text!r}") from None
    return v, v


def parse_numbers(tokens, mode: str) -> list:
    out = []
    for tok in tokens:
        try:
            out.append(Fraction(tok) if mode == EXACT else float(tok))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"not a number: {tok!r}") from None
    return out


def _read_tokens(args) -> list[str]:
    tokens = list(args.values or [])
    if args.file:
        try:
            tokens += Path(args.file).read_text().split()
        except OSError as err:
            raise UsageError(str(err)) from None
    if not tokens:
        raise UsageError("no values given")
    return tokens


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _g6(x: float) -> str:
    return f"{x:.6g}"


# ---------------------------------------------------------------------------


def cmd_validate(args, cfg: RunConfig) -> int:
    vals = parse_numbers(_read_tokens(args), args.mode)
    n = args.n if args.n is not None else len(vals) - 1
    if len(vals) != n + 1:
        raise UsageError(f"expected {n + 1} coefficients for n = {n}, got {len(vals)}")
    try:
        seq = CoeffSequence(n, tuple(vals), args.mode)
    except ValueError as err:
        raise UsageError(str(err)) from None
    report = check_ulc(seq, cfg.tol)
    try:
        dims = validate_steiner(seq, cfg.tol)
        verdict, code, reason, index = "accept", EXIT_OK, None, None
    except SteinerRejection as err:
        dims, verdict, code, reason, index = None, "reject", EXIT_REJECT, str(err), err.index
    if cfg.format == "json":
        doc = {
            "config": cfg.to_dict(),
            "n": n,
            "verdict": verdict,
            "r": dims.r if dims else None,
            "s": dims.s if dims else None,
            "reason": reason,
            "index": index,
            "rows": [
                {"i": r.i, "c": str(r.c_in), "lhs": float(r.lhs), "rhs": float(r.rhs), "margin": float(r.margin),
                 "equality": r.equality}
                for r in report.rows
            ],
        }
        _emit(_json(doc), cfg.out)
    else:
        text = report.format() + "\n"
        if dims:
            text += f"accept: dim E = r = {dims.r}, dim K = s = {dims.s}\n"
        else:
            text += f"reject: {reason}\n"
        _emit(text, cfg.out)
    return code


def _table_rows(lo: int, hi: int):
    return [conescan.table1_scan(n) for n in range(lo, hi + 1)]


def cmd_table1(args, cfg: RunConfig) -> int:
    lo, hi = cfg.n_range or (3, TABLE_MAX_N)
    if lo < 3:
        raise UsageError("table scan needs n >= 3")
    rows = _table_rows(lo, hi)
    if hi > TABLE_MAX_N:
        print(f"note: rows with n > {TABLE_MAX_N} are extrapolations with no published reference", file=sys.stderr)
    if cfg.format == "json":
        doc = {"config": cfg.to_dict(), "rows": []}
        for r in rows:
            d = r.to_dict()
            d["extrapolated"] = r.n > TABLE_MAX_N
            if not args.ties:
                d.pop("all_minimal")
            doc["rows"].append(d)
        _emit(_json(doc), cfg.out)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (["ties"] if args.ties else []))
    for r in rows:
        line = [r.n, r.j, r.k, _g6(r.gamma.real), _g6(r.gamma.imag), _g6(r.alpha)]
        if args.ties:
            line.append(";".join(f"{j}:{k}" for j, k in r.all_minimal))
        w.writerow(line)
    _emit(buf.getvalue(), cfg.out)
    return EXIT_OK


def cmd_membership(args, cfg: RunConfig) -> int:
    if args.gamma is None or cfg.n is None:
        raise UsageError("membership needs --gamma and --n")
    gamma = parse_complex(args.gamma)
    n = cfg.n
    if args.estimates:
        store = conescan.load_estimates(args.estimates)
    elif n >= 5:
        store = conescan.build_estimates(range(2, n + 1))
    else:
        store = {}
    v = conescan.membership(gamma, n, store)
    if cfg.format == "json":
        doc = {"config": cfg.to_dict(), **v.to_dict()}
        _emit(_json(doc), cfg.out)
    else:
        text = f"gamma = {v.gamma}  n = {n}\nverdict: {v.verdict} ({v.rule})\n"
        if v.certificate is not None:
            text += "certificate: " + " ".join(str(x) for x in v.certificate.a) + "\n"
        if v.witness_gamma is not None:
            text += f"witness root: {v.witness_gamma}\n"
        _emit(text, cfg.out)
    return EXIT_REJECT if v.verdict == conescan.OUTSIDE else EXIT_OK


def cmd_realize(args, cfg: RunConfig) -> int:
    vals = parse_numbers(_read_tokens(args), EXACT)
    n = len(vals) - 1
    try:
        q = QuermassTuple(n, tuple(vals), EXACT, check_af=False)
    except SteinerRejection as err:
        print(f"reject: {err}", file=sys.stderr)
        return EXIT_REJECT
    except ValueError as err:
        raise UsageError(str(err)) from None
    report = realize.verify_realization(q, method=args.method, samples=cfg.samples)
    outdir = Path(cfg.out) if cfg.out else None
    if outdir is not None and report.alphas:
        outdir.mkdir(parents=True, exist_ok=True)
        sp = realize.build_simplex_pair(q)
        realize.write_points(outdir / "K.txt", sp.K_vertices)
        realize.write_points(outdir / "E.txt", sp.E_vertices)
        realize.write_points(outdir / "K_plus_E.txt", realize.minkowski_vertices(sp, 1.0))
    doc = {"config": cfg.to_dict(), **report.to_dict()}
    if outdir is not None:
        (outdir / "report.json").write_text(_json(doc))
    if cfg.format == "json" or outdir is None:
        if cfg.format == "json":
            sys.stdout.write(_json(doc))
        else:
            sys.stdout.write(
                f"n = {q.n}  r = {q.r}  s = {q.s}\nalphas: {list(report.alphas)}\n"
                f"stage: {report.stage}  method: {report.method}\n"
                f"max relative error: {report.max_rel_error:.3g}\n"
                f"verdict: {'pass' if report.passed else 'fail'} {report.message}\n"
            )
    return EXIT_OK if report.passed else EXIT_REJECT


def svg_plot(points, rays, title: str = "") -> str:
    """Scatter of complex points with rays from the origin, as plain SVG.

    ``rays`` is a list of ``(angle, label)``; the view is fitted to the
    points (or [-2, 1] x [0, 2] when there are none)."""
    size, pad = 480, 40
    xs = [p.real for p in points] + [-2.0, 1.0]
    ys = [abs(p.imag) for p in points] + [0.0, 2.0]
    xmin, xmax = min(xs) - 0.2, max(xs) + 0.2
    ymax = max(ys) + 0.2
    span = max(xmax - xmin, 2 * ymax)
    scale = (size - 2 * pad) / span

    def px(z: complex) -> tuple[str, str]:
        return f"{pad + (z.real - xmin) * scale:.2f}", f"{size / 2 - z.imag * scale:.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    x0, y0 = px(complex(xmin, 0))
    x1, _ = px(complex(xmin + span, 0))
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black" stroke-width="1"/>')
    ox, _ = px(0j)
    out.append(f'<line x1="{ox}" y1="{pad}" x2="{ox}" y2="{size - pad}" stroke="black" stroke-width="1"/>')
    for angle, label in rays:
        for sign in (1, -1):
            end = span * complex(math.cos(angle), sign * math.sin(angle))
            ex, ey = px(end)
            oy = px(0j)[1]
            out.append(
                f'<line x1="{ox}" y1="{oy}" x2="{ex}" y2="{ey}" stroke="firebrick" stroke-width="1.5" '
                f'stroke-dasharray="6,3"><title>{label}</title></line>'
            )
    for z in points:
        cx, cy = px(z)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="2.5" fill="steelblue"/>')
    if title:
        out.append(f'<text x="{pad}" y="{pad / 2 + 6:.0f}" font-family="sans-serif" font-size="14">{title}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_plot(args, cfg: RunConfig) -> int:
    rays = []
    if args.input:
        try:
            rows = [ln.split() for ln in Path(args.input).read_text().splitlines() if ln.strip()]
            points = [complex(float(r[0]), float(r[1])) for r in rows]
        except (OSError, ValueError, IndexError) as err:
            raise UsageError(f"cannot read points: {err}") from None
        title = f"{len(points)} roots"
    else:
        if cfg.n is None:
            raise UsageError("plot needs --n or --input")
        n = cfg.n
        points = []
        for j in range(1, n):
            for k in range(j + 1, n + 1):
                points.extend(roots(truncated_binomial(n, j, k)).nonzero())
        if n <= 4:
            rays.append((conescan.EXACT_ANGLES[max(n, 2)], f"exact boundary, n = {n}"))
        else:
            row = conescan.table1_scan(n)
            rays.append((row.alpha, f"witness P^{n}_{{{row.j},{row.k}}}"))
        title = f"roots of P^{n}_(j,k), 0 &lt; j &lt; k &lt;= {n}"
    points.sort(key=lambda z: (z.real, z.imag))
    _emit(svg_plot(points, rays, title), cfg.out)
    return EXIT_OK


def cmd_stability(args, cfg: RunConfig) -> int:
    if cfg.n is None:
        raise UsageError("stability needs --n")
    rep = conescan.weak_stability_search(cfg.n, cfg.samples, cfg.seed)
    doc = {"config": cfg.to_dict(), "weakly_stable": rep.weakly_stable, **rep.to_dict()}
    if cfg.format == "json":
        _emit(_json(doc), cfg.out)
    else:
        text = (
            f"n = {rep.n}  families = {rep.families_scanned}  samples = {rep.samples}\n"
            f"max real part: {rep.max_real_part:.6g}\n"
            f"weakly stable: {'yes' if rep.weakly_stable else 'no'} ({len(rep.offenders)} roots with Re > 1e-9)\n"
        )
        for src, label, g in rep.offenders[:10]:
            text += f"  {src} {label}: {g}\n"
        _emit(text, cfg.out)
    return EXIT_OK


def cmd_accumulation(args, cfg: RunConfig) -> int:
    ns = args.values and [int(v) for v in args.values] or [40, 80, 160]
    rep = conescan.accumulation_check(ns)
    doc = {"config": cfg.to_dict(), **rep.to_dict()}
    if cfg.format == "json":
        _emit(_json(doc), cfg.out)
    else:
        text = "".join(
            f"n = {r.n}: min |z - 1| = {r.min_distance_to_one:.6g}  curve residual = {r.curve_residual:.3g}\n"
            for r in rep.rows
        )
        text += f"decreasing: {rep.decreasing}  1 on curve: {rep.one_on_curve}  1 in disk: {rep.one_in_disk}\n"
        _emit(text, cfg.out)
    return EXIT_OK if rep.decreasing else EXIT_REJECT


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--range", dest="n_range", help="dimension range, e.g. 3..20")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=conescan.DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=conescan.DEFAULT_SAMPLES)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--format", choices=["text", "csv", "json", "svg"])
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="steinerroots", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a coefficient sequence")
    p.add_argument("values", nargs="*")
    p.add_argument("--file")
    p.add_argument("--mode", choices=[EXACT, NUMERIC], default=EXACT)
    p.set_defaults(func=cmd_validate, default_format="text")

    p = sub.add_parser("table1", parents=[common], help="minimal-angle truncated binomial roots")
    p.add_argument("--ties", action="store_true")
    p.set_defaults(func=cmd_table1, default_format="csv")

    p = sub.add_parser("membership", parents=[common], help="is a point in the root cone")
    p.add_argument("--gamma")
    p.add_argument("--estimates", help="JSON cone-estimate store")
    p.set_defaults(func=cmd_membership, default_format="text")

    p = sub.add_parser("realize", parents=[common], help="simplices realizing a quermassintegral tuple")
    p.add_argument("values", nargs="*")
    p.add_argument("--file")
    p.add_argument("--method", choices=["auto", hull.HULL_EXACT, hull.MONTE_CARLO, hull.DISSECTION], default="auto")
    p.set_defaults(func=cmd_realize, default_format="text")

    p = sub.add_parser("plot", parents=[common], help="SVG of truncated binomial roots")
    p.add_argument("--input", help="points file, one 're im' pair per line")
    p.set_defaults(func=cmd_plot, default_format="svg")

    p = sub.add_parser("stability", parents=[common], help="search for roots in the right half-plane")
    p.set_defaults(func=cmd_stability, default_format="text")

    p = sub.add_parser("accumulation", parents=[common], help="roots of P^n_(0,n/2) near 1")
    p.add_argument("values", nargs="*", help="dimensions, default 40 80 160")
    p.set_defaults(func=cmd_accumulation, default_format="text")
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--gamma -1+0.5i`` through argparse, which would read the value as a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a == "--gamma" and i + 1 < len(argv):
            out.append(f"--gamma={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        n_range = parse_range(args.n_range) if args.n_range else None
        if n_range is None and args.n is not None and args.command == "table1":
            n_range = (args.n, args.n)
        cfg = RunConfig(
            command=args.command,
            n=args.n,
            n_range=n_range,
            seed=args.seed,
            samples=args.samples,
            tol=args.tol,
            out=args.out,
            format=args.format or args.default_format,
        )
        return args.func(args, cfg)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except RootFindingError as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

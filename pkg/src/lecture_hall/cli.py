"""``lhl`` command line.

Exit status: 0 on success, 1 when the library rejects the input (any
:class:`LectureHallError`), 2 for malformed command lines or arguments.
Flags may also come from ``--config FILE.json`` whose keys mirror the long
option names; explicit flags win.  ``LHL_SEED`` supplies the default seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .errors import LectureHallError, MismatchedScene

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _env_seed() -> int:
    raw = os.environ.get("LHL_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LHL_SEED must be an integer, got {raw!r}")


def _shape(args, pad_to: int | None = None):
    from .model import make_partition, parse_partition

    n = getattr(args, "n", None) if pad_to is None else pad_to
    if args.lam is None:
        if n is None:
            raise UsageError("give --lambda (or --n for the n x n square)")
        return make_partition([n] * n)
    shape = parse_partition(args.lam)
    if n is not None and n != shape.n:
        if n < shape.n:
            raise UsageError(f"--n {n} is smaller than the number of parts {shape.n}")
        shape = make_partition(list(shape.parts) + [0] * (n - shape.n))
    return shape


def _profile(text: str, p: int):
    from .model import BUILTIN_PROFILES, Profile, builtin_profile

    if text in BUILTIN_PROFILES:
        return builtin_profile(text, p)
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"--profile must be one of {', '.join(BUILTIN_PROFILES)} or a JSON segment list")
    profile = Profile.from_list(data, name="custom")
    profile.check_admissible()
    return profile


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, default=_json_default) + "\n"


def _json_default(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return list(v)
    raise TypeError(type(v).__name__)


# ---------------------------------------------------------------------------
# subcommands


def cmd_count(args) -> int:
    from .counting import count_blht, count_via_lgv, enumerate_blht

    shape = _shape(args)
    methods = ["product", "lgv", "enumerate"] if args.method == "all" else [args.method]
    values = {}
    for m in methods:
        if m == "product":
            values[m] = count_blht(shape, args.t)
        elif m == "lgv":
            values[m] = count_via_lgv(shape, args.t)
        else:
            values[m] = sum(1 for _ in enumerate_blht(shape, args.t, cap=args.cap))
    distinct = set(values.values())
    if len(distinct) != 1:
        raise LectureHallError(f"methods disagree: {values}")
    count = distinct.pop()
    if args.json:
        _emit(_dump({"lambda": list(shape.parts), "t": args.t, "count": str(count), "methods": methods}), None)
    else:
        print(count)
        print(f"methods: {', '.join(methods)}", file=sys.stderr)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    from .counting import enumerate_blht

    shape = _shape(args)
    lines = [t.to_json() + "\n" for t in enumerate_blht(shape, args.t, cap=args.cap)]
    _emit("".join(lines), args.out)
    if args.json:
        print(json.dumps({"count": len(lines)}), file=sys.stderr)
    return EXIT_OK


def cmd_sample(args) -> int:
    from .cftp import DEFAULT_MAX_STEPS, cftp_run, check_valid, derive_seed, sample_many

    shape = _shape(args)
    t = args.t if args.t is not None else shape.n
    kwargs = {"mode": args.mode, "close_gap": args.close_gap, "max_steps": args.max_steps or DEFAULT_MAX_STEPS}
    if args.mode == "exact" and args.close_gap:
        raise UsageError("--close-gap only applies to --mode approx")
    if args.count == 1 and args.json:
        res = cftp_run(shape, t, derive_seed(args.seed, 0), **kwargs)
        samples, horizons = [res.tableau], [res.horizon]
    else:
        samples = sample_many(shape, t, args.seed, args.count, workers=args.workers, **kwargs)
        horizons = None
    lines = []
    for k, tab in enumerate(samples):
        if not check_valid(tab):
            raise LectureHallError(f"sample {k} failed validation")
        lines.append(tab.to_json() + "\n")
    _emit("".join(lines), args.out)
    if args.json and args.out not in (None, "-"):
        print(_dump({"samples": len(lines), "mode": args.mode, "horizons": horizons}), end="")
    return EXIT_OK


def cmd_curve(args) -> int:
    from .arctic import branch_summary, enumerate_branches, sample_curve

    profile = _profile(args.profile, args.p)
    profile.check_admissible()
    if args.format == "svg":
        from .render import render_curve

        _emit(render_curve(profile, args.tau, args.resolution), args.out)
    else:
        polylines = sample_curve(profile, args.tau, args.resolution)
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["branch_id", "x", "X", "Y"])
            for k, pl in enumerate(polylines):
                for x, (X, Y) in zip(pl.xs, pl.points):
                    w.writerow([k, repr(float(x)), repr(float(X)), repr(float(Y))])
            _emit(buf.getvalue(), args.out)
        else:
            doc = {
                "profile": profile.to_list(),
                "tau": args.tau,
                "branches": branch_summary(enumerate_branches(profile)),
                "points": [[list(p) for p in pl.points] for pl in polylines],
            }
            _emit(_dump(doc), args.out)
    if args.png:
        from .render import save_curve_png

        save_curve_png(profile, args.tau, args.png, args.resolution)
    return EXIT_OK


def _parse_edges(text: str):
    from .lattice import parse_vertex_label

    edges = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise UsageError(f"edge {chunk!r} must look like 'w:c:m,b:c:m'")
        try:
            edges.append((parse_vertex_label(parts[0].strip()), parse_vertex_label(parts[1].strip())))
        except (ValueError, IndexError):
            raise UsageError(f"cannot parse edge {chunk!r}")
    return edges


def cmd_dimer(args) -> int:
    from .dimer import (
        edge_probability,
        exact_inverse,
        face_sign_report,
        kasteleyn_determinant,
        kasteleyn_matrix,
    )

    shape = _shape(args)
    K = kasteleyn_matrix(shape, args.t)
    doc: dict = {"lambda": list(shape.parts), "t": args.t, "size": K.size}
    if args.check == "det":
        doc["det"] = str(kasteleyn_determinant(K))
    elif args.check == "faces":
        report = face_sign_report(shape, args.t)
        bad = [f for f in report if f not in ((6, 2), (8, 3))]
        doc["faces"] = len(report)
        doc["bad_faces"] = [list(f) for f in bad]
        doc["kasteleyn"] = not bad
    elif args.check == "inverse":
        inv = exact_inverse(K)
        rows = K.dense()
        defects = sum(
            1
            for bi in range(K.size)
            for bj in range(K.size)
            if sum(rows[bi][w] * inv[w][bj] for w in range(K.size)) != (1 if bi == bj else 0)
        )
        doc["identity_defects"] = defects
    if args.edge_prob:
        edges = _parse_edges(args.edge_prob)
        try:
            doc["probability"] = str(edge_probability(K, edges))
        except (KeyError, ValueError) as exc:
            raise LectureHallError(f"not an edge of the lattice: {exc}")
    if args.json:
        _emit(_dump(doc), None)
    else:
        for k, v in doc.items():
            print(f"{k}: {v}")
    ok = doc.get("kasteleyn", True) and doc.get("identity_defects", 0) == 0
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_burgers(args) -> int:
    from .burgers import burgers_residual, burgers_solution, liquid_grid

    pts = liquid_grid(args.example, args.grid, args.p)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "re_u", "im_u", "residual"])
    worst = 0.0
    for x, y in pts:
        u = burgers_solution(args.example, x, y, args.p)
        r = burgers_residual(args.example, x, y, p=args.p)
        worst = max(worst, r)
        w.writerow([repr(x), repr(y), repr(u.real), repr(u.imag), repr(r)])
    _emit(buf.getvalue(), args.out)
    if args.json:
        print(_dump({"points": len(pts), "max_residual": worst}), end="", file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    from .cftp import cftp_sample, derive_seed
    from .lattice import height_function, paths_to_dimers, paths_to_dual, tableau_to_paths
    from .model import LectureHallTableau, profile_from_partition
    from .render import RenderSpec, render, save_png

    if args.tableau:
        with open(args.tableau, encoding="utf-8") as fh:
            tab = LectureHallTableau.from_json(fh.readline()).validated()
    else:
        shape = _shape(args)
        tab = cftp_sample(shape, args.t if args.t is not None else shape.n, derive_seed(args.seed, 0))
    overlay = None
    if args.overlay:
        profile = profile_from_partition(tab.shape) if args.overlay == "auto" else _profile(args.overlay, args.p)
        tau = args.tau if args.tau is not None else tab.t / tab.n
        overlay = (profile, tau)
    if overlay is not None and not args.rescale:
        raise UsageError("--overlay requires --rescale")
    spec = RenderSpec(args.scene, overlay, args.width, args.height, args.rescale)
    ps = tableau_to_paths(tab)
    data = {"paths": ps, "dual-paths": paths_to_dual(ps), "dimers": paths_to_dimers(ps), "height": height_function(ps)}[args.scene]
    _emit(render(data, spec), args.out)
    if args.png:
        save_png(data, spec, args.png)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.suite, max_cells=args.max_cells, workers=args.workers, seed=args.seed)
    if args.json:
        _emit(_dump([r.to_dict() for r in results]), None)
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_DOMAIN


# ---------------------------------------------------------------------------
# parser


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    from .burgers import EXAMPLES
    from .verify import SUITES

    parser = argparse.ArgumentParser(prog="lhl", description="Bounded lecture hall tableaux toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file whose keys mirror the long flags")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        subs[name] = p
        return p

    def shape_flags(p, t_required=True):
        p.add_argument("--lambda", dest="lam", help="partition, e.g. 3,2,2")
        p.add_argument("--n", type=int, help="number of parts (pads with zeros; alone: n x n square)")
        # required-ness is checked after config defaults are merged
        p.add_argument("--t", type=int, default=None)
        p.set_defaults(t_required=t_required)

    p = add("count", cmd_count, "count tableaux")
    shape_flags(p)
    p.add_argument("--method", choices=["product", "lgv", "enumerate", "all"], default="product")
    p.add_argument("--cap", type=int, default=10**7)

    p = add("enumerate", cmd_enumerate, "list tableaux as JSON lines")
    shape_flags(p)
    p.add_argument("--cap", type=int, default=10**7)
    p.add_argument("--out")

    p = add("sample", cmd_sample, "uniform samples by coupling from the past")
    shape_flags(p, t_required=False)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--mode", choices=["exact", "approx"], default="exact")
    p.add_argument("--close-gap", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--out")

    p = add("curve", cmd_curve, "arctic curve for a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--format", choices=["csv", "svg", "json"], default="csv")
    p.add_argument("--out")
    p.add_argument("--png", help="also write a matplotlib PNG here")

    p = add("dimer", cmd_dimer, "Kasteleyn matrix checks")
    shape_flags(p)
    p.add_argument("--check", choices=["det", "faces", "inverse"], default="det")
    p.add_argument("--edge-prob", help="edges 'w:c:m,b:c:m;...' covered simultaneously")

    p = add("burgers", cmd_burgers, "complex Burgers solutions on a liquid grid")
    p.add_argument("--example", choices=list(EXAMPLES), required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--out")

    p = add("render", cmd_render, "SVG of a sampled or given tableau")
    shape_flags(p, t_required=False)
    p.add_argument("--tableau", help="file whose first line is a tableau JSON document")
    p.add_argument("--scene", choices=["paths", "dual-paths", "dimers", "height"], default="paths")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--overlay", help="'auto' or a profile for the arctic-curve overlay")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--rescale", action="store_true")
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=500)
    p.add_argument("--out")
    p.add_argument("--png", help="also write a matplotlib PNG here")

    p = add("verify", cmd_verify, "run self-check suites")
    p.add_argument("--suite", choices=list(SUITES), default="oracles")
    p.add_argument("--max-cells", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    return parser, subs


def _apply_config(path: str, subs: dict, command: str) -> None:
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(config, dict):
        raise UsageError("config must be a JSON object")
    section = config.get(command, config)
    parser = subs[command]
    known = {a.dest for a in parser._actions}
    defaults = {}
    for key, value in section.items():
        if isinstance(value, dict):
            continue
        dest = {"lambda": "lam"}.get(key, key.replace("-", "_"))
        if dest not in known:
            raise UsageError(f"unknown config key {key!r} for {command}")
        defaults[dest] = value
    parser.set_defaults(**defaults)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser, subs = build_parser()
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, rest = pre.parse_known_args(argv)
        command = next((a for a in rest if a in subs), None)
        if known.config and command:
            _apply_config(known.config, subs, command)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0) if exc.code in (0, None) else EXIT_USAGE
        if getattr(args, "t_required", False) and args.t is None:
            raise UsageError("--t is required")
        if getattr(args, "seed", 0) is None:
            args.seed = _env_seed()
        if getattr(args, "t", None) is not None and args.t < 1:
            raise UsageError("--t must be a positive integer")
        return args.func(args)
    except UsageError as exc:
        print(f"lhl: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MismatchedScene as exc:
        print(f"lhl: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LectureHallError as exc:
        print(f"lhl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, KeyError) as exc:
        print(f"lhl: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"lhl: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

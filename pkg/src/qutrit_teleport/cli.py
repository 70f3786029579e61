"""Command-line front end: ``point``, ``sweep``, ``verify`` and ``figure <preset>``.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error, 3 verification failure.
"""

import argparse
import dataclasses
import sys

from . import checks
from .analytics import FORMS, merit_point
from .protection import OPTIMAL, EamVariant
from .sweep import FIGURE_PRESETS, Grid, SweepSpec, evaluate_point, parse_schemes, write_sweep

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3

# built-in values, applied after the config file and the flags
DEFAULTS = {
    "mu": "0",
    "d": "0",
    "p": "0",
    "q": OPTIMAL,
    "scheme": "all",
    "form": "derived",
    "eq21_variant": EamVariant.CANONICAL.value,
    "jobs": "1",
    "oracle_check": "false",
}
CONFIG_KEYS = set(DEFAULTS) | {"grid_mu", "grid_d", "grid_p", "out"}


class UsageError(Exception):
    pass


def read_config(path):
    """Parse flat ``key = value`` lines; ``#`` starts a comment. Keys may use - or _."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def _merged(args):
    """Compose built-in defaults < config file < command-line flags."""
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        merged.update(read_config(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = str(value)
    return merged


def _bool(text):
    low = str(text).lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _q(text):
    return OPTIMAL if text == OPTIMAL else float(text)


def _sweep_spec(cfg):
    return SweepSpec(
        mu=Grid.parse(cfg.get("grid_mu", cfg["mu"])),
        d=Grid.parse(cfg.get("grid_d", cfg["d"])),
        p=Grid.parse(cfg.get("grid_p", cfg["p"])),
        schemes=parse_schemes(cfg["scheme"]),
        q=_q(cfg["q"]),
        form=cfg["form"],
        eq21_variant=EamVariant(cfg["eq21_variant"]),
        oracle_check=_bool(cfg["oracle_check"]),
    )


def _jobs(cfg):
    jobs = int(cfg["jobs"])
    if jobs < 1:
        raise ValueError(f"--jobs must be >= 1, got {jobs}")
    return jobs


def cmd_point(args):
    cfg = _merged(args)
    spec = _sweep_spec({**cfg, "grid_mu": cfg["mu"], "grid_d": cfg["d"], "grid_p": cfg["p"]})
    (point,) = spec.points()
    mp = merit_point(*point, spec.q, form=spec.form, variant=spec.eq21_variant)
    rows = evaluate_point((point, spec))
    for scheme in spec.schemes:
        values = dict(zip(("mu", "d", "p", "q", "scheme", "F_cad", "F", "P", "F_imp", "eq21_discrepancy"),
                          rows[scheme].split(",")))
        for key, value in values.items():
            print(f"{key}={value}")
        if len(spec.schemes) > 1:
            print()
    if len(spec.schemes) > 1:
        for key, value in dataclasses.asdict(mp).items():
            print(f"{key}={format(value, '.12g')}")
    return EXIT_OK


def _write(spec, cfg):
    out = cfg.get("out")
    if not out:
        raise UsageError("--out is required")
    try:
        write_sweep(spec, out, jobs=_jobs(cfg))
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {out} ({len(spec.points()) * len(spec.schemes)} rows)")
    return EXIT_OK


def cmd_sweep(args):
    cfg = _merged(args)
    return _write(_sweep_spec(cfg), cfg)


def cmd_figure(args):
    cfg = _merged(args)
    spec = dataclasses.replace(
        FIGURE_PRESETS[args.preset], form=cfg["form"], eq21_variant=EamVariant(cfg["eq21_variant"])
    )
    if not cfg.get("out"):
        cfg["out"] = f"{args.preset}.csv"
    return _write(spec, cfg)


def cmd_verify(args):
    def show(results):
        for r in results:
            print(r.line(), flush=True)

    report = checks.run_all(seed=args.seed, progress=show)
    print(report.render().splitlines()[-1])
    return EXIT_OK if report.ok else EXIT_VERIFY


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; command-line flags take precedence")
    common.add_argument("--eq21-variant", dest="eq21_variant", choices=[v.value for v in EamVariant],
                        help="EAM shared-state evaluator (default: canonical)")
    common.add_argument("--form", choices=FORMS, help="optimal closed forms to report (default: derived)")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--mu", help="correlation parameter in [0, 1]")
    params.add_argument("--d", help="damping strength in [0, 1]")
    params.add_argument("--p", help="weak-measurement strength in [0, 1)")
    params.add_argument("--q", help="reversal strength in [0, 1) or 'optimal'")
    params.add_argument("--scheme", help="none, wm, eam, a comma list, or all")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", help="CSV output path")
    output.add_argument("--jobs", type=int, help="worker processes (output does not depend on it)")

    parser = argparse.ArgumentParser(prog="qutrit-teleport", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", parents=[common, params], help="evaluate one parameter point")
    p.set_defaults(func=cmd_point)

    s = sub.add_parser("sweep", parents=[common, params, output], help="grid sweep to CSV")
    s.add_argument("--grid-mu", dest="grid_mu", help="start,stop,count")
    s.add_argument("--grid-d", dest="grid_d", help="start,stop,count")
    s.add_argument("--grid-p", dest="grid_p", help="start,stop,count")
    s.add_argument("--oracle-check", dest="oracle_check", action="store_const", const="true",
                   help="cross-check every success probability against the density-matrix pipeline")
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("figure", parents=[common, output], help="regenerate a figure's data")
    f.add_argument("preset", choices=sorted(FIGURE_PRESETS))
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--seed", type=int, default=checks.DEFAULT_SEED)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

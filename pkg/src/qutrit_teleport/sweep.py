"""Deterministic parameter sweeps over (mu, d, p) written as CSV."""

import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytics import FORMS, merit_point
from .channels import ChannelSpec
from .protection import (
    OPTIMAL,
    EamVariant,
    Scheme,
    eam_protected_resource,
    wm_protected_resource,
)
from .validation import check_unit_interval

CSV_COLUMNS = ("mu", "d", "p", "q", "scheme", "F_cad", "F", "P", "F_imp", "eq21_discrepancy")
ALL_SCHEMES = (Scheme.NONE, Scheme.WM, Scheme.EAM)
ORACLE_ATOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """``count`` evenly spaced values from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    count: int = 1

    def __post_init__(self):
        check_unit_interval("grid start", self.start)
        check_unit_interval("grid stop", self.stop)
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"grid count must be a positive integer, got {self.count!r}")
        if self.count == 1 and self.start != self.stop:
            raise ValueError("a one-point grid needs start == stop")
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def point(cls, value):
        return cls(value, value, 1)

    @classmethod
    def parse(cls, text):
        """Parse ``"start,stop,count"`` or a single value."""
        parts = [s.strip() for s in str(text).split(",")]
        if len(parts) == 1:
            return cls.point(float(parts[0]))
        if len(parts) != 3:
            raise ValueError(f"grid must be 'start,stop,count' or a single value, got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def values(self):
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self):
        return f"{self.start:g},{self.stop:g},{self.count}"


def parse_schemes(text):
    if isinstance(text, (tuple, list)):
        return tuple(Scheme(s) for s in text)
    if text == "all":
        return ALL_SCHEMES
    return tuple(Scheme(s.strip()) for s in str(text).split(","))


@dataclass(frozen=True)
class SweepSpec:
    mu: Grid = field(default_factory=lambda: Grid.point(0.0))
    d: Grid = field(default_factory=lambda: Grid.point(0.0))
    p: Grid = field(default_factory=lambda: Grid.point(0.0))
    schemes: tuple = ALL_SCHEMES
    q: object = OPTIMAL
    form: str = "derived"
    eq21_variant: EamVariant = EamVariant.CANONICAL
    oracle_check: bool = False

    def __post_init__(self):
        object.__setattr__(self, "schemes", parse_schemes(self.schemes))
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        object.__setattr__(self, "eq21_variant", EamVariant(self.eq21_variant))
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}, got {self.form!r}")
        if self.q != OPTIMAL:
            object.__setattr__(self, "q", check_unit_interval("q", float(self.q), open_right=True))
        if self.p.stop >= 1.0 or self.p.start >= 1.0:
            raise ValueError("p grid must stay below 1")

    def points(self):
        """Grid points in row-major (mu, d, p) order."""
        return list(itertools.product(self.mu.values(), self.d.values(), self.p.values()))

    def describe(self):
        """Effective configuration as a stable one-line string (no worker count or paths)."""
        schemes = ",".join(s.value for s in self.schemes)
        return (
            f"mu={self.mu} d={self.d} p={self.p} scheme={schemes} q={self.q} "
            f"form={self.form} eq21_variant={self.eq21_variant.value} oracle_check={self.oracle_check}"
        )


def _fmt(x):
    return format(float(x) + 0.0, ".12g")


def _oracle_success(scheme, mu, d, p, q, variant):
    spec = ChannelSpec.symmetric(d, mu)
    if scheme is Scheme.WM:
        return float(np.trace(wm_protected_resource(spec, p, q)).real)
    return float(np.trace(eam_protected_resource(spec, q, variant=variant)).real)


def evaluate_point(args):
    """All CSV rows (one per scheme) for one grid point."""
    (mu, d, p), spec = args
    mp = merit_point(mu, d, p, spec.q, form=spec.form, variant=spec.eq21_variant)
    rows = {}
    for scheme in spec.schemes:
        if scheme is Scheme.NONE:
            q, f, prob = 0.0, mp.F_cad, 1.0
        elif scheme is Scheme.WM:
            q, f, prob = mp.q_wm, mp.F_wm, mp.P_wm
        else:
            q, f, prob = mp.q_eam, mp.F_eam, mp.P_eam
        if spec.oracle_check and scheme is not Scheme.NONE and q < 1.0:
            oracle = _oracle_success(scheme, mu, d, p, q, spec.eq21_variant)
            if abs(oracle - prob) > ORACLE_ATOL:
                raise RuntimeError(
                    f"oracle mismatch at mu={mu}, d={d}, p={p}, scheme={scheme.value}: "
                    f"P={prob!r} vs pipeline trace {oracle!r}"
                )
        rows[scheme] = ",".join(
            [_fmt(mu), _fmt(d), _fmt(p), _fmt(q), scheme.value]
            + [_fmt(v) for v in (mp.F_cad, f, prob, mp.F_imp, mp.eq21_discrepancy)]
        )
    return rows


def run_sweep(spec, jobs=1):
    """Return the CSV text for ``spec``; identical for any ``jobs``."""
    if int(jobs) < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs!r}")
    tasks = [(pt, spec) for pt in spec.points()]
    if jobs == 1 or len(tasks) < 2:
        results = [evaluate_point(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=int(jobs)) as pool:
            results = list(pool.map(evaluate_point, tasks, chunksize=chunk))
    out = io.StringIO()
    out.write(f"# config: {spec.describe()}\n")
    out.write(",".join(CSV_COLUMNS) + "\n")
    for scheme in spec.schemes:
        for rows in results:
            out.write(rows[scheme] + "\n")
    return out.getvalue()


def write_sweep(spec, path, jobs=1):
    text = run_sweep(spec, jobs)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return text


FIGURE_PRESETS = {
    # WM optimum versus noise strength for several WM strengths, mu = 0.8
    "fig2": SweepSpec(
        mu=Grid.point(0.8), d=Grid(0.0, 1.0, 101), p=Grid(0.0, 0.9, 4), schemes=(Scheme.WM,)
    ),
    # WM optimum versus correlation and WM strength, d = 0.6
    "fig3": SweepSpec(
        mu=Grid(0.0, 1.0, 51), d=Grid.point(0.6), p=Grid(0.0, 0.98, 50), schemes=(Scheme.WM,)
    ),
    # EAM optimum and unprotected baseline over (mu, d)
    "fig4": SweepSpec(
        mu=Grid(0.0, 1.0, 51), d=Grid(0.0, 1.0, 51), p=Grid.point(0.0), schemes=(Scheme.NONE, Scheme.EAM)
    ),
    # all three schemes versus correlation and WM strength, d = 0.6
    "fig5a": SweepSpec(mu=Grid(0.0, 1.0, 51), d=Grid.point(0.6), p=Grid(0.0, 0.98, 50), schemes=ALL_SCHEMES),
    # balanced improvement over (mu, d) at p = 0.9
    "fig5b": SweepSpec(
        mu=Grid(0.0, 1.0, 51), d=Grid(0.0, 1.0, 51), p=Grid.point(0.9), schemes=(Scheme.WM, Scheme.EAM)
    ),
}

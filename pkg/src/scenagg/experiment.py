"""Aggregation-level sweep on random layered instances, with CSV/SVG output.

For every instance the scenario set is halved level by level under each
configured scheme; each reduced min-max (or regret) problem is solved
exactly, the returned solution is re-evaluated on the original scenario
set, and the ratio to the true optimum is recorded. One row per
(instance, scheme, scenario count).

All randomness flows from the single config seed; instance i uses
``seed + i``, so any row can be re-derived by re-running the solver on the
recorded instance id.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .aggregation import aggregate_sweep
from .core import CapExceededError, ValidationError
from .instances import gen_layered
from .solvers import (
    exact_generalized_regret,
    exact_minmax,
    per_scenario_optima,
)

CSV_HEADER = ("instance_id,scheme,scenario_count,value,opt_value,ratio,"
              "wall_time_ms,status")

_SCHEME_STYLE = {
    "similarity": ("#d62728", None),     # solid red
    "consecutive": ("#1f77b4", "8 5"),   # dashed blue
}


@dataclass(frozen=True)
class ExperimentConfig:
    layers: int = 10
    width: int = 4
    scenario_count: int = 16
    instance_count: int = 200
    seed: int = 5000
    schemes: tuple[str, ...] = ("similarity", "consecutive")
    levels: tuple[int, ...] | None = None
    criterion: str = "minmax"
    csv_path: str = "experiment.csv"
    svg_path: str = "experiment.svg"

    def __post_init__(self):
        if self.instance_count < 1:
            raise ValidationError("instance_count must be >= 1")
        if self.criterion not in ("minmax", "regret"):
            raise ValidationError(f"unknown criterion {self.criterion!r}")
        for scheme in self.schemes:
            if scheme not in ("consecutive", "similarity"):
                raise ValidationError(f"unknown scheme {scheme!r}")
        if not self.schemes:
            raise ValidationError("at least one scheme required")
        halving = self.halving_counts()
        levels = tuple(self.levels) if self.levels is not None else tuple(halving)
        for lv in levels:
            if lv not in halving:
                raise ValidationError(
                    f"level {lv} is not reachable by halving "
                    f"{self.scenario_count} scenarios (allowed: {halving})")
        object.__setattr__(self, "levels", tuple(sorted(levels, reverse=True)))

    def halving_counts(self) -> list[int]:
        counts = [self.scenario_count]
        while counts[-1] > 1:
            counts.append(math.ceil(counts[-1] / 2))
        return counts


@dataclass
class ExperimentRow:
    instance_id: int
    scheme: str
    scenario_count: int
    value: float | None
    opt_value: float | None
    ratio: float | None
    wall_time_ms: float
    status: str = "ok"
    solution_selected: tuple[int, ...] = field(default=(), repr=False)


def _ratio(value: float, opt: float) -> float:
    if opt > 0:
        return value / opt
    return 1.0 if value <= 1e-12 else math.inf


def run_experiment(config: ExperimentConfig, progress=None) -> list[ExperimentRow]:
    """Execute the sweep; returns rows in deterministic order (instance,
    then scheme in config order, then scenario count descending).

    Per-row failures are recorded in the status column and the run
    continues. ``progress`` (instance_id -> None) is called after each
    instance.
    """
    rows: list[ExperimentRow] = []
    for i in range(config.instance_count):
        rows.extend(_run_instance(config, i))
        if progress is not None:
            progress(i)
    order = {s: j for j, s in enumerate(config.schemes)}
    rows.sort(key=lambda r: (r.instance_id, order[r.scheme], -r.scenario_count))
    return rows


def _run_instance(config: ExperimentConfig, i: int) -> list[ExperimentRow]:
    K = config.scenario_count
    instance = gen_layered(config.layers, config.width, K, config.seed + i)
    mode = "regret" if config.criterion == "regret" else "minmax"
    optima = per_scenario_optima(instance) if mode == "regret" else None

    def solve(problem, offsets, hint):
        if mode == "minmax":
            return exact_minmax(problem, upper_bound_hint=hint)
        return exact_generalized_regret(problem, offsets,
                                        upper_bound_hint=hint)

    def true_value(x) -> float:
        values = instance.scenarios.matrix @ x.incidence
        if mode == "regret":
            values = values - optima
        return float(values.max())

    results: dict[tuple[str, int], ExperimentRow] = {}
    incumbent = None
    pool: list[np.ndarray] = []  # solutions found so far, for bound seeding

    def pool_hint(agg) -> float | None:
        # Any feasible solution upper-bounds any objective it is evaluated
        # under, so earlier levels' solutions seed later solves.
        if not pool:
            return None
        matrix = agg.scenarios.matrix
        d = 0.0 if agg.offsets is None else agg.offsets
        return min(float(np.max(matrix @ x - d)) for x in pool)

    # Reduced levels first (cheapest upward); their solutions seed the
    # incumbent bound for the expensive full-set solve.
    for scheme in config.schemes:
        try:
            sweep = aggregate_sweep(instance, scheme, mode, opt_values=optima)
        except Exception as exc:  # pragma: no cover - defensive
            for count in config.levels:
                results[(scheme, count)] = ExperimentRow(
                    i, scheme, count, None, None, None, 0.0,
                    status=f"error:{type(exc).__name__}")
            continue
        for count in sorted(config.levels):
            if count == K:
                continue
            agg = sweep[count]
            start = time.perf_counter()
            try:
                res = solve(agg, agg.offsets, pool_hint(agg))
                x = res.solution
                val = true_value(x)
                elapsed = (time.perf_counter() - start) * 1000.0
                if incumbent is None or val < incumbent:
                    incumbent = val
                pool.append(x.incidence)
                results[(scheme, count)] = ExperimentRow(
                    i, scheme, count, val, None, None, elapsed,
                    solution_selected=x.selected)
            except CapExceededError:
                elapsed = (time.perf_counter() - start) * 1000.0
                results[(scheme, count)] = ExperimentRow(
                    i, scheme, count, None, None, None, elapsed, status="cap")
            except Exception as exc:  # pragma: no cover - defensive
                elapsed = (time.perf_counter() - start) * 1000.0
                results[(scheme, count)] = ExperimentRow(
                    i, scheme, count, None, None, None, elapsed,
                    status=f"error:{type(exc).__name__}")

    opt_value = None
    opt_status = "ok"
    start = time.perf_counter()
    try:
        opt_res = solve(instance, optima, incumbent)
        opt_value = opt_res.value
        opt_selected = opt_res.solution.selected
    except CapExceededError:
        opt_status = "cap"
        opt_selected = ()
    except Exception as exc:  # pragma: no cover - defensive
        opt_status = f"error:{type(exc).__name__}"
        opt_selected = ()
    opt_elapsed = (time.perf_counter() - start) * 1000.0

    out = []
    for scheme in config.schemes:
        for count in config.levels:
            if count == K:
                row = ExperimentRow(
                    i, scheme, K, opt_value, opt_value,
                    1.0 if opt_value is not None else None,
                    opt_elapsed, status=opt_status,
                    solution_selected=opt_selected)
            else:
                row = results[(scheme, count)]
                if row.status == "ok" and opt_value is not None:
                    row.opt_value = opt_value
                    row.ratio = _ratio(row.value, opt_value)
                elif row.status == "ok":
                    row.status = f"opt_{opt_status}"
            out.append(row)
    return out


# ---------------------------------------------------------------------------
# output


def _fmt(value) -> str:
    return "" if value is None else repr(float(value))


def write_csv(rows: list[ExperimentRow], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r.instance_id},{r.scheme},{r.scenario_count},"
                f"{_fmt(r.value)},{_fmt(r.opt_value)},{_fmt(r.ratio)},"
                f"{r.wall_time_ms:.3f},{r.status}\n")


def summarize(rows: list[ExperimentRow]):
    """Mean and population standard deviation of the ratio per
    (scheme, scenario count), skipping failed rows."""
    table = {}
    for r in rows:
        if r.status != "ok" or r.ratio is None:
            continue
        table.setdefault((r.scheme, r.scenario_count), []).append(r.ratio)
    out = []
    for (scheme, count), ratios in sorted(
            table.items(), key=lambda kv: (kv[0][0], -kv[0][1])):
        arr = np.array(ratios)
        out.append((scheme, count, float(arr.mean()), float(arr.std()),
                    len(ratios)))
    return out


def format_summary(rows: list[ExperimentRow]) -> str:
    lines = [f"{'scheme':<12} {'scenarios':>9} {'mean ratio':>11} "
             f"{'std':>8} {'rows':>6}"]
    for scheme, count, mean, std, n in summarize(rows):
        lines.append(f"{scheme:<12} {count:>9} {mean:>11.4f} {std:>8.4f} "
                     f"{n:>6}")
    return "\n".join(lines)


def render_svg(rows: list[ExperimentRow], path) -> None:
    """Minimal self-contained line chart: mean ratio vs. scenario count,
    one series per scheme. Deterministic for identical rows."""
    stats = summarize(rows)
    schemes = sorted({s for s, *_ in stats})
    counts = sorted({c for _, c, *_ in stats})
    series = {
        s: [(c, m) for s2, c, m, _, _ in stats if s2 == s] for s in schemes}

    width, height = 640, 440
    ml, mr, mt, mb = 70, 30, 30, 60
    plot_w, plot_h = width - ml - mr, height - mt - mb
    ymax = max((m for pts in series.values() for _, m in pts), default=1.0)
    ymax = max(ymax * 1.05, 1.05)
    ymin = 1.0

    def xpos(count):
        if len(counts) == 1:
            return ml + plot_w / 2
        return ml + plot_w * counts.index(count) / (len(counts) - 1)

    def ypos(v):
        return mt + plot_h * (1 - (v - ymin) / (ymax - ymin))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{ml}" y1="{mt + plot_h}" x2="{ml + plot_w}" '
        f'y2="{mt + plot_h}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + plot_h}" '
        f'stroke="black"/>',
    ]
    for count in counts:
        x = xpos(count)
        parts.append(f'<line x1="{x:.2f}" y1="{mt + plot_h}" x2="{x:.2f}" '
                     f'y2="{mt + plot_h + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{mt + plot_h + 20}" '
                     f'font-size="12" text-anchor="middle">{count}</text>')
    for tick in np.linspace(ymin, ymax, 5):
        y = ypos(tick)
        parts.append(f'<line x1="{ml - 5}" y1="{y:.2f}" x2="{ml}" '
                     f'y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{ml - 8}" y="{y + 4:.2f}" font-size="12" '
                     f'text-anchor="end">{tick:.2f}</text>')
    parts.append(f'<text x="{ml + plot_w / 2}" y="{height - 15}" '
                 f'font-size="13" text-anchor="middle">number of scenarios'
                 f'</text>')
    parts.append(f'<text x="18" y="{mt + plot_h / 2}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 18 '
                 f'{mt + plot_h / 2})">relative worst-case performance</text>')
    for idx, scheme in enumerate(schemes):
        color, dash = _SCHEME_STYLE.get(scheme, ("#2ca02c", None))
        pts = " ".join(f"{xpos(c):.2f},{ypos(m):.2f}" for c, m in
                       sorted(series[scheme]))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="2"{dash_attr}/>')
        for c, m in series[scheme]:
            parts.append(f'<circle cx="{xpos(c):.2f}" cy="{ypos(m):.2f}" '
                         f'r="3" fill="{color}"/>')
        ly = mt + 16 + 18 * idx
        parts.append(f'<line x1="{ml + plot_w - 150}" y1="{ly}" '
                     f'x2="{ml + plot_w - 120}" y2="{ly}" stroke="{color}" '
                     f'stroke-width="2"{dash_attr}/>')
        parts.append(f'<text x="{ml + plot_w - 112}" y="{ly + 4}" '
                     f'font-size="12">{scheme}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")

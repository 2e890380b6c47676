"""Pareto-front utilities: dominance, filtering, hypervolume, scalarization.

Hypervolume is exact: sort-and-sweep in 2D and slab slicing over the third
objective in 3D. A naive inclusion-exclusion implementation is kept as a
cross-check oracle for small fronts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .model import CostVector

DEFAULT_REF_2D = (100.0, 100.0)
DEFAULT_REF_3D = (300.0, 300.0, 300.0)
DEFAULT_PRICES = (0, 10, 20, 40, 80, 160, 240, 400)


def default_reference(mode: int) -> tuple[float, ...]:
    return DEFAULT_REF_2D if mode == 2 else DEFAULT_REF_3D


def dominates(a: CostVector, b: CostVector) -> bool:
    """a weakly better everywhere and strictly better somewhere (minimization)."""
    if a.mode != b.mode:
        raise ValueError("cost vectors have different objective modes")
    ao, bo = a.objectives, b.objectives
    return all(x <= y for x, y in zip(ao, bo)) and any(x < y for x, y in zip(ao, bo))


def point_dominates(a: tuple[float, ...], b: tuple[float, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def pareto_filter(points: list[tuple[float, ...]]) -> list[tuple[float, ...]]:
    """Maximal non-dominated subset, deduplicated, sorted lexicographically."""
    unique = sorted(set(points))
    return [p for p in unique
            if not any(point_dominates(q, p) for q in unique if q != p)]


@dataclass
class ClipReport:
    clipped: list[tuple[float, ...]] = field(default_factory=list)

    @property
    def warnings(self) -> list[str]:
        return [f"point {p} not dominated by the reference point; clipped"
                for p in self.clipped]


def _clip(points: list[tuple[float, ...]], ref: tuple[float, ...],
          report: ClipReport | None) -> list[tuple[float, ...]]:
    out = []
    for p in points:
        if len(p) != len(ref):
            raise ValueError("point/reference dimensionality mismatch")
        if any(x >= r for x, r in zip(p, ref)):
            if report is not None:
                report.clipped.append(p)
            clipped = tuple(min(x, r) for x, r in zip(p, ref))
            out.append(clipped)
        else:
            out.append(p)
    return out


def hypervolume(points: list[tuple[float, ...]], ref: tuple[float, ...],
                report: ClipReport | None = None) -> float:
    """Exact dominated volume of `points` up to the reference point."""
    if not points:
        return 0.0
    pts = pareto_filter(_clip(points, ref, report))
    if len(ref) == 2:
        return _hv2(pts, ref)
    if len(ref) == 3:
        return _hv3(pts, ref)
    raise ValueError("hypervolume supports 2 or 3 objectives")


def _hv2(points: list[tuple[float, ...]], ref: tuple[float, ...]) -> float:
    # points are non-dominated and sorted ascending in x, so descending in y
    hv = 0.0
    prev_y = ref[1]
    for x, y in points:
        if x >= ref[0] or y >= prev_y:
            continue
        hv += (ref[0] - x) * (prev_y - y)
        prev_y = y
    return hv


def _hv3(points: list[tuple[float, ...]], ref: tuple[float, ...]) -> float:
    # slab decomposition along the third objective
    zs = sorted({p[2] for p in points})
    hv = 0.0
    for i, z in enumerate(zs):
        z_next = zs[i + 1] if i + 1 < len(zs) else ref[2]
        if z_next <= z:
            continue
        slab = pareto_filter([(p[0], p[1]) for p in points if p[2] <= z])
        hv += _hv2(slab, (ref[0], ref[1])) * (z_next - z)
    return hv


def hypervolume_inclusion_exclusion(points: list[tuple[float, ...]],
                                    ref: tuple[float, ...]) -> float:
    """Exponential-time oracle; only for small fronts (tests)."""
    pts = pareto_filter(_clip(points, ref, None))
    hv = 0.0
    for r in range(1, len(pts) + 1):
        for subset in itertools.combinations(pts, r):
            vol = 1.0
            for d in range(len(ref)):
                edge = ref[d] - max(p[d] for p in subset)
                vol *= max(edge, 0.0)
            hv += vol if r % 2 == 1 else -vol
    return hv


def scalar_cost(cost: CostVector, hourly_price: float) -> float:
    """Dollars: material plus labor at `hourly_price` per hour (f_t in minutes)."""
    return cost.f_c + hourly_price * cost.f_t / 60.0


def scalarize(costs: list[CostVector], hourly_price: float) -> tuple[int, float]:
    """Index of the cheapest front member after scalarization, and its cost.

    Ties break toward lower f_c, then lower f_t.
    """
    if not costs:
        raise ValueError("front is empty")
    best = min(
        range(len(costs)),
        key=lambda i: (scalar_cost(costs[i], hourly_price),
                       costs[i].f_c, costs[i].f_t),
    )
    return best, scalar_cost(costs[best], hourly_price)


def improvement_table(
    front_a: list[CostVector],
    front_b: list[CostVector],
    prices: tuple[float, ...] = DEFAULT_PRICES,
) -> list[int | None]:
    """Integer percent improvement of front_b over front_a per price.

    None marks an undefined entry (zero scalarized baseline).
    """
    if not front_a or not front_b:
        raise ValueError("both fronts must be nonempty")
    out: list[int | None] = []
    for price in prices:
        _, a = scalarize(front_a, price)
        _, b = scalarize(front_b, price)
        if a == 0:
            out.append(None)
        else:
            out.append(round(100.0 * (a - b) / a))
    return out

"""Exhaustive reference search for small problems.

Enumerates every design variant, every part-permutation packing over every
usable designated stock size, and every feasible cut order (full
permutations up to a size limit, per-stock permutations beyond it), then
Pareto-filters the evaluated costs. Exponential by construction; meant as
ground truth for the heuristic search on tiny inputs, not for real use.
"""

from __future__ import annotations

import itertools

from .analysis import pareto_filter
from .cost import Cut, FabPlan, PlanCost, StockInstance, evaluate_plan, order_is_feasible
from .designspace import DesignSpace, enumerate_variants
from .libraries import DEFAULT_KERF
from .model import CostVector, Design, StockSpec, Tool, ToolSpec
from .packing import (
    Arrangement,
    _assemble,
    group_parts,
    pack_traversal,
    shrink_instances,
)
from .plans import assemble_plan, cuts_for_instance, stacked_variant

FULL_PERMUTATION_LIMIT = 8


def all_arrangements(design: Design, stock_lib: list[StockSpec],
                     kerf: int = DEFAULT_KERF) -> list[Arrangement]:
    """Every packing reachable from any part order and designated size."""
    groups = group_parts(design, stock_lib)
    parts_by_id = {p.id: p for p in design.parts}
    per_group: list[list[tuple]] = []
    for key, parts in groups.items():
        family = key.split(":")[0]
        material = parts[0].material
        stocks = [s for s in stock_lib
                  if s.family == family and s.material is material]
        usable = [s for s in stocks
                  if all(p.shape[i] <= s.dims[i] for p in parts
                         for i in range(len(p.shape) if p.is_sheet else 1))]
        fragments: list[tuple] = []
        seen: set[tuple] = set()
        for order in itertools.permutations(parts):
            for designated in usable:
                fragment = pack_traversal(list(order), designated, kerf)
                fragment = shrink_instances(fragment, stocks, parts_by_id)
                # costs are blind to part labels, so dedup on shapes only
                sig = tuple(sorted(
                    (spec.id, tuple(sorted(
                        (off, parts_by_id[pid].shape) for pid, off in places)))
                    for spec, places in fragment))
                if sig not in seen:
                    seen.add(sig)
                    fragments.append(tuple(fragment))
        per_group.append(fragments)

    arrangements: list[Arrangement] = []
    seen_arr: set[tuple] = set()
    for combo in itertools.product(*per_group):
        arrangement = _assemble(design, combo)
        sig = arrangement.signature()
        if sig not in seen_arr:
            seen_arr.add(sig)
            arrangements.append(arrangement)
    return arrangements


def all_cut_orders(per_stock: list[tuple[StockInstance, list[Cut]]]) -> list[list[Cut]]:
    """Every feasible ordering, including interleavings across stocks."""
    flat = [c for _, cuts in per_stock for c in cuts]
    if len(flat) <= FULL_PERMUTATION_LIMIT:
        return [list(p) for p in itertools.permutations(flat)
                if order_is_feasible(list(p))]
    # too many cuts for full interleaving: permute within each stock and
    # try every run order across stocks
    per_stock_orders = []
    for _, cuts in per_stock:
        if len(cuts) <= FULL_PERMUTATION_LIMIT:
            orders = [list(p) for p in itertools.permutations(cuts)
                      if order_is_feasible(list(p))]
        else:
            orders = [list(cuts)]
        per_stock_orders.append(orders)
    results = []
    for stock_perm in itertools.permutations(range(len(per_stock))):
        for combo in itertools.product(*per_stock_orders):
            order = [c for idx in stock_perm for c in combo[idx]]
            results.append(order)
    return results


def brute_force_design(
    design: Design,
    stock_lib: list[StockSpec],
    tools: dict[Tool, ToolSpec],
    mode: int = 2,
) -> list[tuple[FabPlan, PlanCost]]:
    """All non-dominated plans for one fixed design."""
    parts_by_id = {p.id: p for p in design.parts}
    evaluated: list[tuple[FabPlan, PlanCost]] = []
    for arrangement in all_arrangements(design, stock_lib):
        grouped: dict[str, list] = {}
        for p in arrangement.placements:
            grouped.setdefault(p.stock_key, []).append((p.part_id, p.offset))
        per_stock = [
            (arrangement.instance(key),
             cuts_for_instance(arrangement.instance(key), places,
                               parts_by_id, tools))
            for key, places in sorted(grouped.items())
        ]
        for order in all_cut_orders(per_stock):
            plan = FabPlan(
                design_id=design.id,
                cuts=tuple(order),
                stock_bill=tuple(inst for inst, _ in per_stock),
            )
            evaluated.append((plan, evaluate_plan(plan, tools)))
        for reordered in _stacking_orders(per_stock):
            stacked = stacked_variant(design.id, reordered, tools)
            if stacked is not None:
                evaluated.append((stacked, evaluate_plan(stacked, tools)))
    return _pareto(evaluated, mode)


def _stacking_orders(per_stock):
    """Stacking-compatible reorderings: stock order x shared in-stock order.

    Stocks with identical cut-geometry sequences must be permuted by the
    same index permutation or they no longer stack, so permutations are
    chosen per geometry group.
    """
    groups: dict[tuple, list[int]] = {}
    for i, (inst, cuts) in enumerate(per_stock):
        key = (inst.spec.id, tuple(c.geometry_key() for c in cuts))
        groups.setdefault(key, []).append(i)
    keys = list(groups)
    per_key_perms = []
    for key in keys:
        n = len(per_stock[groups[key][0]][1])
        perms = (list(itertools.permutations(range(n)))
                 if n <= FULL_PERMUTATION_LIMIT else [tuple(range(n))])
        per_key_perms.append(perms)
    for stock_order in itertools.permutations(range(len(per_stock))):
        for perm_combo in itertools.product(*per_key_perms):
            perm_of = dict(zip(keys, perm_combo))
            result = []
            feasible = True
            for i in stock_order:
                inst, cuts = per_stock[i]
                key = (inst.spec.id, tuple(c.geometry_key() for c in cuts))
                order = [cuts[j] for j in perm_of[key]]
                if not order_is_feasible(order):
                    feasible = False
                    break
                result.append((inst, order))
            if feasible:
                yield result


def brute_force_front(
    space: DesignSpace,
    stock_lib: list[StockSpec],
    tools: dict[Tool, ToolSpec],
    mode: int = 2,
) -> list[tuple[Design, FabPlan, CostVector]]:
    """Non-dominated (design, plan, cost) triples over the whole space."""
    pool: list[tuple[Design, FabPlan, PlanCost]] = []
    for design in enumerate_variants(space, space.cardinality):
        for plan, cost in brute_force_design(design, stock_lib, tools, mode):
            pool.append((design, plan, cost))
    keep = set(pareto_filter([c.vector(mode).objectives for _, _, c in pool]))
    out = []
    seen: set[tuple] = set()
    for design, plan, cost in pool:
        vec = cost.vector(mode)
        if vec.objectives in keep and vec.objectives not in seen:
            seen.add(vec.objectives)
            out.append((design, plan, vec))
    out.sort(key=lambda t: t[2].objectives)
    return out


def _pareto(evaluated, mode):
    keep = set(pareto_filter([c.vector(mode).objectives for _, c in evaluated]))
    out = []
    seen: set[tuple] = set()
    for plan, cost in evaluated:
        vec = cost.vector(mode).objectives
        if vec in keep and vec not in seen:
            seen.add(vec)
            out.append((plan, cost))
    out.sort(key=lambda t: t[1].vector(mode).objectives)
    return out

"""Fabrication-plan cost evaluation: material dollars, time, precision.

A plan is an ordered list of cuts over a bill of stock instances. Time and
precision are order-dependent: setup sharing needs consecutive cuts with
identical parameters, load/unload is paid per contiguous run on a stock,
and the measured length of a cut depends on which reference edges of its
piece survive earlier cuts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .model import (
    MEASUREMENT_GRID_TICKS,
    METAL_LOAD_FACTOR,
    METAL_OP_FACTOR,
    MAX_STACK_HEIGHT,
    CostVector,
    Material,
    StockSpec,
    Tool,
    ToolSpec,
)


class PlanError(ValueError):
    """Raised when a plan is structurally invalid."""


@dataclass(frozen=True)
class StockInstance:
    key: str  # unique within a plan, e.g. "2x2-48#0"
    spec: StockSpec


@dataclass(frozen=True)
class Cut:
    """One cutting (or drilling) operation on a stock instance.

    Generated cuts carry geometry (kind/axis/position) and get their
    measured length from piece simulation. Manual cuts (loaded from plan
    files) may instead carry an explicit measured_len and op_length.
    """

    id: str
    tool: Tool
    stock_key: str
    kind: str  # "lumber" | "sheet" | "manual" | "drill"
    axis: int = 0  # sheets: 0 = vertical cut at x, 1 = horizontal cut at y
    position: int = 0  # ticks
    anchor: tuple[int, int] = (0, 0)  # sheets: a point inside the cut's piece
    parent: Optional[str] = None  # cut that must precede this one
    measured_len: Optional[int] = None  # ticks, manual plans only
    op_length: Optional[int] = None  # ticks, manual plans only
    depth: Optional[int] = None  # ticks, drill only
    stack_group: Optional[str] = None

    def geometry_key(self) -> tuple:
        return (self.tool, self.kind, self.axis, self.position, self.anchor,
                self.measured_len, self.op_length, self.depth)


@dataclass(frozen=True)
class FabPlan:
    design_id: str
    cuts: tuple[Cut, ...]
    stock_bill: tuple[StockInstance, ...]

    def instance(self, key: str) -> StockInstance:
        for inst in self.stock_bill:
            if inst.key == key:
                return inst
        raise PlanError(f"unknown stock instance {key!r}")

    def signature(self) -> tuple:
        return (
            tuple(sorted((i.key, i.spec.id) for i in self.stock_bill)),
            tuple((c.stock_key, c.geometry_key(), c.stack_group) for c in self.cuts),
        )


@dataclass(frozen=True)
class CutTimeBreakdown:
    cut_id: str
    setup: float
    load: float
    op: float
    eps_ticks: int
    op_error_ticks: int
    merged: bool = False  # non-lead member of a stack group

    @property
    def seconds(self) -> float:
        return self.setup + self.load + self.op


@dataclass
class PlanCost:
    rows: list[CutTimeBreakdown]
    f_c: float
    f_t_seconds: float
    f_p_ticks: int

    @property
    def f_t_minutes(self) -> float:
        return self.f_t_seconds / 60.0

    @property
    def f_p_inches(self) -> float:
        return self.f_p_ticks / 64.0

    def vector(self, mode: int = 3) -> CostVector:
        if mode == 2:
            return CostVector(f_c=self.f_c, f_t=self.f_t_minutes)
        return CostVector(f_c=self.f_c, f_t=self.f_t_minutes, f_p=self.f_p_inches)


def measurement_error(measured_ticks: int) -> int:
    """Residual of a measured length against the 1/16" grid, in ticks."""
    if measured_ticks < 0:
        raise ValueError("measured length must be non-negative")
    r = measured_ticks % MEASUREMENT_GRID_TICKS
    return min(r, MEASUREMENT_GRID_TICKS - r)


class _Sim1D:
    """Piece tracker for a lumber stock: intervals with original-edge flags."""

    def __init__(self, length: int) -> None:
        self.pieces: list[tuple[int, int, bool, bool]] = [(0, length, True, True)]

    def cut(self, position: int, kerf: int) -> int:
        """Apply a chop at `position`; returns the governing measured length."""
        for i, (a, b, lo, ro) in enumerate(self.pieces):
            if a <= position and position + kerf <= b:
                measured = _measured_from_refs(position - a, b - position - kerf, lo, ro)
                replacement = []
                if position > a:
                    replacement.append((a, position, lo, False))
                if b > position + kerf:
                    replacement.append((position + kerf, b, False, ro))
                self.pieces[i:i + 1] = replacement
                return measured
        raise PlanError(f"1D cut at {position} hits no piece")


class _Sim2D:
    """Piece tracker for a sheet: axis-aligned rectangles (guillotine cuts)."""

    def __init__(self, width: int, height: int) -> None:
        # (x0, y0, x1, y1, orig flags: left, right, bottom, top)
        self.pieces: list[tuple[int, int, int, int, bool, bool, bool, bool]] = [
            (0, 0, width, height, True, True, True, True)
        ]

    def cut(self, axis: int, position: int, kerf: int,
            anchor: tuple[int, int]) -> tuple[int, int]:
        """Full-width/height guillotine cut through the piece containing anchor.

        Returns (measured length, cut length for operation time).
        """
        ax, ay = anchor
        for i, (x0, y0, x1, y1, lo, ro, bo, to) in enumerate(self.pieces):
            if not (x0 <= ax < x1 and y0 <= ay < y1):
                continue
            if axis == 1:  # horizontal cut at y = position
                if not (y0 <= position and position + kerf <= y1):
                    raise PlanError("horizontal cut outside its piece")
                measured = _measured_from_refs(position - y0, y1 - position - kerf, bo, to)
                replacement = []
                if position > y0:
                    replacement.append((x0, y0, x1, position, lo, ro, bo, False))
                if y1 > position + kerf:
                    replacement.append((x0, position + kerf, x1, y1, lo, ro, False, to))
                self.pieces[i:i + 1] = replacement
                return measured, x1 - x0
            else:  # vertical cut at x = position
                if not (x0 <= position and position + kerf <= x1):
                    raise PlanError("vertical cut outside its piece")
                measured = _measured_from_refs(position - x0, x1 - position - kerf, lo, ro)
                replacement = []
                if position > x0:
                    replacement.append((x0, y0, position, y1, lo, False, bo, to))
                if x1 > position + kerf:
                    replacement.append((position + kerf, y0, x1, y1, False, ro, bo, to))
                self.pieces[i:i + 1] = replacement
                return measured, y1 - y0
        raise PlanError(f"2D cut anchor {anchor} hits no piece")


def _measured_from_refs(near: int, far: int, near_orig: bool, far_orig: bool) -> int:
    """Distance from the governing reference edge to the cut.

    Original stock edges are preferred; a piece with no original edge falls
    back to its nearest (previously cut) edge.
    """
    if near_orig and far_orig:
        return min(near, far)
    if near_orig:
        return near
    if far_orig:
        return far
    return min(near, far)


def _group_stacked(cuts: tuple[Cut, ...]) -> list[list[Cut]]:
    """Group consecutive cuts sharing a stack_group into single operations."""
    ops: list[list[Cut]] = []
    for cut in cuts:
        if (ops and cut.stack_group is not None
                and ops[-1][0].stack_group == cut.stack_group):
            ops[-1].append(cut)
        else:
            ops.append([cut])
    return ops


def _validate_stack(op: list[Cut], plan: FabPlan, tools: dict[Tool, ToolSpec]) -> None:
    lead = op[0]
    if len(op) > MAX_STACK_HEIGHT:
        raise PlanError(f"stack {lead.stack_group} exceeds height {MAX_STACK_HEIGHT}")
    if not tools[lead.tool].stackable:
        raise PlanError(f"stack {lead.stack_group}: {lead.tool.value} is not stackable")
    keys = [c.stock_key for c in op]
    if len(set(keys)) != len(keys):
        raise PlanError(f"stack {lead.stack_group}: repeated stock instance")
    fam = plan.instance(lead.stock_key).spec.family
    for c in op[1:]:
        if c.geometry_key() != lead.geometry_key():
            raise PlanError(f"stack {lead.stack_group}: mismatched cut geometry")
        if plan.instance(c.stock_key).spec.family != fam:
            raise PlanError(f"stack {lead.stack_group}: mixed stock families")


def material_cost(plan: FabPlan) -> float:
    """f_c: sum of stock prices; metal stock costs 20x its wood price."""
    return sum(inst.spec.effective_price() for inst in plan.stock_bill)


def evaluate_plan(plan: FabPlan, tools: dict[Tool, ToolSpec]) -> PlanCost:
    """Full ordered evaluation producing per-cut breakdowns and totals."""
    sims: dict[str, _Sim1D | _Sim2D] = {}
    for inst in plan.stock_bill:
        if inst.spec.is_sheet:
            sims[inst.key] = _Sim2D(inst.spec.dims[0], inst.spec.dims[1])
        else:
            sims[inst.key] = _Sim1D(inst.spec.dims[0])

    rows: list[CutTimeBreakdown] = []
    f_t = 0.0
    f_p = 0
    prev_signature: Optional[tuple] = None
    current_run: Optional[tuple[str, ...]] = None

    for op in _group_stacked(plan.cuts):
        lead = op[0]
        if len(op) > 1:
            _validate_stack(op, plan, tools)
        tool = tools[lead.tool]
        spec = plan.instance(lead.stock_key).spec
        metal = spec.material is Material.METAL

        measured, op_len = _resolve_geometry(op, plan, tool, sims)

        # Operation time; every stacked member is cut simultaneously.
        if lead.kind == "drill":
            if lead.depth is None:
                raise PlanError(f"cut {lead.id}: drill cut needs a depth")
            op_seconds = tool.op_rate.seconds(lead.depth)
        else:
            op_seconds = tool.op_rate.seconds(op_len)
        if metal:
            op_seconds *= METAL_OP_FACTOR

        # Setup time: partial only when the preceding operation used the
        # same tool with identical setup parameters.
        signature = (lead.tool, lead.axis, measured)
        if tool.setup_partial is not None and prev_signature == signature:
            setup = tool.setup_partial
        else:
            setup = tool.setup_full(spec.is_sheet)
        prev_signature = signature

        # Load/unload: paid on the first operation of each contiguous run on
        # a stock (or stack of stocks); stacked followers pay partial rates.
        run_key = tuple(sorted(c.stock_key for c in op))
        if run_key != current_run:
            load = 0.0
            for j, c in enumerate(op):
                s = plan.instance(c.stock_key).spec
                if j == 0:
                    w = s.load_full + s.unload_full
                else:
                    w = s.load_partial + s.unload_partial
                if s.material is Material.METAL:
                    w *= METAL_LOAD_FACTOR
                load += w
            current_run = run_key
        else:
            load = 0.0

        eps = measurement_error(measured)
        perr = tool.op_error_for(spec.material)
        f_p += eps + perr
        f_t += setup + load + op_seconds

        rows.append(CutTimeBreakdown(lead.id, setup, load, op_seconds, eps, perr))
        for c in op[1:]:
            rows.append(CutTimeBreakdown(c.id, 0.0, 0.0, 0.0, 0, 0, merged=True))

    return PlanCost(rows=rows, f_c=material_cost(plan), f_t_seconds=f_t, f_p_ticks=f_p)


def _resolve_geometry(op: list[Cut], plan: FabPlan, tool: ToolSpec,
                      sims: dict) -> tuple[int, int]:
    """Returns (measured length, op length) for one operation, advancing sims."""
    lead = op[0]
    if lead.kind == "manual" or lead.kind == "drill":
        if lead.measured_len is None:
            raise PlanError(f"cut {lead.id}: manual cut needs measured_len")
        return lead.measured_len, lead.op_length or 0

    measured = op_len = None
    for c in op:  # all stacked members share geometry; simulate each stock
        sim = sims[c.stock_key]
        if isinstance(sim, _Sim1D):
            m = sim.cut(c.position, tool.kerf)
            length = 0
        else:
            m, length = sim.cut(c.axis, c.position, tool.kerf, anchor=c.anchor)
        if measured is None:
            measured, op_len = m, length
    assert measured is not None and op_len is not None
    return measured, op_len


def order_is_feasible(cuts: list[Cut]) -> bool:
    """Parents (guillotine dependencies) must precede their children."""
    done: set[str] = set()
    for c in cuts:
        if c.parent is not None and c.parent not in done:
            return False
        done.add(c.id)
    return True


def time_cost(plan: FabPlan, tools: dict[Tool, ToolSpec]) -> float:
    """f_t in minutes."""
    return evaluate_plan(plan, tools).f_t_minutes


def precision_cost(plan: FabPlan, tools: dict[Tool, ToolSpec]) -> float:
    """f_p in inches."""
    return evaluate_plan(plan, tools).f_p_inches


def cost_vector(plan: FabPlan, tools: dict[Tool, ToolSpec], mode: int = 3) -> CostVector:
    return evaluate_plan(plan, tools).vector(mode)

"""Arrangement generation: greedy traversal packing of parts onto stock.

Parts are grouped by stock family (and material), then packed in a
traversal order onto instances of a designated stock size: first-fit with
kerf spacing between neighbors, opening a new instance when the next part
does not fit. Lumber packs as intervals; sheets use shelf-based guillotine
packing with shelves keyed by part height. After packing, every instance is
shrunk to the cheapest stock of the family that still holds its contents,
which is how cheaper small-stock arrangements enter the search space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cost import StockInstance
from .model import Design, Part, StockSpec, part_fits_stock


class InfeasiblePartError(ValueError):
    pass


@dataclass(frozen=True)
class Placement:
    part_id: str
    stock_key: str
    offset: tuple[int, ...]  # (x,) for lumber, (x, y) for sheets


@dataclass(frozen=True)
class Arrangement:
    design_id: str
    placements: tuple[Placement, ...]
    instances: tuple[StockInstance, ...]

    def instance(self, key: str) -> StockInstance:
        for inst in self.instances:
            if inst.key == key:
                return inst
        raise KeyError(key)

    def signature(self) -> tuple:
        per_instance: dict[str, list] = {}
        spec_of: dict[str, str] = {i.key: i.spec.id for i in self.instances}
        for p in self.placements:
            per_instance.setdefault(p.stock_key, []).append((p.part_id, p.offset))
        return tuple(sorted(
            (spec_of[key], tuple(sorted(places)))
            for key, places in per_instance.items()
        ))


def group_parts(design: Design, stock_lib: list[StockSpec]) -> dict[str, list[Part]]:
    """Parts keyed by family (metal parts get their own group)."""
    families = {s.family for s in stock_lib}
    groups: dict[str, list[Part]] = {}
    for part in design.parts:
        if part.family not in families:
            raise InfeasiblePartError(f"part {part.id}: unknown family {part.family!r}")
        key = part.family if part.material.value == "wood" else f"{part.family}:metal"
        groups.setdefault(key, []).append(part)
    return {k: groups[k] for k in sorted(groups)}


@dataclass
class _OpenStock:
    spec: StockSpec
    placements: list[tuple[str, tuple[int, ...]]]
    used: int = 0  # 1D: occupied extent
    shelves: list | None = None  # 2D: [y, height, used_x]
    next_y: int = 0


def _place_1d(stock: _OpenStock, part: Part, kerf: int) -> bool:
    offset = 0 if stock.used == 0 else stock.used + kerf
    if offset + part.shape[0] > stock.spec.dims[0]:
        return False
    stock.placements.append((part.id, (offset,)))
    stock.used = offset + part.shape[0]
    return True


def _place_2d(stock: _OpenStock, part: Part, kerf: int) -> bool:
    w, h = part.shape
    width, height = stock.spec.dims
    if stock.shelves is None:
        stock.shelves = []
    for shelf in stock.shelves:
        y, sh, used_x = shelf
        if sh != h:
            continue
        x = 0 if used_x == 0 else used_x + kerf
        if x + w <= width:
            stock.placements.append((part.id, (x, y)))
            shelf[2] = x + w
            return True
    y = 0 if stock.next_y == 0 else stock.next_y + kerf
    if y + h > height or w > width:
        return False
    stock.shelves.append([y, h, w])
    stock.placements.append((part.id, (0, y)))
    stock.next_y = y + h
    return True


def pack_traversal(
    parts: list[Part], designated: StockSpec, kerf: int
) -> list[tuple[StockSpec, list[tuple[str, tuple[int, ...]]]]]:
    """Greedy first-fit packing of `parts` (in order) onto `designated` stock.

    Returns a fragment: a list of (spec, placements) per opened instance.
    Raises InfeasiblePartError when a part does not fit an empty stock.
    """
    opened: list[_OpenStock] = []
    for part in parts:
        placed = False
        for stock in opened:
            if part.is_sheet:
                placed = _place_2d(stock, part, kerf)
            else:
                placed = _place_1d(stock, part, kerf)
            if placed:
                break
        if not placed:
            stock = _OpenStock(spec=designated, placements=[])
            if not (_place_2d(stock, part, kerf) if part.is_sheet
                    else _place_1d(stock, part, kerf)):
                raise InfeasiblePartError(
                    f"part {part.id} does not fit stock {designated.id}"
                )
            opened.append(stock)
    return [(s.spec, s.placements) for s in opened]


def shrink_instances(
    fragment: list[tuple[StockSpec, list[tuple[str, tuple[int, ...]]]]],
    family_stocks: list[StockSpec],
    parts_by_id: dict[str, Part],
) -> list[tuple[StockSpec, list[tuple[str, tuple[int, ...]]]]]:
    """Swap each instance for the cheapest family stock that holds its spread."""
    out = []
    for spec, placements in fragment:
        if spec.is_sheet:
            w_used = max(off[0] + parts_by_id[pid].shape[0] for pid, off in placements)
            h_used = max(off[1] + parts_by_id[pid].shape[1] for pid, off in placements)
            candidates = [
                s for s in family_stocks
                if s.is_sheet and s.dims[0] >= w_used and s.dims[1] >= h_used
                and s.material is spec.material
            ]
        else:
            span = max(off[0] + parts_by_id[pid].shape[0] for pid, off in placements)
            candidates = [
                s for s in family_stocks
                if not s.is_sheet and s.dims[0] >= span and s.material is spec.material
            ]
        best = min(candidates, key=lambda s: (s.effective_price(), s.capacity, s.id),
                   default=spec)
        out.append((best, placements))
    return out


def _traversal_orders(parts: list[Part], budget: int, rng: random.Random) -> list[list[Part]]:
    """Size-descending first, then input order, then random permutations."""
    def size_key(p: Part) -> tuple:
        area = p.shape[0] * (p.shape[1] if p.is_sheet else 1)
        return (-area, p.id)

    orders: list[list[Part]] = []
    seen: set[tuple[str, ...]] = set()

    def push(order: list[Part]) -> None:
        key = tuple(p.id for p in order)
        if key not in seen:
            seen.add(key)
            orders.append(order)

    push(sorted(parts, key=size_key))
    if len(orders) < budget:
        push(list(parts))
    attempts = 0
    while len(orders) < budget and attempts < budget * 10:
        shuffled = list(parts)
        rng.shuffle(shuffled)
        push(shuffled)
        attempts += 1
    return orders[:budget]


def generate_arrangements(
    design: Design,
    stock_lib: list[StockSpec],
    traversals: int,
    kerf: int,
    rng: random.Random,
) -> list[Arrangement]:
    """Up to `traversals` packings per designated stock size, deduplicated.

    Every usable stock size of each family is tried as the designated size;
    fragments across families combine by cross product (capped).
    """
    if traversals < 1:
        raise ValueError("traversal budget must be >= 1")
    groups = group_parts(design, stock_lib)
    parts_by_id = {p.id: p for p in design.parts}

    per_group_fragments: list[list[tuple]] = []
    for key, parts in groups.items():
        family = key.split(":")[0]
        material = parts[0].material
        stocks = sorted(
            (s for s in stock_lib
             if s.family == family and s.material is material),
            key=lambda s: (-s.capacity, s.id),
        )
        if not stocks:
            raise InfeasiblePartError(f"no {material.value} stock in family {family!r}")
        usable = [s for s in stocks if all(part_fits_stock(p, s) for p in parts)]
        if not usable:
            raise InfeasiblePartError(
                f"some part of group {key!r} fits no single stock size"
            )
        fragments: list[tuple] = []
        seen: set[tuple] = set()
        orders = _traversal_orders(parts, traversals, rng)
        for designated in usable:
            for order in orders:
                fragment = pack_traversal(order, designated, kerf)
                fragment = shrink_instances(fragment, stocks, parts_by_id)
                sig = tuple(sorted(
                    (spec.id, tuple(sorted(places))) for spec, places in fragment
                ))
                if sig not in seen:
                    seen.add(sig)
                    fragments.append(tuple(fragment))
        per_group_fragments.append(fragments)

    import itertools

    arrangements: list[Arrangement] = []
    seen_arr: set[tuple] = set()
    cap = max(traversals * 4, sum(len(f) for f in per_group_fragments))
    for combo in itertools.product(*per_group_fragments):
        arrangement = _assemble(design, combo)
        sig = arrangement.signature()
        if sig not in seen_arr:
            seen_arr.add(sig)
            arrangements.append(arrangement)
        if len(arrangements) >= cap:
            break
    return arrangements


def _assemble(design: Design, fragments: tuple) -> Arrangement:
    counters: dict[str, int] = {}
    instances: list[StockInstance] = []
    placements: list[Placement] = []
    for fragment in fragments:
        for spec, places in fragment:
            n = counters.get(spec.id, 0)
            counters[spec.id] = n + 1
            key = f"{spec.id}#{n}"
            instances.append(StockInstance(key=key, spec=spec))
            for part_id, offset in sorted(places):
                placements.append(Placement(part_id, key, tuple(offset)))
    placements.sort(key=lambda p: (p.stock_key, p.offset, p.part_id))
    return Arrangement(
        design_id=design.id,
        placements=tuple(placements),
        instances=tuple(instances),
    )

"""BOP e-graph: a compact encoding of alternative fabrication arrangements.

E-classes are keyed by the set of parts they fabricate; e-nodes are either
atomic (one packed stock instance) or compositions of disjoint child
classes. Because compose children cover strict subsets of their parent's
part set, the graph is acyclic by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .model import StockSpec
from .packing import Arrangement


@dataclass(frozen=True)
class AtomicNode:
    id: str
    spec: StockSpec
    placements: tuple[tuple[str, tuple[int, ...]], ...]  # (part_id, offset)

    @property
    def part_set(self) -> frozenset[str]:
        return frozenset(p for p, _ in self.placements)


@dataclass(frozen=True)
class ComposeNode:
    id: str
    children: tuple[str, ...]  # e-class ids, sorted


ENode = AtomicNode | ComposeNode


@dataclass
class EClass:
    id: str
    part_set: frozenset[str]
    nodes: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Term:
    root: str
    chosen: dict[str, str]  # class id -> node id over the selection closure

    def signature(self) -> tuple:
        return (self.root, tuple(sorted(self.chosen.items())))


class BopEGraph:
    def __init__(self, design_id: str, part_ids: frozenset[str]) -> None:
        self.design_id = design_id
        self.design_parts = part_ids
        self.classes: dict[str, EClass] = {}
        self.nodes: dict[str, ENode] = {}
        self._class_of_partset: dict[frozenset[str], str] = {}
        self._hashcons: dict[tuple, str] = {}
        self._next = 0
        self._next_class = 0

    # -- construction -----------------------------------------------------

    def _class_for(self, part_set: frozenset[str]) -> EClass:
        cid = self._class_of_partset.get(part_set)
        if cid is None:
            cid = f"c{self._next_class}"
            self._next_class += 1
            self._class_of_partset[part_set] = cid
            self.classes[cid] = EClass(id=cid, part_set=part_set)
        return self.classes[cid]

    @property
    def root(self) -> Optional[str]:
        return self._class_of_partset.get(self.design_parts)

    def _intern(self, signature: tuple, build: Callable[[str], ENode],
                part_set: frozenset[str], new_ids: list[str]) -> str:
        nid = self._hashcons.get(signature)
        if nid is not None:
            return nid
        nid = f"n{self._next}"
        self._next += 1
        node = build(nid)
        self.nodes[nid] = node
        self._hashcons[signature] = nid
        eclass = self._class_for(part_set)
        eclass.nodes.append(nid)
        new_ids.append(nid)
        return nid

    def add_arrangement(self, arrangement: Arrangement) -> list[str]:
        """Insert one atomic e-node per stock instance plus a compose node
        stitching them under the root class; hash-consed, so re-adding the
        same arrangement is a no-op."""
        covered = {p.part_id for p in arrangement.placements}
        if covered != self.design_parts:
            raise ValueError(
                f"arrangement covers {sorted(covered)} but design has "
                f"{sorted(self.design_parts)}"
            )
        per_instance: dict[str, list] = {}
        for p in arrangement.placements:
            per_instance.setdefault(p.stock_key, []).append((p.part_id, p.offset))

        new_ids: list[str] = []
        child_classes = []
        for key in sorted(per_instance):
            spec = arrangement.instance(key).spec
            placements = tuple(sorted(per_instance[key]))
            part_set = frozenset(pid for pid, _ in placements)
            sig = ("atomic", spec.id, placements)
            self._intern(
                sig,
                lambda nid, s=spec, pl=placements: AtomicNode(nid, s, pl),
                part_set,
                new_ids,
            )
            child_classes.append(self._class_for(part_set).id)

        if len(child_classes) > 1:
            children = tuple(sorted(child_classes))
            sig = ("compose", children)
            self._intern(
                sig,
                lambda nid, ch=children: ComposeNode(nid, ch),
                self.design_parts,
                new_ids,
            )
        return new_ids

    # -- queries ----------------------------------------------------------

    def sample_term(self, rng: random.Random) -> Term:
        root = self.root
        if root is None:
            raise ValueError("e-graph has no root class yet")
        chosen: dict[str, str] = {}
        stack = [root]
        while stack:
            cid = stack.pop()
            if cid in chosen:
                continue
            eclass = self.classes[cid]
            nid = rng.choice(eclass.nodes)
            chosen[cid] = nid
            node = self.nodes[nid]
            if isinstance(node, ComposeNode):
                stack.extend(node.children)
        return Term(root=root, chosen=chosen)

    def term_from_choices(self, choices: dict[str, str]) -> Term:
        """Close a (possibly over-complete) choice map from the root."""
        root = self.root
        assert root is not None
        chosen: dict[str, str] = {}
        stack = [root]
        while stack:
            cid = stack.pop()
            if cid in chosen:
                continue
            nid = choices.get(cid)
            if nid is None or nid not in self.classes[cid].nodes:
                nid = self.classes[cid].nodes[0]
            chosen[cid] = nid
            node = self.nodes[nid]
            if isinstance(node, ComposeNode):
                stack.extend(node.children)
        return Term(root=root, chosen=chosen)

    def atomic_nodes_of(self, term: Term) -> list[AtomicNode]:
        out = []
        for cid in sorted(term.chosen):
            node = self.nodes[term.chosen[cid]]
            if isinstance(node, AtomicNode):
                out.append(node)
        return out

    def count_terms(self) -> int:
        root = self.root
        if root is None:
            return 0
        memo: dict[str, int] = {}

        def count_class(cid: str) -> int:
            if cid in memo:
                return memo[cid]
            total = 0
            for nid in self.classes[cid].nodes:
                node = self.nodes[nid]
                if isinstance(node, AtomicNode):
                    total += 1
                else:
                    prod = 1
                    for child in node.children:
                        prod *= count_class(child)
                    total += prod
            memo[cid] = total
            return total

        return count_class(root)

    def check_acyclic(self) -> bool:
        """Compose children must cover strictly smaller part sets."""
        for node in self.nodes.values():
            if isinstance(node, ComposeNode):
                parent = self._partset_of_node(node.id)
                for child in node.children:
                    if not self.classes[child].part_set < parent:
                        return False
        return True

    def _partset_of_node(self, nid: str) -> frozenset[str]:
        for eclass in self.classes.values():
            if nid in eclass.nodes:
                return eclass.part_set
        raise KeyError(nid)

    # -- contraction -------------------------------------------------------

    def contract(
        self,
        pareto_terms: list[Term],
        n: int,
        scalar_bound: Callable[[str], float] | None = None,
    ) -> None:
        """Keep the top-n e-nodes per class, ranked by appearances in the
        given Pareto terms, then by scalarized lower bound, then by id."""
        if n < 1:
            raise ValueError("n must be >= 1")
        appearances: dict[str, int] = {}
        for term in pareto_terms:
            for nid in term.chosen.values():
                appearances[nid] = appearances.get(nid, 0) + 1

        bound = scalar_bound or (lambda nid: 0.0)
        for eclass in self.classes.values():
            ranked = sorted(
                eclass.nodes,
                key=lambda nid: (-appearances.get(nid, 0), bound(nid), nid),
            )
            eclass.nodes = ranked[:n]

        self._garbage_collect()

    def _garbage_collect(self) -> None:
        root = self.root
        live_classes: set[str] = set()
        if root is not None:
            stack = [root]
            while stack:
                cid = stack.pop()
                if cid in live_classes:
                    continue
                live_classes.add(cid)
                for nid in self.classes[cid].nodes:
                    node = self.nodes[nid]
                    if isinstance(node, ComposeNode):
                        stack.extend(node.children)
        self.classes = {cid: c for cid, c in self.classes.items() if cid in live_classes}
        self._class_of_partset = {
            c.part_set: cid for cid, c in self.classes.items()
        }
        live_nodes = {nid for c in self.classes.values() for nid in c.nodes}
        self.nodes = {nid: nd for nid, nd in self.nodes.items() if nid in live_nodes}
        self._hashcons = {
            sig: nid for sig, nid in self._hashcons.items() if nid in live_nodes
        }

    # -- debugging ----------------------------------------------------------

    def to_dot(self) -> str:
        lines = ["digraph bop {", "  rankdir=TB;"]
        for cid in sorted(self.classes):
            eclass = self.classes[cid]
            label = ",".join(sorted(eclass.part_set))
            lines.append(f'  "{cid}" [shape=box,label="{cid}: {{{label}}}"];')
            for nid in eclass.nodes:
                node = self.nodes[nid]
                if isinstance(node, AtomicNode):
                    lines.append(f'  "{nid}" [label="{nid}: {node.spec.id}"];')
                else:
                    lines.append(f'  "{nid}" [label="{nid}: compose"];')
                    for child in node.children:
                        lines.append(f'  "{nid}" -> "{child}";')
                lines.append(f'  "{cid}" -> "{nid}" [style=dashed];')
        lines.append("}")
        return "\n".join(lines)

"""Virtual-stack layer layouts and simultaneous lattice-surgery routability.

A layout is a stack of small 2D grids; each cell is free or holds a patch
with a boundary orientation (which sides expose X vs Z).  A merge request
names two patches and the operators to join; it routes along a path of free
cells on the patches' common layer, the endpoints adjacent to boundary sides
exposing the requested operators.  Requests are served simultaneously, so
paths on the same layer must be vertex-disjoint.  Vertical transversal SWAPs
(patch <-> free cell directly above or below) are the moves the planner
searches over.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

Cell = tuple[int, int]

LAYER_ROLES = ("memory", "short_range", "mid_range", "long_range")


@dataclass(frozen=True)
class PatchCell:
    patch_id: str
    # orientation: the boundary type of the north/south sides; east/west get
    # the other type (rotated patches expose opposite types on opposite sides)
    ns: str = "Z"

    @property
    def ew(self) -> str:
        return "X" if self.ns == "Z" else "Z"

    def side_type(self, direction: str) -> str:
        return self.ns if direction in ("N", "S") else self.ew


@dataclass
class LayerStackLayout:
    rows: int
    cols: int
    layers: list[dict[Cell, PatchCell]]
    layer_roles: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.layer_roles:
            self.layer_roles = ["mid_range"] * len(self.layers)
        seen: dict[str, int] = {}
        for li, layer in enumerate(self.layers):
            for cell, patch in layer.items():
                r, c = cell
                if not (0 <= r < self.rows and 0 <= c < self.cols):
                    raise ValueError(f"patch {patch.patch_id} outside the grid")
                if patch.patch_id in seen:
                    raise ValueError(f"duplicate patch id {patch.patch_id}")
                seen[patch.patch_id] = li

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def find(self, patch_id: str) -> tuple[int, Cell]:
        for li, layer in enumerate(self.layers):
            for cell, patch in layer.items():
                if patch.patch_id == patch_id:
                    return li, cell
        raise KeyError(f"no patch {patch_id!r} in the layout")

    def free(self, layer: int, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.rows and 0 <= c < self.cols and cell not in self.layers[layer]

    def access_cells(self, layer: int, patch_id: str, operator: str) -> list[Cell]:
        """Free cells adjacent to a boundary side exposing `operator`."""
        li, (r, c) = self.find(patch_id)
        if li != layer:
            return []
        patch = self.layers[layer][(r, c)]
        out = []
        for direction, (dr, dc) in (("N", (-1, 0)), ("S", (1, 0)),
                                    ("W", (0, -1)), ("E", (0, 1))):
            if patch.side_type(direction) != operator:
                continue
            cell = (r + dr, c + dc)
            if self.free(layer, cell):
                out.append(cell)
        return sorted(out)

    def copy(self) -> "LayerStackLayout":
        return LayerStackLayout(self.rows, self.cols,
                                [dict(l) for l in self.layers], list(self.layer_roles))

    def occupancy_key(self) -> tuple:
        return tuple(tuple(sorted((cell, p.patch_id) for cell, p in layer.items()))
                     for layer in self.layers)

    def to_text(self) -> str:
        lines = [f"dims {self.rows}x{self.cols} layers {self.num_layers}"]
        for li, layer in enumerate(self.layers):
            lines.append(f"layer {li} role={self.layer_roles[li]}")
            for r in range(self.rows):
                row = []
                for c in range(self.cols):
                    p = layer.get((r, c))
                    row.append(".".ljust(4) if p is None
                               else f"{p.patch_id}:{p.ns}".ljust(4))
                lines.append("  " + " ".join(row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MergeRequest:
    patch_a: str
    operator_a: str
    patch_b: str
    operator_b: str
    layer: Optional[int] = None     # None: evaluated wherever both patches sit

    def __str__(self) -> str:
        return f"{self.operator_a}({self.patch_a})*{self.operator_b}({self.patch_b})"


@dataclass
class RoutingResult:
    feasible: bool
    paths: dict[MergeRequest, tuple[Cell, ...]] = field(default_factory=dict)
    layers: dict[MergeRequest, int] = field(default_factory=dict)
    explored: int = 0               # states visited; the exhaustion certificate

    def __bool__(self) -> bool:
        return self.feasible


def generate_layout(kind: str, num_patches: int, rows: int, cols: int,
                    num_layers: int = 1, ids: Optional[Sequence[str]] = None,
                    ns: str = "Z") -> LayerStackLayout:
    """Hallway / checkerboard / empty layer generators.

    hallway: a row of patch stacks along the top with one-cell gaps and a
    corridor row beneath (num_patches per layer, every layer identical up to
    priming of the ids).  checkerboard: patches on alternating cells, row
    major.  empty: all-free layers.
    """
    ids = list(ids) if ids is not None else [str(i + 1) for i in range(num_patches)]
    layers: list[dict[Cell, PatchCell]] = []
    if kind == "empty":
        return LayerStackLayout(rows, cols, [{} for _ in range(num_layers)],
                                ["long_range"] * num_layers)
    for li in range(num_layers):
        suffix = "'" * li
        layer: dict[Cell, PatchCell] = {}
        if kind == "hallway":
            if cols < 2 * num_patches + 1 or rows < 2:
                raise ValueError("hallway needs cols >= 2k+1 and a corridor row")
            for i in range(num_patches):
                layer[(0, 2 * i + 1)] = PatchCell(ids[i] + suffix, ns)
        elif kind == "checkerboard":
            cells = [(r, c) for r in range(rows) for c in range(cols) if (r + c) % 2 == 1]
            if len(cells) < num_patches:
                raise ValueError("checkerboard overflow")
            for i in range(num_patches):
                layer[cells[i]] = PatchCell(ids[i] + suffix, ns)
        else:
            raise ValueError(f"unknown layout kind {kind!r}")
        layers.append(layer)
    return LayerStackLayout(rows, cols, layers)


# -- routing ---------------------------------------------------------------------

def _neighbors(cell: Cell) -> list[Cell]:
    r, c = cell
    return [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]


def _all_paths(layout: LayerStackLayout, layer: int, starts: list[Cell],
               goals: set[Cell], blocked: set[Cell]) -> Iterable[tuple[Cell, ...]]:
    """Every simple path of free cells from an access cell to a goal cell."""
    for start in starts:
        if start in blocked:
            continue
        stack = [(start, (start,), {start})]
        while stack:
            cell, path, used = stack.pop()
            if cell in goals:
                yield path
                # a path may continue through a goal toward another one, but
                # minimal service is enough for feasibility: stop here
                continue
            for nb in _neighbors(cell):
                if nb in used or nb in blocked or not layout.free(layer, nb):
                    continue
                stack.append((nb, path + (nb,), used | {nb}))


def _resolve_layer(layout: LayerStackLayout, req: MergeRequest) -> Optional[int]:
    la, _ = layout.find(req.patch_a)
    lb, _ = layout.find(req.patch_b)
    if req.layer is not None:
        return req.layer if la == lb == req.layer else None
    return la if la == lb else None


def routable(layout: LayerStackLayout, requests: Sequence[MergeRequest]) -> RoutingResult:
    """Decide simultaneous feasibility by exhaustive disjoint-path search."""
    by_layer: dict[int, list[MergeRequest]] = {}
    for req in requests:
        for pid in (req.patch_a, req.patch_b):
            layout.find(pid)    # raises on unknown ids
        layer = _resolve_layer(layout, req)
        if layer is None:
            return RoutingResult(False, explored=0)
        by_layer.setdefault(layer, []).append(req)

    result = RoutingResult(True)
    for layer, reqs in sorted(by_layer.items()):
        sub = _route_layer(layout, layer, reqs)
        result.explored += sub.explored
        if not sub.feasible:
            return RoutingResult(False, explored=result.explored)
        result.paths.update(sub.paths)
        result.layers.update(sub.layers)
    return result


def _route_layer(layout: LayerStackLayout, layer: int,
                 reqs: list[MergeRequest]) -> RoutingResult:
    explored = 0

    def backtrack(idx: int, blocked: set[Cell],
                  acc: dict[MergeRequest, tuple[Cell, ...]]):
        nonlocal explored
        if idx == len(reqs):
            return dict(acc)
        req = reqs[idx]
        starts = layout.access_cells(layer, req.patch_a, req.operator_a)
        goals = set(layout.access_cells(layer, req.patch_b, req.operator_b))
        if not starts or not goals:
            return None
        for path in _all_paths(layout, layer, starts, goals, blocked):
            explored += 1
            acc[req] = path
            out = backtrack(idx + 1, blocked | set(path), acc)
            if out is not None:
                return out
            del acc[req]
        return None

    found = backtrack(0, set(), {})
    if found is None:
        return RoutingResult(False, explored=explored)
    return RoutingResult(True, found, {r: layer for r in reqs}, explored)


# -- vertical-SWAP planning --------------------------------------------------------

@dataclass
class SwapPlan:
    feasible: bool
    swaps: list[tuple[str, int, int]]          # (patch_id, from_layer, to_layer)
    routing: Optional[RoutingResult] = None
    states_explored: int = 0

    def __len__(self) -> int:
        return len(self.swaps)


def plan_with_swaps(layout: LayerStackLayout, requests: Sequence[MergeRequest],
                    max_swaps: int = 4) -> SwapPlan:
    """Breadth-first search over vertical-SWAP sequences, minimal length first.

    A move swaps a patch with the free cell directly above or below it in an
    adjacent layer.  Returns the shortest plan whose end state routes every
    request, or infeasible-within-budget with the exhaustion count.
    """
    if max_swaps > 8:
        raise ValueError("swap budget capped at 8 (exhaustive search)")
    start = layout.copy()
    seen = {start.occupancy_key()}
    frontier: list[tuple[LayerStackLayout, list[tuple[str, int, int]]]] = [(start, [])]
    explored = 0
    for depth in range(max_swaps + 1):
        next_frontier = []
        for state, plan in frontier:
            explored += 1
            res = routable(state, requests)
            if res.feasible:
                return SwapPlan(True, plan, res, explored)
            if depth == max_swaps:
                continue
            for li, layer in enumerate(state.layers):
                for cell, patch in sorted(layer.items()):
                    for lj in (li - 1, li + 1):
                        if not 0 <= lj < state.num_layers:
                            continue
                        if not state.free(lj, cell):
                            continue
                        nxt = state.copy()
                        del nxt.layers[li][cell]
                        nxt.layers[lj][cell] = patch
                        key = nxt.occupancy_key()
                        if key in seen:
                            continue
                        seen.add(key)
                        next_frontier.append((nxt, plan + [(patch.patch_id, li, lj)]))
        frontier = next_frontier
        if not frontier:
            break
    return SwapPlan(False, [], None, explored)


# -- the worked routability instances -----------------------------------------------

def fig10a_fixture() -> tuple[LayerStackLayout, list[MergeRequest]]:
    """The hallway instance: four patch stacks over two layers, one corridor.

    Every Z(1)-X(4) path must run the corridor past the only access cells of
    Z(2) and Z(3), so the two merges cannot be routed simultaneously on
    either layer, and with both layers fully mirrored no vertical swap is
    even possible.
    """
    layout = generate_layout("hallway", 4, rows=2, cols=9, num_layers=2)
    requests = [
        MergeRequest("1", "Z", "4", "X"), MergeRequest("2", "Z", "3", "Z"),
        MergeRequest("1'", "Z", "4'", "X"), MergeRequest("2'", "Z", "3'", "Z"),
    ]
    return layout, requests


def fig10b_fixture() -> tuple[LayerStackLayout, list[MergeRequest]]:
    """The staggered (checkerboard-across-layers) instance with a free layer.

    The same eight patches sit on the two outer layers, pairs interleaved so
    that each layer's long merge is squeezed through the short merge's access
    cells; the middle long-range layer is empty.  Four vertical SWAPs (the
    inner pairs move into the middle layer) make all four merges
    simultaneously routable.
    """
    l0 = {
        (0, 1): PatchCell("1"), (0, 3): PatchCell("2'"),
        (0, 5): PatchCell("3'"), (0, 9): PatchCell("4"),
    }
    l1: dict[Cell, PatchCell] = {}
    l2 = {
        (0, 2): PatchCell("1'"), (0, 6): PatchCell("2"),
        (0, 8): PatchCell("3"), (0, 10): PatchCell("4'"),
    }
    layout = LayerStackLayout(2, 11, [l0, l1, l2],
                              ["mid_range", "long_range", "mid_range"])
    requests = [
        MergeRequest("1", "Z", "4", "X"), MergeRequest("2", "Z", "3", "Z"),
        MergeRequest("1'", "Z", "4'", "X"), MergeRequest("2'", "Z", "3'", "Z"),
    ]
    return layout, requests


# -- fixture file round-trip ---------------------------------------------------------

def layout_to_doc(layout: LayerStackLayout) -> dict:
    return {
        "rows": layout.rows,
        "cols": layout.cols,
        "layer_roles": list(layout.layer_roles),
        "layers": [
            [{"cell": list(cell), "patch": p.patch_id, "ns": p.ns}
             for cell, p in sorted(layer.items())]
            for layer in layout.layers
        ],
    }


def layout_from_doc(doc: dict) -> LayerStackLayout:
    layers = []
    for layer in doc["layers"]:
        layers.append({tuple(rec["cell"]): PatchCell(rec["patch"], rec["ns"])
                       for rec in layer})
    return LayerStackLayout(doc["rows"], doc["cols"], layers, list(doc["layer_roles"]))

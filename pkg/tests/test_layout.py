"""Layer-stack layouts, routing, and vertical-SWAP planning."""

import random

import pytest

from loopfold.layout import (LayerStackLayout, MergeRequest, PatchCell,
                             fig10a_fixture, fig10b_fixture, generate_layout,
                             layout_from_doc, layout_to_doc, plan_with_swaps,
                             routable)


def validate_witness(layout, result):
    """Independent re-verification: disjoint per layer, endpoint-valid,
    connected through free cells."""
    used_by_layer = {}
    for req, path in result.paths.items():
        layer = result.layers[req]
        for cell in path:
            assert layout.free(layer, cell)
            key = (layer, cell)
            assert key not in used_by_layer, f"cell reuse at {key}"
            used_by_layer[key] = req
        for a, b in zip(path, path[1:]):
            assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
        assert path[0] in layout.access_cells(layer, req.patch_a, req.operator_a)
        assert path[-1] in layout.access_cells(layer, req.patch_b, req.operator_b)


def test_fig10a_infeasible_with_certificate():
    layout, requests = fig10a_fixture()
    res = routable(layout, requests)
    assert not res.feasible
    assert res.explored > 0
    # each merge alone is routable; simultaneity is what fails
    for req in requests:
        assert routable(layout, [req]).feasible


def test_fig10a_unroutable_for_every_swap_budget():
    layout, requests = fig10a_fixture()
    for budget in range(0, 9):
        plan = plan_with_swaps(layout, requests, max_swaps=budget)
        assert not plan.feasible


def test_fig10b_pre_infeasible_post_four_swaps_feasible():
    layout, requests = fig10b_fixture()
    assert not routable(layout, requests).feasible
    plan = plan_with_swaps(layout, requests, max_swaps=4)
    assert plan.feasible
    assert len(plan) == 4
    assert len(plan.routing.paths) == 4
    # apply the swaps and re-verify the witnesses independently
    state = layout.copy()
    for pid, src, dst in plan.swaps:
        li, cell = state.find(pid)
        assert li == src and state.free(dst, cell)
        patch = state.layers[src].pop(cell)
        state.layers[dst][cell] = patch
    res = routable(state, requests)
    assert res.feasible
    validate_witness(state, res)


def test_fig10b_no_plan_within_three():
    layout, requests = fig10b_fixture()
    assert not plan_with_swaps(layout, requests, max_swaps=3).feasible


def test_already_routable_needs_zero_swaps():
    layout, _ = fig10b_fixture()
    req = [MergeRequest("2'", "Z", "3'", "Z")]
    plan = plan_with_swaps(layout, req, max_swaps=4)
    assert plan.feasible and len(plan) == 0


def test_single_request_minimal_corridor():
    layout = generate_layout("hallway", 2, rows=2, cols=5)
    res = routable(layout, [MergeRequest("1", "Z", "2", "Z")])
    assert res.feasible
    (path,) = res.paths.values()
    assert path == ((1, 1), (1, 2), (1, 3))


def test_generate_layouts():
    empty = generate_layout("empty", 0, rows=3, cols=3, num_layers=2)
    assert all(not layer for layer in empty.layers)
    assert routable(empty, []).feasible
    cb = generate_layout("checkerboard", 4, rows=3, cols=3)
    cells = sorted(cb.layers[0])
    assert cells == [(0, 1), (1, 0), (1, 2), (2, 1)]
    with pytest.raises(ValueError):
        generate_layout("checkerboard", 50, rows=3, cols=3)
    with pytest.raises(ValueError):
        generate_layout("hallway", 4, rows=1, cols=3)


def test_unknown_patch_rejected():
    layout, _ = fig10a_fixture()
    with pytest.raises(KeyError):
        routable(layout, [MergeRequest("1", "Z", "9", "X")])


def test_split_pair_is_unroutable():
    layout, _ = fig10b_fixture()
    # 1 is on layer 0, 1' on layer 2: no common layer, no route
    assert not routable(layout, [MergeRequest("1", "Z", "1'", "Z")]).feasible


def test_monotonicity_under_freeing_cells():
    """Removing a patch (freeing cells) never flips feasible to infeasible."""
    rng = random.Random(42)
    flips = 0
    for _ in range(300):
        rows, cols = 3, 4
        n = rng.randint(2, 5)
        layer = {}
        ids = []
        cells = [(r, c) for r in range(rows) for c in range(cols)]
        rng.shuffle(cells)
        for i in range(n):
            layer[cells[i]] = PatchCell(str(i + 1), rng.choice("ZX"))
            ids.append(str(i + 1))
        layout = LayerStackLayout(rows, cols, [layer])
        a, b = rng.sample(ids, 2)
        req = [MergeRequest(a, rng.choice("ZX"), b, rng.choice("ZX"))]
        before = routable(layout, req).feasible
        removable = [pid for pid in ids if pid not in (a, b)]
        if not removable:
            continue
        drop = rng.choice(removable)
        li, cell = layout.find(drop)
        bigger = layout.copy()
        del bigger.layers[li][cell]
        after = routable(bigger, req).feasible
        if before and not after:
            flips += 1
    assert flips == 0


def test_spread_arrangement_contains_hallway_connectivity():
    """Moving one hallway layer into an adjacent empty layer preserves every
    request set the two-layer hallway routes (the containment claim),
    checked exhaustively over single merges and the instance's pairs."""
    hallway, pair_requests = fig10a_fixture()
    with_empty = LayerStackLayout(
        hallway.rows, hallway.cols,
        [dict(l) for l in hallway.layers] + [{}],
        list(hallway.layer_roles) + ["long_range"])
    spread = with_empty.copy()
    moved = 0
    for cell, patch in sorted(dict(spread.layers[1]).items()):
        assert spread.free(2, cell)
        spread.layers[2][cell] = spread.layers[1].pop(cell)
        moved += 1
    assert moved == 4
    ids = ["1", "2", "3", "4", "1'", "2'", "3'", "4'"]
    ops = ["Z", "X"]
    request_sets = [[MergeRequest(a, oa, b, ob)]
                    for i, a in enumerate(ids) for b in ids[i + 1:]
                    for oa in ops for ob in ops]
    request_sets += [pair_requests[:2], pair_requests[2:]]
    for reqs in request_sets:
        if routable(with_empty, reqs).feasible:
            assert routable(spread, reqs).feasible, [str(r) for r in reqs]


def test_fixture_doc_round_trip():
    layout, _ = fig10b_fixture()
    doc = layout_to_doc(layout)
    back = layout_from_doc(doc)
    assert back.occupancy_key() == layout.occupancy_key()
    assert back.layer_roles == layout.layer_roles


def test_witness_paths_validated_independently():
    layout, requests = fig10b_fixture()
    plan = plan_with_swaps(layout, requests, max_swaps=4)
    state = layout.copy()
    for pid, src, dst in plan.swaps:
        _, cell = state.find(pid)
        state.layers[dst][cell] = state.layers[src].pop(cell)
    res = routable(state, requests)
    validate_witness(state, res)

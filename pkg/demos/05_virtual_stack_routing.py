"""Virtual-stack layouts: when cheap vertical SWAPs buy routing parallelism.

Two worked instances.  In the hallway arrangement, measuring Z1*X4 and Z2*Z3
simultaneously is impossible on either layer: every Z1-X4 corridor path runs
over the only access cells of Z2 and Z3, and with both layers fully mirrored
no vertical move exists at all.  The staggered arrangement with an empty
long-range layer starts out just as stuck, but four transversal SWAPs free
all four merges at once.
"""

from loopfold import fig10a_fixture, fig10b_fixture, plan_with_swaps, routable

layout, requests = fig10a_fixture()
print("hallway instance:")
print(layout.to_text())
res = routable(layout, requests)
print(f"all four merges simultaneously: {res.feasible} "
      f"(exhausted after {res.explored} candidate path sets)")
for req in requests[:2]:
    alone = routable(layout, [req])
    print(f"  {req} alone: {alone.feasible}, path {list(alone.paths.values())[0]}")
plan = plan_with_swaps(layout, requests, max_swaps=8)
print(f"any plan within 8 swaps? {plan.feasible} "
      f"({plan.states_explored} states searched)\n")

layout, requests = fig10b_fixture()
print("staggered instance with an empty long-range layer:")
print(layout.to_text())
print(f"routable as-is: {routable(layout, requests).feasible}")
for budget in (3, 4):
    plan = plan_with_swaps(layout, requests, max_swaps=budget)
    print(f"best plan within {budget} swaps: "
          f"{plan.swaps if plan.feasible else 'none'}")
plan = plan_with_swaps(layout, requests, max_swaps=4)
print("\nwitness paths after the four swaps:")
for req, path in plan.routing.paths.items():
    print(f"  {req} on layer {plan.routing.layers[req]}: {path}")

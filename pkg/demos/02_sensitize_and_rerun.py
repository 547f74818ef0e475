"""Slope-sensitive refinement and its stability under reruns.

Enumerate every valid type for the worked numerical data, collect the
cone-positive edge slopes, refine the quadrant so those slopes become
rays of a smooth fan, transport the numerical data through the stellar
steps, and confirm that rerunning the whole pipeline on the refined fan
adds no new rays.
"""

from tropi import (
    DegreeCatalogue,
    collect_sensitive_slopes,
    enumerate_types,
    lift_numerical_data,
    sensitize_for_data,
    stellar_at_point,
)
from tropi.worked_example import example_catalogue, example_data, quadrant

target = quadrant()
lam = example_data()
cat = example_catalogue()

types = enumerate_types(target, lam, cat)
print(f"valid types (≤ {cat.max_vertices} vertices): {len(types)}")
slopes = collect_sensitive_slopes(types)
print(f"cone-positive slopes: {sorted(slopes)}")

sub = sensitize_for_data(target, lam, cat)
print(f"refined fan rays: {list(sub.refined.rays)}")
print(f"refined maximal cones: {len(sub.refined.max_cones)}")

# replay the refinement one stellar step at a time, lifting the data
fan = target
for point in [(1, 1), (2, 1), (1, 2)]:
    step = stellar_at_point(fan, point)
    lam = lift_numerical_data(step, lam)
    fan = step.refined
    print(f"after stellar at {point}: total degree {lam.total_degree}")

assert fan == sub.refined

rerun_cat = DegreeCatalogue(
    atoms=[tuple(0 for _ in fan.rays), lam.total_degree], max_vertices=3
)
again = sensitize_for_data(fan, lam, rerun_cat)
new_rays = set(again.refined.rays) - set(fan.rays)
print(f"rerun on the refined fan adds rays: {sorted(new_rays) or 'none'}")

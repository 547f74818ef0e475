"""The worked plane example, end to end.

Target: the plane with two boundary lines, tropicalized as the first
quadrant (rays e1, e2, one 2-cone).  Numerical data: three markings with
tangency vectors (1,0), (0,1), (3,3), total degree 4 against each line.

We build the three-vertex configuration — two degree-(2,2) vertices at
the origin, a degree-zero vertex inside the quadrant — solve its
balancing equations, check validity and the per-divisor bookkeeping,
and then watch both smoothability procedures reject it.
"""

from tropi import (
    check_gathmann,
    check_sensitivity_consequences,
    render_dot,
    smoothable_lp,
    solve_balancing,
    validate_type,
)
from tropi.worked_example import E1, E2, example_type

t = example_type()

print("== balancing ==")
slopes = solve_balancing(t)
for e, m in sorted(slopes.items()):
    print(f"  edge {e[0]}–{e[1]}: slope {m}")
t = t.with_slopes(slopes)

print("== validity ==")
report = validate_type(t)
for check in report.checks:
    print(f"  {check.name}: {'ok' if check.passed else check.detail}")

print("== per-divisor bookkeeping ==")
print("  passed" if check_gathmann(t) else "  FAILED")

print("== smoothability ==")
witness = smoothable_lp(t)
print(f"  exact feasibility solve: {'feasible' if witness else 'infeasible'}")

sens = check_sensitivity_consequences(t)
print(f"  sensitivity consequences: {'pass' if sens.passed else 'violated'}")
for e, verdict in sens.edges.items():
    if not verdict.passed:
        print(f"    edge {e[0]}–{e[1]}: mixed_sign={verdict.mixed_sign}")
        for v, flag in verdict.flags.items():
            print(
                f"      flag at {v}: small_jumping={flag.small_jumping} "
                f"slope_negativity={flag.slope_negativity}"
            )

print("== DOT render ==")
print(render_dot(t))

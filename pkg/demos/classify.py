"""Which a Rhat + b Rhat^-1 + c I satisfy the braid relation, and which of those come from r-forms."""

from rforms.classify import classify_braid_solutions, z_constraint
from rforms.rmatrix import build_series

for series, N in [("SL", 2), ("O", 3)]:
    spec = build_series(series, N)
    rep = classify_braid_solutions(spec)
    print(spec.label, "passed" if rep.passed else "did not reduce to the axes")
    for ray in rep.rays:
        kind = ray.axis or ("irrational" if not ray.rational else "rational")
        print(f"  ray {ray.label:<12} {kind}")
    for axis, c in z_constraint(spec).items():
        print(f"  {axis:<8} {c.get('text') or 'not an r-form'}")

"""The three-strand algebra acting on V^(x3), and the one relation that appears for Sp_q(4)."""

from rforms.bwm import DISPLAY, algebra_for, build_pi, compare_with_printed, kernel_relation, pi_rank
from rforms.rmatrix import build_series

for series, N in [("GL", 2), ("O", 3), ("Sp", 4)]:
    spec = build_series(series, N)
    alg = algebra_for(spec)
    pi = build_pi(alg, spec)
    print(f"{spec.label}: {alg.name} of dim {alg.dim}, image rank {pi_rank(pi)['rank']}")

spec = build_series("Sp", 4)
rel = kernel_relation(build_pi(algebra_for(spec), spec))
print("\nkernel of pi for", spec.label)
for lab, c in rel.items():
    print(f"  {DISPLAY[lab]:>8}  {c}")

print("\nagainst the literature's printed relation:")
for row in compare_with_printed(rel, spec):
    print(f"  {row['term']:>8}  {row['status']:<10} computed {row['computed']:<12} printed {row['printed']}")

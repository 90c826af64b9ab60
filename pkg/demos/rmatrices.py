"""Walk through the R-matrix catalog: defects, eigenvalues, the metric projector."""

from rforms.rmatrix import braid_defect_of, build_rmatrix, build_series, ybe_defect_of

for series, N in [("GL", 2), ("SL", 3), ("O", 3), ("Sp", 4)]:
    spec = build_series(series, N)
    b = build_rmatrix(spec)
    print(spec.label)
    print("  YBE defect zero:  ", ybe_defect_of(b.R, N).is_zero())
    print("  braid defect zero:", braid_defect_of(b.Rhat, N).is_zero())
    print("  minimal polynomial of Rhat:", b.minimal_polynomial_str())
    if b.ehat is not None:
        print("  Ehat^2 = x Ehat with x =", b.ehat_scalar)

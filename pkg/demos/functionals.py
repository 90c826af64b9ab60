"""Antipode functionals of r_z on O_q(3): S^2 on generators, F_r and the modular matrix."""

from rforms.bichar import make_rform
from rforms.functionals import make_all, modular_compare
from rforms.rmatrix import build_series

spec = build_series("O", 3)
for z in (1, -1):
    r = make_rform(spec, z)
    fs = make_all(r)
    print(f"z = {z}")
    print("  gen(f_r)\n" + fs.f_r.gen_matrix.pretty())
    print("  gen(fbar_r)\n" + fs.fbar_r.gen_matrix.pretty())
    m = modular_compare(r)
    print("  F_r =", m.detail["F_r"], " orientation", m.detail["orientation"])

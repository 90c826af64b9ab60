"""r(g^n, g^m) = lam^(nm) on the group algebra of Z."""

from rforms.scalar import Scalar
from rforms.ztoy import toy_character_iff_cotriangular, toy_functionals

for lam in (Scalar(3) / 2, Scalar(-1), Scalar(1), Scalar(2)):
    o = toy_functionals(lam)
    c = toy_character_iff_cotriangular(lam)
    print(f"lam={lam}: F_r trivial {o.detail['parts']['F_r=eps']}, f_r character {c.detail['character']},"
          f" sigma {o.detail['sigma']}")

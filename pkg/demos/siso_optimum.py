"""Single-antenna optimum spectral efficiency.

For a packet of fixed size, a faster rate shortens the time on air but needs
more power, which widens the region where hidden nodes are disturbed. The
product of the two is minimized at a finite spectral efficiency that grows
with the path-loss exponent.
"""
import numpy as np

from hiddennode import siso_copt_exact, siso_copt_numeric, siso_copt_poly, siso_objective

print("alpha   exact     numeric   poly     objective")
for alpha in (2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0):
    exact = siso_copt_exact(alpha)
    numeric = siso_copt_numeric(alpha) if alpha > 2 else exact
    print(f"{alpha:4.1f}  {exact.c_opt:8.4f}  {numeric.c_opt:8.4f}  {siso_copt_poly(alpha):7.3f}  {exact.objective_value:8.4f}")

# the objective is flat near the optimum, so small rate errors cost little
alpha = 4.0
c_opt = siso_copt_exact(alpha).c_opt
for frac in (0.5, 0.8, 1.0, 1.25, 2.0):
    c = frac * c_opt
    print(f"c = {c:6.3f} b/s/Hz  relative cost {siso_objective(c, alpha) / siso_objective(c_opt, alpha):.4f}")

c = np.linspace(0.05, 8, 200)
print("objective minimum on a coarse grid:", c[np.argmin(siso_objective(c, alpha))])

"""Large-array capacity per antenna and the multi-antenna optimum.

Per-antenna capacity of an n x n Rayleigh channel approaches a closed-form
limit as n grows. The limit is inverted to get the SNR for a target
efficiency, and that gives the multi-antenna version of the optimization.
"""
from hiddennode import (
    asymptotic_mimo_se,
    inverse_asymptotic_mimo_se,
    mean_capacity_per_antenna,
    mimo_beta_opt_numeric,
    mimo_beta_opt_poly,
    siso_copt_exact,
)

for x in (0.5, 1.0, 10.0):
    limit = asymptotic_mimo_se(x)
    row = [f"{mean_capacity_per_antenna(n, x, draws=200, seed=n):.4f}" for n in (2, 8, 32, 64)]
    print(f"x = {x:5.1f}  n=2,8,32,64 -> {' '.join(row)}  limit {limit:.4f}")

beta = 1.5
x = inverse_asymptotic_mimo_se(beta)
print(f"SNR per antenna for {beta} b/s/Hz/antenna: {x:.6f} (check {asymptotic_mimo_se(x):.12f})")

print("alpha  beta_opt  poly    siso c_opt")
for alpha in (2.5, 3.0, 3.5, 4.0, 5.0):
    print(f"{alpha:4.1f}  {mimo_beta_opt_numeric(alpha).c_opt:8.4f}  {mimo_beta_opt_poly(alpha):6.3f}  {siso_copt_exact(alpha).c_opt:8.4f}")

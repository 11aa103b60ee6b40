# %% [markdown]
# # Local Laurent solutions and the choice of b_1
#
# Near a pole `z_k` a solution looks like `sum_p b_p (z - z_k)^p`.  The
# leading exponent must be an integer eigenvalue of the residue, and each
# later coefficient comes from a linear recursion.  When the exponent being
# solved for is itself an eigenvalue the step is resonant: the coefficient is
# only fixed up to a kernel, or the step is inconsistent and a logarithm would
# be needed.  This demo shows both situations.

# %%
from kzrational import RatMatrix, canonical_seeds, natural_kz_system, projectors, recurse_right
from kzrational.frobenius import recursion_residuals

system = natural_kz_system(3, [0, 1])
P1 = system.residue(1)
plus, minus = projectors(P1)

sol = recurse_right(system, 1, plus, -1)
for p, c in sol.series.items():
    print(f"b_{p} =\n{c}\n")
for r in sol.resonance_log:
    print(f"resonance at exponent {r.exponent}: kernel dimension {r.kernel_dimension}, "
          f"consistent: {r.compatible}")

# %% [markdown]
# ## Two admissible values of b_1
# The recursion leaves `b_1` free up to the +1 eigenspace of `P_1`.  The
# closed-form seeds fix it as `beta_k P_k`.  The classical alternative
# `-beta_k I` also solves the recursion, but then the local product
# `b_0 c_0 + b_-1 c_1 + b_1 c_-1` comes out as `-2 beta_k P_k` rather than
# the scalar `2 beta_k I`.

# %%
seeds = canonical_seeds(system, 1)
b_m1, b_0, b_1 = seeds.right
c_m1, c_0, c_1 = seeds.left
for label, cand in (("beta P_k", b_1), ("-beta I", seeds.b1_published)):
    res = recursion_residuals(system, 1, {-1: b_m1, 0: b_0, 1: cand})
    product = b_0 @ c_0 + b_m1 @ c_1 + cand @ c_m1
    print(f"b_1 = {label}: recursion satisfied = {all(r.is_zero() for r in res.values())}")
    print(f"local product =\n{product}\n")

# %% [markdown]
# ## A resonance that forces a logarithm
# With residue `diag(-1, 0)` at 0 and a neighbour that feeds the second
# coordinate, the step at exponent 0 has no solution.  The local solution is
# marked invalid rather than silently patched.

# %%
from kzrational import KZSystem

P = RatMatrix([[-1, 0], [0, 0]])
Q = RatMatrix([[0, 0], [1, 0]])
bad = KZSystem((0, 1), (P, Q))
sol = recurse_right(bad, 1, RatMatrix([[1], [0]]), -1, 1)
print("valid:", sol.valid)
print(sol.resonance_log)

# %% [markdown]
# # Rational solutions for the S_3 system
#
# The natural representation of S_3 gives a system `dW/dz = A(z) W` with two
# simple poles, at 0 and 1, whose residues are the transpositions (1 2) and
# (1 3).  This walk-through checks the hypotheses, predicts the degree of the
# answer, constructs a rational fundamental solution W and its adjoint Y, and
# verifies all of it with exact arithmetic.

# %%
from kzrational import (
    adjoint_solution,
    beta,
    check_conditions,
    degree_bounds,
    natural_kz_system,
    product_invariant,
    rmf_eval,
    rmf_mul,
    solve_rational,
    verify,
)

system = natural_kz_system(3, [0, 1])
for k in (1, 2):
    print(f"P_{k} at z = {system.pole(k)}:\n{system.residue(k)}\n")

# %% [markdown]
# ## Hypotheses
# With two poles the triple condition has nothing to quantify over and is
# reported as vacuous.

# %%
report = check_conditions(system)
for name, result in report.conditions().items():
    print(f"{name:18s} {result.status}")
print("all pass:", report.all_pass)

# %% [markdown]
# ## What to expect at infinity
# The residue at infinity is governed by `T = P_1 + P_2`.  Its extreme
# eigenvalues bound the polynomial parts: `deg Q1 = M_T` for W and
# `deg Q2 = -m_T` for Y.

# %%
bounds = degree_bounds(system)
print("T =\n" + str(bounds.T))
print("integer eigenvalues:", bounds.spectrum.eigenvalues)
print(f"m_T = {bounds.m_T}, M_T = {bounds.M_T}, deg Q1 = {bounds.deg_Q1}, deg Q2 = {bounds.deg_Q2}")

# %% [markdown]
# ## Local data at each pole
# `beta_k` selects the branch of the closed-form seeds; the local product of
# seeds must come out as a scalar matrix.

# %%
for k in (1, 2):
    print(f"pole {k}: beta = {beta(system, k)}, local product =\n{product_invariant(system, k)}\n")

# %% [markdown]
# ## The global solution
# The solver matches partial-fraction coefficients of `W' - A W` and picks an
# invertible element of the kernel.

# %%
outcome = solve_rational(system)
W = outcome.W
print(outcome.status, "| kernel dimension", outcome.kernel_dimension)
for a, coeffs in W.pole_parts.items():
    print(f"L at z = {a}:\n{coeffs[0]}\n")
for j, c in enumerate(W.poly_part):
    print(f"z^{j} coefficient:\n{c}\n")

# %%
cert = verify(system, W)
print("residual is zero:", cert.residual_zero)
print("det W at sample points:", [(str(z), str(d)) for z, d in cert.det_samples])
print("polynomial degree", cert.poly_degree, "predicted", cert.predicted_poly_degree)

# %% [markdown]
# ## The adjoint solution
# Y solves `Y' = -Y A` and is normalised so that `W Y = I` exactly, so Y is
# the inverse of W as a rational function.

# %%
Y = adjoint_solution(system, W)
print("deg Y =", Y.degree)
print("W Y =\n" + str(rmf_mul(W, Y).constant_value()))
z = 7
print(f"W({z}) Y({z}) =\n{rmf_eval(W, z) @ rmf_eval(Y, z)}")

# %% [markdown]
# # When there is no rational solution
#
# The solver reports mathematical failure as a status with evidence, never
# as an exception.  Three situations are shown: exponents that are not
# integers, a residue that breaks the hypotheses, and a run with `rho = 2`
# where no guarantee applies at all.

# %%
from kzrational import KZSystem, RatMatrix, check_conditions, natural_kz_system, solve_rational

half = KZSystem((0,), (RatMatrix([["1/2", 0], [0, "1/2"]]),))
out = solve_rational(half)
print(out.status, "|", out.evidence, "|", out.reason)

# %% [markdown]
# ## A single changed entry
# Changing one entry of an S_4 residue breaks at least one hypothesis, and
# the report names the offending indices.

# %%
system = natural_kz_system(4, [0, 1, 2])
rows = system.residue(2).tolist()
rows[0][0] += 2
tampered = KZSystem(system.poles, (system.residue(1), RatMatrix(rows), system.residue(3)))
report = check_conditions(tampered)
print("all pass:", report.all_pass)
for line in report.failures():
    print(" ", line)

# %% [markdown]
# ## rho = 2
# The local exponents become -2 and 2, so simple poles are not enough.  With
# the default pole order the search is capped below what the exponents need
# and the outcome is `ConditionsUnknown`; letting the order follow the
# exponents finds a solution anyway.

# %%
s2 = natural_kz_system(2, [0], rho=2)
capped = solve_rational(s2)
print(capped.status, "| required pole order", capped.required_pole_order, "| notes:", capped.notes)
free = solve_rational(s2, max_pole_order="auto")
print(free.status, "| pole order at 0:", free.W.pole_order(0), "| degree:", free.W.degree)

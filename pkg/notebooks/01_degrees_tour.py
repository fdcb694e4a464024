# %% [markdown]
# # Dynamical and arithmetic degrees on E^d
#
# A self-map of `E^d` here is `phi(P) = M P + Q`: an integer matrix `M`
# acting on Mordell-Weil coordinates, followed by translation by `Q`.
# Points are `d x k` rational matrices and the canonical height is the
# quadratic form `sum_i P_i G P_i^T`.
#
# Two numbers describe growth under iteration:
#
# * `delta`, the square of the spectral radius of `M`, certified with a
#   rational enclosure;
# * `alpha`, the limit of `h(phi^n(P))^(1/n)`, estimated from exact heights.
#
# This notebook walks through the three bundled scenarios.

# %%
from pathlib import Path

import numpy as np

from arithdeg.degrees import arithmetic_degree_estimate, dynamical_degree, gelfand_oracle, height_sequence
from arithdeg.scenario import load_scenario, run_scenario

ROOT = Path(__file__).resolve().parents[1] if "__file__" in globals() else Path.cwd().parent
scen = {name: load_scenario(ROOT / "scenarios" / f"{name}.yaml") for name in ("doubling", "fibonacci", "unipotent_translation")}

# %% [markdown]
# ## Doubling
#
# `M = [[2]]`, no translation. Heights quadruple at every step, so both
# degrees are 4 and the certificate is a single rational point.

# %%
s = scen["doubling"]
hs = height_sequence(s.model(), s.selfmap(), s.point(), 10)
print([int(h) for h in hs])
d = dynamical_degree(s.selfmap())
print("delta", d.value, d.lower, d.upper)

# %% [markdown]
# ## The cat map
#
# `M = [[2, 1], [1, 1]]` has spectral radius `(3 + sqrt 5)/2`. The enclosure
# comes from exact Weierstrass disks around the roots of the characteristic
# polynomial, so its width sits far below the requested `1e-9`.

# %%
s = scen["fibonacci"]
d = dynamical_degree(s.selfmap(), 1e-9)
print(f"delta = {d.value!r}, width {float(d.width):.2e}")
a = arithmetic_degree_estimate(s.model(), s.selfmap(), s.point())
print(f"alpha = {a.value!r} via {a.method}, recurrence {a.recurrence}")

# %% [markdown]
# The heights satisfy a linear recurrence whose largest root is `alpha`.
# Its roots are products of pairs of eigenvalues of the affine map
# `[[M, Q], [0, 1]]`, so they include 1, `lambda^2`, `lambda^-2` and
# `lambda^(+-1)` for the eigenvalues `lambda` of `M`.
#
# The Gelfand sequence `(||M^n||_F^2)^(1/n)` is an independent check on
# `delta` that uses nothing but exact matrix powers.

# %%
g = gelfand_oracle(s.M, 60)
for n in (1, 5, 10, 20, 40, 60):
    print(n, g[n - 1], g[n - 1] / d.value - 1)

# %% [markdown]
# ## A translation on the identity
#
# With `M = I` the orbit is `P + nQ`, so heights grow like `n^2`. `alpha`
# is 1 and the estimator reports the polynomial regime with degree 2.

# %%
s = scen["unipotent_translation"]
rep = run_scenario(s)
print(rep.route, rep.alpha.mode, rep.alpha.poly_degree_fit, rep.alpha.value, rep.verdict)
print(rep.certificates["growth"])

# %% [markdown]
# ## Log heights
#
# The CSV export written by `arithdeg orbit` carries `log h_n` and the running
# estimate `h_n^(1/n)`. For the cat map the running estimate creeps toward
# `delta` only slowly; the recurrence gets the limit exactly from 80 terms.

# %%
s = scen["fibonacci"]
hs = height_sequence(s.model(), s.selfmap(), s.point(), 80)
logs = np.array([float(np.log(float(h.numerator)) - np.log(float(h.denominator))) for h in hs[1:]])
running = np.exp(logs / np.arange(1, 81))
print(running[[0, 9, 39, 79]])

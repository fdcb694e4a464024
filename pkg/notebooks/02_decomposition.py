# %% [markdown]
# # Splitting off the unipotent part
#
# When 1 is an eigenvalue of `M`, the translation need not lie in the image
# of `M - I` and the orbit is not a shifted orbit of the isogeny. Factor the
# characteristic polynomial as `F = (X - 1)^r F2` with `F2(1) != 0`. The two
# factors are coprime, so there are integer `G1, G2` with
# `G1 (X - 1)^r + G2 F2 = rho`, the resultant. That identity splits every
# point into a piece where `M - I` is invertible and a unipotent piece.

# %%
from arithdeg import _exact
from arithdeg.degrees import verify_theorem
from arithdeg.heightmodel import AbelianModel, MWModel, PointCoords, SelfMap, restrict_map, split_translation
from arithdeg.polyalgebra import bezout_certificate, charpoly_exact, resultant, unipotent_split
from arithdeg.torusmodel import (
    image_sublattice,
    rational_rep,
    verify_intersection_torsion,
    verify_sum_full,
    verify_unipotent_kernel_bound,
)

M = ((3, 1, 1), (1, 2, 0), (0, 0, 1))
F = charpoly_exact(M)
split = unipotent_split(F)
cert = bezout_certificate(split.f1, split.f2)
print("F      ", F)
print("split  ", split.r, split.f2)
print("Bezout ", cert.g1, "|", cert.g2, "| rho =", cert.rho, resultant(split.f1, split.f2))

# %% [markdown]
# ## The two invariant pieces
#
# `restrict_map` returns a saturated integer basis of the image of `Fi(M)`
# and the integer matrix of `M` on it.

# %%
B1, M1 = restrict_map(M, split.f1)
B2, M2 = restrict_map(M, split.f2)
print("A1 basis", B1, "M1", M1)
print("A2 basis", B2, "M2", M2)
print("M - I on A1 invertible:", _exact.det(_exact.sub(M1, _exact.identity(len(M1)))) != 0)

# %%
Q = PointCoords([[1, 0], [0, 1], [1, "1/2"]])
Q1, Q2 = split_translation(M, Q, split, cert)
print(Q1.coords)
print(Q2.coords)

# %% [markdown]
# ## On the torus
#
# Over the complex numbers `E^d` is a real torus of dimension `2d` and `M`
# acts through `M (x) I_2`. The images of `F1` and `F2` must together span
# the lattice, and their intersection must be killed by `rho`. Both are checked
# exactly: the first by a Hermite normal form, the second by enumerating every
# point of order dividing `D`.

# %%
R = rational_rep(M)
print(verify_sum_full(image_sublattice(split.f1, R), image_sublattice(split.f2, R)))
for D in (2, 3, 4, 6):
    print(D, verify_intersection_torsion(split.f1, split.f2, R, cert.rho, D),
          verify_unipotent_kernel_bound(split.f1, split.f2, cert, R, D))

# %% [markdown]
# ## End to end
#
# `verify_theorem` routes this map through the decomposition and checks the
# product and conjugation laws on both factors.

# %%
A = AbelianModel(3, MWModel([[2, 1], [1, 2]]))
rep = verify_theorem(A, SelfMap(M, Q), PointCoords([[1, 1], [0, 2], ["1/3", 0]]))
print(rep.route, rep.verdict, f"gap {rep.gap:.1e}")
for k, v in rep.checks.items():
    print(f"  {'ok ' if v else 'FAIL'} {k}")

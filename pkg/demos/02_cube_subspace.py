"""From a permutation to a subspace of the K_8 edge space whose members are cube complements."""

# %%
import numpy as np

from trifam import antilinear as al
from trifam import cube_subspace as cs
from trifam import graphs

p = al.parse_perm("(1234)")
c = cs.coloring_from_perm(p)

# color matrix C(i, j) = p(i ^ j); every row holds the seven nonzero colors
C = np.zeros((8, 8), dtype=int)
for i, j in graphs.slot_pairs(8):
    C[i, j] = C[j, i] = c.color(i, j)
print(C)

# %% v_k keeps the edges whose color has odd inner product with k
V = cs.subspace_from_coloring(c)
for k in range(1, 8):
    comp = graphs.complement(V.member(k))
    print(k, V.member(k).to_text(), len(V.member(k)), "edges; complement is a cube:",
          graphs.is_cube(comp), graphs.cube_isomorphism(comp.bits))

# %% the same holds for every antilinear permutation
bad = [al.to_cycles(q) for q in al.enumerate_antilinear()
       if not cs.verify_cocube(cs.subspace_from_coloring(cs.coloring_from_perm(q)), oracle=True).ok]
print("permutations whose subspace fails:", bad)

# %% the identity is not antilinear and a triangle survives in some complement
cert = cs.verify_cocube(cs.subspace_from_coloring(cs.coloring_from_perm(al.Perm8.identity())))
print(cert.status, cert.witnesses[0])

# %% pigeonhole: nine vertices need eight distinct nonzero colors at a vertex
k9 = cs.EdgeColoring.from_function(9, 3, lambda i, j: 1 + (i + j) % 7)
print(cs.derive_n_bound(k9).witnesses[:2])

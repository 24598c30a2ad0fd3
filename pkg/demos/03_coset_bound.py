"""A triangulumvirate meets every coset of V at most once."""

# %%
import numpy as np

from trifam import antilinear as al
from trifam import cube_subspace as cs
from trifam import families as fam
from trifam import graphs

V = cs.subspace_from_coloring(cs.coloring_from_perm(al.parse_perm("(1234)")))
F = fam.triangulumvirate(8, (0, 1, 2), [(0, 1)])
print("family size:", fam.family_size(F), "= 2^25;  cosets of V:", fam.coset_count(V))

# %% sample cosets and count how many members fall in F
cert = fam.verify_coset_cap(F, V, samples=100_000, seed=0)
print(cert.status, {k: cert.counters[k] for k in ("samples", "max_count", "distinct_agreements")})

# %% by hand: inside a coset, two graphs agree exactly on a cube
rng = np.random.default_rng(1)
g = int(rng.integers(0, 1 << 28))
coset = V.coset(g)
agreements = {graphs.agree(graphs.EdgeSet(8, a), graphs.EdgeSet(8, b)).bits
              for a in coset for b in coset if a != b}
print(len(agreements), "distinct agreements, all cubes:",
      all(graphs.bits_is_cube(x) for x in agreements))

# %% the family of all graphs obviously breaks the cap
print(fam.verify_coset_cap(fam.everything(8), V, samples=5, seed=0).counters["max_count"])

# %% toy scale: three perfect matchings of K_4 and an exact count
from trifam.pipeline import toy_subspace

toy = toy_subspace()
print(len(fam.enumerate_cosets(toy)), "cosets;",
      fam.family_size_by_enumeration(fam.junta(4, (0, 1, 2))), "graphs in a K_4 junta")

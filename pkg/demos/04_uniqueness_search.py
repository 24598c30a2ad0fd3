"""No choice of T ^ v_T for the 56 triangles is pairwise compatible."""

# %%
import numpy as np

from trifam import antilinear as al
from trifam import cube_subspace as cs
from trifam import families as fam
from trifam import uniqueness as uq

V = cs.subspace_from_coloring(cs.coloring_from_perm(al.parse_perm("(1234)")))
inst = uq.build_instance(V, fam.NB_INTERSECTING)

# %% how dense is the compatibility relation?
dens = np.array([[bin(inst.compat[u][a][w]).count("1") / 7 for w in range(56)]
                 for u in range(56) for a in range(7)])
print("mean fraction of compatible values:", dens.mean().round(3))

# %% the search
out = uq.solve(inst)
print(out.status, out.nodes, "nodes, max depth", out.max_depth)
hist = np.array(out.failures)
print("variables that failed most:", np.argsort(-hist)[:5], hist.max())

# %% triangle mode is stricter, and intersecting is what matters:
# with agreement instead of intersection the instance becomes satisfiable
for mode in (fam.TRI_INTERSECTING, fam.NB_AGREEING):
    print(mode, uq.solve(uq.build_instance(V, mode)).status)

# %% a certificate, core included
cert = uq.emit_unsat_report(inst, out, shrink=False)
print(cert.status, cert.counters["core_size"], cert.counters["core_verified_unsat"])

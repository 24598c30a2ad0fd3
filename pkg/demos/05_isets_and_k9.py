"""I-sets in Z_2^4 and the K_9 coloring search."""

# %%
from trifam import cube_subspace as cs
from trifam import useful_sets as us

print("I0 =", sorted(us.I0), " closure:", us.closure_holds(us.I0))

cert = us.classify_isets()
print({k: cert.counters[k] for k in ("scanned", "closure", "subspace_only", "i0_only", "neither")})

# %% search space for K_9 with colors in Z_2^4
problem = us.n9_problem()
print(len(problem.symmetries), "color symmetries,", len(problem.roots), "root colorings,",
      len(problem.units), "work units")
print("vertex-0 colors:", problem.roots)

out = us.n9_search()
print(out.status, out.nodes, "nodes in", round(out.elapsed, 2), "s")

# %% the same engine on K_8 with Z_2^3 colors does find a coloring
ctl = us.n8_control()
print(ctl.status, "after rejecting", ctl.rejected, "non-cube solutions")
print(cs.verify_cocube(cs.subspace_from_coloring(ctl.coloring), oracle=True).status)

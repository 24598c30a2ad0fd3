"""Computational checks for triangle-intersecting families of graphs on eight vertices.

Modules: gf2 (Z_2^m arithmetic), graphs (edge-set graphs), antilinear
(antilinear and Fano permutations), cube_subspace (colorings and the
co-cube subspace), families (family predicates and the coset cap),
uniqueness (the T ^ v_T search), useful_sets (usefulness, I-sets and the
K_9 coloring search), pipeline (claim registry) and cli.
"""

__version__ = "0.1.0"

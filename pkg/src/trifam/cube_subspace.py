"""Edge colorings of K_n by Z_2^m and the subspaces they span.

A coloring C gives the graphs v_k = {(i, j) : <C(i, j), k> = 1}, one per
k in Z_2^m, and k -> v_k is linear. For an antilinear permutation p, the
coloring C(i, j) = p(i ^ j) of K_8 yields a 3-dimensional subspace whose
nonzero members are complements of cubes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import gf2
from . import graphs
from .antilinear import Perm8
from .certificate import Certificate, verdict
from .graphs import EdgeSet


@dataclass(frozen=True)
class EdgeColoring:
    n: int
    m: int
    colors: tuple[int, ...]  # one color per edge slot

    def __post_init__(self):
        if len(self.colors) != graphs.num_slots(self.n):
            raise ValueError(f"K_{self.n} has {graphs.num_slots(self.n)} edges, got {len(self.colors)} colors")
        if any(not 0 <= c < (1 << self.m) for c in self.colors):
            raise ValueError(f"color outside Z_2^{self.m}")

    def color(self, i: int, j: int) -> int:
        return self.colors[graphs.slot(i, j)]

    def incident(self, v: int) -> list[int]:
        return [self.color(v, w) for w in range(self.n) if w != v]

    @classmethod
    def from_function(cls, n: int, m: int, fn) -> "EdgeColoring":
        return cls(n, m, tuple(fn(i, j) for i, j in graphs.slot_pairs(n)))


@dataclass(frozen=True)
class Subspace:
    """Graphs indexed by Z_2^dim with member(a) ^ member(b) = member(a ^ b)."""

    n: int
    dim: int
    members: tuple[int, ...]

    def __post_init__(self):
        if len(self.members) != 1 << self.dim:
            raise ValueError("member table must have 2^dim entries")
        if self.members[0] != 0:
            raise ValueError("member(0) must be the empty graph")
        for a in range(1 << self.dim):
            for t in range(self.dim):
                b = 1 << t
                if self.members[a] ^ self.members[b] != self.members[a ^ b]:
                    raise ValueError("member table is not linear")

    def member(self, k: int) -> EdgeSet:
        return EdgeSet(self.n, self.members[k])

    @property
    def basis(self) -> list[EdgeSet]:
        return [self.member(1 << t) for t in range(self.dim)]

    @property
    def rank(self) -> int:
        return gf2.rank(self.members[1 << t] for t in range(self.dim))

    @property
    def degenerate(self) -> bool:
        return self.rank < self.dim

    def coset(self, g: int) -> list[int]:
        return [g ^ v for v in self.members]


def coloring_from_perm(p: Perm8) -> EdgeColoring:
    """C(i, j) = p(i ^ j) on K_8 with vertices labelled by Z_2^3."""
    if p(0) != 0:
        raise ValueError(f"coloring needs p(0) = 0, got p(0) = {p(0)}")
    return EdgeColoring.from_function(8, 3, lambda i, j: p(i ^ j))


def subspace_from_coloring(c: EdgeColoring) -> Subspace:
    """v_k(i, j) = <C(i, j), k> for every k; a degenerate span is kept as is."""
    members = []
    for k in range(1 << c.m):
        bits = 0
        for s, col in enumerate(c.colors):
            if gf2.inner(col, k):
                bits |= 1 << s
        members.append(bits)
    return Subspace(c.n, c.m, tuple(members))


def subspace_from_basis(basis) -> Subspace:
    basis = list(basis)
    n = basis[0].n
    members = []
    for k in range(1 << len(basis)):
        bits = 0
        for t, b in enumerate(basis):
            if (k >> t) & 1:
                bits ^= b.bits
        members.append(bits)
    return Subspace(n, len(basis), tuple(members))


def coloring_from_basis(basis) -> EdgeColoring:
    """C(i, j) has bit t set iff edge (i, j) is in basis graph t."""
    basis = list(basis)
    n = basis[0].n
    colors = []
    for s in range(graphs.num_slots(n)):
        colors.append(sum(((b.bits >> s) & 1) << t for t, b in enumerate(basis)))
    return EdgeColoring(n, len(basis), tuple(colors))


def neighborhood(p: Perm8, k: int) -> list[int]:
    """Offsets N with i ~ i ^ N in the complement of v_k."""
    inv = p.inverse()
    return sorted(inv(y) for y in gf2.orth(k, 3) if y)


def verify_cocube(s: Subspace, oracle: bool = False) -> Certificate:
    """Check that every nonzero member of a 3-dim subspace of K_8 has a Q3 complement."""
    if s.n != 8 or s.dim != 3:
        raise ValueError(f"need a 3-dim subspace of K_8, got n={s.n} dim={s.dim}")
    witnesses = []
    complements = {}
    cubes = 0
    for k in range(1, 8):
        comp = graphs.complement(s.member(k))
        complements[str(k)] = comp.to_text()
        fast = graphs.is_cube(comp)
        slow = graphs.is_cube(comp, oracle=True) if oracle else fast
        if fast and slow:
            cubes += 1
            continue
        tri = next((t for t in graphs.triangles_of(8)
                    if graphs.triangle_graph(8, t).issubset(comp)), None)
        witnesses.append({"k": k, "complement": comp.to_text(), "fast": fast,
                          "oracle": slow, "triangle": tri})
    if s.degenerate:
        witnesses.append({"degenerate": True, "rank": s.rank})
    return verdict("lemma-V", witnesses,
                   inputs={"members": [s.member(k).to_text() for k in range(8)],
                           "oracle": oracle},
                   counters={"cubes": cubes, "nonzero_members": 7, "complements": complements})


def check_triangle_regularity(c: EdgeColoring) -> Certificate:
    """Every triangle's three colors must be linearly independent in Z_2^3.

    Equivalent to: no nonzero k leaves a triangle in the complement of v_k.
    """
    if c.m != 3:
        raise ValueError(f"triangle regularity is defined for m=3, got m={c.m}")
    witnesses = []
    for tri in graphs.triangles_of(c.n):
        a, b, d = tri
        cols = (c.color(a, b), c.color(a, d), c.color(b, d))
        if not gf2.is_regular(gf2.GF2Map(3, cols)):
            witnesses.append({"triangle": list(tri), "colors": list(cols)})
    return verdict("triangle-regularity", witnesses,
                   inputs={"n": c.n, "colors": list(c.colors)},
                   counters={"triangles": len(graphs.triangles_of(c.n)),
                             "singular": len(witnesses)})


def derive_n_bound(c: EdgeColoring) -> Certificate:
    """Executable pigeonhole: a triangle-regular coloring forces n <= 8.

    Any two edges at a vertex lie in a triangle, so they need distinct
    nonzero colors, and Z_2^3 has only 7.
    """
    witnesses = []
    tables = {}
    for v in range(c.n):
        inc = c.incident(v)
        tables[str(v)] = inc
        if 0 in inc or len(set(inc)) != len(inc):
            witnesses.append({"vertex": v, "colors": inc,
                              "reason": "repeated or zero color at a vertex"})
    regular = check_triangle_regularity(c) if c.n >= 3 else None
    if regular is not None and not regular.ok:
        witnesses.append({"reason": "coloring is not triangle-regular",
                          "first": regular.witnesses[0]})
    if c.n > 8 and not witnesses:
        raise AssertionError("pigeonhole violated")  # unreachable
    return verdict("n-bound", witnesses,
                   inputs={"n": c.n},
                   counters={"nonzero_colors": (1 << c.m) - 1, "vertex_color_tables": tables})


def coset_members(s: Subspace, g: int) -> list[int]:
    return [g ^ v for v in s.members]


def agreement_identity_holds(s: Subspace) -> bool:
    """agree(member(a), member(b)) == complement(member(a ^ b)) for all a, b."""
    full = graphs.full_mask(s.n)
    return all(~(s.members[a] ^ s.members[b]) & full == s.members[a ^ b] ^ full
               for a, b in itertools.product(range(1 << s.dim), repeat=2))

"""Family predicates, kernel systems and the coset-cap argument."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import graphs
from .certificate import verdict
from .cube_subspace import Subspace
from .graphs import EdgeSet

TRIANGLE = "triangle"
NON_BIPARTITE = "non-bipartite"
INTERSECTING = "intersecting"
AGREEING = "agreeing"


@dataclass(frozen=True)
class PairMode:
    structure: str = NON_BIPARTITE
    relation: str = INTERSECTING

    def __post_init__(self):
        if self.structure not in (TRIANGLE, NON_BIPARTITE):
            raise ValueError(f"unknown structure {self.structure!r}")
        if self.relation not in (INTERSECTING, AGREEING):
            raise ValueError(f"unknown relation {self.relation!r}")

    def __str__(self):
        return f"{self.structure}-{self.relation}"

    def bits_ok(self, b1: int, b2: int, n: int) -> bool:
        if self.relation == INTERSECTING:
            common = b1 & b2
        else:
            common = ~(b1 ^ b2) & graphs.full_mask(n)
        if self.structure == TRIANGLE:
            return graphs.bits_have_triangle(common, n)
        return not graphs.bits_bipartite(common, n)


NB_INTERSECTING = PairMode(NON_BIPARTITE, INTERSECTING)
TRI_INTERSECTING = PairMode(TRIANGLE, INTERSECTING)
NB_AGREEING = PairMode(NON_BIPARTITE, AGREEING)
TRI_AGREEING = PairMode(TRIANGLE, AGREEING)
ALL_MODES = (TRI_INTERSECTING, NB_INTERSECTING, TRI_AGREEING, NB_AGREEING)


def pair_ok(g1: EdgeSet, g2: EdgeSet, mode: PairMode = NB_INTERSECTING) -> bool:
    if g1.n != g2.n:
        raise ValueError(f"vertex counts differ: {g1.n} vs {g2.n}")
    return mode.bits_ok(g1.bits, g2.bits, g1.n)


@dataclass(frozen=True)
class FamilySpec:
    """A junta, a triangulumvirate {G : G & T = T0}, an explicit list, or "all"."""

    kind: str
    n: int
    triangle: tuple[int, int, int] | None = None
    t0: frozenset = frozenset()  # edges of the triangle a member must contain
    members: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.kind in ("junta", "triangulumvirate"):
            if self.triangle is None or len(set(self.triangle)) != 3:
                raise ValueError(f"{self.kind} needs a triangle")
            if any(not 0 <= v < self.n for v in self.triangle):
                raise ValueError(f"triangle {self.triangle} not in K_{self.n}")
            tri_edges = {tuple(sorted(e)) for e in itertools.combinations(self.triangle, 2)}
            if not {tuple(sorted(e)) for e in self.t0} <= tri_edges:
                raise ValueError("T0 must be a subset of the triangle's edges")
        elif self.kind == "all":
            pass
        elif self.kind == "explicit":
            if len(set(self.members)) != len(self.members):
                raise ValueError("explicit family has duplicate members")
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")

    @property
    def triangle_bits(self) -> int:
        return graphs.triangle_graph(self.n, self.triangle).bits

    @property
    def t0_bits(self) -> int:
        if self.kind == "junta":
            return self.triangle_bits
        return EdgeSet.from_edges(self.n, self.t0).bits

    def contains_bits(self, bits: int) -> bool:
        if self.kind == "all":
            return True
        if self.kind == "explicit":
            return bits in self._member_set
        return bits & self.triangle_bits == self.t0_bits

    @cached_property
    def _member_set(self):
        return frozenset(self.members)

    def contains_array(self, bits: np.ndarray) -> np.ndarray:
        if self.kind == "all":
            return np.ones(bits.shape, dtype=bool)
        if self.kind == "explicit":
            return np.isin(bits, np.array(self.members, dtype=bits.dtype))
        return (bits & self.triangle_bits) == self.t0_bits


def junta(n: int, tri) -> FamilySpec:
    return FamilySpec("junta", n, tuple(tri))


def triangulumvirate(n: int, tri, t0_edges=()) -> FamilySpec:
    return FamilySpec("triangulumvirate", n, tuple(tri),
                      frozenset(tuple(sorted(e)) for e in t0_edges))


def everything(n: int) -> FamilySpec:
    return FamilySpec("all", n)


def explicit(n: int, graphs_list) -> FamilySpec:
    return FamilySpec("explicit", n, members=tuple(g.bits for g in graphs_list))


def family_contains(f: FamilySpec, g: EdgeSet) -> bool:
    if g.n != f.n:
        raise ValueError(f"vertex counts differ: {f.n} vs {g.n}")
    return f.contains_bits(g.bits)


def family_size(f: FamilySpec) -> int:
    """Kernel systems fix the 3 triangle slots and leave the rest free."""
    if f.kind == "explicit":
        return len(f.members)
    if f.kind == "all":
        return 2 ** graphs.num_slots(f.n)
    return 2 ** (graphs.num_slots(f.n) - 3)


def family_size_by_enumeration(f: FamilySpec) -> int:
    if graphs.num_slots(f.n) > 20:
        raise ValueError("enumeration oracle limited to n <= 6")
    return sum(f.contains_bits(b) for b in range(1 << graphs.num_slots(f.n)))


def coset_of(g: EdgeSet, s: Subspace) -> EdgeSet:
    """Least member, by slot-order integer value, of the coset g ^ S."""
    if g.n != s.n:
        raise ValueError(f"vertex counts differ: {g.n} vs {s.n}")
    return EdgeSet(g.n, min(g.bits ^ v for v in s.members))


def coset_count(s: Subspace) -> int:
    if s.degenerate:
        raise ValueError("subspace basis is degenerate")
    return 2 ** (graphs.num_slots(s.n) - s.dim)


def enumerate_cosets(s: Subspace) -> dict[int, list[int]]:
    """Exhaustive coset partition of the whole edge space (small n only)."""
    if graphs.num_slots(s.n) > 20:
        raise ValueError("exhaustive coset enumeration limited to n <= 6")
    out: dict[int, list[int]] = {}
    for b in range(1 << graphs.num_slots(s.n)):
        rep = min(b ^ v for v in s.members)
        out.setdefault(rep, []).append(b)
    return out


def _random_graphs(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    slots = graphs.num_slots(n)
    if slots > 62:
        raise ValueError("sampling limited to 62 edge slots")
    return rng.integers(0, 1 << slots, size=count, dtype=np.int64)


def verify_coset_cap(f: FamilySpec, s: Subspace, samples: int = 100_000, seed: int = 0,
                     claim_id: str = "coset-cap"):
    """Sample cosets g ^ S; each may meet f in at most 2^(dim-3) members.

    For dim = 3 every same-coset pair's agreement is also checked to be a
    cube. Agreements are computed for every pair of every sample and the
    distinct values are run through the cube test.
    """
    if f.n != s.n:
        raise ValueError("family and subspace live on different K_n")
    rng = np.random.default_rng(seed)
    reps = _random_graphs(s.n, samples, rng)
    members = np.array(s.members, dtype=np.int64)
    cosets = reps[:, None] ^ members[None, :]          # samples x 2^dim
    inside = f.contains_array(cosets)
    counts = inside.sum(axis=1)
    cap = max(1, 2 ** (s.dim - 3))
    witnesses = []
    over = np.flatnonzero(counts > cap)
    for idx in over[:5]:
        hit = cosets[idx][inside[idx]]
        witnesses.append({"coset_rep": EdgeSet(s.n, int(reps[idx])).to_text(),
                          "members_in_family": [EdgeSet(s.n, int(b)).to_text() for b in hit]})
    pairs_checked = 0
    distinct_agreements = 0
    if s.dim == 3 and s.n == 8:
        full = graphs.full_mask(8)
        seen = set()
        for a, b in itertools.combinations(range(8), 2):
            agr = ~(cosets[:, a] ^ cosets[:, b]) & full
            pairs_checked += len(agr)
            seen.update(np.unique(agr).tolist())
        distinct_agreements = len(seen)
        for bits in sorted(seen):
            if not graphs.bits_is_cube(bits):
                witnesses.append({"non_cube_agreement": EdgeSet(8, bits).to_text()})
    return verdict(claim_id, witnesses,
                   inputs={"family": _describe(f), "subspace": [EdgeSet(s.n, v).to_text() for v in s.members]},
                   counters={"samples": samples, "cap": cap, "max_count": int(counts.max(initial=0)),
                             "violations": int(len(over)), "pairs_checked": pairs_checked,
                             "distinct_agreements": distinct_agreements},
                   seed=seed)


def _describe(f: FamilySpec) -> dict:
    if f.kind == "all":
        return {"kind": "all", "n": f.n}
    if f.kind == "explicit":
        return {"kind": "explicit", "size": len(f.members)}
    return {"kind": f.kind, "n": f.n, "triangle": list(f.triangle),
            "t0": sorted(list(e) for e in f.t0)}

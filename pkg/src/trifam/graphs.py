"""Subgraphs of K_n as edge-indicator bitmasks.

Edge (i, j) with i < j lives in slot ``j*(j-1)//2 + i``. The slot order is
part of the certificate format and must not change.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MAX_VERTICES = 12


def slot(i: int, j: int) -> int:
    if i == j:
        raise ValueError(f"no edge from vertex {i} to itself")
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def num_slots(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def slot_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Edge (i, j) for every slot, in slot order."""
    return tuple((i, j) for j in range(n) for i in range(j))


def full_mask(n: int) -> int:
    return (1 << num_slots(n)) - 1


def _check_n(n: int):
    if not 0 <= n <= MAX_VERTICES:
        raise ValueError(f"vertex count must be in 0..{MAX_VERTICES}, got {n}")


@dataclass(frozen=True, order=True)
class EdgeSet:
    n: int
    bits: int

    def __post_init__(self):
        _check_n(self.n)
        if self.bits < 0 or self.bits >> num_slots(self.n):
            raise ValueError(f"bits set outside the {num_slots(self.n)} slots of K_{self.n}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "EdgeSet":
        bits = 0
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) not in K_{n}")
            bits |= 1 << slot(i, j)
        return cls(n, bits)

    @classmethod
    def empty(cls, n: int) -> "EdgeSet":
        return cls(n, 0)

    @classmethod
    def complete(cls, n: int) -> "EdgeSet":
        return cls(n, full_mask(n))

    def edges(self) -> list[tuple[int, int]]:
        return [e for s, e in enumerate(slot_pairs(self.n)) if (self.bits >> s) & 1]

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, edge):
        return bool((self.bits >> slot(*edge)) & 1)

    def __xor__(self, other: "EdgeSet") -> "EdgeSet":
        return symdiff(self, other)

    def __and__(self, other: "EdgeSet") -> "EdgeSet":
        return intersect(self, other)

    def __or__(self, other: "EdgeSet") -> "EdgeSet":
        _same_n(self, other)
        return EdgeSet(self.n, self.bits | other.bits)

    def issubset(self, other: "EdgeSet") -> bool:
        _same_n(self, other)
        return self.bits & ~other.bits == 0

    def to_text(self) -> str:
        return to_text(self)

    def __str__(self):
        return to_text(self)


def _same_n(g1: EdgeSet, g2: EdgeSet):
    if g1.n != g2.n:
        raise ValueError(f"vertex counts differ: {g1.n} vs {g2.n}")


def complement(g: EdgeSet) -> EdgeSet:
    return EdgeSet(g.n, g.bits ^ full_mask(g.n))


def symdiff(g1: EdgeSet, g2: EdgeSet) -> EdgeSet:
    _same_n(g1, g2)
    return EdgeSet(g1.n, g1.bits ^ g2.bits)


def intersect(g1: EdgeSet, g2: EdgeSet) -> EdgeSet:
    _same_n(g1, g2)
    return EdgeSet(g1.n, g1.bits & g2.bits)


def agree(g1: EdgeSet, g2: EdgeSet) -> EdgeSet:
    """Edges and non-edges on which both graphs coincide."""
    _same_n(g1, g2)
    return EdgeSet(g1.n, ~(g1.bits ^ g2.bits) & full_mask(g1.n))


# -- raw bitmask predicates (used in the search loops) ----------------------

@lru_cache(maxsize=None)
def triangle_masks(n: int) -> tuple[int, ...]:
    return tuple((1 << slot(a, b)) | (1 << slot(a, c)) | (1 << slot(b, c))
                 for a, b, c in itertools.combinations(range(n), 3))


@lru_cache(maxsize=None)
def _incidence(n: int) -> tuple[tuple[int, ...], ...]:
    """For each vertex, (neighbor vertex, slot) pairs."""
    return tuple(tuple((w, slot(v, w)) for w in range(n) if w != v) for v in range(n))


def adjacency(bits: int, n: int) -> list[int]:
    """Neighbor bitmask of every vertex."""
    adj = [0] * n
    for s, (i, j) in enumerate(slot_pairs(n)):
        if (bits >> s) & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


def degrees(bits: int, n: int) -> list[int]:
    return [a.bit_count() for a in adjacency(bits, n)]


def bits_have_triangle(bits: int, n: int) -> bool:
    for t in triangle_masks(n):
        if bits & t == t:
            return True
    return False


def bits_bipartite(bits: int, n: int) -> bool:
    adj = adjacency(bits, n)
    color = [-1] * n
    for start in range(n):
        if color[start] >= 0 or not adj[start]:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            nbrs = adj[u]
            while nbrs:
                low = nbrs & -nbrs
                w = low.bit_length() - 1
                nbrs ^= low
                if color[w] < 0:
                    color[w] = color[u] ^ 1
                    stack.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def bits_is_cube(bits: int) -> bool:
    """Fast Q3 test on 8 vertices: 12 edges, 3-regular, bipartite.

    A 3-regular bipartite graph on 8 vertices has parts 4+4 with each vertex
    missing exactly one vertex across, i.e. K_{4,4} minus a perfect matching,
    which is Q3.
    """
    if bits.bit_count() != 12:
        return False
    if any(a.bit_count() != 3 for a in adjacency(bits, 8)):
        return False
    return bits_bipartite(bits, 8)


CUBE_GENERATORS = (1, 2, 4)


@lru_cache(maxsize=None)
def standard_cube_bits() -> int:
    return sum(1 << slot(i, j) for i in range(8) for j in range(i + 1, 8)
               if i ^ j in CUBE_GENERATORS)


def cube_isomorphism(bits: int) -> tuple[int, ...] | None:
    """Explicit isomorphism search from the standard Q3 onto ``bits``.

    Returns the vertex map (standard vertex -> graph vertex) or None. Edge
    count and degree sequence are used as pre-filters; the rest is plain
    backtracking over injective maps that preserve adjacency in both
    directions.
    """
    if bits.bit_count() != 12:
        return None
    adj = adjacency(bits, 8)
    if sorted(a.bit_count() for a in adj) != [3] * 8:
        return None
    qadj = adjacency(standard_cube_bits(), 8)
    image = [-1] * 8
    used = 0

    def place(v: int) -> bool:
        nonlocal used
        if v == 8:
            return True
        for cand in range(8):
            if (used >> cand) & 1:
                continue
            ok = True
            for u in range(v):
                q_edge = (qadj[v] >> u) & 1
                g_edge = (adj[cand] >> image[u]) & 1
                if q_edge != g_edge:
                    ok = False
                    break
            if ok:
                image[v] = cand
                used |= 1 << cand
                if place(v + 1):
                    return True
                used &= ~(1 << cand)
                image[v] = -1
        return False

    return tuple(image) if place(0) else None


# -- public predicates ------------------------------------------------------

def has_triangle(g: EdgeSet) -> bool:
    return bits_have_triangle(g.bits, g.n)


def is_bipartite(g: EdgeSet) -> bool:
    """2-colorability of the edge set; isolated vertices are ignored."""
    return bits_bipartite(g.bits, g.n)


def is_cube(g: EdgeSet, oracle: bool = False) -> bool:
    """Whether ``g`` is a Q3 spanning all 8 vertices.

    ``oracle=True`` runs the explicit isomorphism search instead of the
    degree/bipartite shortcut.
    """
    if g.n != 8:
        raise ValueError(f"cube test needs n=8, got n={g.n}")
    if oracle:
        return cube_isomorphism(g.bits) is not None
    return bits_is_cube(g.bits)


def triangles_of(n: int) -> list[tuple[int, int, int]]:
    _check_n(n)
    return list(itertools.combinations(range(n), 3))


def triangle_graph(n: int, tri) -> EdgeSet:
    a, b, c = tri
    if len({a, b, c}) != 3:
        raise ValueError(f"triangle needs distinct vertices: {tri}")
    return EdgeSet.from_edges(n, [(a, b), (a, c), (b, c)])


def cycle_graph(n: int, vertices) -> EdgeSet:
    vs = list(vertices)
    return EdgeSet.from_edges(n, [(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))])


# -- canonical text: "n:" then one hex digit per 4 slots, lowest slots first --

def to_text(g: EdgeSet) -> str:
    digits = (num_slots(g.n) + 3) // 4
    return f"{g.n}:" + "".join("0123456789abcdef"[(g.bits >> (4 * d)) & 15] for d in range(digits))


def from_text(text: str) -> EdgeSet:
    try:
        n_text, hex_text = text.split(":")
        n = int(n_text)
        bits = 0
        for d, ch in enumerate(hex_text):
            bits |= int(ch, 16) << (4 * d)
    except ValueError as exc:
        raise ValueError(f"malformed edge-set text {text!r}") from exc
    if len(hex_text) != (num_slots(n) + 3) // 4:
        raise ValueError(f"wrong digit count in {text!r}")
    return EdgeSet(n, bits)

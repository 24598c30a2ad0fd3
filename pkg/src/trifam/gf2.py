"""Arithmetic over Z_2^m for small m, with vectors stored as ints.

Bit t of an integer is coordinate t of the vector, so XOR is vector
addition and ``1 << t`` is the t-th unit vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

MAX_DIM = 4


def inner(x: int, y: int) -> int:
    """Standard inner product: parity of the bitwise AND."""
    return (x & y).bit_count() & 1


def orth(x: int, m: int = 3) -> list[int]:
    """All y in Z_2^m with <x, y> = 0, in increasing order."""
    return [y for y in range(1 << m) if inner(x, y) == 0]


def span(vectors) -> list[int]:
    """All XOR combinations of ``vectors`` (sorted, includes 0)."""
    out = {0}
    for v in vectors:
        out |= {u ^ v for u in out}
    return sorted(out)


def rank(vectors) -> int:
    """Rank over GF(2) of a collection of int-encoded vectors."""
    pivots: dict[int, int] = {}
    r = 0
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                r += 1
                break
            v ^= pivots[top]
    return r


@dataclass(frozen=True)
class GF2Map:
    """Linear map on Z_2^m, given by the images of the unit vectors."""

    m: int
    images: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.m <= MAX_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {self.m}")
        if len(self.images) != self.m:
            raise ValueError(f"need {self.m} basis images, got {len(self.images)}")
        if any(not 0 <= v < (1 << self.m) for v in self.images):
            raise ValueError(f"basis image out of range for m={self.m}: {self.images}")

    def __call__(self, x: int) -> int:
        out = 0
        for t in range(self.m):
            if (x >> t) & 1:
                out ^= self.images[t]
        return out

    def table(self) -> tuple[int, ...]:
        return tuple(self(x) for x in range(1 << self.m))

    def compose(self, other: "GF2Map") -> "GF2Map":
        """``self`` after ``other``."""
        if other.m != self.m:
            raise ValueError("dimension mismatch")
        return GF2Map(self.m, tuple(self(v) for v in other.images))

    def inverse(self) -> "GF2Map":
        """Inverse by Gauss-Jordan elimination on the augmented basis images."""
        m = self.m
        # row t: image of e_t (low m bits) augmented with e_t (high bits)
        rows = [self.images[t] | (1 << (m + t)) for t in range(m)]
        for col in range(m):
            piv = next((r for r in range(col, m) if (rows[r] >> col) & 1), None)
            if piv is None:
                raise ValueError(f"map {self.images} is singular")
            rows[col], rows[piv] = rows[piv], rows[col]
            for r in range(m):
                if r != col and (rows[r] >> col) & 1:
                    rows[r] ^= rows[col]
        # row t now reads e_t = sum of images of the basis vectors in its high bits
        return GF2Map(m, tuple(rows[t] >> m for t in range(m)))

    @classmethod
    def identity(cls, m: int) -> "GF2Map":
        return cls(m, tuple(1 << t for t in range(m)))

    @classmethod
    def from_table(cls, table, m: int) -> "GF2Map":
        """Build from a full value table, checking that it is XOR-linear."""
        table = tuple(table)
        f = cls(m, tuple(table[1 << t] for t in range(m)))
        if f.table() != table:
            raise ValueError(f"table {table} is not linear")
        return f

    def __str__(self):
        return ", ".join(f"{1 << t}->{v}" for t, v in enumerate(self.images))


def is_regular(f: GF2Map) -> bool:
    return rank(f.images) == f.m


def enumerate_regular(m: int) -> list[GF2Map]:
    """Every invertible linear map on Z_2^m, in lexicographic image order."""
    if not 1 <= m <= MAX_DIM:
        raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {m}")
    out = []
    # choose each basis image outside the span of the previous ones
    def extend(prefix, spanned):
        if len(prefix) == m:
            out.append(GF2Map(m, tuple(prefix)))
            return
        for v in range(1, 1 << m):
            if v not in spanned:
                extend(prefix + [v], spanned | {u ^ v for u in spanned})
    extend([], {0})
    return out


def regular_count(m: int) -> int:
    count = 1
    for t in range(m):
        count *= (1 << m) - (1 << t)
    return count


def subspaces(m: int, dim: int) -> list[frozenset[int]]:
    """All ``dim``-dimensional subspaces of Z_2^m as sets of members."""
    found = set()
    for vs in itertools.combinations(range(1, 1 << m), dim):
        if rank(vs) == dim:
            found.add(frozenset(span(vs)))
    return sorted(found, key=lambda s: sorted(s))

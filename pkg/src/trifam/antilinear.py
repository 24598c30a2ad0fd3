"""Antilinear and Fano permutations of Z_2^3 = {0, ..., 7}.

A permutation fixing 0 is antilinear when it maps no Fano line (three
distinct nonzero points XOR-ing to 0) onto a Fano line. Its signature sends
x to the XOR of its values over the hyperplane orthogonal to x; that map is
always linear, and the antilinear permutations with identity signature are
the Fano permutations.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import reduce
from operator import xor

from . import gf2
from .gf2 import GF2Map

POINTS = tuple(range(8))


@dataclass(frozen=True, order=True)
class Perm8:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(POINTS):
            raise ValueError(f"not a permutation of 0..7: {self.images}")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __str__(self):
        return to_cycles(self)

    def digits(self) -> str:
        return "".join(map(str, self.images))

    def inverse(self) -> "Perm8":
        inv = [0] * 8
        for x, y in enumerate(self.images):
            inv[y] = x
        return Perm8(tuple(inv))

    def compose(self, other: "Perm8") -> "Perm8":
        """``self`` after ``other``."""
        return Perm8(tuple(self.images[other.images[x]] for x in POINTS))

    @classmethod
    def identity(cls) -> "Perm8":
        return cls(POINTS)


def parse_perm(text: str) -> Perm8:
    """Parse cycle notation such as ``"(1234)"`` or ``"(13)(26)(45)"``.

    Symbols are single digits 0-7; fixed points may be omitted and ``"()"``
    is the identity.
    """
    compact = re.sub(r"\s+", "", text)
    if not re.fullmatch(r"(\([0-7]*\))+", compact):
        raise ValueError(f"malformed cycle notation: {text!r}")
    images = list(POINTS)
    seen: set[int] = set()
    for body in re.findall(r"\(([0-7]*)\)", compact):
        cycle = [int(ch) for ch in body]
        for x in cycle:
            if x in seen:
                raise ValueError(f"symbol {x} repeated in {text!r}")
            seen.add(x)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a] = b
    return Perm8(tuple(images))


def to_cycles(p: Perm8) -> str:
    """Canonical cycle notation: each cycle starts at its least element."""
    seen = set()
    parts = []
    for start in POINTS:
        if start in seen or p(start) == start:
            continue
        cycle = [start]
        seen.add(start)
        x = p(start)
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = p(x)
        parts.append("(" + "".join(map(str, cycle)) + ")")
    return "".join(parts) or "()"


def fano_lines() -> list[tuple[int, int, int]]:
    return [t for t in itertools.combinations(range(1, 8), 3) if t[0] ^ t[1] ^ t[2] == 0]


def is_antilinear(p: Perm8) -> bool:
    if p(0) != 0:
        return False
    return all(p(x) ^ p(y) ^ p(z) != 0 for x, y, z in fano_lines())


def signature_table(p: Perm8) -> tuple[int, ...]:
    """x -> XOR of p over the hyperplane orthogonal to x, for x in 0..7."""
    return tuple(reduce(xor, (p(y) for y in gf2.orth(x, 3)), 0) for x in POINTS)


def signature(p: Perm8) -> GF2Map:
    if p(0) != 0:
        raise ValueError(f"signature needs p(0) = 0, got p(0) = {p(0)}")
    table = signature_table(p)
    f = GF2Map(3, (table[1], table[2], table[4]))
    if f.table() != table:
        raise AssertionError(f"signature of {p} is not linear: {table}")
    return f


def line_sums(p: Perm8) -> tuple[int, ...]:
    """XOR of p over the Fano line orthogonal to x, for x = 1..7."""
    return tuple(reduce(xor, (p(y) for y in gf2.orth(x, 3) if y), 0) for x in range(1, 8))


def is_fano(p: Perm8) -> bool:
    return is_antilinear(p) and signature(p) == GF2Map.identity(3)


def permutations_fixing_zero():
    for rest in itertools.permutations(range(1, 8)):
        yield Perm8((0,) + rest)


def enumerate_antilinear() -> list[Perm8]:
    return [p for p in permutations_fixing_zero() if is_antilinear(p)]


def enumerate_fano() -> list[Perm8]:
    return [p for p in permutations_fixing_zero() if is_fano(p)]


def fano_by_hand() -> list[Perm8]:
    """Fano permutations rebuilt from their values on 1, 2, 4.

    For a Fano permutation the value on each remaining point is forced:
    p(a^b) = p(a)^p(b)^c where c is the third nonzero point orthogonal to
    both a and b. The values on 1, 2, 4 are restricted by <x, p(x)> = 1 and
    <x, p(y)> + <y, p(x)> = 1. Surviving candidates are re-checked in full.
    """
    def third(a, b):
        return next(c for c in range(1, 8) if c not in (a, b)
                    and gf2.inner(a, c) == 0 and gf2.inner(b, c) == 0)

    found = []
    for p1, p2, p4 in itertools.product(range(1, 8), repeat=3):
        vals = {1: p1, 2: p2, 4: p4}
        if any(gf2.inner(x, vals[x]) != 1 for x in vals):
            continue
        if any(gf2.inner(x, vals[y]) ^ gf2.inner(y, vals[x]) != 1
               for x, y in itertools.combinations(vals, 2)):
            continue
        images = [0] * 8
        images[1], images[2], images[4] = p1, p2, p4
        for a, b in ((1, 2), (1, 4), (2, 4)):
            images[a ^ b] = images[a] ^ images[b] ^ third(a, b)
        images[7] = p1 ^ p2 ^ p4 ^ 7
        if sorted(images) != list(POINTS):
            continue
        p = Perm8(tuple(images))
        if is_fano(p):
            found.append(p)
    return sorted(found)


def apply_linear(f: GF2Map, p: Perm8) -> Perm8:
    """The permutation x -> f(p(x))."""
    return Perm8(tuple(f(p(x)) for x in POINTS))


def factorize(p: Perm8) -> tuple[GF2Map, Perm8]:
    """Split an antilinear p as L after phi, L linear and phi Fano."""
    if not is_antilinear(p):
        raise ValueError(f"{p} is not antilinear")
    L = signature(p)
    if not gf2.is_regular(L):
        raise AssertionError(f"signature of antilinear {p} is singular")
    phi = apply_linear(L.inverse(), p)
    return L, phi


def check_orth_pair(p: Perm8, x: int, y: int) -> int:
    """<x, p(y)> + <y, p(x)> for a Fano p and distinct nonzero x, y."""
    if not (0 < x < 8 and 0 < y < 8) or x == y:
        raise ValueError(f"need distinct nonzero points, got {x}, {y}")
    if not is_fano(p):
        raise ValueError(f"{p} is not a Fano permutation")
    return gf2.inner(x, p(y)) ^ gf2.inner(y, p(x))

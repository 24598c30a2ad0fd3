"""Sets of graphs that are useful for triangles, and the searches behind them.

A set of 2^m graphs is useful for triangles when every subset of
2^(m-3) + 1 of its members contains two whose agreement is triangle-free.
For 4-dimensional subspaces the question reduces to which indices i have
a triangle-free complement of v_i (the I-set); the edge-coloring search at
the bottom looks for K_9 colorings realising the weight-{1,2} I-set.
"""

from __future__ import annotations

import itertools
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import gf2
from . import graphs
from .certificate import Certificate, verdict
from .cube_subspace import EdgeColoring, Subspace, subspace_from_coloring, verify_cocube
from .families import FamilySpec
from .graphs import EdgeSet

UNSAT = "UNSAT"
SAT = "SAT"
INCOMPLETE = "INCOMPLETE"

CHECKPOINT_SCHEMA = 1


@dataclass(frozen=True)
class CandidateSet:
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        size = len(self.members)
        if size < 8 or size & (size - 1):
            raise ValueError(f"candidate set size must be a power of two >= 8, got {size}")
        if len(set(self.members)) != size:
            raise ValueError("candidate set members must be distinct")

    @property
    def m(self) -> int:
        return len(self.members).bit_length() - 1

    @classmethod
    def from_graphs(cls, gs) -> "CandidateSet":
        gs = list(gs)
        return cls(gs[0].n, tuple(g.bits for g in gs))

    @classmethod
    def from_subspace(cls, s: Subspace) -> "CandidateSet":
        return cls(s.n, tuple(s.members))


def translate(cs: CandidateSet, w: int) -> CandidateSet:
    return CandidateSet(cs.n, tuple(w ^ v for v in cs.members))


def _agreement_triangle_free(a: int, b: int, n: int) -> bool:
    return not graphs.bits_have_triangle(~(a ^ b) & graphs.full_mask(n), n)


def is_useful(cs: CandidateSet) -> bool:
    """Every (2^(m-3)+1)-subset has a pair with triangle-free agreement.

    Only m = 3 (all pairs) and m = 4 (all triples) are supported.
    """
    m = cs.m
    if m > 4:
        raise ValueError(f"usefulness check supports m <= 4, got m={m}")
    mem = cs.members
    good = {(i, j): _agreement_triangle_free(mem[i], mem[j], cs.n)
            for i, j in itertools.combinations(range(len(mem)), 2)}
    if m == 3:
        return all(good.values())
    return all(good[i, j] or good[i, k] or good[j, k]
               for i, j, k in itertools.combinations(range(len(mem)), 3))


def span(cs: CandidateSet) -> CandidateSet:
    """XOR closure of the members together with the empty graph."""
    return CandidateSet(cs.n, tuple(gf2.span(cs.members)))


# -- I-sets -------------------------------------------------------------------
# An I-set is a set of nonzero elements of Z_2^4, stored as a 15-bit mask with
# bit (i - 1) standing for element i.

NONZERO4 = tuple(range(1, 16))
I0 = frozenset(i for i in NONZERO4 if i.bit_count() in (1, 2))


def to_mask(iset) -> int:
    return sum(1 << (i - 1) for i in iset)


def from_mask(mask: int) -> frozenset:
    return frozenset(i for i in NONZERO4 if (mask >> (i - 1)) & 1)


def closure_holds(iset) -> bool:
    """Distinct nonzero x, y outside I must have x ^ y inside I."""
    iset = frozenset(iset)
    if 0 in iset:
        raise ValueError("I-sets contain nonzero elements only")
    outside = [x for x in NONZERO4 if x not in iset]
    return all(x ^ y in iset for x, y in itertools.combinations(outside, 2))


def _closure_holds_mask(mask: int) -> bool:
    outside = [x for x in NONZERO4 if not (mask >> (x - 1)) & 1]
    for a in range(len(outside)):
        x = outside[a]
        for y in outside[a + 1:]:
            if not (mask >> ((x ^ y) - 1)) & 1:
                return False
    return True


def iset_of(s: Subspace) -> frozenset:
    """Indices of the nonzero members of a 4-dim subspace with triangle-free complement."""
    if s.dim != 4:
        raise ValueError(f"need a 4-dim subspace, got dim={s.dim}")
    full = graphs.full_mask(s.n)
    return frozenset(i for i in NONZERO4 if not graphs.bits_have_triangle(s.members[i] ^ full, s.n))


def hyperplane_masks() -> list[int]:
    """Nonzero parts of the 15 three-dimensional subspaces of Z_2^4."""
    return [to_mask(sub - {0}) for sub in gf2.subspaces(4, 3)]


def i0_images_by_map() -> np.ndarray:
    """Mask of g(I0) for every invertible g, in enumerate_regular order."""
    out = []
    for g in gf2.enumerate_regular(4):
        out.append(to_mask(g(i) for i in I0))
    return np.array(out, dtype=np.int64)


def _contains_hyperplane_slow(mask: int) -> bool:
    members = [i for i in NONZERO4 if (mask >> (i - 1)) & 1]
    inside = set(members)
    for x, y in itertools.combinations(members, 2):
        if x ^ y not in inside:
            continue
        for z in members:
            if z in (x, y, x ^ y):
                continue
            if {z ^ x, z ^ y, z ^ x ^ y} <= inside:
                return True
    return False


def i0_orbit_slow() -> set[int]:
    """Orbit of I0 under GL(4,2), grown from transvection generators."""
    gens = []
    for i, j in itertools.permutations(range(4), 2):
        images = [1 << t for t in range(4)]
        images[i] ^= 1 << j
        gens.append(gf2.GF2Map(4, tuple(images)))
    start = to_mask(I0)
    orbit = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for mask in frontier:
            elems = from_mask(mask)
            for g in gens:
                img = to_mask(g(x) for x in elems)
                if img not in orbit:
                    orbit.add(img)
                    nxt.append(img)
        frontier = nxt
    return orbit


def _classify_chunk(args):
    lo, hi, hyper, orbit_by_map = args
    rows = []
    for mask in range(lo, hi):
        if not _closure_holds_mask(mask):
            continue
        a = any(mask & h == h for h in hyper)
        b = mask.bit_count() == 10 and bool(np.any(orbit_by_map == mask))
        rows.append((mask, a, b))
    return rows


def classify_isets(workers: int = 1, slow_check: bool = True) -> Certificate:
    """Brute force over all 2^15 I-sets satisfying the closure property.

    Each must contain a 3-dim subspace (minus 0) or be a linear image of
    I0. The slow path recomputes both classes independently: subspace
    containment by direct search, and the I0 orbit by closure under
    generators.
    """
    hyper = hyperplane_masks()
    by_map = i0_images_by_map()
    total = 1 << 15
    if workers > 1:
        step = total // (workers * 4)
        chunks = [(lo, min(lo + step, total), hyper, by_map) for lo in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [r for part in pool.map(_classify_chunk, chunks) for r in part]
    else:
        rows = _classify_chunk((0, total, hyper, by_map))
    witnesses = []
    counts = {"closure": len(rows), "subspace_only": 0, "i0_only": 0, "both": 0, "neither": 0}
    for mask, a, b in rows:
        key = "both" if a and b else "subspace_only" if a else "i0_only" if b else "neither"
        counts[key] += 1
        if not (a or b):
            witnesses.append({"iset": sorted(from_mask(mask))})
    slow = {}
    if slow_check:
        orbit = i0_orbit_slow()
        disagreements = 0
        for mask, a, b in rows:
            if _contains_hyperplane_slow(mask) != a or (mask in orbit) != b:
                disagreements += 1
                witnesses.append({"slow_path_disagrees": sorted(from_mask(mask))})
        slow = {"orbit_size": len(orbit), "orbit_size_by_map": len(set(by_map.tolist())),
                "slow_path_disagreements": disagreements}
    i0_classes = [(a, b) for mask, a, b in rows if mask == to_mask(I0)]
    return verdict("isets-classify", witnesses,
                   inputs={"i0": sorted(I0)},
                   counters={"scanned": total, **counts, **slow,
                             "i0_class": {"subspace": i0_classes[0][0], "i0": i0_classes[0][1]}
                             if i0_classes else None,
                             "regular_maps": len(by_map), "hyperplanes": len(hyper)})


# -- edge-coloring search -------------------------------------------------------

def triangle_table(m: int, constraint) -> list[list[int]]:
    """allowed[x][y]: bitmask of z such that no s in ``constraint`` is orthogonal to all of x, y, z."""
    q = 1 << m
    S = list(constraint)
    table = [[0] * q for _ in range(q)]
    for x in range(q):
        for y in range(q):
            mask = 0
            for z in range(q):
                if all(gf2.inner(x, s) or gf2.inner(y, s) or gf2.inner(z, s) for s in S):
                    mask |= 1 << z
            table[x][y] = mask
    return table


@lru_cache(maxsize=None)
def _regular_tables(m: int) -> np.ndarray:
    return np.array([g.table() for g in gf2.enumerate_regular(m)])


def color_symmetries(m: int, allowed) -> list[tuple[int, ...]]:
    """Invertible linear maps of Z_2^m preserving the triangle relation (as value tables)."""
    q = 1 << m
    rel = np.array([[[(allowed[x][y] >> z) & 1 for z in range(q)] for y in range(q)]
                    for x in range(q)], dtype=bool)
    tables = _regular_tables(m)
    # cheap screen on a spread of triples, then the full check on survivors
    x, y, z = np.unravel_index(np.arange(0, q ** 3, 37), (q, q, q))
    screen = (rel[tables[:, x], tables[:, y], tables[:, z]] == rel[x, y, z]).all(axis=1)
    out = []
    for f in tables[screen]:
        if np.array_equal(rel[np.ix_(f, f, f)], rel):
            out.append(tuple(int(v) for v in f))
    return out


def root_sets(n: int, m: int, allowed, symmetries) -> list[tuple[int, ...]]:
    """Canonical colorings of the edges at vertex 0.

    Vertices 1..n-1 can be relabelled, so the vertex-0 colors are taken
    sorted; among color-symmetric images only the lexicographically least
    sorted tuple is kept. Every pair must leave some color for the edge
    joining their other endpoints.
    """
    q = 1 << m
    found = set()

    def extend(prefix):
        if len(prefix) == n - 1:
            canon = min(tuple(sorted(f[c] for c in prefix)) for f in symmetries)
            found.add(canon)
            return
        start = prefix[-1] if prefix else 0
        for c in range(start, q):
            if all(allowed[p][c] for p in prefix):
                extend(prefix + [c])

    extend([])
    return sorted(found)


def edge_order(n: int) -> list[tuple[int, int]]:
    """Vertex 0's edges first, then vertex t's edges to 1..t-1 for t = 2, 3, ..."""
    return [(0, v) for v in range(1, n)] + [(i, t) for t in range(2, n) for i in range(1, t)]


@dataclass
class SearchProblem:
    n: int
    m: int
    constraint: tuple[int, ...]
    split_depth: int = 2
    reduce_colors: bool = True  # off: identity only, for cross-checking the reduction

    def __post_init__(self):
        self.allowed = triangle_table(self.m, self.constraint)
        if self.reduce_colors:
            self.symmetries = color_symmetries(self.m, self.allowed)
        else:
            self.symmetries = [tuple(range(1 << self.m))]
        self.roots = root_sets(self.n, self.m, self.allowed, self.symmetries)
        self.order = edge_order(self.n)
        self.units = self._units()

    def _units(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Work units: a root coloring plus the first ``split_depth`` free edges."""
        units = []
        free = self.order[self.n - 1:self.n - 1 + self.split_depth]
        for root in self.roots:
            def grow(prefix):
                if len(prefix) == len(free):
                    units.append((root, tuple(prefix)))
                    return
                col = _root_matrix(self.n, root)
                for (i, t), c in zip(free, prefix):
                    col[i][t] = col[t][i] = c
                i, t = free[len(prefix)]
                for c in _candidates(self.allowed, col, i, t):
                    grow(prefix + [c])
            grow([])
        return units

    def fingerprint(self) -> dict:
        return {"schema_version": CHECKPOINT_SCHEMA, "n": self.n, "m": self.m,
                "constraint": list(self.constraint), "split_depth": self.split_depth,
                "reduce_colors": self.reduce_colors,
                "edge_order": [list(e) for e in self.order],
                "units": [{"root": list(r), "prefix": list(p)} for r, p in self.units]}


def _root_matrix(n, root):
    col = [[-1] * n for _ in range(n)]
    for v in range(1, n):
        col[0][v] = col[v][0] = root[v - 1]
    return col


def _domain(allowed, col, i, t):
    """Bitmask of colors for edge (i, t) consistent with every triangle on assigned edges."""
    d = allowed[col[0][i]][col[0][t]]
    for w in range(1, len(col)):
        if w in (i, t):
            continue
        a, b = col[w][i], col[w][t]
        if a >= 0 and b >= 0:
            d &= allowed[a][b]
    return d


def _candidates(allowed, col, i, t):
    d = _domain(allowed, col, i, t)
    return [c for c in range(d.bit_length()) if (d >> c) & 1]


def _solve_unit(args):
    """Exhaust one work unit; returns (nodes, solutions found, rejected count)."""
    n, allowed, root, prefix, accept_cocube = args
    order = edge_order(n)
    col = _root_matrix(n, root)
    free = order[n - 1:]
    for (i, t), c in zip(free, prefix):
        col[i][t] = col[t][i] = c
    # the prefix must itself be consistent
    for k in range(len(prefix)):
        i, t = free[k]
        saved = col[i][t]
        col[i][t] = col[t][i] = -1
        ok = saved in _candidates(allowed, col, i, t)
        col[i][t] = col[t][i] = saved
        if not ok:
            return 0, None, 0
    edges = free[len(prefix):]
    nodes = 0
    rejected = 0
    found = None

    def run(k, fdom):
        # fdom[w]: remaining colors for edge (w, t) of the current vertex t
        nonlocal nodes, rejected, found
        nodes += 1
        if k == len(edges):
            if accept_cocube and not _cocube_ok(n, col):
                rejected += 1
                return False
            found = [row[:] for row in col]
            return True
        i, t = edges[k]
        if fdom is None or i == 1:
            fdom = [0] * n
            for w in range(i, t):
                fdom[w] = _domain(allowed, col, w, t)
        d = fdom[i]
        c = 0
        while d:
            if d & 1:
                nd = fdom[:]
                dead = False
                for w in range(i + 1, t):
                    nd[w] &= allowed[c][col[i][w]]
                    if not nd[w]:
                        dead = True
                        break
                if not dead:
                    col[i][t] = col[t][i] = c
                    if run(k + 1, nd):
                        return True
                    col[i][t] = col[t][i] = -1
            d >>= 1
            c += 1
        return False

    run(0, None)
    return nodes, found, rejected


def _cocube_ok(n, col) -> bool:
    if n != 8:
        return True
    c = EdgeColoring.from_function(8, 3, lambda i, j: col[i][j])
    return verify_cocube(subspace_from_coloring(c)).ok


@dataclass
class ColoringOutcome:
    status: str
    coloring: EdgeColoring | None = None
    nodes: int = 0
    units_total: int = 0
    units_done: int = 0
    rejected: int = 0
    roots: int = 0
    symmetries: int = 0
    elapsed: float = 0.0
    unit_nodes: list = field(default_factory=list)


class CheckpointError(ValueError):
    pass


def _load_checkpoint(path: Path, problem: SearchProblem) -> dict:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"unreadable checkpoint {path}: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("progress"), dict):
        raise CheckpointError(f"checkpoint {path} has no progress table")
    expect = problem.fingerprint()
    for key, value in expect.items():
        if data.get(key) != value:
            raise CheckpointError(f"checkpoint {path} does not match this search ({key})")
    for key, rec in data["progress"].items():
        if not key.isdigit() or int(key) >= len(problem.units) or "nodes" not in rec:
            raise CheckpointError(f"checkpoint {path} has a bad progress entry {key!r}")
    return data


def _save_checkpoint(path: Path, problem: SearchProblem, progress: dict):
    data = problem.fingerprint()
    data["progress"] = {str(k): v for k, v in sorted(progress.items())}
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(data, sort_keys=True, indent=1), encoding="utf-8")
    os.replace(tmp, path)


def coloring_search(problem: SearchProblem, checkpoint=None, resume: bool = False,
                    workers: int = 1, max_units: int | None = None,
                    accept_cocube: bool = False) -> ColoringOutcome:
    """Exhaustive search over the work units, stopping at the first solution.

    Unit results are recorded in ``checkpoint`` as they finish (in unit
    order). ``max_units`` stops after that many newly solved units, which
    is how an interrupted run is simulated.
    """
    t0 = time.perf_counter()
    path = Path(checkpoint) if checkpoint else None
    progress: dict[int, dict] = {}
    if path and resume and path.exists():
        progress = {int(k): v for k, v in _load_checkpoint(path, problem)["progress"].items()}
    pending = [k for k in range(len(problem.units)) if k not in progress]
    if max_units is not None:
        pending = pending[:max_units]
    args = [(problem.n, problem.allowed, *problem.units[k], accept_cocube) for k in pending]

    def record(k, result):
        nodes, found, rejected = result
        progress[k] = {"nodes": nodes, "rejected": rejected,
                       "solution": None if found is None else
                       [found[i][j] for i, j in graphs.slot_pairs(problem.n)]}
        if path:
            _save_checkpoint(path, problem, progress)

    def first_sat():
        return next((k for k in sorted(progress) if progress[k]["solution"] is not None), None)

    if first_sat() is None:
        if workers > 1 and args:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for k, result in zip(pending, pool.map(_solve_unit, args)):
                    record(k, result)
                    if result[1] is not None:
                        break
        else:
            for k, a in zip(pending, args):
                record(k, _solve_unit(a))
                if progress[k]["solution"] is not None:
                    break

    sat_k = first_sat()
    upto = range(len(problem.units)) if sat_k is None else range(sat_k + 1)
    done = [k for k in upto if k in progress]
    out = ColoringOutcome(INCOMPLETE, nodes=sum(progress[k]["nodes"] for k in done),
                          units_total=len(problem.units), units_done=len(progress),
                          rejected=sum(progress[k]["rejected"] for k in done),
                          roots=len(problem.roots), symmetries=len(problem.symmetries),
                          unit_nodes=[progress[k]["nodes"] if k in progress else None
                                      for k in range(len(problem.units))])
    if sat_k is not None and len(done) == sat_k + 1:
        out.status = SAT
        out.coloring = EdgeColoring(problem.n, problem.m, tuple(progress[sat_k]["solution"]))
    elif sat_k is None and len(done) == len(problem.units):
        out.status = UNSAT
    out.elapsed = time.perf_counter() - t0
    return out


def coloring_satisfies(c: EdgeColoring, constraint) -> bool:
    """Direct check: no s in the constraint set is orthogonal to a whole triangle."""
    for a, b, d in graphs.triangles_of(c.n):
        cols = (c.color(a, b), c.color(a, d), c.color(b, d))
        for s in constraint:
            if not any(gf2.inner(x, s) for x in cols):
                return False
    return True


def n9_problem() -> SearchProblem:
    return SearchProblem(9, 4, tuple(sorted(I0)))


def n8_problem() -> SearchProblem:
    return SearchProblem(8, 3, tuple(range(1, 8)))


def n9_search(checkpoint=None, resume: bool = False, workers: int = 1,
              max_units: int | None = None) -> ColoringOutcome:
    return coloring_search(n9_problem(), checkpoint, resume, workers, max_units)


def n8_control(workers: int = 1) -> ColoringOutcome:
    """Same engine on K_8 with all nonzero constraints; solutions must give co-cube subspaces."""
    return coloring_search(n8_problem(), workers=workers, accept_cocube=True)


def coloring_certificate(out: ColoringOutcome, problem: SearchProblem, claim_id: str,
                         expect: str) -> Certificate:
    counters = {"nodes": out.nodes, "units_total": out.units_total, "units_done": out.units_done,
                "roots": out.roots, "color_symmetries": out.symmetries, "rejected": out.rejected,
                "status": out.status}
    inputs = {"n": problem.n, "m": problem.m, "constraint": list(problem.constraint)}
    witnesses = []
    if out.status != expect:
        witness = {"status": out.status}
        if out.coloring is not None:
            witness["colors"] = list(out.coloring.colors)
        witnesses.append(witness)
    elif out.coloring is not None:
        counters["colors"] = list(out.coloring.colors)
        counters["recheck"] = coloring_satisfies(out.coloring, problem.constraint)
        if not counters["recheck"]:
            witnesses.append({"recheck_failed": list(out.coloring.colors)})
    return verdict(claim_id, witnesses, inputs=inputs, counters=counters)


def coset_cap_for_useful(cs: CandidateSet, family: FamilySpec, samples: int = 10_000,
                         seed: int = 0) -> Certificate:
    """Sampled check that a triangle-agreeing family meets each coset g ^ cs in at most 2^(m-3) graphs."""
    if family.n != cs.n:
        raise ValueError("family and candidate set live on different K_n")
    if not is_useful(cs):
        raise ValueError("candidate set is not useful for triangles")
    cap = 2 ** (cs.m - 3)
    rng = np.random.default_rng(seed)
    reps = rng.integers(0, 1 << graphs.num_slots(cs.n), size=samples, dtype=np.int64)
    cosets = reps[:, None] ^ np.array(cs.members, dtype=np.int64)[None, :]
    counts = family.contains_array(cosets).sum(axis=1)
    over = np.flatnonzero(counts > cap)
    witnesses = [{"coset_rep": EdgeSet(cs.n, int(reps[k])).to_text(), "count": int(counts[k])}
                 for k in over[:5]]
    return verdict("useful-coset-cap", witnesses,
                   inputs={"m": cs.m, "members": [EdgeSet(cs.n, v).to_text() for v in cs.members]},
                   counters={"samples": samples, "cap": cap, "max_count": int(counts.max(initial=0)),
                             "violations": int(len(over))},
                   seed=seed)

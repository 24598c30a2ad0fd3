"""Search for a family choosing one graph T ^ v_T per triangle T of K_8.

Each triangle is a variable whose values are the nonzero members v of the
co-cube subspace; the chosen graphs must be pairwise compatible under a
PairMode. The search is complete, so an UNSAT outcome means no such
choice exists.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import graphs
from .certificate import Certificate, VERIFIED, FALSIFIED
from .cube_subspace import Subspace
from .families import PairMode, NB_INTERSECTING, INTERSECTING, TRIANGLE
from .graphs import EdgeSet

UNSAT = "UNSAT"
SAT = "SAT"


@dataclass
class CspInstance:
    """Binary CSP over small integer domains.

    ``compat[u][a][w]`` is the bitmask of values of ``w`` compatible with
    ``u = a``. ``initial[u]`` is the starting domain bitmask.
    """

    labels: list
    domain_size: int
    compat: list[list[list[int]]]
    initial: list[int]
    candidates: list[list[int]] | None = None  # graph bits, for re-checking
    n: int | None = None
    mode: PairMode | None = None
    include_self: bool = False
    value_labels: list | None = None

    @property
    def num_vars(self) -> int:
        return len(self.labels)

    @classmethod
    def from_predicate(cls, labels, domain_size: int, ok, initial=None) -> "CspInstance":
        """Build tables from ``ok(u, a, w, b)`` for u != w."""
        nv = len(labels)
        compat = [[[0] * nv for _ in range(domain_size)] for _ in range(nv)]
        for u in range(nv):
            for a in range(domain_size):
                for w in range(nv):
                    if w == u:
                        compat[u][a][w] = 1 << a
                        continue
                    compat[u][a][w] = sum(1 << b for b in range(domain_size) if ok(u, a, w, b))
        full = (1 << domain_size) - 1
        return cls(list(labels), domain_size, compat, list(initial or [full] * nv))

    def restrict(self, variables) -> "CspInstance":
        """Sub-instance on a subset of variables (in the given order)."""
        vs = list(variables)
        compat = [[[self.compat[u][a][w] for w in vs] for a in range(self.domain_size)] for u in vs]
        cands = [self.candidates[u] for u in vs] if self.candidates else None
        return CspInstance([self.labels[u] for u in vs], self.domain_size, compat,
                           [self.initial[u] for u in vs], cands, self.n, self.mode,
                           self.include_self, self.value_labels)


def build_instance(s: Subspace, mode: PairMode = NB_INTERSECTING,
                   include_self: bool = False) -> CspInstance:
    if s.n != 8 or s.dim != 3 or s.degenerate:
        raise ValueError(f"need a 3-dim subspace of K_8, got n={s.n} dim={s.dim} rank={s.rank}")
    tris = graphs.triangles_of(8)
    tri_bits = graphs.triangle_masks(8)
    ks = list(range(1, 8))
    cands = [[tb ^ s.members[k] for k in ks] for tb in tri_bits]
    flat = [g for row in cands for g in row]
    if len(set(flat)) != len(flat):
        raise AssertionError("candidate graphs are not distinct across triangles")
    nv, d = len(tris), len(ks)
    compat = [[[0] * nv for _ in range(d)] for _ in range(nv)]
    for u in range(nv):
        for a in range(d):
            compat[u][a][u] = 1 << a
    for u in range(nv):
        for w in range(u + 1, nv):
            for a in range(d):
                for b in range(d):
                    if mode.bits_ok(cands[u][a], cands[w][b], 8):
                        compat[u][a][w] |= 1 << b
                        compat[w][b][u] |= 1 << a
    full = (1 << d) - 1
    initial = [full] * nv
    if include_self:
        for u in range(nv):
            initial[u] = sum(1 << a for a in range(d) if mode.bits_ok(cands[u][a], cands[u][a], 8))
    return CspInstance(tris, d, compat, initial, cands, 8, mode, include_self, ks)


@dataclass
class SearchOutcome:
    status: str
    assignment: dict | None = None   # variable index -> value index
    nodes: int = 0
    max_depth: int = 0
    failures: list[int] = field(default_factory=list)
    elapsed: float = 0.0
    deepest: dict = field(default_factory=dict)
    core: list[int] | None = None
    wipe_witness: tuple | None = None
    solutions: list[dict] | None = None


class _Stats:
    def __init__(self, nv):
        self.nodes = 0
        self.max_depth = 0
        self.failures = [0] * nv
        self.deepest: dict = {}
        self.core: set[int] = set()


def _arc_consistency(inst: CspInstance, dom: list[int]):
    """AC-3 on the pairwise tables. Returns (domains, wiping pair or None)."""
    nv = inst.num_vars
    dom = list(dom)
    queue = [(u, w) for u in range(nv) for w in range(nv) if u != w]
    pending = set(queue)
    while queue:
        u, w = queue.pop()
        pending.discard((u, w))
        keep = 0
        du = dom[u]
        a = 0
        while du:
            if du & 1 and inst.compat[u][a][w] & dom[w]:
                keep |= 1 << a
            du >>= 1
            a += 1
        if keep != dom[u]:
            dom[u] = keep
            if not keep:
                return dom, (u, w)
            for x in range(nv):
                if x != u and x != w and (x, u) not in pending:
                    pending.add((x, u))
                    queue.append((x, u))
    return dom, None


def _search(inst, dom, assigned, rank, value_order, propagate, stats, all_solutions, sols):
    stats.nodes += 1
    depth = len(assigned)
    if depth > stats.max_depth or not stats.deepest:
        stats.max_depth = max(stats.max_depth, depth)
        stats.deepest = dict(assigned)
    nv = inst.num_vars
    if depth == nv:
        sols.append(dict(assigned))
        return not all_solutions
    u = min((x for x in range(nv) if x not in assigned),
            key=lambda x: (dom[x].bit_count(), rank[x]))
    for a in value_order:
        if not (dom[u] >> a) & 1:
            continue
        row = inst.compat[u][a]
        if propagate:
            nd = list(dom)
            nd[u] = 1 << a
            dead = None
            for w in range(nv):
                if w == u or w in assigned:
                    continue
                nd[w] &= row[w]
                if not nd[w]:
                    dead = w
                    break
            if dead is not None:
                stats.failures[dead] += 1
                stats.core.update(assigned)
                stats.core.update((u, dead))
                continue
        else:
            bad = next((w for w, b in assigned.items() if not (row[w] >> b) & 1), None)
            if bad is not None:
                stats.failures[u] += 1
                stats.core.update(assigned)
                stats.core.add(u)
                continue
            nd = list(dom)
            nd[u] = 1 << a
        assigned[u] = a
        if _search(inst, nd, assigned, rank, value_order, propagate, stats, all_solutions, sols):
            return True
        del assigned[u]
    return False


def _root(inst, var_order, propagate):
    nv = inst.num_vars
    rank = [0] * nv
    for pos, v in enumerate(var_order if var_order is not None else range(nv)):
        rank[v] = pos
    dom = list(inst.initial)
    witness = None
    if propagate:
        dom, witness = _arc_consistency(inst, dom)
    elif any(d == 0 for d in dom):
        witness = (dom.index(0), None)
    return rank, dom, witness


def _run_subtree(args):
    inst, dom, assigned, rank, value_order, propagate, all_solutions = args
    stats = _Stats(inst.num_vars)
    sols: list[dict] = []
    _search(inst, dom, dict(assigned), rank, value_order, propagate, stats, all_solutions, sols)
    return stats, sols


def solve(inst: CspInstance, var_order=None, value_order=None, workers: int = 1,
          propagate: bool = True, all_solutions: bool = False) -> SearchOutcome:
    """Complete backtracking with forward checking and fail-first ordering.

    With ``workers > 1`` the values of the first branching variable are
    searched in separate processes; counts and the reported solution match
    a sequential run.
    """
    t0 = time.perf_counter()
    nv, d = inst.num_vars, inst.domain_size
    value_order = list(value_order) if value_order is not None else list(range(d))
    rank, dom, witness = _root(inst, var_order, propagate)
    if witness is not None:
        return SearchOutcome(UNSAT, nodes=0, failures=[0] * nv, wipe_witness=witness,
                             core=sorted(x for x in witness if x is not None),
                             elapsed=time.perf_counter() - t0,
                             solutions=[] if all_solutions else None)
    if workers <= 1:
        stats, sols = _run_subtree((inst, dom, {}, rank, value_order, propagate, all_solutions))
        return _outcome(stats, sols, all_solutions, t0)

    # root split: replicate the first branching step, hand each child to a worker
    root = _Stats(nv)
    root.nodes = 1
    u = min(range(nv), key=lambda x: (dom[x].bit_count(), rank[x]))
    jobs = []
    for a in value_order:
        if not (dom[u] >> a) & 1:
            continue
        nd = list(dom)
        nd[u] = 1 << a
        row = inst.compat[u][a]
        dead = None
        if propagate:
            for w in range(nv):
                if w != u:
                    nd[w] &= row[w]
                    if not nd[w]:
                        dead = w
                        break
        if dead is not None:
            root.failures[dead] += 1
            root.core.update((u, dead))
            continue
        jobs.append((inst, nd, {u: a}, rank, value_order, propagate, all_solutions))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run_subtree, jobs))
    sols: list[dict] = []
    for stats, child_sols in results:
        root.nodes += stats.nodes
        root.max_depth = max(root.max_depth, stats.max_depth)
        if len(stats.deepest) > len(root.deepest):
            root.deepest = stats.deepest
        root.failures = [x + y for x, y in zip(root.failures, stats.failures)]
        root.core |= stats.core
        sols.extend(child_sols)
        if child_sols and not all_solutions:
            break
    return _outcome(root, sols, all_solutions, t0)


def _outcome(stats, sols, all_solutions, t0) -> SearchOutcome:
    status = SAT if sols else UNSAT
    return SearchOutcome(status, assignment=sols[0] if sols else None, nodes=stats.nodes,
                         max_depth=stats.max_depth, failures=stats.failures,
                         elapsed=time.perf_counter() - t0, deepest=stats.deepest,
                         core=None if sols else sorted(stats.core),
                         solutions=sols if all_solutions else None)


def recheck(inst: CspInstance, assignment: dict) -> bool:
    """Full pairwise check of a complete assignment straight from the graphs."""
    if inst.candidates is None or inst.mode is None:
        return all((inst.compat[u][a][w] >> b) & 1
                   for u, a in assignment.items() for w, b in assignment.items() if u != w)
    if len(assignment) != inst.num_vars:
        return False
    chosen = [inst.candidates[u][assignment[u]] for u in range(inst.num_vars)]
    for i in range(len(chosen)):
        if inst.include_self and not inst.mode.bits_ok(chosen[i], chosen[i], inst.n):
            return False
        for j in range(i + 1, len(chosen)):
            if not inst.mode.bits_ok(chosen[i], chosen[j], inst.n):
                return False
    return True


def claim_id_for(mode: PairMode | None) -> str:
    if mode is None:
        return "uniqueness"
    tag = "tri" if mode.structure == TRIANGLE else "nb"
    if mode.relation != INTERSECTING:
        tag += "-agree"
    return f"uniqueness-{tag}"


def shrink_core(inst: CspInstance, core) -> list[int]:
    """Deletion pass: drop each variable whose removal keeps the core UNSAT.

    The result is an unsatisfiable subset none of whose variables can be
    dropped on its own.
    """
    core = list(core)
    for v in list(core):
        trial = [x for x in core if x != v]
        if trial and solve(inst.restrict(trial)).status == UNSAT:
            core = trial
    return core


def emit_unsat_report(inst: CspInstance, out: SearchOutcome, verify_core: bool = True,
                      shrink: bool = True) -> Certificate:
    """Certificate for a finished search.

    UNSAT is the expected (verified) outcome; a SAT outcome falsifies the
    claim and carries the assignment with its independent re-check.
    """
    counters = {"nodes": out.nodes, "max_depth": out.max_depth,
                "variables": inst.num_vars, "domain_size": inst.domain_size,
                "failure_histogram": out.failures}
    inputs = {"mode": str(inst.mode) if inst.mode else None,
              "include_self": inst.include_self}
    claim = claim_id_for(inst.mode)

    def label(u, a):
        value = inst.value_labels[a] if inst.value_labels else a
        return {"variable": list(inst.labels[u]) if isinstance(inst.labels[u], tuple) else inst.labels[u],
                "value": value}

    if out.status == SAT:
        ok = recheck(inst, out.assignment)
        graphs_chosen = []
        if inst.candidates:
            graphs_chosen = [EdgeSet(inst.n, inst.candidates[u][a]).to_text()
                             for u, a in sorted(out.assignment.items())]
        return Certificate(claim, FALSIFIED, inputs=inputs, counters=counters,
                           witnesses=[{"assignment": [label(u, a) for u, a in sorted(out.assignment.items())],
                                       "graphs": graphs_chosen, "recheck": ok}])
    core = out.core or []
    if shrink and core:
        core = shrink_core(inst, core)
    core_unsat = None
    if verify_core and core:
        core_unsat = solve(inst.restrict(core)).status == UNSAT
    counters.update({
        "deepest_partial": [label(u, a) for u, a in sorted(out.deepest.items())],
        "core_variables": [list(inst.labels[u]) if isinstance(inst.labels[u], tuple) else inst.labels[u]
                           for u in core],
        "core_size": len(core),
        "core_verified_unsat": core_unsat,
        "wipe_witness": list(out.wipe_witness) if out.wipe_witness else None,
    })
    return Certificate(claim, VERIFIED, inputs=inputs, counters=counters)

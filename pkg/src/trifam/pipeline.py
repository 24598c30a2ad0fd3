"""Claim registry and the one-shot verification pipeline.

Each claim has a stable id, a one-line statement, the module that owns it
and a check returning a Certificate. ``run_verify_all`` runs them in order
and writes a deterministic bundle.
"""

from __future__ import annotations

import itertools
import traceback
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import antilinear as al
from . import cube_subspace as cs
from . import families as fam
from . import gf2
from . import graphs
from . import uniqueness as uq
from . import useful_sets as us
from .certificate import (Certificate, ERROR, FALSIFIED, SCHEMA_VERSION, TOOL_VERSION,
                          Stopwatch, dumps, verdict)

# reference data the checks compare against
EXAMPLE_IMAGES = (0, 2, 3, 4, 1, 5, 6, 7)          # the permutation (1234)
EXAMPLE_LINE_SUMS = (4, 6, 2, 5, 1, 3, 7)          # lines orthogonal to 1..7
EXAMPLE_SIGNATURE = (4, 6, 5)                      # images of 1, 2, 4
FANO_REFERENCE = ("(135647)", "(174653)", "(153627)", "(172635)",
                  "(236547)", "(274563)", "(13)(26)(45)", "(15)(23)(46)")
FANO_MISPRINT = "(174652)"                         # printed form of (174653) in the source list
ANTILINEAR_COUNT = 1344
REGULAR_COUNT_3 = 168

EXIT_VERIFIED, EXIT_FALSIFIED, EXIT_ERROR = 0, 1, 2


@dataclass
class Context:
    perm: str = "(1234)"
    samples: int = 100_000
    seed: int = 0
    workers: int = 1
    example_images: tuple = EXAMPLE_IMAGES


@dataclass
class Claim:
    claim_id: str
    module: str
    statement: str
    check: Callable[[Context], Certificate]
    slow: bool = False
    criterion: int | None = None


# -- checks ------------------------------------------------------------------

def check_fano_count(ctx: Context) -> Certificate:
    brute = sorted(al.to_cycles(p) for p in al.enumerate_fano())
    by_hand = sorted(al.to_cycles(p) for p in al.fano_by_hand())
    reference = sorted(al.to_cycles(al.parse_perm(t)) for t in FANO_REFERENCE)
    witnesses = []
    if brute != reference:
        witnesses.append({"enumerated": brute, "reference": reference})
    if by_hand != brute:
        witnesses.append({"by_hand": by_hand, "enumerated": brute})
    return verdict("lemma-fano-count", witnesses,
                   inputs={"reference": list(FANO_REFERENCE)},
                   counters={"fano": len(brute), "by_hand": len(by_hand), "permutations": brute})


def check_antilinear_count(ctx: Context) -> Certificate:
    anti = al.enumerate_antilinear()
    regular = gf2.enumerate_regular(3)
    fano = al.enumerate_fano()
    witnesses = []
    products = {al.apply_linear(L, phi) for L in regular for phi in fano}
    if len(anti) != ANTILINEAR_COUNT:
        witnesses.append({"antilinear_count": len(anti)})
    if len(products) != len(regular) * len(fano):
        witnesses.append({"products_not_distinct": len(products)})
    if products != set(anti):
        witnesses.append({"products_differ_from_enumeration": True})
    bad_factor = 0
    for p in anti:
        try:
            L, phi = al.factorize(p)
            if al.apply_linear(L, phi) != p or not al.is_fano(phi):
                bad_factor += 1
        except (ValueError, AssertionError):
            bad_factor += 1
    if bad_factor:
        witnesses.append({"bad_factorizations": bad_factor})
    return verdict("antilinear-count", witnesses,
                   counters={"antilinear": len(anti), "regular": len(regular), "fano": len(fano),
                             "products": len(products)})


def check_example(ctx: Context) -> Certificate:
    table = tuple(ctx.example_images)
    witnesses = []
    inputs = {"images": list(table)}
    if sorted(table) != list(range(8)):
        return verdict("lemma-antilinear-example", [{"not_a_permutation": list(table)}], inputs=inputs)
    p = al.Perm8(table)
    sums = al.line_sums(p)
    sig = al.signature_table(p)
    if sums != EXAMPLE_LINE_SUMS:
        witnesses.append({"line_sums": list(sums), "expected": list(EXAMPLE_LINE_SUMS)})
    if (sig[1], sig[2], sig[4]) != EXAMPLE_SIGNATURE:
        witnesses.append({"signature": [sig[1], sig[2], sig[4]], "expected": list(EXAMPLE_SIGNATURE)})
    if not al.is_antilinear(p):
        witnesses.append({"not_antilinear": al.to_cycles(p)})
    if al.to_cycles(p) != "(1234)":
        witnesses.append({"cycles": al.to_cycles(p), "expected": "(1234)"})
    return verdict("lemma-antilinear-example", witnesses, inputs=inputs,
                   counters={"line_sums": list(sums), "signature": [sig[1], sig[2], sig[4]]})


def check_lemma_v(ctx: Context) -> Certificate:
    p = al.parse_perm(ctx.perm)
    if not al.is_antilinear(p):
        return verdict("lemma-V", [{"not_antilinear": ctx.perm}], inputs={"perm": ctx.perm})
    cert = cs.verify_cocube(cs.subspace_from_coloring(cs.coloring_from_perm(p)), oracle=True)
    cert.inputs["perm"] = ctx.perm
    return cert


def check_lemma_v_all(ctx: Context) -> Certificate:
    witnesses = []
    anti = al.enumerate_antilinear()
    if len(anti) != ANTILINEAR_COUNT:
        witnesses.append({"antilinear_count": len(anti)})
    checked = 0
    for p in anti:
        s = cs.subspace_from_coloring(cs.coloring_from_perm(p))
        cert = cs.verify_cocube(s, oracle=True)
        checked += 1
        if not cert.ok:
            witnesses.append({"perm": al.to_cycles(p), "first": cert.witnesses[0]})
            if len(witnesses) >= 5:
                break
    return verdict("lemma-V-all", witnesses,
                   counters={"permutations": checked, "complements_checked": 7 * checked})


def check_signature(ctx: Context) -> Certificate:
    witnesses = []
    nonlinear = 0
    for p in al.permutations_fixing_zero():
        table = al.signature_table(p)
        if any(table[x ^ y] != table[x] ^ table[y] for x in range(8) for y in range(8)):
            nonlinear += 1
            if len(witnesses) < 5:
                witnesses.append({"nonlinear_signature": al.to_cycles(p), "table": list(table)})
    singular = 0
    anti = al.enumerate_antilinear()
    for p in anti:
        table = al.signature_table(p)
        if sorted(table) != list(range(8)):
            singular += 1
            if len(witnesses) < 10:
                witnesses.append({"singular_signature": al.to_cycles(p)})
    if len(anti) != ANTILINEAR_COUNT:
        witnesses.append({"antilinear_count": len(anti)})
    return verdict("signature-linear", witnesses,
                   counters={"permutations": 5040, "nonlinear": nonlinear,
                             "antilinear": len(anti), "singular": singular})


def _fano_list_checked(witnesses):
    fano = al.enumerate_fano()
    if len(fano) != 8:
        witnesses.append({"fano_count": len(fano)})
    return fano


def check_orth1(ctx: Context) -> Certificate:
    witnesses = []
    fano = _fano_list_checked(witnesses)
    for p in fano:
        for x in range(1, 8):
            if gf2.inner(x, p(x)) != 1:
                witnesses.append({"perm": al.to_cycles(p), "x": x})
    return verdict("fano-orth1", witnesses, counters={"fano": len(fano), "cases": 7 * len(fano)})


def check_orth2(ctx: Context) -> Certificate:
    witnesses = []
    fano = _fano_list_checked(witnesses)
    cases = 0
    for p in fano:
        for x, y in itertools.combinations(range(1, 8), 2):
            cases += 1
            if al.check_orth_pair(p, x, y) != 1:
                witnesses.append({"perm": al.to_cycles(p), "x": x, "y": y})
    return verdict("fano-orth2", witnesses, counters={"fano": len(fano), "cases": cases})


def _v_from_ctx(ctx: Context) -> cs.Subspace:
    return cs.subspace_from_coloring(cs.coloring_from_perm(al.parse_perm(ctx.perm)))


def check_triangle_regularity(ctx: Context) -> Certificate:
    return cs.check_triangle_regularity(cs.coloring_from_perm(al.parse_perm(ctx.perm)))


def check_coset_cap(ctx: Context) -> Certificate:
    f = fam.triangulumvirate(8, (0, 1, 2), [(0, 1)])
    return fam.verify_coset_cap(f, _v_from_ctx(ctx), samples=ctx.samples, seed=ctx.seed)


def toy_subspace() -> cs.Subspace:
    """A 3-dim subspace of the K_4 edge space: three edge-disjoint perfect matchings."""
    e = graphs.EdgeSet.from_edges
    return cs.subspace_from_basis([e(4, [(0, 1), (2, 3)]), e(4, [(0, 2), (1, 3)]),
                                   e(4, [(0, 3), (1, 2)])])


def check_family_size(ctx: Context) -> Certificate:
    witnesses = []
    expected8 = 2 ** 25
    for f in (fam.junta(8, (0, 1, 2)), fam.triangulumvirate(8, (0, 1, 2), [(1, 2)])):
        if fam.family_size(f) != expected8:
            witnesses.append({"family": f.kind, "size": fam.family_size(f)})
    for f in (fam.junta(4, (0, 1, 2)), fam.triangulumvirate(4, (1, 2, 3), [(1, 3)])):
        formula, counted = fam.family_size(f), fam.family_size_by_enumeration(f)
        if formula != counted or formula != 2 ** 3:
            witnesses.append({"family": f.kind, "n": 4, "formula": formula, "counted": counted})
    toy = toy_subspace()
    cosets = fam.enumerate_cosets(toy)
    if len(cosets) != fam.coset_count(toy) or any(len(c) != 8 for c in cosets.values()):
        witnesses.append({"toy_cosets": len(cosets)})
    v = _v_from_ctx(ctx)
    if fam.coset_count(v) != expected8:
        witnesses.append({"coset_count": fam.coset_count(v)})
    return verdict("family-size", witnesses,
                   counters={"n8_kernel_size": expected8, "n4_kernel_size": 8,
                             "n4_toy_cosets": len(cosets), "n8_cosets": fam.coset_count(v)})


def check_useful(ctx: Context) -> Certificate:
    v = _v_from_ctx(ctx)
    base = us.CandidateSet.from_subspace(v)
    w = graphs.triangle_masks(8)[0]
    doubled = us.span(us.translate(base, w))
    witnesses = []
    if not us.is_useful(base):
        witnesses.append({"subspace_not_useful": True})
    if doubled.m != 4 or not us.is_useful(doubled):
        witnesses.append({"span_of_translate_not_useful": doubled.m})
    f = fam.triangulumvirate(8, (0, 1, 2), [(0, 1)])
    cap3 = us.coset_cap_for_useful(base, f, samples=2000, seed=ctx.seed)
    cap4 = us.coset_cap_for_useful(doubled, f, samples=2000, seed=ctx.seed)
    for cert in (cap3, cap4):
        if not cert.ok:
            witnesses.append({"coset_cap": cert.witnesses[0]})
    return verdict("useful-span", witnesses, seed=ctx.seed,
                   counters={"m3_max_count": cap3.counters["max_count"],
                             "m4_max_count": cap4.counters["max_count"]})


def _uniqueness(ctx: Context, mode) -> Certificate:
    inst = uq.build_instance(_v_from_ctx(ctx), mode)
    out = uq.solve(inst, workers=ctx.workers)
    cert = uq.emit_unsat_report(inst, out)
    cert.inputs["perm"] = ctx.perm
    return cert


def check_uniqueness_nb(ctx: Context) -> Certificate:
    return _uniqueness(ctx, fam.NB_INTERSECTING)


def check_uniqueness_tri(ctx: Context) -> Certificate:
    return _uniqueness(ctx, fam.TRI_INTERSECTING)


def check_isets(ctx: Context) -> Certificate:
    return us.classify_isets(workers=ctx.workers)


def check_n8_control(ctx: Context) -> Certificate:
    problem = us.n8_problem()
    out = us.coloring_search(problem, workers=ctx.workers, accept_cocube=True)
    cert = us.coloring_certificate(out, problem, "n8-control", expect=us.SAT)
    if out.coloring is not None:
        cube = cs.verify_cocube(cs.subspace_from_coloring(out.coloring), oracle=True)
        cert.counters["cocube"] = cube.ok
        if not cube.ok:
            cert.status = FALSIFIED
            cert.witnesses.append({"cocube_failed": cube.witnesses})
    return cert


def check_n9(ctx: Context) -> Certificate:
    problem = us.n9_problem()
    out = us.coloring_search(problem, workers=ctx.workers)
    return us.coloring_certificate(out, problem, "n9-search", expect=us.UNSAT)


REGISTRY: dict[str, Claim] = {c.claim_id: c for c in [
    Claim("lemma-fano-count", "antilinear", "exactly eight Fano permutations, matching the reference list",
          check_fano_count, criterion=1),
    Claim("antilinear-count", "antilinear", "1344 antilinear permutations, each uniquely L after a Fano permutation",
          check_antilinear_count, criterion=2),
    Claim("lemma-antilinear-example", "antilinear", "(1234) is antilinear with line sums 4,6,2,5,1,3,7",
          check_example, criterion=3),
    Claim("lemma-V", "cube_subspace", "the configured permutation yields a subspace of cube complements",
          check_lemma_v, criterion=4),
    Claim("lemma-V-all", "cube_subspace", "every antilinear permutation yields a subspace of cube complements",
          check_lemma_v_all, criterion=4),
    Claim("signature-linear", "antilinear", "signatures are linear, and regular for antilinear permutations",
          check_signature, criterion=5),
    Claim("fano-orth1", "antilinear", "<x, p(x)> = 1 for Fano p and nonzero x", check_orth1, criterion=6),
    Claim("fano-orth2", "antilinear", "<x, p(y)> + <y, p(x)> = 1 for Fano p and distinct nonzero x, y",
          check_orth2, criterion=6),
    Claim("triangle-regularity", "cube_subspace", "every triangle of the K_8 coloring has independent colors",
          check_triangle_regularity),
    Claim("coset-cap", "families", "a non-bipartite-agreeing family meets each coset of V at most once",
          check_coset_cap, criterion=7),
    Claim("family-size", "families", "kernel systems have 2^(C(n,2)-3) members; V has 2^25 cosets",
          check_family_size, criterion=7),
    Claim("useful-span", "useful_sets", "V and the span of a translate of V are useful for triangles",
          check_useful),
    Claim("uniqueness-nb", "uniqueness", "no non-bipartite-intersecting choice of T ^ v_T exists",
          check_uniqueness_nb, slow=True, criterion=8),
    Claim("uniqueness-tri", "uniqueness", "no triangle-intersecting choice of T ^ v_T exists",
          check_uniqueness_tri, slow=True, criterion=8),
    Claim("isets-classify", "useful_sets", "closure-satisfying I-sets contain a hyperplane or are images of I0",
          check_isets, criterion=9),
    Claim("n8-control", "useful_sets", "the coloring search finds a co-cube coloring of K_8",
          check_n8_control, criterion=10),
    Claim("n9-search", "useful_sets", "no coloring of K_9 realises the I0 constraints",
          check_n9, slow=True, criterion=10),
]}


def run_claim(claim: Claim, ctx: Context) -> Certificate:
    with Stopwatch() as sw:
        try:
            cert = claim.check(ctx)
        except Exception as exc:  # a crash is reported, never hidden
            cert = Certificate(claim.claim_id, ERROR,
                               inputs={"error": f"{type(exc).__name__}: {exc}",
                                       "trace": traceback.format_exc(limit=3)})
    if cert.claim_id != claim.claim_id:
        raise AssertionError(f"check for {claim.claim_id} returned {cert.claim_id}")
    cert.elapsed_ms = sw.ms
    if cert.seed is None and claim.claim_id in ("coset-cap", "useful-span"):
        cert.seed = ctx.seed
    return cert


def exit_code(certs) -> int:
    if any(c.status == FALSIFIED for c in certs):
        return EXIT_FALSIFIED
    if any(c.status == ERROR for c in certs):
        return EXIT_ERROR
    return EXIT_VERIFIED


def run_verify_all(fast: bool = True, ctx: Context | None = None, out_dir=None,
                   log: Callable[[str], None] | None = None):
    """Run every registered claim (skipping slow ones when ``fast``).

    Returns (exit code, certificates). With ``out_dir`` set, writes
    bundle.json (timing-free, replays byte-identically) and timings.json.
    """
    ctx = ctx or Context()
    certs = []
    for claim in REGISTRY.values():
        if fast and claim.slow:
            continue
        cert = run_claim(claim, ctx)
        certs.append(cert)
        if log:
            log(f"{cert.status:9s} {cert.claim_id} ({cert.elapsed_ms:.0f} ms)")
    if out_dir is not None:
        write_bundle(out_dir, certs, ctx, fast)
    return exit_code(certs), certs


def bundle_dict(certs, ctx: Context, fast: bool) -> dict:
    return {"schema_version": SCHEMA_VERSION, "tool_version": TOOL_VERSION, "fast": fast,
            "perm": ctx.perm, "samples": ctx.samples, "seed": ctx.seed,
            "certificates": [c.to_dict(timing=False) for c in certs]}


def write_bundle(out_dir, certs, ctx: Context, fast: bool):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bundle.json").write_text(dumps(bundle_dict(certs, ctx, fast)), encoding="utf-8")
    (out / "timings.json").write_text(dumps({c.claim_id: c.elapsed_ms for c in certs}), encoding="utf-8")


# -- sabotage harness ------------------------------------------------------------

def _rev3(y: int) -> int:
    return (y & ~7) | ((y & 1) << 2) | (y & 2) | ((y >> 2) & 1)


INNER_MUTANTS: dict[str, Callable[[int, int], int]] = {
    "drop-bit-0": lambda x, y: (x & y & ~1).bit_count() & 1,
    "drop-bit-1": lambda x, y: (x & y & ~2).bit_count() & 1,
    "drop-bit-2": lambda x, y: (x & y & ~4).bit_count() & 1,
    "negated": lambda x, y: 1 ^ ((x & y).bit_count() & 1),
    "or-parity": lambda x, y: (x | y).bit_count() & 1,
    "reversed-second-argument": lambda x, y: (x & _rev3(y)).bit_count() & 1,
    "and-nonzero": lambda x, y: int(x & y != 0),
}

CORE_CRITERIA = ("lemma-antilinear-example", "lemma-fano-count", "fano-orth1", "fano-orth2",
                 "signature-linear", "antilinear-count", "lemma-V-all")


@contextmanager
def sabotaged_inner(fn):
    original = gf2.inner
    gf2.inner = fn
    try:
        yield
    finally:
        gf2.inner = original


def table_flips():
    """Every single-entry change of the reference (1234) image table."""
    for x in range(8):
        for v in range(8):
            if v != EXAMPLE_IMAGES[x]:
                images = list(EXAMPLE_IMAGES)
                images[x] = v
                yield f"images[{x}]={v}", tuple(images)


def _first_failure(ctx: Context, stop_early: bool = True) -> list[str]:
    failed = []
    for cid in CORE_CRITERIA:
        if not run_claim(REGISTRY[cid], ctx).ok:
            failed.append(cid)
            if stop_early:
                break
    return failed


def mutation_harness(stop_early: bool = True) -> dict[str, list[str]]:
    """Map each mutation to the core claims it breaks (empty list = undetected)."""
    results = {}
    for name, images in table_flips():
        results[f"table:{name}"] = _first_failure(Context(example_images=images), stop_early)
    for name, fn in INNER_MUTANTS.items():
        with sabotaged_inner(fn):
            results[f"inner:{name}"] = _first_failure(Context(), stop_early)
    return results

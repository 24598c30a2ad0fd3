import itertools
import random

import pytest

from trifam import families as fam
from trifam import uniqueness as uq
from trifam.graphs import EdgeSet


@pytest.fixture(scope="module")
def nb_inst(v1234):
    return uq.build_instance(v1234, fam.NB_INTERSECTING)


@pytest.fixture(scope="module")
def tri_inst(v1234):
    return uq.build_instance(v1234, fam.TRI_INTERSECTING)


def test_instance_shape(nb_inst):
    assert nb_inst.num_vars == 56 and nb_inst.domain_size == 7
    assert nb_inst.value_labels == list(range(1, 8))
    assert nb_inst.initial == [127] * 56


def test_compat_symmetric(nb_inst):
    c = nb_inst.compat
    for u, w in itertools.combinations(range(56), 2):
        for a in range(7):
            for b in range(7):
                assert (c[u][a][w] >> b) & 1 == (c[w][b][u] >> a) & 1


def test_one_value_per_variable(nb_inst):
    assert all(nb_inst.compat[u][a][u] == 1 << a for u in range(56) for a in range(7))


def test_compat_matches_pair_ok(nb_inst):
    rng = random.Random(0)
    for _ in range(300):
        u, w = rng.sample(range(56), 2)
        a, b = rng.randrange(7), rng.randrange(7)
        g1, g2 = EdgeSet(8, nb_inst.candidates[u][a]), EdgeSet(8, nb_inst.candidates[w][b])
        assert bool((nb_inst.compat[u][a][w] >> b) & 1) == fam.pair_ok(g1, g2, fam.NB_INTERSECTING)


def test_candidates_in_own_coset_only(v1234, nb_inst):
    tri_reps = [fam.coset_of(EdgeSet(8, row[0]), v1234) for row in nb_inst.candidates]
    assert len(set(tri_reps)) == 56
    for u, row in enumerate(nb_inst.candidates):
        for g in row:
            assert fam.coset_of(EdgeSet(8, g), v1234) == tri_reps[u]


def test_nb_unsat(nb_inst):
    out = uq.solve(nb_inst)
    assert out.status == uq.UNSAT and out.nodes > 0


def test_tri_unsat(tri_inst):
    assert uq.solve(tri_inst).status == uq.UNSAT


def test_agreeing_modes_are_satisfiable(v1234):
    # outside the claim: agreement is much weaker than intersection here
    inst = uq.build_instance(v1234, fam.NB_AGREEING)
    out = uq.solve(inst)
    assert out.status == uq.SAT and uq.recheck(inst, out.assignment)


def test_toy_sat_instance():
    inst = uq.CspInstance.from_predicate(["x", "y", "z"], 3, lambda u, a, w, b: a == b)
    out = uq.solve(inst, all_solutions=True)
    assert out.status == uq.SAT
    assert sorted(tuple(s[k] for k in range(3)) for s in out.solutions) == [(0, 0, 0), (1, 1, 1), (2, 2, 2)]
    assert uq.recheck(inst, out.assignment)


def test_toy_unsat_wipeout():
    inst = uq.CspInstance.from_predicate(["x", "y", "z"], 2, lambda u, a, w, b: a != b)
    out = uq.solve(inst)
    assert out.status == uq.UNSAT


def _brute_force(inst):
    nv = inst.num_vars
    sols = []
    for vals in itertools.product(range(inst.domain_size), repeat=nv):
        if all((inst.compat[u][vals[u]][w] >> vals[w]) & 1 for u, w in itertools.combinations(range(nv), 2)):
            sols.append(dict(enumerate(vals)))
    return sols


def _key(sols):
    return sorted(tuple(sorted(s.items())) for s in sols)


def test_propagation_matches_plain_backtracking(nb_inst):
    sub = nb_inst.restrict(range(8))
    fc = uq.solve(sub, all_solutions=True)
    plain = uq.solve(sub, propagate=False, all_solutions=True)
    assert _key(fc.solutions) == _key(plain.solutions)
    assert len(fc.solutions) > 0
    assert all(uq.recheck(sub, s) for s in fc.solutions)


def test_both_solvers_match_brute_force(nb_inst):
    sub = nb_inst.restrict(range(5))
    expected = _key(_brute_force(sub))
    assert _key(uq.solve(sub, all_solutions=True).solutions) == expected
    assert _key(uq.solve(sub, propagate=False, all_solutions=True).solutions) == expected


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_status_invariant_under_orders(nb_inst, seed):
    rng = random.Random(seed)
    order = list(range(56))
    rng.shuffle(order)
    values = list(range(7))
    rng.shuffle(values)
    assert uq.solve(nb_inst, var_order=order, value_order=values).status == uq.UNSAT
    assert uq.solve(nb_inst, var_order=order[::-1]).status == uq.UNSAT


def test_worker_count_invariance(nb_inst, tri_inst):
    for inst in (nb_inst, tri_inst):
        one = uq.solve(inst)
        two = uq.solve(inst, workers=2)
        assert one.status == two.status == uq.UNSAT
        assert one.nodes == two.nodes


def test_unsat_report(nb_inst):
    out = uq.solve(nb_inst)
    cert = uq.emit_unsat_report(nb_inst, out, shrink=False)
    assert cert.claim_id == "uniqueness-nb" and cert.ok
    assert cert.counters["nodes"] == out.nodes > 0
    assert cert.counters["core_verified_unsat"] is True
    assert len(cert.counters["failure_histogram"]) == 56


def test_sat_report_falsifies():
    inst = uq.CspInstance.from_predicate([0, 1], 2, lambda u, a, w, b: True)
    out = uq.solve(inst)
    cert = uq.emit_unsat_report(inst, out)
    assert cert.status == "falsified"
    assert cert.witnesses[0]["recheck"] is True


def test_self_constraint_flag(v1234):
    inst = uq.build_instance(v1234, fam.TRI_INTERSECTING, include_self=True)
    # a candidate T ^ v_k contains T, so it always passes the self-check
    assert inst.initial == [127] * 56
    assert uq.solve(inst).status == uq.UNSAT


def test_build_instance_rejects_bad_subspace():
    from trifam.pipeline import toy_subspace
    with pytest.raises(ValueError):
        uq.build_instance(toy_subspace())


def test_claim_ids():
    assert uq.claim_id_for(fam.NB_INTERSECTING) == "uniqueness-nb"
    assert uq.claim_id_for(fam.TRI_INTERSECTING) == "uniqueness-tri"
    assert uq.claim_id_for(fam.TRI_AGREEING) == "uniqueness-tri-agree"

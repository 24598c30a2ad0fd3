import json

import pytest

from trifam import cli, gf2, pipeline
from trifam.antilinear import parse_perm
from trifam.certificate import Certificate, dumps

MODULES = {"antilinear", "cube_subspace", "families", "uniqueness", "useful_sets"}


@pytest.fixture(scope="module")
def fast_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("bundle")
    code, certs = pipeline.run_verify_all(fast=True, ctx=pipeline.Context(samples=20_000), out_dir=out)
    return code, certs, out


def test_fast_run_verifies(fast_run):
    code, certs, _ = fast_run
    assert code == pipeline.EXIT_VERIFIED
    assert len(certs) >= 8
    assert all(c.ok for c in certs)
    assert not any(pipeline.REGISTRY[c.claim_id].slow for c in certs)


def test_bundle_replays_byte_identically(fast_run, tmp_path):
    _, _, out = fast_run
    pipeline.run_verify_all(fast=True, ctx=pipeline.Context(samples=20_000), out_dir=tmp_path)
    assert (tmp_path / "bundle.json").read_bytes() == (out / "bundle.json").read_bytes()
    timings = json.loads((tmp_path / "timings.json").read_text())
    assert set(timings) == {c["claim_id"] for c in json.loads((out / "bundle.json").read_text())["certificates"]}


def test_certificate_schema(fast_run):
    _, _, out = fast_run
    bundle = json.loads((out / "bundle.json").read_text())
    assert bundle["schema_version"] == 1 and bundle["seed"] == 0
    for d in bundle["certificates"]:
        assert d["claim_id"] in pipeline.REGISTRY
        assert d["status"] == "verified"
        assert "elapsed_ms" not in d
        assert Certificate.from_dict(d).to_dict(timing=False) == d


def test_falsified_needs_witness():
    with pytest.raises(ValueError):
        Certificate("lemma-V", "falsified")
    with pytest.raises(ValueError):
        Certificate("lemma-V", "maybe")


def test_sabotaged_inner_falsifies_example():
    with pipeline.sabotaged_inner(pipeline.INNER_MUTANTS["drop-bit-0"]):
        code, certs = pipeline.run_verify_all(fast=True, ctx=pipeline.Context(samples=1000))
    assert code == pipeline.EXIT_FALSIFIED
    by_id = {c.claim_id: c for c in certs}
    assert by_id["lemma-antilinear-example"].status == "falsified"
    assert by_id["lemma-antilinear-example"].witnesses
    assert gf2.inner(3, 1) == 1  # restored


def test_registry_complete():
    reg = pipeline.REGISTRY
    assert {c.module for c in reg.values()} == MODULES
    for cid, claim in reg.items():
        assert claim.claim_id == cid and claim.statement and callable(claim.check)
    assert {c.criterion for c in reg.values() if c.criterion} == set(range(1, 11))
    assert {"uniqueness-nb", "uniqueness-tri", "n9-search"} == {c for c, v in reg.items() if v.slow}


def test_every_check_returns_its_own_claim_id():
    ctx = pipeline.Context(samples=500)
    for cid, claim in pipeline.REGISTRY.items():
        if claim.slow:
            continue
        assert pipeline.run_claim(claim, ctx).claim_id == cid


def test_crash_becomes_error_certificate():
    claim = pipeline.Claim("boom", "antilinear", "always crashes", lambda ctx: 1 / 0)
    cert = pipeline.run_claim(claim, pipeline.Context())
    assert cert.status == "error" and "ZeroDivisionError" in cert.inputs["error"]
    assert pipeline.exit_code([cert]) == pipeline.EXIT_ERROR


def test_exit_code_priority():
    ok = Certificate("a", "verified")
    bad = Certificate("b", "falsified", witnesses=[{"x": 1}])
    err = Certificate("c", "error")
    assert pipeline.exit_code([ok]) == 0
    assert pipeline.exit_code([ok, err]) == 2
    assert pipeline.exit_code([ok, err, bad]) == 1


def test_table_flips_all_caught():
    flips = list(pipeline.table_flips())
    assert len(flips) == 56
    results = pipeline.mutation_harness()
    assert all(results.values()), [k for k, v in results.items() if not v]


def test_parse_perm_reexported():
    assert cli.parse_perm is parse_perm
    assert cli.parse_perm("(1234)").images == (0, 2, 3, 4, 1, 5, 6, 7)
    with pytest.raises(ValueError):
        cli.parse_perm("(12)(21)")


def test_cli_fano(capsys, tmp_path):
    out = tmp_path / "fano.json"
    assert cli.main(["fano", "--json", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "(13)(26)(45)" in printed and "(174653)" in printed
    assert json.loads(out.read_text())["counters"]["fano"] == 8


def test_cli_antilinear(capsys):
    assert cli.main(["antilinear"]) == 0
    assert "antilinear: 1344" in capsys.readouterr().out


def test_cli_subspace(capsys):
    assert cli.main(["subspace", "--perm", "(1234)", "--verify"]) == 0
    assert cli.main(["subspace", "--perm", "(12)", "--verify"]) == 1
    assert cli.main(["subspace", "--perm", "(12)(21)"]) == 2


def test_cli_bound(capsys):
    assert cli.main(["bound", "--samples", "2000", "--seed", "4"]) == 0
    assert "max_count: 1" in capsys.readouterr().out


def test_cli_uniqueness(capsys, tmp_path):
    out = tmp_path / "u.json"
    assert cli.main(["uniqueness", "--mode", "tri", "--var-order", "random:3", "--json", str(out)]) == 0
    assert json.loads(out.read_text())["claim_id"] == "uniqueness-tri"
    assert cli.main(["uniqueness", "--var-order", "sideways"]) == 2
    assert cli.main(["uniqueness", "--perm", "()"]) == 2


def test_cli_isets(capsys):
    assert cli.main(["isets", "classify"]) == 0


def test_cli_n9_checkpoint_flow(capsys, tmp_path):
    ck = tmp_path / "ck.json"
    assert cli.main(["n9", "--checkpoint", str(ck), "--max-units", "3"]) == 2
    assert "resume" in capsys.readouterr().out
    assert cli.main(["n9", "--checkpoint", str(ck), "--resume", "--workers", "1"]) == 0
    ck.write_text("garbage")
    assert cli.main(["n9", "--checkpoint", str(ck), "--resume"]) == 2


def test_cli_n8_control():
    assert cli.main(["n9", "--control"]) == 0


def test_cli_verify_all_fast(tmp_path, capsys):
    out = tmp_path / "run"
    assert cli.main(["--workers", "1", "verify-all", "--fast", "--samples", "2000", "--out", str(out)]) == 0
    assert (out / "bundle.json").exists() and (out / "timings.json").exists()


def test_cli_usage_errors():
    with pytest.raises(SystemExit) as exc:
        cli.main(["nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["--workers", "0", "fano"])
    assert exc.value.code == 2


def test_dumps_is_stable():
    assert dumps({"b": 1, "a": [2]}) == dumps({"a": [2], "b": 1})

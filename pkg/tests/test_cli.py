"""Manifest-driven CLI: digests, reports, sharding, checkpoints, exit codes."""

import json

import pytest

from planecount import cli
from planecount.cli import (
    EXIT_BUDGET_EXCEEDED,
    EXIT_INTERNAL_INCONSISTENCY,
    EXIT_INVALID_MANIFEST,
    EXIT_OK,
    InternalInconsistencyError,
    Manifest,
    ManifestError,
    canonical_json,
    main,
    run,
)

EXH = {"type": "exhaustive", "budget": 1 << 30}


def _dist_manifest(**kw):
    base = dict(kind="distribution", field="2", degree=3, mode="smooth", strategy=dict(EXH))
    base.update(kw)
    return Manifest(**base)


def _strip_volatile(report):
    d = {k: v for k, v in report.items() if k != "generated_at"}
    return canonical_json(d)


# ---------------------------------------------------------------------------
# manifests
# ---------------------------------------------------------------------------


def test_manifest_roundtrip(tmp_path):
    man = _dist_manifest(shards=2, out=str(tmp_path / "r.json"))
    path = tmp_path / "m.json"
    man.save(str(path))
    assert Manifest.load(str(path)) == man


def test_manifest_digest_is_frozen():
    assert _dist_manifest().digest() == (
        "f6da2a989c3d591d14dd8d05381bdd72a1969c0278d40482c2e31efac33a1110"
    )


def test_manifest_digest_ignores_execution_fields(tmp_path):
    a = _dist_manifest()
    b = _dist_manifest(shards=8, out=str(tmp_path / "x.json"))
    assert a.digest() == b.digest()
    c = _dist_manifest(degree=4)
    assert c.digest() != a.digest()


def test_manifest_validation_errors(tmp_path):
    with pytest.raises(ManifestError):
        Manifest(kind="mystery", field="2")
    with pytest.raises(ManifestError):
        _dist_manifest(field="4")
    with pytest.raises(ManifestError):
        _dist_manifest(mode="fancy")
    with pytest.raises(ManifestError):
        _dist_manifest(shards=0)
    with pytest.raises(ManifestError):
        _dist_manifest(resume=True)  # resume without out
    with pytest.raises(ManifestError):
        Manifest.from_dict({"kind": "distribution", "field": "2", "surprise": 1})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ManifestError):
        Manifest.load(str(bad))


# ---------------------------------------------------------------------------
# runners through run()
# ---------------------------------------------------------------------------


def test_field_info_payload():
    report, written = run(Manifest(kind="field-info", field="3^2"))
    assert written == []
    assert (report["p"], report["k"], report["q"]) == (3, 2, 9)
    assert report["modulus"] == "t^2 + 1"
    assert report["plane_points"] == 91
    assert report["closed_point_counts"]["1"] == 91
    assert "payload_digest" in report and "generated_at" in report


def test_distribution_report_and_csv(tmp_path):
    out = tmp_path / "dist.json"
    man = _dist_manifest(out=str(out))
    report, written = run(man)
    assert [str(out), str(tmp_path / "dist.csv")] == written
    assert report["tv_distance"] == "42867/470596"
    assert report["total"] == 336
    assert report["model"] == {"n": 7, "p": "3/7"}
    on_disk = json.loads(out.read_text())
    assert on_disk["payload_digest"] == report["payload_digest"]
    csv_lines = (tmp_path / "dist.csv").read_text().strip().split("\n")
    assert csv_lines[0] == "t,count,empirical_freq,model_pmf,diff,ci_halfwidth"
    assert len(csv_lines) == 9
    t1 = csv_lines[2].split(",")
    assert t1[0] == "1" and t1[1] == "42"


def test_sharded_run_is_byte_identical(tmp_path):
    r1, _ = run(_dist_manifest(out=str(tmp_path / "a.json")))
    r4, _ = run(_dist_manifest(shards=4, out=str(tmp_path / "b.json")))
    assert _strip_volatile(r1) == _strip_volatile(r4)
    assert r1["payload_digest"] == r4["payload_digest"]


def test_sharded_sampled_run_is_byte_identical(tmp_path):
    sam = {"type": "sampled", "n": 300, "seed": 11}
    r1, _ = run(_dist_manifest(strategy=dict(sam)))
    r3, _ = run(_dist_manifest(strategy=dict(sam), shards=3))
    assert _strip_volatile(r1) == _strip_volatile(r3)


def test_moments_payload_exact_values():
    man = Manifest(kind="moments", field="2", degree=3, mode="smooth",
                   strategy=dict(EXH), extras={"max_k": 3})
    report, _ = run(man)
    assert report["center"] == 3 and report["scale_base"] == 3
    rows = {r["k"]: r for r in report["rows"]}
    assert rows[1]["empirical"]["numer"] == "0"
    assert rows[2]["empirical"] == {"numer": "1/2", "base": 3, "half_power": 0, "approx": 0.5}
    assert rows[2]["model"]["numer"] == "4/7"
    assert rows[3]["empirical"]["numer"] == "0"  # symmetric cubic histogram
    assert rows[2]["gaussian_limit"] == 1 and rows[3]["gaussian_limit"] == 0
    assert "orientation only" in report["note"]


def test_sieve_verify_payload():
    man = Manifest(kind="sieve-verify", field="2", degree=3,
                   extras={"order": 1, "points": "all", "target": "value-zero"})
    report, _ = run(man)
    assert report["dim"] == 7 and report["rank"] == 7
    assert report["surjective"] and report["fibers_uniform"]
    assert report["fiber_size"] == "8"  # 2^(10-7)
    assert report["density"] == "1/128"
    assert report["smallest_surjective_degree"] == 3


def test_sieve_verify_reports_rank_defect():
    man = Manifest(kind="sieve-verify", field="2", degree=2,
                   extras={"order": 1, "points": "all"})
    report, _ = run(man)
    assert report["rank"] == 6 and not report["surjective"]
    assert report["fiber_size"] is None and report["density"] is None


def test_smooth_crosscheck_payload():
    man = Manifest(kind="smooth-crosscheck", field="2", degree=3,
                   strategy={"type": "sampled", "n": 60, "seed": 4},
                   extras={"oracle_max_e": 4})
    report, _ = run(man)
    assert report["disagreements"] == 0
    assert report["checked"] <= 60
    assert report["smooth"] + report["singular"] == report["checked"]
    tally = report["least_witness_degree_tally"]
    assert sum(tally.values()) == report["singular"]


def test_proposition_exact_payload_and_refusal():
    report, _ = run(Manifest(kind="proposition-exact", field="2", degree=3))
    assert report["exact_match"] is True
    assert report["tv_vs_model"] == "0"
    assert report["certified_rank"] == 7
    assert report["counts"][0] == "8"  # 2^10 / 2^7 forms miss every point
    with pytest.raises(ManifestError):
        run(Manifest(kind="proposition-exact", field="2", degree=2))


def test_bounds_payload_vacuous_and_sharp(tmp_path):
    vac, _ = run(Manifest(kind="bounds", field="2", degree=5, extras={"r": 1},
                          strategy=dict(EXH)))
    assert vac["medium_vacuous"] is True
    assert vac["validated"] is None
    sharp, _ = run(Manifest(kind="bounds", field="2", degree=5, extras={"r": 3},
                            strategy=dict(EXH)))
    assert sharp["medium_bound"] == "1/2"
    assert sharp["medium_vacuous"] is False
    assert sharp["window_empty"] is True
    assert sharp["window_density"] == "0"
    assert sharp["validated"] is True


def test_bounds_nonempty_window_is_enumerated():
    rep, _ = run(Manifest(kind="bounds", field="2", degree=3, extras={"r": 1},
                          strategy=dict(EXH)))
    assert rep["window"] == [1, 1]
    assert rep["window_empty"] is False
    # 652 of the 1024 cubic vectors are singular at some rational point
    assert rep["window_density"] == "163/256"
    # bound vacuous at this tiny q, so no validation is claimed
    assert rep["medium_vacuous"] is True and rep["validated"] is None


def test_bounds_out_of_reach_window_reports_honestly():
    rep, _ = run(Manifest(kind="bounds", field="2", degree=6, extras={"r": 2},
                          strategy=dict(EXH)))
    assert rep["window"] == [2, 2] and rep["window_empty"] is False
    assert rep["window_density"] is None
    assert "no validation claimed" in rep["window_density_note"]
    assert rep["validated"] is None


# ---------------------------------------------------------------------------
# checkpoints
# ---------------------------------------------------------------------------


def test_checkpoint_files_are_written_and_resume_is_identical(tmp_path):
    out = tmp_path / "run.json"
    man = _dist_manifest(shards=2, out=str(out))
    first, _ = run(man)
    ckpts = sorted(p.name for p in tmp_path.glob("*.ckpt"))
    assert ckpts == ["run.shard000.ckpt", "run.shard001.ckpt"]
    man2 = _dist_manifest(shards=2, out=str(out), resume=True)
    second, _ = run(man2)
    assert first["payload_digest"] == second["payload_digest"]


def test_resume_from_partial_checkpoint(tmp_path):
    from planecount.gf import make_field
    from planecount.stats import Exhaustive, empirical_histogram

    out = tmp_path / "run.json"
    man = _dist_manifest(out=str(out))
    whole, _ = run(man)
    # fake an interrupted shard: header + progress covering [0, 512) only
    half = empirical_histogram(make_field(2), 3, "smooth", Exhaustive(), span=(0, 512))
    ck = tmp_path / "run.shard000.ckpt"
    head = json.loads(ck.read_text().splitlines()[0])
    ck.write_text(
        json.dumps(head, sort_keys=True)
        + "\n"
        + json.dumps(
            {"ckpt_version": 1, "type": "progress", "done": 512, "counts": list(half.counts)},
            sort_keys=True,
        )
        + "\n"
    )
    resumed, _ = run(_dist_manifest(out=str(out), resume=True))
    assert resumed["payload_digest"] == whole["payload_digest"]


def test_foreign_checkpoint_is_refused(tmp_path):
    out = tmp_path / "run.json"
    run(_dist_manifest(out=str(out)))
    ck = tmp_path / "run.shard000.ckpt"
    lines = ck.read_text().splitlines()
    head = json.loads(lines[0])
    head["manifest_digest"] = "0" * 64
    ck.write_text("\n".join([json.dumps(head, sort_keys=True)] + lines[1:]) + "\n")
    with pytest.raises(ManifestError):
        run(_dist_manifest(out=str(out), resume=True))


# ---------------------------------------------------------------------------
# command line entry
# ---------------------------------------------------------------------------


def test_main_dist_writes_report(tmp_path, capsys):
    out = tmp_path / "d.json"
    code = main(
        ["dist", "--field", "2", "--degree", "3", "--mode", "smooth",
         "--exhaustive", "--out", str(out)]
    )
    assert code == EXIT_OK
    assert out.exists()
    assert "wrote" in capsys.readouterr().out


def test_main_field_info_to_stdout(capsys):
    assert main(["field", "info", "--field", "2^3"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["q"] == 8


def test_main_rejects_bad_field(capsys):
    code = main(["dist", "--field", "6", "--degree", "3", "--exhaustive"])
    assert code == EXIT_INVALID_MANIFEST
    assert "invalid manifest" in capsys.readouterr().err


def test_main_budget_exceeded(capsys):
    code = main(["dist", "--field", "2", "--degree", "4", "--exhaustive",
                 "--budget", "10"])
    assert code == EXIT_BUDGET_EXCEEDED


def test_main_reports_internal_inconsistency(monkeypatch, capsys):
    def boom(man):
        raise InternalInconsistencyError("fabricated for the exit-code test")

    monkeypatch.setitem(cli._RUNNERS, "field-info", boom)
    code = main(["field", "info", "--field", "2"])
    assert code == EXIT_INTERNAL_INCONSISTENCY
    assert "INTERNAL INCONSISTENCY" in capsys.readouterr().err


def test_main_prop_exact_nonsurjective_is_manifest_error(capsys):
    assert main(["prop-exact", "--field", "2", "--degree", "2"]) == EXIT_INVALID_MANIFEST


def test_main_version_and_unknown_command(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_main_saved_manifest_reruns_identically(tmp_path, capsys):
    mpath = tmp_path / "m.json"
    out1 = tmp_path / "r1.json"
    assert main(
        ["dist", "--field", "2", "--degree", "3", "--mode", "smooth",
         "--exhaustive", "--out", str(out1), "--save-manifest", str(mpath)]
    ) == EXIT_OK
    saved = Manifest.load(str(mpath))
    report2, _ = run(Manifest.from_dict({**saved.to_dict(), "out": None}))
    report1 = json.loads(out1.read_text())
    assert report1["payload_digest"] == report2["payload_digest"]

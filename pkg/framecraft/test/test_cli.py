import argparse
import json

import pytest

from framecraft import NumericalFailureError, SpecError, __version__
from framecraft import _eigensolver
from framecraft.cli import ExperimentConfig, _commands, build_parser, main, run

EMPTY_DIGEST = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


def run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize(
    "name,argv",
    [
        ("frame_report_onb.json", ["frame-report", "--system", "system_onb.json"]),
        ("group_validate_c6.json", ["group-validate", "--group", "group_c6.json"]),
        (
            "gap_c4_fourier.json",
            ["gap", "--group", "group_c4.json", "--rep", "fourier", "--generators", "1", "--exclude-invariants"],
        ),
        ("haar_demo.json", ["haar-demo", "--n-max", "3"]),
        ("truncation_profile_diag.csv", ["truncation-profile", "--format", "csv"]),
        ("thai1_two_atoms.csv", ["thai1", "--measure", "measure_two.json", "--format", "csv"]),
        ("bessel_divergence.csv", ["bessel-divergence", "--n-max", "3", "--format", "csv"]),
        ("canonical_repeated.json", ["canonical", "--system", "system_repeated.json"]),
        (
            "cocycle_check_c4.json",
            ["cocycle-check", "--group", "group_c4.json", "--subgroup", "subgroup_c4.json"],
        ),
        ("induce_c4.json", ["induce", "--group", "group_c4.json", "--subgroup", "subgroup_c4.json"]),
        ("framext_s3_a3.json", ["framext", "--group", "group_s3.json", "--subgroup", "subgroup_a3.json"]),
        ("dual_measure_three.json", ["dual-measure", "--measure", "measure_three.json"]),
    ],
)
def test_goldens(name, argv, data_path, golden, tmp_path):
    argv = [data_path(a) if a.endswith(".json") else a for a in argv]
    out = tmp_path / name
    assert main(argv + ["--out", str(out)]) == 0
    golden(name, out.read_text())


def test_output_is_deterministic(capsys, data_path):
    argv = ["cocycle-check", "--group", data_path("group_s3.json"), "--subgroup", data_path("subgroup_a3.json")]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    assert first.endswith("}\n")


def test_timing(capsys, data_path):
    argv = ["frame-report", "--system", data_path("system_onb.json")]
    assert "wall_time_ms" not in run_json(capsys, argv)
    report = run_json(capsys, argv + ["--timing"])
    assert report["wall_time_ms"] >= 0
    assert report["version"] == __version__


def test_frame_report_not_total(capsys, data_path):
    report = run_json(capsys, ["frame-report", "--system", data_path("system_rank_deficient.json")])
    assert report["results"]["classification"] == "NotTotal"
    assert report["results"]["A"] == 0


def test_canonical(capsys, data_path):
    report = run_json(capsys, ["canonical", "--system", data_path("system_frame.json")])
    results = report["results"]
    assert results["report"]["classification"] == "Parseval"
    assert results["report"]["A"] == pytest.approx(1.0)
    assert results["system"]["dim"] == 2
    assert len(results["system"]["vectors"]) == 3


def test_cocycle_check(capsys, data_path):
    report = run_json(
        capsys, ["cocycle-check", "--group", data_path("group_c4.json"), "--subgroup", data_path("subgroup_c4.json")]
    )
    results = report["results"]
    assert results["subgroup"] == [0, 2]
    assert results["representatives"] == [0, 1]
    assert results["cosets"] == [[0, 2], [1, 3]]
    assert results["alpha"] == [[0, 0, 2, 2], [0, 2, 2, 0]]
    assert results["checked"] == 32
    assert results["exhaustive"] is True
    assert results["cocycle_violations"] == 0


def test_induce(capsys, data_path):
    report = run_json(
        capsys, ["induce", "--group", data_path("group_c4.json"), "--subgroup", data_path("subgroup_c4.json")]
    )
    results = report["results"]
    assert results["index"] == 2
    assert results["base_dim"] == 2
    assert results["dim"] == 4
    assert results["homomorphism_defect"] == 0
    assert results["block_targets"] == [[0, 1, 0, 1], [1, 0, 1, 0]]


def test_framext(capsys, data_path):
    argv = ["framext", "--group", data_path("group_s3.json"), "--subgroup", data_path("subgroup_a3.json")]
    results = run_json(capsys, argv)["results"]
    assert results["preserved"] is True
    assert results["base_bounds"] == pytest.approx([1.0, 1.0])
    assert results["induced_bounds"] == pytest.approx([1.0, 1.0])
    assert results["index"] == 2
    assert results["subset_size"] == 6

    results = run_json(capsys, argv + ["--subset", "0", "3", "--w", "1", "2", "0"])["results"]
    assert results["preserved"] is True
    assert results["subset_size"] == 4


def test_dual_measure(capsys, data_path):
    results = run_json(capsys, ["dual-measure", "--measure", data_path("measure_three.json")])["results"]
    assert [atom["laplacian"] for atom in results["atoms"]] == [0, 2, 4]
    assert results["atoms"][1]["angle"] == ["1/4"]
    assert results["identity_atom"] == 0
    assert results["obstruction"] == 0
    assert results["laplacian_min_eig"] == 0
    assert results["almost_invariant_vectors"] is True


def test_thai1_json(capsys, data_path):
    results = run_json(capsys, ["thai1", "--measure", data_path("measure_two.json")])["results"]
    assert results["sets"] == [[0, 1], [0]]
    assert [row["defect"] for row in results["rows"]] == [pytest.approx(2**0.5), 0]


def test_config_file(capsys, data_path, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"tol": 1e-6, "inputs": {"system": data_path("system_onb.json")}}))
    report = run_json(capsys, ["frame-report", "--config", str(config)])
    assert report["parameters"]["tol"] == 1e-6
    assert report["results"]["tol"] == 1e-6

    # flags win over the file
    report = run_json(capsys, ["frame-report", "--config", str(config), "--tol", "1e-4"])
    assert report["parameters"]["tol"] == 1e-4

    config.write_text(json.dumps({"tolerance": 1e-6}))
    assert main(["frame-report", "--config", str(config)]) == 2


def test_seed_accepts_hex(capsys):
    report = run_json(capsys, ["haar-demo", "--seed", "0x10"])
    assert report["parameters"]["seed"] == 16
    assert report["inputs_digest"] == EMPTY_DIGEST


@pytest.mark.parametrize(
    "argv",
    [
        ["frame-report"],
        ["frame-report", "--system", "does_not_exist.json"],
        ["frame-report", "--system", "malformed.json"],
        ["frame-report", "--system", "system_onb.json", "--tol", "-1"],
        ["frame-report", "--system", "system_onb.json", "--format", "csv"],
        ["canonical", "--system", "system_rank_deficient.json"],
        ["group-validate", "--group", "group_not_latin.json"],
        ["truncation-profile", "--family", "nope"],
        ["gap", "--group", "group_c4.json", "--generators", "9"],
    ],
)
def test_invalid_input_exits_2(argv, data_path):
    argv = [data_path(a) if a.endswith(".json") and a != "does_not_exist.json" else a for a in argv]
    assert main(argv) == 2


def test_thread_count_is_validated(monkeypatch):
    monkeypatch.setenv("FRAMECRAFT_THREADS", "0")
    assert main(["truncation-profile"]) == 2


def test_numerical_failure_exits_3(monkeypatch, data_path):
    def _fail(matrix):
        raise NumericalFailureError("Jacobi sweeps did not converge", iterations=100)

    monkeypatch.setitem(_eigensolver.EIGENSOLVERS, "jacobi", _fail)
    assert main(["frame-report", "--system", data_path("system_onb.json")]) == 3


def test_out_is_not_overwritten(data_path, tmp_path):
    out = tmp_path / "report.json"
    out.write_text("keep")
    argv = ["frame-report", "--system", data_path("system_onb.json"), "--out", str(out)]

    assert main(argv) == 2
    assert out.read_text() == "keep"
    assert main(argv + ["--regenerate-goldens"]) == 0
    assert json.loads(out.read_text())["command"] == "frame-report"


def test_run_returns_report(data_path):
    config = ExperimentConfig("bessel-divergence", options={"n_max": 3})
    report, code = run(config)

    assert code == 0
    assert report.results["tail_onset"] == 3
    assert report.table.columns.tolist() == ["n", "inner_product", "partial_sum"]
    assert report.to_dict()["parameters"] == {"tol": 1e-8, "seed": 24301, "n_max": 3}

    report, code = run(ExperimentConfig("no-such-command"))
    assert report is None
    assert code == 2


def test_experiment_config_validation():
    with pytest.raises(SpecError) as info:
        ExperimentConfig.from_dict({"command": "gap", "threads": 2})
    assert info.value.pointer == "/threads"
    with pytest.raises(SpecError):
        ExperimentConfig.from_dict({"tol": 1e-8})
    with pytest.raises(ValueError):
        ExperimentConfig("gap", seed=-1)
    with pytest.raises(ValueError):
        ExperimentConfig("gap", format="xml")


def test_every_command_has_a_subparser():
    subparsers = next(
        action for action in build_parser()._actions if isinstance(action, argparse._SubParsersAction)
    )
    expected = [
        "bessel-divergence",
        "canonical",
        "cocycle-check",
        "dual-measure",
        "frame-report",
        "framext",
        "gap",
        "group-validate",
        "haar-demo",
        "induce",
        "thai1",
        "truncation-profile",
    ]
    assert sorted(_commands) == expected
    assert sorted(subparsers.choices) == expected


@pytest.mark.parametrize("text", ["[]", "[1, 2]", "5", '"system.json"', "null"])
@pytest.mark.parametrize("command,role", [("frame-report", "system"), ("group-validate", "group"), ("thai1", "measure")])
def test_non_object_documents_exit_2(command, role, text, tmp_path, caplog):
    path = tmp_path / "input.json"
    path.write_text(text)

    assert main([command, f"--{role}", str(path)]) == 2
    assert "Expected a JSON object" in caplog.text


@pytest.mark.parametrize("sets", ["5", '{"a": [0]}', "[0, 1]", '[[0], ["1"]]', "[[true]]"])
def test_thai1_sets_have_to_be_index_lists(sets, data_path, caplog):
    argv = ["thai1", "--measure", data_path("measure_two.json"), "--sets", sets]

    assert main(argv) == 2
    assert "/options/sets" in caplog.text


def test_thai1_explicit_sets(capsys, data_path):
    argv = ["thai1", "--measure", data_path("measure_three.json"), "--sets", "[[0, 1, 2], [0, 1], [0]]"]
    results = run_json(capsys, argv)["results"]

    assert results["sets"] == [[0, 1, 2], [0, 1], [0]]
    assert results["rows"][-1]["defect"] == 0

"""End-to-end tests of the catdual command line."""

import json

from src.catdual.harness.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, build_parser, main


def test_parser_knows_every_command():
    parser = build_parser()
    args = parser.parse_args(["verify-duality", "--a", "tfim", "--b", "tfim_kw", "--N", "8"])
    assert (args.command, args.model, args.model_b, args.N) == ("verify-duality", "tfim", "tfim_kw", 8)


def test_no_command_is_input_error():
    assert main([]) == EXIT_INPUT


def test_list_models(capsys):
    assert main(["list-models"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "tfim_kw" in out
    assert "six_vertex" in out


def test_check_pentagon_ising(tmp_path):
    report = tmp_path / "pentagon.json"
    assert main(["check-pentagon", "--category", "ising", "--report", str(report)]) == EXIT_OK
    data = json.loads(report.read_text())
    assert data["pass"] is True


def test_check_pentagon_reports_module_obstruction():
    code = main(["check-pentagon", "--category", "vec_z2_omega", "--module", "vec_forgetful"])
    assert code == EXIT_FAILED


def test_verify_duality_tfim_kw(tmp_path):
    report = tmp_path / "duality.json"
    code = main(["verify-duality", "--a", "tfim", "--b", "tfim_kw", "--N", "6", "--g", "0.5",
                 "--report", str(report)])
    assert code == EXIT_OK
    data = json.loads(report.read_text())
    assert data["pass"] is True
    assert len(data["pairing"]) == 4
    assert data["max_deviation"] <= 1e-8


def test_verify_duality_reversed_pair_uses_hint():
    assert main(["verify-duality", "--a", "tfim_kw", "--b", "tfim", "--N", "4"]) == EXIT_OK


def test_unrelated_models_are_not_dual():
    assert main(["verify-duality", "--a", "tfim", "--b", "xxz", "--N", "4"]) == EXIT_FAILED


def test_bad_config_is_input_error(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "spectrum", "N": "six"}))
    assert main(["--config", str(path), "spectrum"]) == EXIT_INPUT


def test_unknown_model_is_input_error(capsys):
    assert main(["spectrum", "--model", "potts9"]) == EXIT_INPUT
    assert "potts9" in capsys.readouterr().err


def test_spectrum_csv_is_byte_identical(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        assert main(["spectrum", "--model", "tfim", "--N", "4", "--g", "0.7", "--out", str(path)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    rows = first.read_text().splitlines()
    assert rows[0] == "index,eigenvalue,sector"
    assert len(rows) == 1 + 2 * 2 ** 4


def test_structure_constants_compare(tmp_path):
    report = tmp_path / "algebra.json"
    code = main(["structure-constants", "--model", "tfim", "--b", "tfim_kw", "--N", "4", "--depth", "2",
                 "--report", str(report)])
    assert code == EXIT_OK
    data = json.loads(report.read_text())
    assert data["comparison"]["isomorphic_as_presented"] is True


def test_build_hamiltonian_checks_local_form(tmp_path):
    out = tmp_path / "H.mtx"
    assert main(["build-hamiltonian", "--model", "tfim_kw", "--N", "4", "--twist", "chi0",
                 "--out", str(out)]) == EXIT_OK
    assert out.read_text().startswith("%%MatrixMarket")


def test_gauge_map(tmp_path):
    out = tmp_path / "ghz.csv"
    assert main(["gauge-map", "--group", "Z2", "--N", "4", "--out", str(out)]) == EXIT_OK
    assert out.read_text().splitlines()[0] == "index,re,im"


def test_apply_intertwiner(tmp_path):
    state = tmp_path / "in.csv"
    state.write_text("index,re,im\n0,1.0,0.0\n")
    out = tmp_path / "out.csv"
    code = main(["apply-intertwiner", "--a", "tfim", "--b", "tfim_kw", "--N", "4",
                 "--in", str(state), "--out", str(out)])
    assert code == EXIT_OK
    assert out.exists()


def test_verify_mpo_with_dual():
    assert main(["verify-mpo", "--model", "tfim", "--b", "tfim_kw", "--N", "4", "--g", "0.6"]) == EXIT_OK


def test_check_pentagon_reports_super_blocks(tmp_path):
    report = tmp_path / "pentagon.json"
    assert main(["check-pentagon", "--category", "ising", "--module", "ising_fermion",
                 "--report", str(report)]) == EXIT_OK
    names = [c["name"] for c in json.loads(report.read_text())["checks"]]
    assert "super_blocks[ising_fermion]" in names
    assert not any(n.startswith("pulling_through") for n in names)


def test_build_hamiltonian_compares_explicit_spectrum(tmp_path):
    report = tmp_path / "H.json"
    assert main(["build-hamiltonian", "--model", "xxz", "--N", "4", "--g", "0.3",
                 "--report", str(report)]) == EXIT_OK
    checks = {c["name"]: c for c in json.loads(report.read_text())["checks"]}
    assert checks["local_form_spectrum"]["pass"] is True
    assert checks["local_form_spectrum"]["details"]["twists"] == 4


def test_verify_mpo_pulls_symmetries_through_bonds(tmp_path):
    report = tmp_path / "mpo.json"
    assert main(["verify-mpo", "--model", "tfim", "--N", "4", "--report", str(report)]) == EXIT_OK
    names = [c["name"] for c in json.loads(report.read_text())["checks"]]
    assert any(n.startswith("pulling_through") for n in names)


def test_verify_duality_xxz_coupled_ising():
    assert main(["verify-duality", "--a", "xxz", "--b", "coupled_ising_1", "--N", "6", "--g", "0.3"]) == EXIT_OK

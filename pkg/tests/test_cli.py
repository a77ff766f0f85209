"""Command-line interface: output shapes, exit codes, manifests, determinism."""

import hashlib
import json

import pytest

from apollonia import ran as R
from apollonia.cli import main
from apollonia.longest_path import validate_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_generate_writes_instance_and_manifest(tmp_path, capsys):
    out = tmp_path / "g.json"
    code, text = run(capsys, "generate", "--n", "50", "--seed", "9", "--out", str(out))
    assert code == 0
    assert "g.json" in text
    g = R.deserialize(out.read_bytes())
    assert g.n == 50
    manifest = json.loads((tmp_path / "g.json.manifest.json").read_text())
    assert manifest["format"] == "run-manifest-v1"
    assert manifest["subcommand"] == "generate"
    assert manifest["seeds"] == [9]
    digest = hashlib.sha256(out.read_bytes()).hexdigest()
    assert manifest["outputs"][out.name] == digest


def test_generate_json_receipt(tmp_path, capsys):
    out = tmp_path / "g.json"
    code, text = run(
        capsys, "generate", "--n", "3", "--seed", "1", "--out", str(out), "--json"
    )
    assert code == 0
    receipt = json.loads(text)
    assert receipt["n"] == 3 and receipt["seed"] == 1


def test_solve_tetrahedron_all_methods(tmp_path, capsys):
    out = tmp_path / "k4.json"
    run(capsys, "generate", "--n", "1", "--seed", "0", "--out", str(out))
    for method in ("exact", "brute", "heuristic"):
        code, text = run(capsys, "solve", "--in", str(out), "--method", method)
        assert code == 0
        assert json.loads(text)["length"] == 3


def test_solve_witness_is_valid(tmp_path, capsys):
    out = tmp_path / "g.json"
    run(capsys, "generate", "--n", "8", "--seed", "4", "--out", str(out))
    code, text = run(capsys, "solve", "--in", str(out), "--emit-path")
    assert code == 0
    payload = json.loads(text)
    g = R.deserialize(out.read_bytes())
    assert validate_path(R.adjacency(g), payload["path"])
    assert len(payload["path"]) - 1 == payload["length"]


def test_solve_exact_matches_brute(tmp_path, capsys):
    for seed in (0, 1, 2):
        out = tmp_path / f"s{seed}.json"
        run(capsys, "generate", "--n", "8", "--seed", str(seed), "--out", str(out))
        _, exact = run(capsys, "solve", "--in", str(out), "--method", "exact")
        _, brute = run(capsys, "solve", "--in", str(out), "--method", "brute")
        assert json.loads(exact)["length"] == json.loads(brute)["length"]


def test_pmf_point_anchor(capsys):
    code, text = run(
        capsys,
        *"occupancy pmf --faces 3 --marked 1 --insertions 2 --m 2".split(),
    )
    assert code == 0
    assert text == "m,probability\n2,0.2\n"


def test_pmf_full_table(capsys):
    code, text = run(
        capsys, *"occupancy pmf --faces 7 --marked 3 --insertions 4".split()
    )
    assert code == 0
    lines = text.strip().split("\n")
    assert lines[0] == "m,probability"
    rows = [line.split(",") for line in lines[1:]]
    assert [int(m) for m, _ in rows] == list(range(5))
    assert abs(sum(float(p) for _, p in rows) - 1.0) < 1e-12


def test_pmf_json_shape(capsys):
    code, text = run(
        capsys, *"occupancy pmf --faces 3 --marked 1 --insertions 1 --json".split()
    )
    assert code == 0
    payload = json.loads(text)
    assert payload["faces"] == 3 and payload["marked"] == 1
    assert payload["pmf"][1]["m"] == 1
    assert payload["pmf"][1]["probability"] == pytest.approx(1 / 3, rel=1e-12)


def test_tailcheck_row(capsys):
    args = "occupancy tailcheck --sigma 30 --tau 5 --insertions 200 --trials 500 --seed 7"
    code, text = run(capsys, *args.split())
    assert code == 0
    lines = text.strip().split("\n")
    assert lines[0] == "violations,trials,threshold,worst,vacuous,below_min_marked"
    fields = lines[1].split(",")
    assert fields[1] == "500"
    assert fields[4] in {"true", "false"} and fields[5] in {"true", "false"}
    # same arguments, same row
    _, again = run(capsys, *args.split())
    assert again == text


def test_experiment_rounds_csv(tmp_path, capsys):
    out = tmp_path / "rounds.csv"
    code, _ = run(
        capsys,
        *f"experiment rounds --n 400 --seeds 0..2 --out {out}".split(),
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "seed,i,sigma_i,tau_i,ratio,J,J1"
    seeds = {int(line.split(",")[0]) for line in lines[1:]}
    assert seeds == {0, 1, 2}
    manifest = json.loads((tmp_path / "rounds.csv.manifest.json").read_text())
    assert manifest["seeds"] == [0, 1, 2]


def test_experiment_rounds_parallel_matches_serial(tmp_path, capsys):
    serial = tmp_path / "serial.csv"
    par = tmp_path / "par.csv"
    base = "experiment rounds --n 400 --seeds 0..3 --out"
    run(capsys, *f"{base} {serial}".split())
    run(capsys, *f"{base} {par} --parallel 2".split())
    assert serial.read_bytes() == par.read_bytes()


def test_experiment_rounds_rerun_is_byte_identical(tmp_path, capsys):
    out = tmp_path / "r.csv"
    args = f"experiment rounds --n 300 --seeds 1,5 --out {out}".split()
    run(capsys, *args)
    first = out.read_bytes()
    run(capsys, *args)
    assert out.read_bytes() == first


def test_experiment_scaling_csv(tmp_path, capsys):
    out = tmp_path / "scaling.csv"
    code, _ = run(
        capsys,
        *f"experiment scaling --sizes 64,128 --seeds-per-size 2 --out {out}".split(),
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "n,seed,L_exact,L_heuristic,polylog,stretched_exp,rounds"
    assert len(lines) == 1 + 4
    first = lines[1].split(",")
    assert first[0] == "64" and first[1] == "0"
    assert int(first[2]) >= int(first[3])


def test_seed_set_forms(tmp_path, capsys):
    out = tmp_path / "mix.csv"
    run(capsys, *f"experiment rounds --n 300 --seeds 4,0..1,4 --out {out}".split())
    manifest = json.loads((tmp_path / "mix.csv.manifest.json").read_text())
    assert manifest["seeds"] == [0, 1, 4]


def test_exit_code_missing_file(capsys):
    code, _ = run(capsys, "solve", "--in", "no-such-instance.json")
    assert code == 3


def test_exit_code_domain_error(tmp_path, capsys):
    code, _ = run(
        capsys, "generate", "--n", "-1", "--seed", "0", "--out", str(tmp_path / "x")
    )
    assert code == 3


def test_exit_code_capacity_error(tmp_path, capsys):
    out = tmp_path / "big.json"
    run(capsys, "generate", "--n", "12", "--seed", "0", "--out", str(out))
    code, _ = run(capsys, "solve", "--in", str(out), "--method", "brute")
    assert code == 4


def test_exit_code_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["generate', '--n", "5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "rounds", "--n", "300", "--seeds", "", "--out", "x.csv"])
    assert exc.value.code == 2

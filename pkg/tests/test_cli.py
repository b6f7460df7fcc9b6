import json

import pytest

from sumcol import MemeticParams, load_coloring, load_dimacs
from sumcol.cli import apply_param_overrides, build_parser, main

from conftest import instance_path

QUICK = [
    "--param", "iteration_budget=400",
    "--param", "exchange_idle_limit=40",
    "--param", "relocate_idle_limit=80",
    "--param", "stall_limit=200",
    "--param", "init_iteration_budget=20000",
]


def myciel3_path():
    path = instance_path("myciel3")
    if not path.exists():
        pytest.skip("instance file myciel3.col not shipped")
    return str(path)


def test_apply_param_overrides_reaches_every_section():
    params = apply_param_overrides(
        MemeticParams(),
        ["population_size=4", "max_generations=7",
         "replace_second_worst_probability=0.5",
         "iteration_budget=123", "stall_limit=45",
         "init_restarts=2", "init_tenure_slope=0.3"],
    )
    assert params.population_size == 4
    assert params.max_generations == 7
    assert params.replace_second_worst_probability == 0.5
    assert params.tabu.iteration_budget == 123
    assert params.tabu.stall_limit == 45
    assert params.init.restarts == 2
    assert params.init.tenure_slope == 0.3


def test_apply_param_overrides_rejects_bad_input():
    with pytest.raises(ValueError, match="key=value"):
        apply_param_overrides(MemeticParams(), ["population_size"])
    with pytest.raises(ValueError, match="unknown parameter"):
        apply_param_overrides(MemeticParams(), ["warp_factor=9"])
    with pytest.raises(ValueError, match="bad value"):
        apply_param_overrides(MemeticParams(), ["population_size=lots"])


def test_parser_rejects_unknown_mode():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["solve", "x.col", "--mode", "simulated"])


def test_solve_writes_csv_report(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = main(["solve", myciel3_path(), "--runs", "2", "--seed", "3",
                 "--target", "21", "--best-known", "21",
                 "--out", str(out), *QUICK])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("name,n,m,best_known,")
    assert lines[1].startswith("myciel3,11,20,21,masc,21,")
    err = capsys.readouterr().err
    assert "best sum 21" in err


def test_solve_prints_report_to_stdout(capsys):
    code = main(["solve", myciel3_path(), "--runs", "1", "--seed", "2",
                 "--target", "21", "--format", "json", *QUICK])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["reports"][0]["sum_best"] == 21


def test_solve_save_best_roundtrips(tmp_path):
    best = tmp_path / "best.txt"
    code = main(["solve", myciel3_path(), "--runs", "1", "--seed", "4",
                 "--target", "21", "--save-best", str(best), *QUICK])
    assert code == 0
    graph = load_dimacs(myciel3_path())
    coloring = load_coloring(str(best), graph)
    assert coloring.sum == 21


def test_solve_warm_start_accepts_saved_solution(tmp_path, capsys):
    best = tmp_path / "warm.txt"
    assert main(["solve", myciel3_path(), "--runs", "1", "--seed", "4",
                 "--target", "21", "--save-best", str(best), *QUICK]) == 0
    capsys.readouterr()
    code = main(["solve", myciel3_path(), "--mode", "dnts", "--runs", "1",
                 "--seed", "5", "--warm-start", str(best), *QUICK])
    assert code == 0
    out = capsys.readouterr().out
    assert out.splitlines()[1].split(",")[5] == "21"  # warm start bounds the sum


def test_solve_reports_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 2 1\ne 1 5\n")
    assert main(["solve", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_solve_missing_file_fails_cleanly(capsys):
    assert main(["solve", "/no/such/file.col"]) == 1
    assert "error:" in capsys.readouterr().err


def test_bench_runs_manifest(tmp_path, capsys):
    manifest = tmp_path / "m.txt"
    manifest.write_text(f"myciel3 {myciel3_path()} 11 20 21 exact 4\n")
    out = tmp_path / "report.csv"
    code = main(["bench", str(manifest), "--runs", "1", "--seed", "6",
                 "--out", str(out), *QUICK])
    assert code == 0
    assert out.read_text().splitlines()[1].startswith("myciel3,")


def test_bench_missing_instances(tmp_path, capsys):
    manifest = tmp_path / "m.txt"
    manifest.write_text(
        f"myciel3 {myciel3_path()} 11 20 21 exact 4\n"
        "ghost ghost.col 5 4 -- -- --\n"
    )
    assert main(["bench", str(manifest), "--runs", "1"]) == 1
    assert "missing instance files: ghost" in capsys.readouterr().err
    code = main(["bench", str(manifest), "--runs", "1", "--seed", "2",
                 "--skip-missing", *QUICK])
    assert code == 0
    captured = capsys.readouterr()
    assert "skipping missing instances: ghost" in captured.err
    assert "myciel3" in captured.out


def test_bench_empty_after_skipping(tmp_path, capsys):
    manifest = tmp_path / "m.txt"
    manifest.write_text("ghost ghost.col 5 4 -- -- --\n")
    assert main(["bench", str(manifest), "--runs", "1", "--skip-missing"]) == 1
    assert "no instances" in capsys.readouterr().err

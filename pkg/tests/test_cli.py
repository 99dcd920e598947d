import re
from pathlib import Path

import pytest

from satphase import generators
from satphase.cli import main
from satphase.cnf import parse_dimacs, write_dimacs
from satphase.solver import brute_force

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_uniform(capsys):
    code, out, _ = run(capsys, "gen", "--dist", "uniform", "--vars", "100", "--k", "3", "--gamma", "4.3", "--seed", "7")
    assert code == 0
    f = parse_dimacs(out)
    assert f.num_vars == 100 and f.num_clauses == 430
    assert out.startswith("c origin: uniform v=100 k=3 g=4.3 seed=7\n")


def test_gen_nbhd_p0_bucket_local(capsys):
    code, out, _ = run(
        capsys, "gen", "--dist", "nbhd", "--vars", "100", "--k", "3", "--gamma", "3",
        "--bucket", "10", "--p", "0", "--seed", "1",
    )
    assert code == 0
    for clause in parse_dimacs(out).clauses:
        assert len({(abs(l) - 1) // 10 for l in clause}) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--dist", "uniform", "--k", "3", "--gamma", "1", "--seed", "1"],
        ["gen", "--dist", "uniform", "--vars", "10", "--gamma", "1", "--seed", "1", "--copies", "2"],
        ["gen", "--dist", "rich", "--vars", "10", "--gamma", "1", "--seed", "1", "--p", "0.5"],
        ["gen", "--dist", "uniform", "--vars", "2", "--k", "3", "--gamma", "1", "--seed", "1"],
    ],
)
def test_gen_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_gen_to_file_matches_golden(capsys, tmp_path):
    out = tmp_path / "g.cnf"
    code, _, _ = run(capsys, "gen", "--dist", "rich", "--vars", "12", "--gamma", "2", "--copies", "2", "--seed", "5", "-o", str(out))
    assert code == 0
    assert out.read_bytes() == (FIXTURES / "rich_v12_g2_c2_s5.cnf").read_bytes()


def test_solve_unsat(capsys, tmp_path):
    p = tmp_path / "u.cnf"
    p.write_text("p cnf 1 2\n1 0\n-1 0\n")
    code, out, _ = run(capsys, "solve", str(p))
    assert code == 1
    assert re.fullmatch(r"status=UNSAT backtracks=0 decisions=0 elapsed_ms=\d+\.\d+\n", out)


def test_solve_empty_with_model(capsys, tmp_path):
    p = tmp_path / "e.cnf"
    p.write_text("p cnf 3 0\n")
    code, out, _ = run(capsys, "solve", str(p), "--model")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("status=SAT ")
    assert lines[1] == "-1 -2 -3"


def test_solve_timeout_exit(capsys, tmp_path):
    p = tmp_path / "h.cnf"
    p.write_text(write_dimacs(generators.gen_uniform(generators.UniformSpec(80, 3, 4.3), 2)))
    code, out, _ = run(capsys, "solve", str(p), "--max-backtracks", "1")
    assert code == 3
    assert out.startswith("status=TIMEOUT backtracks=1")


def test_solve_bad_input(capsys, tmp_path):
    p = tmp_path / "bad.cnf"
    p.write_text("p cnf 2 1\n1 -1 0\n")
    assert run(capsys, "solve", str(p))[0] == 2
    assert run(capsys, "solve", str(tmp_path / "missing.cnf"))[0] == 2


def test_solve_agrees_with_brute_force(capsys, tmp_path):
    for seed in range(20):
        f = generators.gen_uniform(generators.UniformSpec(12, 3, 4.5), seed)
        p = tmp_path / f"{seed}.cnf"
        p.write_text(write_dimacs(f))
        code, out, _ = run(capsys, "solve", str(p))
        assert out.split()[0] == f"status={brute_force(f).value}"
        assert code == (0 if brute_force(f).value == "SAT" else 1)


def test_graph_triangle(capsys, tmp_path):
    p = tmp_path / "t.cnf"
    p.write_text("p cnf 3 1\n1 -2 3 0\n")
    code, out, _ = run(capsys, "graph", str(p), "--metrics")
    assert code == 0
    assert out.startswith("n=3 edges=3 z=2.0 C=1.0 L=1.0 ")


def test_graph_empty_formula_warns(capsys, tmp_path):
    p = tmp_path / "z.cnf"
    p.write_text("p cnf 10 0\n")
    code, out, err = run(capsys, "graph", str(p))
    assert code == 0
    assert "edges=0" in out and "mu=nan" in out
    assert "warning" in err


def test_graph_histogram(capsys, tmp_path):
    p = tmp_path / "r.cnf"
    p.write_text(write_dimacs(generators.gen_rich(generators.RichSpec(60, 3, 4.3), 1)))
    code, out, _ = run(capsys, "graph", str(p), "--histogram", "8")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "bin_lo,bin_hi,count"
    assert len(lines) == 9
    assert sum(int(l.split(",")[2]) for l in lines[1:]) == 60


def test_graph_sudoku_small_world(capsys, tmp_path):
    grid = tmp_path / "empty.txt"
    grid.write_text("." * 81)
    cnf = tmp_path / "s.cnf"
    assert run(capsys, "sudoku", "encode", str(grid), "-o", str(cnf))[0] == 0
    code, out, _ = run(capsys, "graph", str(cnf))
    vals = dict(kv.split("=") for kv in out.split())
    assert 0.2 <= float(vals["C"]) <= 0.4
    assert 2.0 <= float(vals["L"]) <= 3.2
    assert float(vals["mu"]) > 5


def test_sudoku_encode_counts(capsys, tmp_path):
    grid = tmp_path / "empty.txt"
    grid.write_text("." * 81)
    code, out, _ = run(capsys, "sudoku", "encode", str(grid))
    assert code == 0
    f = parse_dimacs(out)
    assert (f.num_vars, f.num_clauses) == (729, 11988)


def test_sudoku_solve(capsys, tmp_path):
    grid = tmp_path / "p.txt"
    grid.write_text(
        "53..7....\n6..195...\n.98....6.\n8...6...3\n4..8.3..1\n7...2...6\n.6....28.\n...419..5\n....8..79\n"
    )
    code, out, _ = run(capsys, "sudoku", "solve", str(grid))
    assert code == 0
    assert out.splitlines()[0] == "534678912"
    assert out.splitlines()[8] == "345286179"


def test_sudoku_errors(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("55" + "." * 79)
    assert run(capsys, "sudoku", "solve", str(bad))[0] == 2
    unsat = tmp_path / "unsat.txt"
    cells = list("12345678." + "." * 72)
    cells[44] = "9"
    unsat.write_text("".join(cells))
    code, _, err = run(capsys, "sudoku", "solve", str(unsat))
    assert code == 1 and "no solution" in err


def test_sweep_inline_and_config(capsys, tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("dist = uniform\nvars = 30\ngamma_start = 3\ngamma_stop = 6\ngamma_step = 0.5\nsamples = 20\nseed = 4\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "sweep", "--config", str(cfg), "--no-timing", "-o", str(a))[0] == 0
    code, _, err = run(
        capsys, "sweep", "--dist", "uniform", "--vars", "30", "--gamma-start", "3", "--gamma-stop", "6",
        "--gamma-step", "0.5", "--samples", "20", "--seed", "4", "--no-timing", "-o", str(b),
    )
    assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert "crossover gamma*" in err
    assert len(a.read_text().splitlines()) == 8


def test_sweep_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("dist = uniform\nvars = 20\ngamma_start = 1\ngamma_stop = 2\nsamples = 5\n")
    out = tmp_path / "o.csv"
    assert run(capsys, "sweep", "--config", str(cfg), "--samples", "3", "--no-timing", "-o", str(out))[0] == 0
    assert out.read_text().splitlines()[1].split(",")[1] == "3"


def test_sweep_invalid(capsys, tmp_path):
    assert run(capsys, "sweep", "--dist", "uniform", "--vars", "20")[0] == 2
    assert run(capsys, "sweep", "--dist", "uniform", "--vars", "20", "--gamma-start", "1",
               "--gamma-stop", "2", "--copies", "3")[0] == 2


LINE_CSV = "gamma,n_samples,pct_sat,median_backtracks,median_elapsed_ms,n_timeouts\n" \
    "1.000000,10,100.000000,0.000000,0.100000,0\n2.000000,10,40.000000,3.000000,0.200000,0\n"


def test_plot_line_structure(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    csv_path.write_text(LINE_CSV)
    svg = tmp_path / "out.svg"
    code, _, _ = run(capsys, "plot", str(csv_path), "--y", "pct_sat", "--title", "t", "-o", str(svg))
    assert code == 0
    text = svg.read_text()
    assert text.count("<polyline") == 1
    points = re.search(r'points="([^"]*)"', text).group(1).split()
    assert len(points) == 2


def test_plot_golden_and_stable(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    csv_path.write_text(LINE_CSV)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    args = ["plot", str(csv_path), "--y", "pct_sat", "--y", "median_backtracks", "--title", "Uniform 3-SAT"]
    run(capsys, *args, "-o", str(a))
    run(capsys, *args, "-o", str(b))
    assert a.read_bytes() == b.read_bytes() == (FIXTURES / "line_chart.svg").read_bytes()


def test_plot_histogram_bars(capsys, tmp_path):
    csv_path = tmp_path / "h.csv"
    csv_path.write_text("bin_lo,bin_hi,count\n0.000000,0.100000,3\n0.100000,0.200000,5\n0.200000,0.300000,1\n")
    svg = tmp_path / "h.svg"
    assert run(capsys, "plot", str(csv_path), "-o", str(svg))[0] == 0
    assert svg.read_text().count('class="bar"') == 3


def test_plot_log_scale(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    csv_path.write_text(LINE_CSV)
    svg = tmp_path / "l.svg"
    assert run(capsys, "plot", str(csv_path), "--y", "median_backtracks", "--log-y", "-o", str(svg))[0] == 0
    # zero backtracks cannot be drawn on a log axis
    points = re.search(r'points="([^"]*)"', svg.read_text()).group(1).split()
    assert len(points) == 1


def test_plot_missing_column(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    csv_path.write_text(LINE_CSV)
    code, _, err = run(capsys, "plot", str(csv_path), "--y", "nope", "-o", str(tmp_path / "x.svg"))
    assert code == 2 and "nope" in err


def test_plot_too_many_series(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    csv_path.write_text(LINE_CSV)
    argv = ["plot", str(csv_path), "-o", str(tmp_path / "x.svg")]
    for col in ("pct_sat", "median_backtracks", "median_elapsed_ms", "n_timeouts"):
        argv += ["--y", col]
    assert run(capsys, *argv)[0] == 2

"""CLI: generators, pipelines, verification, the oracle, benches, exit codes."""

from wdcolor import io
from wdcolor.cli import main


def run(*argv) -> int:
    return main(list(argv))


def test_gen_grid_counts(tmp_path):
    out = tmp_path / "g.graph"
    assert run("gen", "grid", "--d", "2", "--side", "3", "--out", str(out)) == 0
    g = io.read_graph(out.read_text())
    assert g.n == 9 and g.m == 12


def test_gen_tree_single_vertex(tmp_path):
    out = tmp_path / "t.graph"
    assert run("gen", "tree", "--n", "1", "--out", str(out)) == 0
    g = io.read_graph(out.read_text())
    assert g.n == 1 and g.m == 0


def test_gen_subdivide_delegates(tmp_path):
    src = tmp_path / "w.graph"
    src.write_text("e 0 1 3\n")
    out = tmp_path / "s.graph"
    assert run("gen", "subdivide", "--graph", str(src), "--out", str(out)) == 0
    g = io.read_graph(out.read_text())
    assert g.n == 4 and g.m == 3


def test_color_then_verify_roundtrip(tmp_path):
    graph = tmp_path / "t.graph"
    assert run("gen", "tree", "--n", "40", "--seed", "5", "--out", str(graph)) == 0
    outdir = tmp_path / "out"
    assert run("color", "--graph", str(graph), "--pipeline", "treewidth",
               "--r", "1", "--r", "2", "--out-dir", str(outdir)) == 0
    for r in ("1", "2"):
        colouring = outdir / f"colouring_r{r}.txt"
        cert = outdir / f"certificate_r{r}.txt"
        assert colouring.exists() and cert.exists()
        lines = dict(line.split(" ", 1) for line in cert.read_text().splitlines()
                     if not line.startswith("ladder"))
        assert lines["d"] == str(1180 * int(r))
        assert run("verify", "--graph", str(graph), "--colouring", str(colouring),
                   "--r", r, "--d", lines["d"], "--m", lines["m"]) == 0


def test_color_needs_td_for_large_graph(tmp_path):
    graph = tmp_path / "t.graph"
    assert run("gen", "tree", "--n", "40", "--seed", "5", "--out", str(graph)) == 0
    assert run("color", "--graph", str(graph), "--pipeline", "strong",
               "--out-dir", str(tmp_path / "o"), "--r", "1") == 2  # missing --td
    assert run("color", "--graph", str(graph), "--pipeline", "treewidth", "--td",
               str(tmp_path / "missing.td"), "--out-dir", str(tmp_path / "o"),
               "--r", "1") == 2


def test_partition_pipeline(tmp_path):
    graph = tmp_path / "g.graph"
    assert run("gen", "grid", "--d", "2", "--side", "4", "--out", str(graph)) == 0
    part = tmp_path / "rows.partition"
    part.write_text("".join(
        f"p {i} {' '.join(str(4 * i + j) for j in range(4))}\n" for i in range(4)))
    outdir = tmp_path / "out"
    assert run("color", "--graph", str(graph), "--pipeline", "partition",
               "--partition", str(part), "--r", "3", "--ell", "3", "--k", "1",
               "--out-dir", str(outdir)) == 0
    assert run("verify", "--graph", str(graph),
               "--colouring", str(outdir / "colouring_r3.txt"),
               "--r", "3", "--d", str(1180 * 3)) == 0


def test_verify_fail_and_usage_errors(tmp_path):
    graph = tmp_path / "p.graph"
    graph.write_text("e 0 1 1\ne 1 2 1\n")
    col = tmp_path / "c.txt"
    col.write_text("0 1\n1 1\n2 1\n")
    report = tmp_path / "rep.csv"
    text_report = tmp_path / "rep.txt"
    assert run("verify", "--graph", str(graph), "--colouring", str(col),
               "--r", "1", "--d", "0", "--report", str(report),
               "--report-text", str(text_report)) == 1
    assert report.read_text().startswith("component_id,color,size,weak_diameter")
    assert "max weak diameter: 2" in text_report.read_text()
    assert run("verify", "--graph", str(graph), "--colouring", str(col),
               "--r", "-1", "--d", "1") == 2
    assert run("verify", "--graph", str(graph), "--colouring", str(col),
               "--r", "1") == 2  # no --d


def test_verify_with_infinite_bound(tmp_path):
    graph = tmp_path / "p.graph"
    graph.write_text("e 0 1 1\n")
    col = tmp_path / "c.txt"
    col.write_text("0 1\n1 1\n")
    assert run("verify", "--graph", str(graph), "--colouring", str(col),
               "--r", "1", "--d", "inf") == 0


def test_oracle(tmp_path, capsys):
    graph = tmp_path / "p3.graph"
    graph.write_text("e 0 1 1\ne 1 2 1\n")
    assert run("oracle", "--graph", str(graph), "--m", "2", "--r", "1") == 0
    assert capsys.readouterr().out.strip() == "0"
    big = tmp_path / "big.graph"
    big.write_text("".join(f"e {i} {i + 1} 1\n" for i in range(15)))
    assert run("oracle", "--graph", str(big), "--m", "2", "--r", "1", "--limit", "9") == 2


def test_bench_rows_and_dominance(tmp_path):
    out = tmp_path / "bench.csv"
    assert run("bench", "--family", "tree", "--sizes", "6,9", "--r", "1", "--r", "2",
               "--seed", "1", "--limit", "9", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "instance,r,certified_d,achieved_d,oracle_d"
    assert len(lines) == 1 + 2 * 2
    from fractions import Fraction
    ratios = set()
    for row in lines[1:]:
        _, r, certified, achieved, oracle = row.split(",")
        assert Fraction(achieved) <= Fraction(certified)
        if oracle:
            assert Fraction(oracle) <= Fraction(certified)
        ratios.add(Fraction(certified) / Fraction(r))
    assert ratios == {Fraction(1180)}  # the certified bound is a dilation


def test_partition_r_below_ell_exits_2(tmp_path, capsys):
    graph = tmp_path / "g.graph"
    assert run("gen", "grid", "--d", "2", "--side", "4", "--out", str(graph)) == 0
    part = tmp_path / "rows.partition"
    part.write_text("".join(
        f"p {i} {' '.join(str(4 * i + j) for j in range(4))}\n" for i in range(4)))
    assert run("color", "--graph", str(graph), "--pipeline", "partition",
               "--partition", str(part), "--r", "1", "--ell", "3", "--k", "1",
               "--out-dir", str(tmp_path / "o")) == 2
    assert "threshold" in capsys.readouterr().err


def test_byte_identical_reruns(tmp_path):
    graph = tmp_path / "t.graph"
    assert run("gen", "tree", "--n", "30", "--seed", "9", "--out", str(graph)) == 0
    outs = []
    for name in ("a", "b"):
        outdir = tmp_path / name
        assert run("color", "--graph", str(graph), "--r", "2",
                   "--out-dir", str(outdir)) == 0
        outs.append((outdir / "colouring_r2.txt").read_bytes()
                    + (outdir / "certificate_r2.txt").read_bytes())
    assert outs[0] == outs[1]

    benches = []
    for name in ("c", "d"):
        out = tmp_path / f"{name}.csv"
        assert run("bench", "--family", "tree", "--sizes", "8", "--r", "1",
                   "--seed", "3", "--out", str(out)) == 0
        benches.append(out.read_bytes())
    assert benches[0] == benches[1]


def test_kernels_command(tmp_path, capsys):
    assert run("kernels") == 0
    assert capsys.readouterr().out.startswith("active:")
    out = tmp_path / "k.csv"
    assert run("kernels", "--bench", "--sizes", "30", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "kernel,n,apsp_seconds,components_seconds"
    assert len(lines) >= 2


def test_gen_exp_grid(tmp_path):
    out = tmp_path / "e.graph"
    assert run("gen", "exp-grid", "--side", "3", "--root", "0", "--out", str(out)) == 0
    g = io.read_graph(out.read_text())
    assert g.n == 9
    assert g.weight(0, 1) == 1

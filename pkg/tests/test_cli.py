import json

import pytest

import rectsupport.sweep as sweep_mod
from rectsupport.cli import main
from rectsupport.generators import generate, handcrafted
from rectsupport.geometry import dumps_instance, loads_instance
from rectsupport.oracle import naive_build_support
from rectsupport.slabs import compute_slab
from rectsupport.support import dumps_edges
from tests.strategies import make


@pytest.fixture
def inst_file(tmp_path):
    def write(inst, name="inst.json"):
        path = tmp_path / name
        path.write_text(dumps_instance(inst))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# gen


@pytest.mark.parametrize("kind", ["squares", "filtered", "grid", "random", "piercing-chain"])
def test_gen_matches_library(capsys, kind):
    code, out, _ = run(capsys, "gen", kind, "--n", "30", "--m", "6", "--seed", "5")
    assert code == 0
    assert loads_instance(out) == generate(kind, 30, 6, 5)


def test_gen_reads_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("RECTSUPPORT_SEED", "17")
    _, out, _ = run(capsys, "gen", "squares", "--n", "10", "--m", "3")
    assert loads_instance(out) == generate("squares", 10, 3, 17)
    monkeypatch.setenv("RECTSUPPORT_SEED", "x")
    assert run(capsys, "gen", "squares")[0] == 2


def test_gen_rejects_negative_sizes(capsys):
    assert run(capsys, "gen", "squares", "--n", "-1")[0] == 3


def test_gen_empty_points(capsys, inst_file, tmp_path):
    path = tmp_path / "e.json"
    assert run(capsys, "gen", "squares", "--n", "0", "--m", "5", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "build", str(path), "--engine", "naive")
    assert code == 0 and out == ""


# build


def test_build_engines_agree_byte_for_byte(capsys, inst_file):
    path = inst_file(generate("squares", 120, 30, 2))
    _, naive, _ = run(capsys, "build", path, "--engine", "naive")
    for backend in sweep_mod.BACKENDS if sweep_mod.HAVE_COMPILED else ("python",):
        _, fast, _ = run(capsys, "build", path, "--engine", "fast", "--backend", backend)
        assert fast == naive
    assert naive == dumps_edges(naive_build_support(loads_instance(open(path).read())))


def test_build_writes_out_file(capsys, inst_file, tmp_path):
    path = inst_file(generate("squares", 20, 5, 1))
    out = tmp_path / "g.edges"
    code, stdout, _ = run(capsys, "build", path, "--out", str(out))
    assert code == 0 and stdout == "" and out.read_text()


def test_malformed_json_reports_byte_offset(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [[0, 0], [1, 2]')
    code, _, err = run(capsys, "build", str(bad))
    assert code == 2
    assert "byte offset 26" in err


def test_invalid_utf8_is_a_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_bytes(b'{"points": [\xff]}')
    code, _, err = run(capsys, "build", str(bad))
    assert code == 2 and "byte offset 12" in err


def test_missing_file_is_a_parse_error(capsys, tmp_path):
    assert run(capsys, "build", str(tmp_path / "nope.json"))[0] == 2


def test_bad_schema_is_a_validation_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [[0.5, 1]]}')
    assert run(capsys, "build", str(bad))[0] == 3


def test_piercing_input_names_the_pair(capsys, inst_file):
    path = inst_file(make([(1, 5), (9, 3)], [(0, 4, 10, 6), (3, 0, 5, 9)]))
    code, _, err = run(capsys, "build", path)
    assert code == 3
    assert "0" in err and "1" in err and "pierc" in err


def test_ties_fail_unless_perturbed(capsys, inst_file):
    path = inst_file(make([(0, 0), (0, 5), (3, 5)], [(-1, -1, 4, 6)]))
    assert run(capsys, "build", path)[0] == 3
    code, out, _ = run(capsys, "build", path, "--perturb")
    assert code == 0 and out


def test_diagnostic_reports_divergence(capsys, inst_file, monkeypatch):
    inst = generate("squares", 40, 10, 3)
    path = inst_file(inst)
    assert run(capsys, "build", path, "--diagnostic")[0] == 0

    def broken(i, validate=True, stats=None):
        g = naive_build_support(i, validate=validate)
        return g.without(g.pairs[0])

    monkeypatch.setattr(sweep_mod, "naive_build_support", broken)
    code, _, err = run(capsys, "build", path, "--diagnostic")
    assert code == 5
    assert json.loads(err.splitlines()[0])


# check


def test_check_passes_on_built_graph(capsys, inst_file, tmp_path):
    inst = generate("filtered", 60, 15, 4)
    path = inst_file(inst)
    edges = tmp_path / "g.edges"
    edges.write_text(dumps_edges(naive_build_support(inst)))
    code, out, _ = run(capsys, "check", path, str(edges))
    assert code == 0
    assert out.splitlines() == [
        "support: pass",
        "planarity: pass",
        "noncrossing: pass",
        "delaunay: pass",
        "nonpiercing: pass",
        "edge_bound: pass",
    ]


def test_check_names_the_disconnected_rect(capsys, inst_file, tmp_path):
    inst = make([(1, 1), (5, 2), (30, 30)], [(0, 0, 6, 3)])
    path = inst_file(inst)
    g = naive_build_support(inst)
    assert (0, 1) in g.pairs
    edges = tmp_path / "g.edges"
    edges.write_text(dumps_edges(g.without((0, 1))))
    code, out, _ = run(capsys, "check", path, str(edges))
    assert code == 4
    assert "support: FAIL (rect 0 is not connected)" in out


def test_check_empty_edge_file(capsys, inst_file, tmp_path):
    path = inst_file(make([(1, 1), (5, 2)], [(0, 0, 6, 3)]))
    edges = tmp_path / "g.edges"
    edges.write_text("")
    code, out, _ = run(capsys, "check", path, str(edges))
    assert code == 4 and "support: FAIL" in out


def test_check_malformed_edge_file(capsys, inst_file, tmp_path):
    path = inst_file(make([(1, 1), (5, 2)]))
    edges = tmp_path / "g.edges"
    edges.write_text("0 x\n")
    assert run(capsys, "check", path, str(edges))[0] == 2


# partition


def test_partition_json_and_layers(capsys, inst_file, tmp_path):
    inst = generate("piercing-chain", 0, 3)
    path = inst_file(inst)
    prefix = tmp_path / "layer"
    code, out, _ = run(capsys, "partition", path, "--layers", str(prefix))
    assert code == 0
    data = json.loads(out)
    assert data["num_colors"] == 3 and sorted(data["colors"]) == [1, 2, 3]
    files = sorted(p.name for p in tmp_path.glob("layer.*.edges"))
    assert files == ["layer.1.edges", "layer.2.edges", "layer.3.edges"]


def test_partition_of_nonpiercing_family(capsys, inst_file):
    code, out, _ = run(capsys, "partition", inst_file(generate("squares", 10, 8, 1)))
    assert code == 0 and json.loads(out)["num_colors"] == 1


# render


def test_render_is_deterministic(capsys, inst_file, tmp_path):
    inst = generate("squares", 25, 6, 8)
    path = inst_file(inst)
    g = naive_build_support(inst)
    edges = tmp_path / "g.edges"
    edges.write_text(dumps_edges(g))
    _, first, _ = run(capsys, "render", path, str(edges))
    _, second, _ = run(capsys, "render", path, str(edges))
    assert first == second
    assert first.count('class="rect"') == inst.m
    assert first.count('class="point"') == inst.n
    assert first.count('class="edge-h"') == len(g) == first.count('class="edge-v"')
    _, diag, _ = run(capsys, "render", path, str(edges), "--diagonals")
    assert diag.count('class="edge"') == len(g) and 'class="edge-h"' not in diag


def test_render_slab_overlay(capsys, inst_file):
    inst = handcrafted("slab-barriers")
    path = inst_file(inst)
    code, out, _ = run(capsys, "render", path, "--slabs", "0:0")
    assert code == 0
    slab = compute_slab(inst, 0, 0)
    h = slab.y_top - slab.y_bot
    w = slab.x_right - slab.x_left
    expect = f'<rect class="slab" x="{slab.x_left}" y="{-slab.y_top}" width="{w}" height="{h}"/>'
    assert expect in out
    assert out.count('class="strip"') == 3


@pytest.mark.parametrize("spec", ["0:99", "9:0", "zero", "0:3"])
def test_render_rejects_bad_slab(capsys, inst_file, spec):
    inst = handcrafted("slab-barriers")
    # point 3 must lie outside rect 0 for the last case
    p = inst.points[3]
    assert spec != "0:3" or not inst.rects[0].contains(p.x, p.y)
    assert run(capsys, "render", inst_file(inst), "--slabs", spec)[0] == 3


# bench


def test_bench_csv(capsys):
    code, out, err = run(capsys, "bench", "--sizes", "64,128", "--m", "8", "--repeat", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "label,n,m,engine,ms,edges,inserts,deletes,queries,occlusions"
    assert len(lines) == 5
    assert "wall doubling ratio" in err


def test_bench_rejects_unknown_kind(capsys):
    assert run(capsys, "bench", "--sizes", "8", "--kinds", "blobs")[0] == 2

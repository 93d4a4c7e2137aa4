import json

import pytest

from smallcancel.cli import main
from smallcancel.diagram import tetrahedron
from smallcancel.distortion import gen_distorted_family
from smallcancel.fileio import format_diagram, format_factors, format_graph, format_presentation
from smallcancel.samples import commutator, differences_graph


@pytest.fixture
def files(tmp_path):
    g, factors = differences_graph()
    paths = {
        "diff": tmp_path / "differences.g",
        "factors": tmp_path / "differences.f",
        "comm": tmp_path / "commutator.txt",
        "p7": tmp_path / "distorted_p7.txt",
        "tet": tmp_path / "tetrahedron.d",
        "bad": tmp_path / "bad.txt",
    }
    paths["diff"].write_text(format_graph(g))
    paths["factors"].write_text(format_factors(factors))
    paths["comm"].write_text(format_presentation(commutator()))
    paths["p7"].write_text(format_presentation(gen_distorted_family(7, 5)))
    paths["tet"].write_text(format_diagram(tetrahedron()))
    paths["bad"].write_text("generators a b\na c\n")
    return {k: str(v) for k, v in paths.items()}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_exit_codes(capsys, files):
    assert run(capsys, "check", "--condition", "C", "--n", "7", "--presentation", files["p7"])[0] == 0
    assert run(capsys, "check", "--condition", "C", "--n", "4", "--presentation", files["comm"])[0] == 0
    code, out, _ = run(capsys, "check", "--condition", "C", "--n", "6", "--presentation", files["comm"],
                       "--format", "structured")
    assert code == 1 and json.loads(out)["passed"] is False
    assert run(capsys, "check", "--condition", "Gr", "--n", "6", "--graph", files["diff"])[0] == 0


def test_differences_grprime_fails(capsys, files):
    # a one-letter piece on the hexagon is not shorter than 6 / 6
    code, out, _ = run(capsys, "check", "--condition", "Grprime", "--lambda", "1/6",
                       "--graph", files["diff"], "--format", "structured")
    assert code == 1 and json.loads(out)["witness"]


def test_star_check_through_cli(capsys, files):
    code, _, _ = run(capsys, "check", "--condition", "Grstar", "--n", "6", "--graph", files["diff"],
                     "--factors", files["factors"])
    assert code == 1


def test_errors_exit_two(capsys, files):
    code, _, err = run(capsys, "check", "--condition", "C", "--n", "6", "--presentation", files["bad"])
    assert code == 2 and f"{files['bad']}:2:3:" in err
    code, _, err = run(capsys, "check", "--condition", "Grprime", "--lambda", "0.2", "--graph", files["diff"])
    assert code == 2 and "p/q" in err
    assert run(capsys, "check", "--condition", "C", "--presentation", files["comm"])[0] == 2
    assert run(capsys, "check", "--condition", "C", "--n", "6", "--presentation", "/nonexistent")[0] == 2


def test_curvature(capsys, files):
    code, out, _ = run(capsys, "curvature", "--diagram", files["tet"])
    assert (code, out) == (0, "6\n")
    assert run(capsys, "curvature", "--builtin", "icosahedron")[1] == "6\n"


def test_generate(capsys, tmp_path):
    out = tmp_path / "d.txt"
    assert run(capsys, "generate", "--family", "distorted", "--p", "7", "--N", "30", "--output", str(out))[0] == 0
    text = out.read_text()
    assert text == format_presentation(gen_distorted_family(7, 30))
    assert run(capsys, "generate", "--p", "1", "--N", "3")[0] == 2


def test_distortion_command(capsys, tmp_path):
    g = tmp_path / "a7b.g"
    g.write_text("alphabet a b\n" + "".join(f"{i} {(i + 1) % 8} {'a' if i < 7 else 'b'}\n" for i in range(8)))
    code, out, _ = run(capsys, "distortion", "--graph", str(g), "--word", "a b", "--format", "structured")
    data = json.loads(out)
    assert code == 0 and data["case"] == "Case2a" and data["C0"] == 3
    code, out, _ = run(capsys, "distortion", "--graph", str(g), "--word", "a", "--format", "structured")
    data = json.loads(out)
    assert data["case"] == "Case2b" and data["coefficient"] == "1/7" and data["hausdorff"] == 43


def test_witness_command_is_deterministic(capsys, tmp_path):
    p = tmp_path / "big_c6.txt"
    p.write_text(format_presentation(gen_distorted_family(7, 30)))
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "witness", "--presentation", str(p), "--format", "structured")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert len(data["tuples"]) == 16 and len(data["W1"]) == 256

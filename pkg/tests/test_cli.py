import io
import json
from fractions import Fraction

import pytest

from polytropes.cli import decode_scalar, dumps, encode, matrix_document, parse_matrix_file, run
from polytropes.constructions import fixture_polytrope, fixtures_20, pyrope, small_simplex
from polytropes.trop_core import INF

PENTAGON_INEQ = {"dim": 2, "c": [[0, 0, 0], [2, 0, 1], [2, "inf", 0]]}
PENTAGON_POINTS = {"dim": 2, "points": [[0, 2, 2], [0, 0, 2], [0, 1, 0]]}


def call(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_hull_reports(tmp_path, capsys):
    code, out, _ = call(capsys, "hull", write(tmp_path, "p.json", PENTAGON_POINTS))
    report = json.loads(out)
    assert code == 0
    assert report["is_polytrope"] is True and report["pseudo_vertices"] == 5
    assert report["f_vector"] == [5, 5]

    bent = {"dim": 2, "points": [[0, 0, 0], [0, 2, 1]]}
    code, out, _ = call(capsys, "hull", write(tmp_path, "b.json", bent))
    assert code == 0 and json.loads(out)["is_polytrope"] is False

    single = {"dim": 2, "points": [[0, "1/2", 3]]}
    code, out, _ = call(capsys, "hull", write(tmp_path, "s.json", single))
    report = json.loads(out)
    assert report["is_polytrope"] is True and report["pseudo_vertices"] == 1


def test_hull_reads_stdin(capsys, monkeypatch):
    code, out, _ = call(capsys, "hull", "-", stdin=json.dumps(PENTAGON_POINTS), monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["pseudo_vertices"] == 5


def test_from_ineq(tmp_path, capsys):
    code, out, _ = call(capsys, "from-ineq", write(tmp_path, "m.json", PENTAGON_INEQ))
    report = json.loads(out)
    assert code == 0 and report["status"] == "closed"
    assert report["c"][2][1] == 2
    assert report["vertices"] == [[0, 2, 2], [0, 0, 2], [0, 1, 0]]

    zero = {"dim": 2, "c": [[0] * 3] * 3}
    code, out, _ = call(capsys, "from-ineq", write(tmp_path, "z.json", zero))
    assert code == 0 and json.loads(out)["vertices"] == [[0, 0, 0]] * 3


def test_from_ineq_exit_codes(tmp_path, capsys):
    negative = {"dim": 2, "c": [[0, -1, 0], [0, 0, 0], [0, 0, 0]]}
    code, out, _ = call(capsys, "from-ineq", write(tmp_path, "n.json", negative))
    assert code == 3
    report = json.loads(out)
    assert report["status"] == "infeasible" and report["cycle"][0] == report["cycle"][-1]

    open_ = {"dim": 2, "c": [[0, "inf", "inf"], [2, 0, 1], [2, "inf", 0]]}
    code, out, _ = call(capsys, "from-ineq", write(tmp_path, "u.json", open_))
    assert code == 4 and json.loads(out)["status"] == "unbounded"


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        {"dim": 2, "c": [[0, 1], [1, 0]]},
        {"dim": 2, "c": [["inf", 0, 0], [0, 0, 0], [0, 0, 0]]},
        {"dim": 2, "c": [[0, "1/0", 0], [0, 0, 0], [0, 0, 0]]},
        {"dim": 2, "c": [[0, 1.5, 0], [0, 0, 0], [0, 0, 0]]},
        {"c": [[0]]},
    ],
)
def test_malformed_matrix_files(tmp_path, capsys, doc):
    path = tmp_path / "bad.json"
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    assert call(capsys, "from-ineq", path)[0] == 2


def test_malformed_points_and_missing_file(tmp_path, capsys):
    bad = {"dim": 2, "points": [[0, 1], [0, 1, 2]]}
    assert call(capsys, "hull", write(tmp_path, "p.json", bad))[0] == 2
    inf_point = {"dim": 1, "points": [[0, "inf"]]}
    assert call(capsys, "hull", write(tmp_path, "q.json", inf_point))[0] == 2
    assert call(capsys, "hull", tmp_path / "missing.json")[0] == 2


def test_construct(tmp_path, capsys):
    code, out, _ = call(capsys, "construct", "associahedron", "--n", 5)
    assert code == 0
    c = json.loads(out)["c"]
    vertices = sorted(tuple(c[k][i] - c[0][i] for k in range(1, 4)) for i in range(4))
    assert vertices == sorted([(7, 12, 15), (1, 12, 15), (3, 4, 15), (5, 8, 9)])

    code, out, _ = call(capsys, "construct", "pyrope", "--d", 3)
    assert json.loads(out) == json.loads(dumps(matrix_document(pyrope(3).matrix.c)))

    code, out, _ = call(capsys, "construct", "fixture20", "--index", 3)
    c = json.loads(out)["c"]
    # the printed matrices list vertices as rows; the weight matrix has them as columns
    assert c == [list(col) for col in zip(*fixtures_20()[2].c)]
    assert c == [list(row) for row in fixture_polytrope(3).matrix.c]

    out_path = tmp_path / "s.json"
    assert call(capsys, "construct", "perturbed-pyrope", "--d", 3, "--eps", "1/3", "--out", out_path)[0] == 0
    assert parse_matrix_file(json.loads(out_path.read_text())).dim == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "pyrope"],
        ["construct", "fixture20", "--index", 9],
        ["construct", "associahedron", "--n", 1],
        ["construct", "simplex", "--d", -1],
        ["classify", "--d", 5],
    ],
)
def test_bad_parameters(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_classify_writes_catalogue(tmp_path, capsys):
    prefix = tmp_path / "cat"
    code, out, _ = call(capsys, "classify", "--d", 2, "--out", prefix)
    assert code == 0 and "5" in out
    lines = (tmp_path / "cat.jsonl").read_text().splitlines()
    assert len(lines) == 5
    assert sorted(json.loads(line)["m"] for line in lines) == [3, 4, 4, 5, 6]
    csv = (tmp_path / "cat.csv").read_text().splitlines()
    assert csv[0] == "m,t,o" and len(csv) == 5
    assert call(capsys, "classify", "--d", 1)[0] == 0


def test_export_svg(tmp_path, capsys):
    code, out, _ = call(capsys, "export", write(tmp_path, "m.json", PENTAGON_INEQ), "--format", "svg")
    assert code == 0
    points = out.split('points="')[1].split('"')[0].split()
    assert len(points) == 5
    assert out.count('class="tropical-vertex"') == 3
    assert out.count('class="pseudo-vertex"') == 5


def off_counts(text):
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    assert lines[0] == "OFF"
    nv, nf, _ = map(int, lines[1].split())
    return nv, nf, lines[2 + nv:]


def test_export_off(tmp_path, capsys):
    for P, counts in [(pyrope(3), (14, 12)), (small_simplex(3), (4, 4))]:
        path = write(tmp_path, "m.json", matrix_document(P.matrix.c))
        code, out, _ = call(capsys, "export", path, "--format", "off")
        assert code == 0
        nv, nf, faces = off_counts(out)
        assert (nv, nf) == counts
        assert all(int(f.split()[0]) == len(f.split()) - 1 for f in faces)


def test_export_dimension_mismatch(tmp_path, capsys):
    assert call(capsys, "export", write(tmp_path, "m.json", PENTAGON_INEQ), "--format", "off")[0] == 2
    pyr = write(tmp_path, "p.json", matrix_document(pyrope(3).matrix.c))
    assert call(capsys, "export", pyr, "--format", "svg")[0] == 2


def test_scalars_round_trip():
    for v in [0, -3, Fraction(1, 3), Fraction(-7, 2), INF]:
        assert decode_scalar(encode(v)) == v
    assert encode(Fraction(4, 2)) == 2
    assert encode(Fraction(2, -6)) == "-1/3"


def test_fixture_files_round_trip(tmp_path, capsys):
    for k in range(1, 6):
        doc = matrix_document(fixture_polytrope(k).matrix.c)
        text = dumps(doc)
        assert dumps(matrix_document(parse_matrix_file(json.loads(text)).c)) == text
    text = dumps(PENTAGON_INEQ)
    assert dumps(matrix_document(parse_matrix_file(json.loads(text)).c)) == text


def test_outputs_are_deterministic(tmp_path, capsys):
    path = write(tmp_path, "m.json", matrix_document(pyrope(3).matrix.c))
    first = [call(capsys, "export", path, "--format", "off")[1], call(capsys, "construct", "associahedron", "--n", 5)[1]]
    second = [call(capsys, "export", path, "--format", "off")[1], call(capsys, "construct", "associahedron", "--n", 5)[1]]
    assert first == second

import csv
import io
import subprocess
import sys

import pytest

from gradedlie.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from gradedlie.coeff import CoeffRing
from gradedlie.fixtures import corrupted_jacobi
from gradedlie.io import lie_to_dict, save


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_ranks_examples(capsys):
    code, out, _ = run(capsys, "ranks", "--genus", "1", "--punctures", "1", "--max-degree", "5")
    assert code == EXIT_OK
    table = rows(out)
    assert table[0] == ["degree", "rank", "exact_through"]
    assert [(int(d), int(r)) for d, r, _ in table[1:]] == [(1, 2), (2, 1), (3, 2), (4, 3), (5, 6)]
    code, out, _ = run(capsys, "ranks", "--genus", "0", "--punctures", "3", "--max-degree", "4")
    assert [(int(d), int(r)) for d, r, _ in rows(out)[1:]] == [(1, 0), (2, 2), (3, 0), (4, 1)]


def test_ranks_single_degree(capsys):
    code, out, _ = run(capsys, "ranks", "--genus", "2", "--punctures", "1", "--max-degree", "1")
    assert code == EXIT_OK and rows(out)[1:] == [["1", "4", "1"]]


def test_out_ranks_example(capsys):
    code, out, _ = run(capsys, "out-ranks", "--genus", "1", "--punctures", "1", "--max-degree", "6")
    assert code == EXIT_OK
    table = rows(out)
    head = table[0]
    body = [dict(zip(head, r)) for r in table[1:]]
    assert [int(r["dim_out"]) for r in body] == [0, 1, 0, 3]
    for r in body:
        assert r["certificate"] == "certified"
        assert all(r[c] == "true" for c in ("g_injective", "f_surjective", "fg_zero", "middle_exact"))
        assert r["exact_through"] == "6"


def test_out_ranks_compact_and_insufficient(capsys):
    code, out, _ = run(capsys, "out-ranks", "--genus", "2", "--punctures", "0", "--max-degree", "3")
    assert code == EXIT_OK and all(r[-2] == "uncertified" for r in rows(out)[1:])
    code, out, _ = run(capsys, "out-ranks", "--genus", "1", "--punctures", "1", "--max-degree", "3", "--max-m", "2")
    assert code == EXIT_OK
    assert rows(out)[2][-2] == "insufficient-N"


def test_cohomology_command(capsys):
    code, out, _ = run(capsys, "cohomology", "--fixture", "abelian3", "--q", "2")
    assert code == EXIT_OK and rows(out) == [["q", "grade", "dim", "exact_through"], ["2", "0", "1", "2"]]


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == EXIT_OK
    assert all(line.endswith("PASS") for line in out.splitlines())


def test_verify_subset_marks_skips(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cohomology")
    assert code == EXIT_OK
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    assert lines["cohomology"] == "PASS"
    assert all(v == "SKIP" for k, v in lines.items() if k != "cohomology")


def test_verify_corrupted_file_names_failure(capsys, tmp_path):
    path = tmp_path / "corrupt.json"
    save(lie_to_dict(corrupted_jacobi(CoeffRing(3))), path)
    code, out, _ = run(capsys, "verify", "--algebra", str(path))
    assert code == EXIT_FAIL
    assert "jacobi: FAIL (corrupt: jacobi violation at x,y,z)" in out


def test_deform_subcommands(capsys):
    code, out, _ = run(capsys, "deform", "eta", "--fixture", "abelian3")
    assert code == EXIT_OK and rows(out)[1] == ["e1", "e2", "e3", "h1'", "1", "2"]
    code, out, _ = run(capsys, "deform", "miniversal", "--fixture", "abelian5", "--l", "2")
    assert [r[:4] for r in rows(out)[1:]] == [["1", "7", "6", "0"], ["2", "27", "6", "1"]]
    code, out, _ = run(capsys, "deform", "tangent", "--rep-fixture", "free-two")
    assert rows(out)[1] == ["4", "0", "2"]
    code, out, _ = run(capsys, "deform", "quadratic", "--rep-fixture", "commuting-pair", "--l", "2")
    assert rows(out)[1][-2] == "false"


@pytest.mark.parametrize(
    "argv",
    [
        ["ranks", "--genus", "1", "--punctures", "0"],
        ["ranks", "--genus", "1"],
        ["ranks", "--l", "4", "--genus", "1", "--punctures", "1"],
        ["ranks", "--genus", "1", "--punctures", "1", "--max-degree", "0"],
        ["ranks"],
        ["cohomology", "--fixture", "nope"],
        ["cohomology", "--fixture", "abelian3", "--k", "2"],
        ["cohomology", "--fixture", "abelian3", "--q", "7"],
        ["out-ranks", "--fixture", "abelian3"],
        ["verify", "--suite", "nope"],
        ["deform", "eta", "--fixture", "abelian3", "--k", "2"],
        ["deform", "miniversal", "--fixture", "abelian3", "--steps", "0"],
        ["deform", "tangent", "--rep-fixture", "nope"],
        ["ranks", "--algebra", "/nonexistent.json"],
        ["no-such-command"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE and err


def test_determinism_byte_identical(tmp_path):
    for n, argv in enumerate((
        ["ranks", "--genus", "1", "--punctures", "2", "--max-degree", "6"],
        ["out-ranks", "--genus", "0", "--punctures", "3", "--max-degree", "6", "--seed", "7"],
    )):
        outs = []
        for run_dir in ("a", "b"):
            out = tmp_path / f"{run_dir}{n}"
            assert main(argv + ["--out", str(out)]) == EXIT_OK
            (f,) = out.iterdir()
            outs.append(f.read_bytes())
        assert outs[0] == outs[1]


def test_every_table_has_exact_through(capsys):
    for argv in (
        ["ranks", "--genus", "1", "--punctures", "1", "--max-degree", "3"],
        ["out-ranks", "--genus", "1", "--punctures", "1", "--max-degree", "4"],
        ["cohomology", "--fixture", "heisenberg"],
        ["deform", "eta", "--fixture", "abelian3"],
        ["deform", "miniversal", "--fixture", "abelian3"],
        ["deform", "tangent"],
        ["deform", "quadratic"],
    ):
        _, out, _ = run(capsys, *argv)
        assert rows(out)[0][-1] == "exact_through", argv


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gradedlie.cli", "ranks", "--genus", "1", "--punctures", "1", "--max-degree", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "degree,rank,exact_through\n1,2,2\n2,1,2\n"

import json

import pytest

from ncrat.cli import run

FILES = {
    "com.nce": "d=2\nz1*z2 - z2*z1\n",
    "r1.nce": "d=2\nz1*z2*inv(z1*z2 - z2*z1)\n",
    "r2.nce": "d=2\n1 + z2*z1*inv(z1*z2 - z2*z1)\n",
    "R1.nce": "d=2\n[[1, 0]] * inv([[1 - z1, -z2], [-z2, 1 - z1]]) * [[1], [0]]\n",
    "p.nce": "d=2\n1 + 2*z1 + 3*z2 + 5*z1^2 + 7*z1*z2 + 11*z2*z1 + 13*z2^2\n",
    "bad.nce": "d=2\nz1 + * z2\n",
    "Z.json": json.dumps([[["1", "2"], ["0", "1"]], [["3", "0"], ["1", "1"]]]),
    "Zp.json": json.dumps([[["2", "0"], ["1", "1"]], [["0", "1"], ["1", "0"]]]),
    "W.json": json.dumps([[["0", "1"], ["1", "0"]], [["1", "0"], ["0", "0"]]]),
    "scalar.json": json.dumps([[["1"]], [["2"]]]),
}


@pytest.fixture
def files(tmp_path):
    for name, text in FILES.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zero_commutator(files, capsys):
    code, out, _ = call(capsys, "zero", "--expr", files / "com.nce", "--max-size", 2, "--seed", 7,
                        "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["result"] == "NonzeroExact" and obj["witness"]["n"] == 2


def test_equiv_sampled_exit_code(files, capsys):
    code, out, _ = call(capsys, "equiv", "--a", files / "r1.nce", "--b", files / "r2.nce")
    assert code == 2 and "EquivalentSampled" in out


def test_deterministic_output(files, capsys):
    args = ("equiv", "--a", files / "r1.nce", "--b", files / "r2.nce", "--format", "json", "--seed", 3)
    first = call(capsys, *args)
    second = call(capsys, *args)
    assert first == second


def test_errors_exit_one(files, capsys):
    code, _, err = call(capsys, "parse", "--expr", files / "bad.nce")
    assert code == 1 and "error" in err
    code, _, err = call(capsys, "eval", "--expr", files / "r1.nce", "--Z", files / "scalar.json")
    assert code == 1 and "singular" in err
    with pytest.raises(SystemExit):
        run(["nonsense"])


def test_diff_and_shift(files, capsys):
    code, out, _ = call(capsys, "diff", "--expr", files / "p.nce", "--letter", 1)
    assert code == 0 and out.strip() == "2 + 5*z1 + 11*z2 + 5*z1' + 7*z2'"
    code, out, _ = call(capsys, "shift", "--expr", files / "p.nce", "--side", "right", "--letter", 1)
    assert out.strip() == "2 + 5*z1 + 11*z2"
    code, out, _ = call(capsys, "diff", "--expr", files / "p.nce", "--letter", 1, "--numeric",
                        "--Z", files / "Z.json", "--Zp", files / "Zp.json", "--W", files / "W.json",
                        "--format", "json")
    assert code == 0 and len(json.loads(out)) == 2


def test_realization_pipeline(files, capsys):
    out_file = files / "real.json"
    assert call(capsys, "realize", "--in", files / "R1.nce", "--format", "json", "--out", out_file)[0] == 0
    code, out, _ = call(capsys, "minimize", "--realization", out_file, "--format", "json")
    assert code == 0 and json.loads(out)["m"] == 2
    code, out, _ = call(capsys, "transfer", "--in", out_file)
    assert code == 0 and out.startswith("d=2")
    code, out, _ = call(capsys, "domain-check", "--realization", out_file, "--minimal", "--Z", files / "Z.json")
    assert code == 0 and out.strip() in ("regular", "singular")


def test_eval_series_and_derivatives(files, capsys):
    code, out, _ = call(capsys, "eval", "--expr", files / "R1.nce", "--point", files / "Z.json", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 2
    code, out, _ = call(capsys, "series", "--expr", files / "R1.nce", "--order", 2, "--format", "json")
    assert json.loads(out)["11"] == [["1"]]
    for cmd in ("dderiv", "hessian"):
        code, out, _ = call(capsys, cmd, "--expr", files / "p.nce", "--Z", files / "Z.json",
                            "--W", files / "W.json", "--format", "json")
        assert code == 0 and len(json.loads(out)) == 2


def test_selftest_subset(capsys):
    code, out, _ = call(capsys, "selftest", "--criteria", 1, 10)
    assert code == 0 and "2/2 criteria passed" in out

import json

import pytest

from pellroot import cli
from pellroot.builder import SeriesSpec
from pellroot.corpus import load_corpus
from pellroot.evaluate import EvalReport


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve(capsys):
    assert run(capsys, "solve", 13)[:2] == (0, "x=649 y=180\n")
    assert run(capsys, "solve", 2, "--power", 7)[1] == "x=114243 y=80782\n"
    code, out, _ = run(capsys, "solve", 5, "--power", 3, "--json")
    assert json.loads(out) == {"p": "5", "s": "3", "x": "2889", "y": "1292"}


@pytest.mark.parametrize("argv", [("solve", 9), ("solve", 1), ("series", 16), ("eval", 25), ("bench", 4)])
def test_square_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_prime_only(capsys):
    assert run(capsys, "solve", 6, "--prime-only")[0] == 2
    assert run(capsys, "solve", 6)[0] == 0
    assert run(capsys, "solve", 7, "--prime-only")[0] == 0


@pytest.mark.parametrize("n, prime", [(2, True), (9, False), (97, True), (91, False), (7919, True), (1, False)])
def test_is_prime(n, prime):
    assert cli.is_prime(n) is prime


def test_series_single(capsys):
    code, out, _ = run(capsys, "series", 2, "--power", 4, "--theorem", "A")
    assert code == 0
    assert "c=816/577" in out and "z=1/332929" in out


def test_series_not_applicable(capsys):
    code, _, err = run(capsys, "series", 3, "--power", 1, "--theorem", "D")
    assert code == 3
    assert "not applicable" in err


def test_series_all(capsys):
    code, out, _ = run(capsys, "series", 5, "--power", 3, "--theorem", "all")
    assert code == 0
    assert len(out.splitlines()) == 6
    code, out, err = run(capsys, "series", 3, "--power", 1)
    assert len(out.splitlines()) == 4
    assert "D not applicable" in err


def test_series_json_round_trip(capsys):
    _, out, _ = run(capsys, "series", 13, "--power", 2, "--json")
    data = json.loads(out)
    assert len(data) == 6
    for d in data:
        assert SeriesSpec.from_dict(d).to_dict() == d
    _, out, _ = run(capsys, "series", 2, "--power", 4, "--theorem", "B", "--json")
    assert json.loads(out)["argument"] == {"num": "-1", "den": "332928"}


def test_series_latex(capsys):
    _, out, _ = run(capsys, "series", 2, "--power", 4, "--theorem", "F", "--latex")
    assert out.strip() == (
        r"\sqrt{2}=\frac{577}{408}\sum_{k=0}^{\infty}\frac{(1/2)_k(1/6)_k(5/6)_k}{k!(3/4)_k(5/4)_k}"
        r"\bigg(-\frac{110841719041}{5466976319176704}\bigg)^k"
    )


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", 2, "--power", 4, "--theorem", "A", "--digits", 50)
    assert code == 0
    assert out.splitlines()[0] == "1.41421356237309504880168872420969807856967187537694"
    assert "oracle_agrees=true" in out
    assert run(capsys, "eval", 2, "--power", 4, "--theorem", "A", "--digits", 0)[1].splitlines()[0] == "1"


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", 13, "--power", 2, "--theorem", "F", "--digits", 100, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["oracle_agrees"] is True
    assert EvalReport.from_dict(data).to_dict() == data


def test_eval_precision_ceiling(capsys, monkeypatch):
    monkeypatch.setenv("PELLROOT_MAX_DIGITS", "10")
    assert run(capsys, "eval", 2, "--digits", 11)[0] == 2


def test_eval_oracle_alarm(capsys, monkeypatch):
    real = cli.evaluate

    def broken(spec, digits):
        report = real(spec, digits)
        return EvalReport(**{**report.__dict__, "oracle_agrees": False})

    monkeypatch.setattr(cli, "evaluate", broken)
    code, _, err = run(capsys, "eval", 2, "--digits", 20)
    assert code == 4
    assert "oracle alarm" in err


def test_reproduce_full(capsys):
    code, out, _ = run(capsys, "reproduce")
    assert code == 0
    assert out.splitlines()[-1] == "72/72 passed"


def test_reproduce_deterministic(capsys):
    first = run(capsys, "reproduce")[1]
    assert run(capsys, "reproduce", "--jobs", 2)[1] == first
    assert run(capsys, "reproduce")[1] == first


def test_reproduce_only_p(capsys):
    code, out, _ = run(capsys, "reproduce", "--only-p", 13)
    assert code == 0
    assert out.splitlines()[-1] == "12/12 passed"


def test_reproduce_fault_injection(capsys, tmp_path):
    data = [e.to_dict() for e in load_corpus()]
    data[17]["argument"]["num"] = str(int(data[17]["argument"]["num"]) + 1)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, err = run(capsys, "reproduce", "--corpus", path)
    assert code == 5
    assert out.splitlines()[-1] == "71/72 passed"
    assert err.count("mismatch:") == 1
    assert data[17]["locator"] in err


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", 2, "--digits", 100)
    assert code == 0
    rows = {tuple(line.split()[:2]): line.split()[2] for line in out.splitlines()[2:]}
    assert rows[("A", "4")] == "19"
    for t in "ABCDE":
        counts = [int(rows[(t, str(s))]) for s in range(1, 5)]
        assert counts == sorted(counts, reverse=True) and len(set(counts)) == 4
    assert rows[("F", "1")] == "n/a"


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", 2, "--digits", 100, "--csv")
    lines = out.splitlines()
    assert lines[0] == "theorem,s,terms,digits_per_term"
    assert "A,4,19,5.52" in lines
    assert len(lines) == 25

"""End-to-end acceptance checks, one marked group per criterion.

Each group reports a single PASS/FAIL line in the terminal summary.
"""

import json
import time
from fractions import Fraction as F

import pytest

from pellroot import cli
from pellroot.builder import build
from pellroot.corpus import check_entry, load_corpus, replay
from pellroot.evaluate import convergence_table, digits_per_term, evaluate, sqrt_oracle, terms_needed
from pellroot.hyper import Identity, SeriesFamily, iter_terms, term_ratio, verify_identity
from pellroot.pell import (
    amplify_binomial,
    amplify_power,
    brute_force_solution,
    fundamental_solution,
    is_nonsquare,
)

BASES = {2: (3, 2), 3: (2, 1), 5: (9, 4), 7: (8, 3), 11: (10, 3), 13: (649, 180)}
CORPUS = load_corpus()


def corpus_spec(entry):
    return build(entry.theorem, amplify_power(fundamental_solution(entry.p), entry.s))


@pytest.mark.criterion(1, "corpus rebuilt with exact equality, < 1 s")
def test_corpus_exact():
    assert len(CORPUS) == 72
    assert len({e.locator for e in CORPUS}) == 72
    start = time.perf_counter()
    specs = [corpus_spec(e) for e in CORPUS]
    elapsed = time.perf_counter() - start
    for e, spec in zip(CORPUS, specs):
        assert (spec.n, spec.m) == (e.n, e.m), e.locator
        assert spec.prefactor == e.prefactor, e.locator
        assert spec.argument == e.argument, e.locator
    first = {(e.p, e.s, e.theorem.value): e for e in CORPUS}
    assert first[(2, 4, "A")].prefactor == F(816, 577)
    assert first[(2, 4, "A")].argument == F(1, 332929)
    assert F(-4599198568424134162827, 8892780764000546589887393466368) in {e.argument for e in CORPUS}
    assert elapsed < 1.0


@pytest.mark.criterion(2, "100-digit evaluation agrees with oracle in >= 99 digits, < 10 s")
def test_oracle_agreement():
    specs = [corpus_spec(e) for e in CORPUS]
    start = time.perf_counter()
    reports = [evaluate(spec, 100) for spec in specs]
    elapsed = time.perf_counter() - start
    for spec, report in zip(specs, reports):
        got = report.decimal.split(".")[1]
        want = sqrt_oracle(spec.p, 100).split(".")[1]
        assert report.decimal.split(".")[0] == sqrt_oracle(spec.p, 0)
        agree = next((i for i, (a, b) in enumerate(zip(got, want)) if a != b), len(want))
        assert agree >= 99, (spec, agree)
        assert report.oracle_agrees
    assert elapsed < 10.0


@pytest.mark.criterion(3, "Pell solutions for nonsquare p < 100 match brute force, < 5 s")
def test_pell_invariants():
    start = time.perf_counter()
    for p in filter(is_nonsquare, range(2, 100)):
        sol = fundamental_solution(p)
        assert sol.x * sol.x - p * sol.y * sol.y == 1
        assert brute_force_solution(p, sol.y) == sol, p
        if p in BASES:
            assert (sol.x, sol.y) == BASES[p]
    assert time.perf_counter() - start < 5.0


@pytest.mark.criterion(4, "binomial amplification equals binary power, s = 1..12")
def test_amplification_equivalence():
    for p in BASES:
        base = fundamental_solution(p)
        for s in range(1, 13):
            assert amplify_binomial(base, s) == amplify_power(base, s), (p, s)
    for p, s, xy in [(2, 4, (577, 408)), (2, 7, (114243, 80782)), (3, 9, (70226, 40545)), (13, 2, (842401, 233640))]:
        got = amplify_binomial(fundamental_solution(p), s)
        assert (got.x, got.y) == xy


@pytest.mark.criterion(5, "term ratio in (0, 1) and increasing for k <= 10^4")
@pytest.mark.parametrize("family", list(SeriesFamily), ids=lambda f: f.name)
def test_term_ratio(family):
    prev = F(0)
    for k in range(10**4 + 1):
        r = term_ratio(family, k)
        assert prev < r < 1, (family, k)
        prev = r


@pytest.mark.criterion(6, "tail bound holds exactly at K = terms_needed(spec, 30)")
@pytest.mark.parametrize("entry", CORPUS[::6], ids=lambda e: e.locator)
def test_tail_bound(entry):
    spec = corpus_spec(entry)
    z = abs(spec.argument)
    k = terms_needed(spec, 30)
    terms = [st.value for st, _ in zip(iter_terms(spec.family, spec.argument), range(2 * k + 1))]
    # sum(K) includes t_0 .. t_K
    diff = abs(sum(terms[: 2 * k + 1]) - sum(terms[: k + 1]))
    assert diff <= abs(terms[k]) * z / (1 - z)


@pytest.mark.criterion(7, "digits per term within 1 of -log10|z|")
def test_convergence_rate():
    spec = build("A", amplify_power(fundamental_solution(2), 7))
    assert spec.argument == F(1, 13051463049)
    assert dict(convergence_table(spec, 1))[1] >= 10
    for entry in CORPUS:
        spec = corpus_spec(entry)
        rows = dict(convergence_table(spec, 10))
        rate = (rows[10] - rows[2]) / 8
        assert abs(rate - digits_per_term(spec)) <= 1, (entry.locator, rate)


IDENTITY_POINTS = {
    Identity.BINOMIAL: [F(1, 3), F(1, 5), F(-1, 4), F(3, 5)],
    Identity.QUADRATIC: [F(1, 3), F(1, 5), F(1, 4), F(-1, 10)],
    Identity.CUBIC: [F(1, 3), F(1, 5), F(1, 4), F(-1, 10)],
}


@pytest.mark.criterion(8, "identities verified at 30 digits")
@pytest.mark.parametrize(
    "which, a, x",
    [(w, F(1, 2), x) for w, xs in IDENTITY_POINTS.items() for x in xs]
    + [(Identity.BINOMIAL, F(1, 3), x) for x in (F(1, 3), F(1, 5), F(-1, 4), F(3, 5))],
    ids=str,
)
def test_identity(which, a, x):
    assert verify_identity(which, a, x, 30)


def perturbations():
    for i, e in enumerate(CORPUS):
        for field in ("prefactor", "argument"):
            yield i, field


def bump(data, i, field):
    num = int(data[i][field]["num"])
    data[i][field]["num"] = str(num + 1 if num > 0 else num - 1)
    return data


@pytest.mark.criterion(9, "single-numerator fault flags exactly that entry, exit 5")
def test_fault_injection_every_numerator():
    baseline = replay(CORPUS)
    assert all(r.ok for r in baseline)
    clean = [e.to_dict() for e in CORPUS]
    for i, field in perturbations():
        data = bump(json.loads(json.dumps(clean)), i, field)
        bad = type(CORPUS[i]).from_dict(data[i])
        result = check_entry(bad)
        assert not result.ok, (CORPUS[i].locator, field)
        assert any(field in problem for problem in result.problems)


@pytest.mark.criterion(9, "single-numerator fault flags exactly that entry, exit 5")
@pytest.mark.parametrize("i, field", [(0, "prefactor"), (13, "argument"), (29, "prefactor"), (46, "argument"), (71, "argument")])
def test_fault_injection_cli(i, field, tmp_path, capsys):
    data = bump([e.to_dict() for e in CORPUS], i, field)
    path = tmp_path / "corpus.json"
    path.write_text(json.dumps(data))
    code = cli.main(["reproduce", "--corpus", str(path)])
    out, err = capsys.readouterr()
    assert code == 5
    failed = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert len(failed) == 1
    assert failed[0].split()[1] == CORPUS[i].locator
    assert out.splitlines()[-1] == "71/72 passed"
    assert err.count("mismatch:") == 1 and CORPUS[i].locator in err

"""Acceptance criteria.

Each test evaluates one criterion end to end at its exact tolerance
(everything is integer or rational, so tolerances are zero) and prints
one PASS/FAIL line; run with `pytest tests/test_acceptance.py -v -s`.
Expensive artifacts (the full bound grid, the verification suite, the
certification searches) are computed once and shared.
"""

import json
import random
import time
from fractions import Fraction
from itertools import combinations

import pytest

from convertbw.bounds import (achievable_decreasing, bound_II,
                              dominance_check, theorem_bound,
                              uniform_cost_bound)
from convertbw.cli import main
from convertbw.convertible import canonical_codes, default_scheme, \
    run_conversion, scheme_bandwidth
from convertbw.mds import decode_from
from convertbw.params import SplitParams
from convertbw.search import SearchBudget, certify_bound
from convertbw.verify import default_grid, run_suite

_DETERMINISTIC_CHECKS = ("storage-axioms", "initial-joint-entropy",
                         "parity-iid", "mds-reconstruction", "stability",
                         "cond-entropy-split")
_RANDOMIZED_CHECKS = ("mi-bound-random", "min-avg-random",
                      "mi-chain1-random", "mi-chain2-random")

CERTIFY_POINTS = [
    SplitParams(2, 1, 1, 1, 1, 5),
    SplitParams(2, 1, 2, 1, 1, 5),
    SplitParams(2, 2, 1, 1, 1, 5),
    SplitParams(2, 2, 1, 1, 2, 5),
]


def _report(criterion: str, ok: bool, elapsed: float, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    extra = f" [{detail}]" if detail else ""
    print(f"ACCEPTANCE {criterion}: {status} ({elapsed:.2f}s){extra}")


@pytest.fixture(scope="module")
def full_grid_reports():
    t0 = time.time()
    rows = []
    for lf in range(2, 6):
        for kf in range(1, 9):
            ki = lf * kf
            for rf in range(1, 9):
                for ri in range(1, 2 * ki + 1):
                    for alpha in range(1, 5):
                        rows.append(theorem_bound(
                            SplitParams(lf, kf, rf, ri, alpha)))
    return rows, time.time() - t0


@pytest.fixture(scope="module")
def suite_outcome():
    grid = default_grid()
    t0 = time.time()
    reports, ok = run_suite(grid, trials=1000, seed=0)
    return grid, reports, ok, time.time() - t0


@pytest.fixture(scope="module")
def certification_outcome():
    t0 = time.time()
    results = {}
    for p in CERTIFY_POINTS:
        results[p] = certify_bound(p, trials=11, budget=SearchBudget(), seed=0)
    return results, time.time() - t0


def test_criterion_1_bound_exactness(capsys):
    cases = [
        (["--lf", "2", "--kf", "3", "--rf", "1", "--ri", "2", "--alpha", "3"], 10),
        (["--lf", "2", "--kf", "4", "--rf", "3", "--ri", "5", "--alpha", "7"], 46),
        (["--lf", "2", "--kf", "3", "--rf", "2", "--ri", "1", "--alpha", "2"], 11),
        (["--lf", "2", "--kf", "2", "--rf", "3", "--ri", "1", "--alpha", "1"], 4),
        (["--lf", "2", "--kf", "2", "--rf", "1", "--ri", "5", "--alpha", "1"], 2),
    ]
    t0 = time.time()
    ok = True
    for flags, want in cases:
        code = main(["bound"] + flags)
        out = capsys.readouterr().out
        doc = json.loads(out)
        if code != 0 or doc["value"] != {"num": want, "den": 1}:
            ok = False
    elapsed = time.time() - t0
    with capsys.disabled():
        _report("1 bound-exactness", ok and elapsed < 1.0, elapsed)
    assert ok
    assert elapsed < 1.0


def test_criterion_2_theorem_appendix_consistency(full_grid_reports):
    rows, elapsed = full_grid_reports
    bad = 0
    for rep in rows:
        p = rep.params
        applicable = [x for x in (rep.L1, rep.L2, rep.L3) if x is not None]
        if rep.value != max(applicable):
            bad += 1
        if 1 <= p.rf < p.kf and p.rf < p.ri and not dominance_check(p):
            bad += 1
        cand = [rep.L3] + ([rep.L2] if rep.L2 is not None else [])
        if max(cand) != uniform_cost_bound(p):
            bad += 1
    ok = bad == 0 and elapsed < 30.0
    _report("2 theorem-appendix-consistency", ok, elapsed,
            f"{len(rows)} points, {bad} inconsistencies")
    assert bad == 0
    assert elapsed < 30.0


def test_criterion_3_tight_regime_identity(full_grid_reports):
    rows, elapsed = full_grid_reports
    bad = 0
    checked_eq = 0
    for rep in rows:
        p = rep.params
        if p.rf < p.ri <= p.kf and p.rf >= 1 and p.rf < p.kf:
            checked_eq += 1
            if bound_II(p) != achievable_decreasing(p):
                bad += 1
        if 1 <= p.rf < p.kf and p.rf < p.ri:
            if achievable_decreasing(p) < rep.value:
                bad += 1
    ok = bad == 0 and checked_eq > 0 and elapsed < 30.0
    _report("3 tight-regime-identity", ok, elapsed,
            f"{checked_eq} equality points")
    assert bad == 0 and checked_eq > 0
    assert elapsed < 30.0


def test_criterion_4_entropy_oracle_suite(suite_outcome):
    grid, reports, _, elapsed = suite_outcome
    det = [r for r in reports if r["check"] in _DETERMINISTIC_CHECKS]
    failures = [r for r in det if r["status"] != "pass"]
    per_instance = {c: 0 for c in _DETERMINISTIC_CHECKS}
    for r in det:
        per_instance[r["check"]] += 1
    complete = all(n == len(grid) for n in per_instance.values())
    ok = not failures and complete and elapsed < 120.0
    _report("4 entropy-oracle-suite", ok, elapsed,
            f"{len(grid)} ensembles, {len(det)} checks, {len(failures)} failures")
    assert not failures
    assert complete
    assert elapsed < 120.0


def test_criterion_5_randomized_lemma_checks(suite_outcome):
    grid, reports, _, elapsed = suite_outcome
    rand = [r for r in reports if r["check"] in _RANDOMIZED_CHECKS]
    violations = sum(r["counts"]["violations"] for r in rand)
    preconditions = sum(r["counts"]["precondition_failures"] for r in rand)
    per_ensemble = {}
    for r in rand:
        key = tuple(sorted(r["instance-params"].items()))
        c = r["counts"]
        per_ensemble[key] = per_ensemble.get(key, 0) + \
            c["evaluated"] + c["precondition_failures"] + c["skipped"]
    all_thousand = all(n == 1000 for n in per_ensemble.values())
    ok = violations == 0 and all_thousand and elapsed < 120.0
    _report("5 randomized-lemma-checks", ok, elapsed,
            f"{len(per_ensemble)} ensembles x 1000 draws, "
            f"{violations} violations, {preconditions} precondition draws")
    assert violations == 0
    assert all_thousand
    assert elapsed < 120.0


def test_criterion_6_soundness_certification(certification_outcome):
    results, elapsed = certification_outcome
    ok = True
    details = []
    for p, reports in results.items():
        if len(reports) != 11 or reports[0].pair != "canonical":
            ok = False
        for r in reports:
            if r.verdict != "sound" or r.min_gamma is None:
                ok = False
        if p.rf >= p.kf:
            bound = theorem_bound(p).value
            dflt = scheme_bandwidth(default_scheme(p)).read_total
            if Fraction(dflt) != bound:
                ok = False
            if any(Fraction(r.min_gamma) != bound for r in reports):
                ok = False
        details.append(f"({p.lf},{p.kf},{p.rf},{p.ri},a{p.alpha}): "
                       f"min={reports[0].min_gamma}")
    ok = ok and elapsed < 600.0
    _report("6 soundness-certification", ok, elapsed, "; ".join(details))
    assert ok
    assert elapsed < 600.0


def test_criterion_7_feasible_scheme_inequality_audit(certification_outcome):
    results, elapsed = certification_outcome
    checked = 0
    failures = 0
    for reports in results.values():
        for r in reports:
            checked += r.audit_checked
            failures += len(r.audit_failures)
    ok = failures == 0 and checked >= 2 * 11 * len(CERTIFY_POINTS)
    _report("7 feasible-scheme-audit", ok, elapsed,
            f"{checked} schemes audited, {failures} failures")
    assert failures == 0
    assert checked >= 2 * 11 * len(CERTIFY_POINTS)


def test_criterion_8_round_trip_conversion():
    grid = default_grid()
    rng = random.Random(0)
    t0 = time.time()
    failures = 0
    for p in grid:
        initial, final = canonical_codes(p)
        scheme = default_scheme(p)
        for _ in range(100):
            msg = [rng.randrange(p.q) for _ in range(p.message_dim)]
            finals, _ = run_conversion(p, initial, final, scheme, msg)
            for t, cw in enumerate(finals):
                lo = t * p.kf * p.alpha
                want = msg[lo:lo + p.kf * p.alpha]
                for j in range(p.kf):
                    if cw[j].tolist() != msg[(t * p.kf + j) * p.alpha:
                                             (t * p.kf + j + 1) * p.alpha]:
                        failures += 1
                for sub in combinations(range(p.nf), p.kf):
                    got = decode_from(final, {i: cw[i] for i in sub})
                    if got.tolist() != want:
                        failures += 1
    elapsed = time.time() - t0
    ok = failures == 0 and elapsed < 60.0
    _report("8 round-trip-conversion", ok, elapsed,
            f"{len(grid)} configs x 100 messages, {failures} failures")
    assert failures == 0
    assert elapsed < 60.0

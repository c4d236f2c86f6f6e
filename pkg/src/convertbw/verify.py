"""Verification suite: runs every structural check over a parameter
grid and aggregates machine-readable reports.

The deterministic section covers the storage model facts (per-node and
joint entropies, parity independence, reconstruction, stability, the
per-codeword conditional-entropy split).  The randomized section drives
the download-function inequalities with seeded random maps; draws whose
independence precondition fails are counted separately, never as
violations.
"""

from __future__ import annotations

import random
from itertools import product
from typing import Iterable, Sequence

from .convertible import canonical_codes, default_scheme
from .ensemble import (IndependencePreconditionError, LinearEnsemble,
                       _download_mi, check_cond_entropy_final,
                       check_joint_entropy,
                       check_mds_reconstruction, check_mi_bound,
                       check_min_avg, check_prop_parity_iid,
                       check_stability, check_storage_axioms,
                       corollary1_holds, corollary2_holds,
                       ensemble_from_codes, final_parity_node,
                       initial_parity_node, random_corollary1_tuple,
                       random_corollary2_set)
from .linalg import random_matrix
from .params import SplitParams

DEFAULT_QS = (5, 7, 11)
DEFAULT_LFS = (2, 3)
DEFAULT_KFS = (1, 2)
DEFAULT_RFS = (1, 2)
DEFAULT_RIS = (1, 2, 3)
DEFAULT_ALPHAS = (1, 2)
DEFAULT_MAX_NI = 8

PLANT_KINDS = ("duplicate-parity", "parity-copy")


def default_grid(qs: Sequence[int] = DEFAULT_QS,
                 lfs: Sequence[int] = DEFAULT_LFS,
                 kfs: Sequence[int] = DEFAULT_KFS,
                 rfs: Sequence[int] = DEFAULT_RFS,
                 ris: Sequence[int] = DEFAULT_RIS,
                 alphas: Sequence[int] = DEFAULT_ALPHAS,
                 max_ni: int = DEFAULT_MAX_NI) -> list[SplitParams]:
    """All constructible grid points: ni capped, q large enough for the
    layered Reed-Solomon pair."""
    points = []
    for q, lf, kf, rf, ri, alpha in product(qs, lfs, kfs, rfs, ris, alphas):
        ni = lf * kf + ri
        nf = kf + rf
        if ni > max_ni or q < max(ni, nf):
            continue
        points.append(SplitParams(lf, kf, rf, ri, alpha, q))
    return points


def plant_corruption(ens: LinearEnsemble, kind: str) -> LinearEnsemble | None:
    """Deliberately broken variant of an ensemble, or None when the
    corruption does not apply to these parameters."""
    p = ens.params
    blocks = {v: ens.block(v) for v in ens.all_nodes()}
    if kind == "duplicate-parity":
        if p.ri < 2:
            return None
        blocks[initial_parity_node(1)] = blocks[initial_parity_node(0)]
    elif kind == "parity-copy":
        if p.ri < 1 or p.rf < 1:
            return None
        blocks[final_parity_node(0)] = blocks[initial_parity_node(0)]
    else:
        raise ValueError(f"unknown corruption {kind!r}; know {PLANT_KINDS}")
    return LinearEnsemble(p, ens.field, blocks)


def _random_map(rng: random.Random, fld, alpha: int):
    return random_matrix(fld, rng.randint(0, alpha), alpha, rng)


def lemma_mi_trial(ens: LinearEnsemble, rng: random.Random) -> str:
    """One random draw of the two-set mutual-information bound.

    Returns "ok", "violation", or "precondition"."""
    p = ens.params
    nodes = list(ens.all_nodes())
    rng.shuffle(nodes)
    na = rng.randint(1, min(3, len(nodes) - 1))
    nb = rng.randint(1, min(3, len(nodes) - na))
    a_set = nodes[:na]
    b_set = nodes[na:na + nb]
    f_a = {v: _random_map(rng, ens.field, p.alpha) for v in a_set}
    f_b = {v: _random_map(rng, ens.field, p.alpha) for v in b_set}
    d1 = [v for v in a_set if rng.random() < 0.4]
    d2 = [v for v in b_set if rng.random() < 0.4]
    try:
        ok = check_mi_bound(ens, f_a, f_b, d1, d2)
    except IndependencePreconditionError:
        return "precondition"
    return "ok" if ok else "violation"


def lemma_min_avg_trial(ens: LinearEnsemble, rng: random.Random) -> str:
    """One random draw of the min-vs-average entropy bound."""
    p = ens.params
    nodes = list(ens.all_nodes())
    rng.shuffle(nodes)
    b = rng.randint(2, min(4, len(nodes)))
    family = [(v, _random_map(rng, ens.field, p.alpha)) for v in nodes[:b]]
    a = rng.randint(1, b)
    try:
        ok = check_min_avg(ens, family, a)
    except IndependencePreconditionError:
        return "precondition"
    return "ok" if ok else "violation"


def corollary_trial(ens: LinearEnsemble, rng: random.Random,
                    which: int) -> str:
    """One random admissible tuple of download-MI chain 1 or 2."""
    p = ens.params
    maps = {v: _random_map(rng, ens.field, p.alpha)
            for v in (*ens.info_nodes, *ens.initial_parities)}
    mi = _download_mi(ens, maps)
    if which == 1:
        s1, s2, b1, b2 = random_corollary1_tuple(ens, rng)
        return "ok" if corollary1_holds(ens, maps, s1, s2, b1, b2, mi=mi) \
            else "violation"
    s = random_corollary2_set(ens, rng)
    if s is None:
        return "skipped"
    return "ok" if corollary2_holds(ens, maps, s, mi=mi) else "violation"


_RANDOM_CHECKS = ("mi-bound-random", "min-avg-random",
                  "mi-chain1-random", "mi-chain2-random")


def run_randomized_checks(ens: LinearEnsemble, trials: int,
                          rng: random.Random) -> list[dict]:
    """Round-robin the four randomized checks over `trials` fresh
    download-map draws; report per-check tallies."""
    counts = {name: {"evaluated": 0, "violations": 0,
                     "precondition_failures": 0, "skipped": 0}
              for name in _RANDOM_CHECKS}
    for i in range(trials):
        name = _RANDOM_CHECKS[i % 4]
        if name == "mi-bound-random":
            res = lemma_mi_trial(ens, rng)
        elif name == "min-avg-random":
            res = lemma_min_avg_trial(ens, rng)
        elif name == "mi-chain1-random":
            res = corollary_trial(ens, rng, 1)
        else:
            res = corollary_trial(ens, rng, 2)
        c = counts[name]
        if res == "precondition":
            c["precondition_failures"] += 1
        elif res == "skipped":
            c["skipped"] += 1
        else:
            c["evaluated"] += 1
            if res == "violation":
                c["violations"] += 1
    out = []
    for name in _RANDOM_CHECKS:
        c = counts[name]
        out.append({
            "check": name,
            "instance-params": ens.params.as_dict(),
            "status": "pass" if c["violations"] == 0 else "fail",
            "counts": c,
        })
    return out


def _prop3_reports(ens: LinearEnsemble, rng: random.Random,
                   n_random_schemes: int = 2) -> dict:
    """The conditional-entropy split, exhaustively over codeword subsets,
    for the re-encoding scheme plus seeded random download maps."""
    p = ens.params
    failures = []
    schemes: list = []
    if p.q is not None:
        schemes.append(("default", default_scheme(p)))
    for s in range(n_random_schemes):
        maps = {v: _random_map(rng, ens.field, p.alpha) for v in ens.info_nodes}
        schemes.append((f"random-{s}", maps))
    subsets = [
        [t for t in range(p.lf) if (mask >> t) & 1]
        for mask in range(1 << p.lf)
    ]
    for label, scheme in schemes:
        for s_set in subsets:
            if not check_cond_entropy_final(ens, scheme, s_set):
                failures.append({"scheme": label, "S": s_set})
    return {
        "check": "cond-entropy-split",
        "instance-params": p.as_dict(),
        "status": "pass" if not failures else "fail",
        **({"counterexample": failures[:10]} if failures else {}),
    }


def verify_instance(p: SplitParams, *, trials: int = 0,
                    seed: int = 0, plant: str | None = None) -> list[dict]:
    """All checks for one parameter point; returns report dicts ordered
    by check name."""
    rng = random.Random(seed)
    initial, final = canonical_codes(p)
    ens = ensemble_from_codes(p, initial, final)
    if plant is not None:
        planted = plant_corruption(ens, plant)
        if planted is None:
            return []
        ens = planted
    reports = [
        check_storage_axioms(ens).to_json_dict(),
        check_joint_entropy(ens).to_json_dict(),
        check_prop_parity_iid(ens).to_json_dict(),
        check_mds_reconstruction(ens).to_json_dict(),
        check_stability(ens).to_json_dict(),
        _prop3_reports(ens, rng),
    ]
    if trials > 0:
        reports.extend(run_randomized_checks(ens, trials, rng))
    reports.sort(key=lambda r: r["check"])
    return reports


def run_suite(points: Iterable[SplitParams], *, trials: int = 0, seed: int = 0,
              plant: str | None = None) -> tuple[list[dict], bool]:
    """Run verify_instance over the grid; returns (reports, all_passed)."""
    reports: list[dict] = []
    ok = True
    for idx, p in enumerate(points):
        inst = verify_instance(p, trials=trials,
                               seed=seed * 1_000_003 + idx, plant=plant)
        for r in inst:
            if r["status"] != "pass":
                ok = False
        reports.extend(inst)
    return reports, ok

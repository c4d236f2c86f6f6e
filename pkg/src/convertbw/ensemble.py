"""Rank-based entropy oracle for split-mode conversion instances.

Every storage node's contents are linear functions of one uniform
message vector, held as an alpha x (ki*alpha) coefficient block.  For
such ensembles Shannon entropy in q-ary symbols equals the rank of the
stacked coefficient rows, so entropies, conditional entropies, and
mutual informations are exact integers.

The check_* functions mechanically verify the structural facts these
instances must satisfy (parity independence, codeword independence,
stability, the download-function inequalities).  They are only ever
evaluated on linear node contents and linear download maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gf import Field
from .linalg import Matrix, mat_rank, rank_pair, vstack
from .mds import VectorCode, verify_mds
from .params import SplitParams

INFO = "info"
INITIAL_PARITY = "initial-parity"
FINAL_PARITY = "final-parity"

_KIND_ORDER = {INFO: 0, INITIAL_PARITY: 1, FINAL_PARITY: 2}


class IndependencePreconditionError(Exception):
    """An inequality's independence precondition does not hold, so the
    inequality itself was not evaluated."""


@dataclass(frozen=True)
class NodeId:
    """A storage node: kind plus 0-based index within its kind.

    Final parities are indexed globally in [0, lf*rf); codeword t owns
    indices [t*rf, (t+1)*rf).
    """

    kind: str
    index: int

    def __post_init__(self) -> None:
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("node index must be nonnegative")

    def sort_key(self) -> tuple[int, int]:
        return (_KIND_ORDER[self.kind], self.index)


def info_node(j: int) -> NodeId:
    return NodeId(INFO, j)


def initial_parity_node(i: int) -> NodeId:
    return NodeId(INITIAL_PARITY, i)


def final_parity_node(g: int) -> NodeId:
    return NodeId(FINAL_PARITY, g)


class LinearEnsemble:
    """All node random variables of one conversion instance."""

    def __init__(self, params: SplitParams, fld: Field,
                 blocks: Mapping[NodeId, Matrix]):
        self.params = params
        self.field = fld
        self._blocks = dict(blocks)
        self._entropy_cache: dict[frozenset, int] = {}
        p = params
        self.info_nodes = tuple(info_node(j) for j in range(p.ki))
        self.initial_parities = tuple(initial_parity_node(i) for i in range(p.ri))
        self.final_parities = tuple(final_parity_node(g) for g in range(p.lf * p.rf))
        for v in (*self.info_nodes, *self.initial_parities, *self.final_parities):
            b = self._blocks[v]
            if b.shape != (p.alpha, p.message_dim):
                raise ValueError(f"block for {v} has shape {b.shape}")

    def block(self, v: NodeId) -> Matrix:
        return self._blocks[v]

    def all_nodes(self) -> tuple[NodeId, ...]:
        return self.info_nodes + self.initial_parities + self.final_parities

    def info_of_codeword(self, t: int) -> tuple[NodeId, ...]:
        p = self.params
        return self.info_nodes[t * p.kf:(t + 1) * p.kf]

    def final_parities_of_codeword(self, t: int) -> tuple[NodeId, ...]:
        p = self.params
        return self.final_parities[t * p.rf:(t + 1) * p.rf]

    def codeword_of(self, v: NodeId) -> int:
        p = self.params
        if v.kind == INFO:
            return v.index // p.kf
        if v.kind == FINAL_PARITY:
            return v.index // p.rf
        raise ValueError(f"{v} belongs to the initial codeword as a whole")

    def stack(self, items: Iterable[NodeId | Matrix]) -> Matrix:
        """Stacked coefficient rows: NodeIds contribute their blocks (set
        semantics, canonical order), matrices are taken as given."""
        nodes: set[NodeId] = set()
        mats: list[Matrix] = []
        for it in items:
            if isinstance(it, NodeId):
                nodes.add(it)
            elif isinstance(it, Matrix):
                mats.append(it)
            else:
                raise TypeError(f"cannot stack {type(it).__name__}")
        pieces = [self._blocks[v] for v in sorted(nodes, key=NodeId.sort_key)]
        pieces.extend(m for m in mats if m.rows > 0)
        if not pieces:
            return Matrix.zeros(self.field, 0, self.params.message_dim)
        return vstack(pieces)


def ensemble_from_codes(params: SplitParams, initial: VectorCode,
                        final: VectorCode, *, verify: bool = True) -> LinearEnsemble:
    """Assemble the node-variable model from an initial/final code pair.

    The t-th final codeword is embedded on message node coordinates
    [t*kf, (t+1)*kf), so its parities depend on those coordinates only.
    """
    p = params
    if (initial.n, initial.k, initial.alpha) != (p.ni, p.ki, p.alpha):
        raise ValueError(
            f"initial code is [{initial.n},{initial.k},{initial.alpha}], "
            f"expected [{p.ni},{p.ki},{p.alpha}]")
    if (final.n, final.k, final.alpha) != (p.nf, p.kf, p.alpha):
        raise ValueError(
            f"final code is [{final.n},{final.k},{final.alpha}], "
            f"expected [{p.nf},{p.kf},{p.alpha}]")
    if initial.field != final.field:
        raise ValueError("initial and final codes use different fields")
    if verify and not (verify_mds(initial) and verify_mds(final)):
        raise ValueError("code pair does not satisfy the MDS property")
    fld = initial.field
    md = p.message_dim
    blocks: dict[NodeId, Matrix] = {}
    for j in range(p.ki):
        a = np.zeros((p.alpha, md), dtype=np.int64)
        for t in range(p.alpha):
            a[t, j * p.alpha + t] = 1
        blocks[info_node(j)] = Matrix(fld, a)
    for i in range(p.ri):
        blocks[initial_parity_node(i)] = initial.node_block(p.ki + i)
    for t in range(p.lf):
        off = t * p.kf * p.alpha
        for j in range(p.rf):
            small = final.node_block(p.kf + j)
            a = np.zeros((p.alpha, md), dtype=np.int64)
            a[:, off:off + p.kf * p.alpha] = small.array
            blocks[final_parity_node(t * p.rf + j)] = Matrix(fld, a)
    return LinearEnsemble(p, fld, blocks)


def entropy(ens: LinearEnsemble, items: Iterable[NodeId | Matrix]) -> int:
    """Joint entropy in q-ary symbols (= rank of the stacked rows)."""
    items = list(items)
    if all(isinstance(it, NodeId) for it in items):
        key = frozenset(items)
        cached = ens._entropy_cache.get(key)
        if cached is not None:
            return cached
        val = mat_rank(ens.stack(items))
        ens._entropy_cache[key] = val
        return val
    return mat_rank(ens.stack(items))


def cond_entropy(ens: LinearEnsemble, a: Iterable[NodeId | Matrix],
                 b: Iterable[NodeId | Matrix]) -> int:
    """H(A | B) = H(A, B) - H(B), always nonnegative."""
    a = list(a)
    b = list(b)
    return entropy(ens, a + b) - entropy(ens, b)


def mutual_info(ens: LinearEnsemble, a: Iterable[NodeId | Matrix],
                b: Iterable[NodeId | Matrix]) -> int:
    """I(A ; B) = H(A) + H(B) - H(A, B), always nonnegative."""
    a = list(a)
    b = list(b)
    return entropy(ens, a) + entropy(ens, b) - entropy(ens, a + b)


def mapped_rows(ens: LinearEnsemble, maps: Mapping[NodeId, Matrix],
                nodes: Iterable[NodeId]) -> Matrix:
    """Download-function output rows for the given nodes: each node v
    contributes maps[v] @ block(v)."""
    pieces = []
    for v in sorted(set(nodes), key=NodeId.sort_key):
        m = maps[v]
        if m.cols != ens.params.alpha:
            raise ValueError(f"map for {v} has {m.cols} columns, expected alpha")
        if m.rows:
            pieces.append(m @ ens.block(v))
    if not pieces:
        return Matrix.zeros(ens.field, 0, ens.params.message_dim)
    return vstack(pieces)


@dataclass
class CheckReport:
    check: str
    instance: dict
    ok: bool
    failures: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)

    def to_json_dict(self) -> dict:
        d = {"check": self.check, "instance-params": self.instance,
             "status": "pass" if self.ok else "fail"}
        if self.failures:
            d["counterexample"] = self.failures[:10]
        if self.details:
            d["details"] = self.details
        return d


def _nodes_independent(ens: LinearEnsemble, nodes: Sequence[NodeId]) -> bool:
    """Rank additivity: the joint entropy equals the sum of the parts."""
    nodes = sorted(set(nodes), key=NodeId.sort_key)
    total = sum(entropy(ens, [v]) for v in nodes)
    return entropy(ens, nodes) == total


def check_prop_parity_iid(ens: LinearEnsemble) -> CheckReport:
    """Every subset of at most ki initial parities is independent and
    uniform: its joint entropy is exactly |subset| * alpha."""
    p = ens.params
    rep = CheckReport("parity-iid", p.as_dict(), True)
    limit = min(p.ri, p.ki)
    for size in range(limit + 1):
        for subset in combinations(ens.initial_parities, size):
            got = entropy(ens, subset)
            want = size * p.alpha
            if got != want:
                rep.ok = False
                rep.failures.append({
                    "subset": [v.index for v in subset],
                    "expected": want, "actual": got})
    return rep


def check_mi_bound(ens: LinearEnsemble, f_a: Mapping[NodeId, Matrix],
                   f_b: Mapping[NodeId, Matrix],
                   d1: Iterable[NodeId], d2: Iterable[NodeId]) -> bool:
    """I(f_A(Z_A); f_B(Z_B)) <= H(f_D1) + H(f_D2) for disjoint node sets
    A, B with D1 <= A, D2 <= B, provided the nodes outside D1 u D2 are
    independent (checked first; failure raises, it is not a violation).
    """
    a_nodes = set(f_a)
    b_nodes = set(f_b)
    d1 = set(d1)
    d2 = set(d2)
    if a_nodes & b_nodes:
        raise ValueError("node sets A and B must be disjoint")
    if not d1 <= a_nodes or not d2 <= b_nodes:
        raise ValueError("need D1 within A and D2 within B")
    rest = (a_nodes | b_nodes) - (d1 | d2)
    if not _nodes_independent(ens, sorted(rest, key=NodeId.sort_key)):
        raise IndependencePreconditionError(
            "nodes outside D1 u D2 are not independent")
    fa = mapped_rows(ens, f_a, a_nodes)
    fb = mapped_rows(ens, f_b, b_nodes)
    mi = mat_rank(fa) + mat_rank(fb) - mat_rank(vstack([fa, fb]))
    bound = mat_rank(mapped_rows(ens, f_a, d1)) + \
        mat_rank(mapped_rows(ens, f_b, d2))
    return mi <= bound


def check_min_avg(ens: LinearEnsemble,
                  family: Sequence[tuple[NodeId, Matrix]],
                  a: int, b: int | None = None) -> bool:
    """min over a-subsets of H(f_A(Z_A)) <= (a/b) * sum_i H(f_i(Z_i)),
    provided every a-subset of the Z_i is independent."""
    if b is None:
        b = len(family)
    if b != len(family) or len({v for v, _ in family}) != b:
        raise ValueError("family must list b distinct nodes")
    if not 0 <= a <= b:
        raise ValueError(f"need 0 <= a <= b, got a={a}, b={b}")
    for subset in combinations([v for v, _ in family], a):
        if not _nodes_independent(ens, subset):
            raise IndependencePreconditionError(
                f"nodes {[f'{v.kind}:{v.index}' for v in subset]} are dependent")
    maps = {v: m for v, m in family}
    singles = sum(mat_rank(mapped_rows(ens, maps, [v])) for v, _ in family)
    best = min(
        mat_rank(mapped_rows(ens, maps, subset))
        for subset in combinations([v for v, _ in family], a)
    ) if a > 0 else 0
    return Fraction(best) <= Fraction(a, b) * singles


def _scheme_maps(ens: LinearEnsemble, scheme) -> dict[NodeId, Matrix]:
    """Accept a ConversionScheme or a plain NodeId -> Matrix mapping."""
    if isinstance(scheme, Mapping):
        return dict(scheme)
    maps: dict[NodeId, Matrix] = {}
    for j, m in enumerate(scheme.info_maps):
        maps[info_node(j)] = m
    for i, m in enumerate(scheme.parity_maps):
        maps[initial_parity_node(i)] = m
    return maps


def _empty_map(ens: LinearEnsemble) -> Matrix:
    return Matrix.zeros(ens.field, 0, ens.params.alpha)


def _download_mi(ens: LinearEnsemble, maps: Mapping[NodeId, Matrix]) -> int:
    """I(parity downloads ; info downloads) over the initial codeword."""
    uy = mapped_rows(ens, maps, ens.initial_parities)
    vx = mapped_rows(ens, maps, ens.info_nodes)
    ru, joint = rank_pair(uy, vx)
    return ru + mat_rank(vx) - joint


def _h_mapped(ens, maps, nodes) -> int:
    return mat_rank(mapped_rows(ens, maps, nodes))


def _min_h_mapped(ens, maps, pool, size) -> int:
    if size == 0:
        return 0
    return min(_h_mapped(ens, maps, c) for c in combinations(pool, size))


def corollary1_holds(ens: LinearEnsemble, maps: Mapping[NodeId, Matrix],
                     s1: Sequence[NodeId], s2: Sequence[NodeId],
                     b1: int, b2: int, mi: int | None = None) -> bool:
    """MI <= (min size-b1 parity H + min size-b2 info H)
          <= (b1/|S1|) sum of parity H + (b2/|S2|) joint info H,
    for b1 + b2 = ri, b1 <= |S1|, b2 <= |S2|."""
    p = ens.params
    if b1 + b2 != p.ri or b1 > len(s1) or b2 > len(s2):
        raise ValueError("inadmissible (S1, S2, b1, b2) split")
    if mi is None:
        mi = _download_mi(ens, maps)
    minsum = _min_h_mapped(ens, maps, s1, b1) + _min_h_mapped(ens, maps, s2, b2)
    avg1 = Fraction(b1, len(s1)) * sum(_h_mapped(ens, maps, [v]) for v in s1) \
        if s1 else Fraction(0)
    avg2 = Fraction(b2, len(s2)) * _h_mapped(ens, maps, s2) if s2 else Fraction(0)
    return mi <= minsum and Fraction(minsum) <= avg1 + avg2


def corollary2_holds(ens: LinearEnsemble, maps: Mapping[NodeId, Matrix],
                     s: Sequence[NodeId], mi: int | None = None) -> bool:
    """MI <= min size-ri info H over S <= (ri/|S|) H(info downloads of S),
    for |S| >= ri."""
    p = ens.params
    if len(s) < p.ri:
        raise ValueError("S must have at least ri nodes")
    if mi is None:
        mi = _download_mi(ens, maps)
    mn = _min_h_mapped(ens, maps, s, p.ri)
    avg = Fraction(p.ri, len(s)) * _h_mapped(ens, maps, s) if s else Fraction(0)
    return mi <= mn and Fraction(mn) <= avg


def check_corollaries(ens: LinearEnsemble, scheme, *, rng=None,
                      sample_tuples: int = 64,
                      exhaustive: bool | None = None) -> CheckReport:
    """Both chained download-inequality checks over the initial-code
    nodes, for every admissible tuple at small scale (ri <= 4 and
    ki <= 6), sampled otherwise."""
    p = ens.params
    maps = _scheme_maps(ens, scheme)
    for v in (*ens.info_nodes, *ens.initial_parities):
        maps.setdefault(v, _empty_map(ens))
    rep = CheckReport("download-mi-chains", p.as_dict(), True)
    mi = _download_mi(ens, maps)

    def run_c1(s1, s2, b1, b2):
        if not corollary1_holds(ens, maps, s1, s2, b1, b2, mi=mi):
            rep.ok = False
            rep.failures.append({
                "corollary": 1,
                "S1": [v.index for v in s1], "S2": [v.index for v in s2],
                "b1": b1, "b2": b2, "mi": mi})

    def run_c2(s):
        if not corollary2_holds(ens, maps, s, mi=mi):
            rep.ok = False
            rep.failures.append({
                "corollary": 2, "S": [v.index for v in s], "mi": mi})

    if exhaustive is None:
        exhaustive = p.ri <= 4 and p.ki <= 6
    if exhaustive:
        for n1 in range(p.ri + 1):
            for s1 in combinations(ens.initial_parities, n1):
                for b1 in range(0, min(p.ri, n1) + 1):
                    b2 = p.ri - b1
                    for n2 in range(b2, p.ki + 1):
                        for s2 in combinations(ens.info_nodes, n2):
                            run_c1(list(s1), list(s2), b1, b2)
        for n in range(p.ri, p.ki + 1):
            for s in combinations(ens.info_nodes, n):
                run_c2(list(s))
    else:
        import random
        rng = rng or random.Random(0)
        for _ in range(sample_tuples):
            s1, s2, b1, b2 = random_corollary1_tuple(ens, rng)
            run_c1(s1, s2, b1, b2)
            s = random_corollary2_set(ens, rng)
            if s is not None:
                run_c2(s)
    rep.details["mi"] = mi
    return rep


def random_corollary1_tuple(ens: LinearEnsemble, rng):
    """A random admissible (S1, S2, b1, b2) with b1 + b2 = ri."""
    p = ens.params
    while True:
        s1 = [v for v in ens.initial_parities if rng.random() < 0.5]
        b1 = rng.randint(0, min(p.ri, len(s1)))
        b2 = p.ri - b1
        if b2 > p.ki:
            continue
        pool = list(ens.info_nodes)
        rng.shuffle(pool)
        n2 = rng.randint(b2, p.ki)
        s2 = sorted(pool[:n2], key=NodeId.sort_key)
        return s1, s2, b1, b2


def random_corollary2_set(ens: LinearEnsemble, rng):
    """A random admissible S (|S| >= ri), or None when ri > ki leaves
    no admissible choice."""
    p = ens.params
    if p.ri > p.ki:
        return None
    pool = list(ens.info_nodes)
    rng.shuffle(pool)
    n = rng.randint(p.ri, p.ki)
    return sorted(pool[:n], key=NodeId.sort_key)


def check_stability(ens: LinearEnsemble) -> CheckReport:
    """Initial parities carry no information about any single final
    codeword (MI zero), while each final parity is fully determined by
    its own codeword (MI alpha); hence no initial parity block can equal
    any final parity block as a row space."""
    p = ens.params
    rep = CheckReport("stability", p.as_dict(), True)
    for t in range(p.lf):
        xs = list(ens.info_of_codeword(t))
        for yi in ens.initial_parities:
            got = mutual_info(ens, xs, [yi])
            if got != 0:
                rep.ok = False
                rep.failures.append({
                    "kind": "initial-parity-leak", "codeword": t,
                    "parity": yi.index, "mi": got, "expected": 0})
        for yf in ens.final_parities_of_codeword(t):
            got = mutual_info(ens, xs, [yf])
            if got != p.alpha:
                rep.ok = False
                rep.failures.append({
                    "kind": "final-parity-mi", "codeword": t,
                    "parity": yf.index, "mi": got, "expected": p.alpha})
    from .linalg import in_span
    for yi in ens.initial_parities:
        bi = ens.block(yi)
        for yf in ens.final_parities:
            bf = ens.block(yf)
            if in_span(bi, bf) and in_span(bf, bi):
                rep.ok = False
                rep.failures.append({
                    "kind": "parity-row-space-coincidence",
                    "initial": yi.index, "final": yf.index})
    return rep


def check_cond_entropy_final(ens: LinearEnsemble, scheme,
                             s_set: Iterable[int]) -> bool:
    """H(final parities of S | info downloads of S) splits into the
    per-codeword sum, for any codeword subset S."""
    p = ens.params
    maps = _scheme_maps(ens, scheme)
    s = sorted(set(s_set))
    if any(not 0 <= t < p.lf for t in s):
        raise ValueError("codeword index out of range")

    def lhs_for(ts: Sequence[int]) -> int:
        yf = [v for t in ts for v in ens.final_parities_of_codeword(t)]
        v_rows = mapped_rows(ens, maps,
                             [v for t in ts for v in ens.info_of_codeword(t)])
        return cond_entropy(ens, yf, [v_rows])

    return lhs_for(s) == sum(lhs_for([t]) for t in s)


def check_mds_reconstruction(ens: LinearEnsemble) -> CheckReport:
    """Any ki nodes of the initial codeword determine all data, and any
    kf nodes of a final codeword determine that codeword's data."""
    p = ens.params
    rep = CheckReport("mds-reconstruction", p.as_dict(), True)
    all_x = list(ens.info_nodes)
    for na in range(min(p.ri, p.ki) + 1):
        nb = p.ki - na
        for aa in combinations(ens.initial_parities, na):
            for bb in combinations(ens.info_nodes, nb):
                if cond_entropy(ens, all_x, list(aa) + list(bb)) != 0:
                    rep.ok = False
                    rep.failures.append({
                        "side": "initial",
                        "parities": [v.index for v in aa],
                        "infos": [v.index for v in bb]})
    for t in range(p.lf):
        xs = list(ens.info_of_codeword(t))
        for na in range(min(p.rf, p.kf) + 1):
            nb = p.kf - na
            for aa in combinations(ens.final_parities_of_codeword(t), na):
                for bb in combinations(xs, nb):
                    if cond_entropy(ens, xs, list(aa) + list(bb)) != 0:
                        rep.ok = False
                        rep.failures.append({
                            "side": "final", "codeword": t,
                            "parities": [v.index for v in aa],
                            "infos": [v.index for v in bb]})
    return rep


def check_storage_axioms(ens: LinearEnsemble) -> CheckReport:
    """Each info node has entropy exactly alpha; no node exceeds alpha."""
    p = ens.params
    rep = CheckReport("storage-axioms", p.as_dict(), True)
    for v in ens.all_nodes():
        h = entropy(ens, [v])
        if h > p.alpha or (v.kind == INFO and h != p.alpha):
            rep.ok = False
            rep.failures.append({"node": f"{v.kind}:{v.index}", "entropy": h})
    return rep


def check_joint_entropy(ens: LinearEnsemble) -> CheckReport:
    """The initial codeword as a whole stores exactly ki*alpha symbols
    of entropy (parities add none)."""
    p = ens.params
    rep = CheckReport("initial-joint-entropy", p.as_dict(), True)
    joint = entropy(ens, list(ens.info_nodes) + list(ens.initial_parities))
    if joint != p.ki * p.alpha:
        rep.ok = False
        rep.failures.append({"entropy": joint, "expected": p.ki * p.alpha})
    return rep

"""Conversion schemes, feasibility, and concrete conversion runs.

A scheme fixes, for every initial-codeword node, the linear map the
coordinator applies to that node's stored subsymbols before download.
Maps are kept in canonical form: full row rank, reduced row-echelon.
The read cost of a scheme is simply the total number of downloaded
rows; writes always materialize the lf*rf new parity nodes in full.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ensemble import LinearEnsemble, mapped_rows, _scheme_maps
from .linalg import Matrix, in_span, rref, solve_left, vstack
from .mds import VectorCode, encode, make_systematic_mds
from .params import SplitParams


class InfeasibleSchemeError(ValueError):
    """The downloaded rows cannot produce the final parity nodes."""


@dataclass(frozen=True)
class ConversionScheme:
    """Per-node download maps for one conversion.

    info_maps[j] applies to data node j (shape beta_j x alpha);
    parity_maps[i] applies to initial parity node i (sigma_i x alpha).
    All maps are canonical reduced-echelon bases of their row spaces.
    """

    params: SplitParams
    info_maps: tuple[Matrix, ...]
    parity_maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        p = self.params
        if len(self.info_maps) != p.ki:
            raise ValueError(f"expected {p.ki} info maps, got {len(self.info_maps)}")
        if len(self.parity_maps) != p.ri:
            raise ValueError(f"expected {p.ri} parity maps, got {len(self.parity_maps)}")
        for m in (*self.info_maps, *self.parity_maps):
            if m.cols != p.alpha:
                raise ValueError(f"download map has {m.cols} columns, expected {p.alpha}")
            if m.rows > p.alpha:
                raise ValueError("download map cannot exceed alpha rows")
            if rref(m) != m:
                raise ValueError("download maps must be canonical full-row-rank bases")

    @classmethod
    def from_maps(cls, params: SplitParams, info_maps: Sequence[Matrix],
                  parity_maps: Sequence[Matrix]) -> "ConversionScheme":
        """Canonicalize arbitrary (possibly rank-deficient) maps."""
        return cls(params,
                   tuple(rref(m) for m in info_maps),
                   tuple(rref(m) for m in parity_maps))

    @property
    def beta(self) -> tuple[int, ...]:
        return tuple(m.rows for m in self.info_maps)

    @property
    def sigma(self) -> tuple[int, ...]:
        return tuple(m.rows for m in self.parity_maps)

    @property
    def read_total(self) -> int:
        return sum(self.beta) + sum(self.sigma)

    def to_json_dict(self) -> dict:
        return {
            "beta": list(self.beta),
            "sigma": list(self.sigma),
            "A": [m.flat() for m in self.info_maps],
            "B": [m.flat() for m in self.parity_maps],
        }

    @classmethod
    def from_json_dict(cls, params: SplitParams, d) -> "ConversionScheme":
        fld = params.field()
        alpha = params.alpha

        def unflatten(flat, rows):
            a = np.array(list(flat), dtype=np.int64).reshape(rows, alpha)
            return Matrix(fld, a)

        info = tuple(unflatten(f, b) for f, b in zip(d["A"], d["beta"]))
        parity = tuple(unflatten(f, s) for f, s in zip(d["B"], d["sigma"]))
        return cls(params, info, parity)


@dataclass(frozen=True)
class BandwidthReport:
    """Read/write accounting for one scheme, in subsymbols."""

    params: SplitParams
    beta: tuple[int, ...]
    sigma: tuple[int, ...]

    @property
    def read_total(self) -> int:
        return sum(self.beta) + sum(self.sigma)

    @property
    def write_total(self) -> int:
        p = self.params
        return p.lf * p.rf * p.alpha

    @property
    def ratio_vs_default(self) -> Fraction:
        """Read cost relative to re-encoding from all data nodes."""
        p = self.params
        return Fraction(self.read_total, p.lf * p.kf * p.alpha)

    def to_json_dict(self) -> dict:
        return {
            "beta": list(self.beta),
            "sigma": list(self.sigma),
            "read_total": self.read_total,
            "write_total": self.write_total,
            "ratio_vs_default": {"num": self.ratio_vs_default.numerator,
                                 "den": self.ratio_vs_default.denominator},
        }


def default_scheme(params: SplitParams) -> ConversionScheme:
    """Re-encoding scheme: download every data node in full, no parities.

    Feasible for every systematic code pair, with read cost ki*alpha.
    """
    fld = params.field()
    full = Matrix.identity(fld, params.alpha)
    empty = Matrix.zeros(fld, 0, params.alpha)
    return ConversionScheme(params,
                            tuple(full for _ in range(params.ki)),
                            tuple(empty for _ in range(params.ri)))


def empty_scheme(params: SplitParams) -> ConversionScheme:
    fld = params.field()
    empty = Matrix.zeros(fld, 0, params.alpha)
    return ConversionScheme(params,
                            tuple(empty for _ in range(params.ki)),
                            tuple(empty for _ in range(params.ri)))


def scheme_bandwidth(scheme: ConversionScheme) -> BandwidthReport:
    return BandwidthReport(scheme.params, scheme.beta, scheme.sigma)


def check_feasible(ens: LinearEnsemble, scheme: ConversionScheme) -> bool:
    """True iff the downloaded rows span every final parity row, i.e.
    the coordinator can deterministically produce all new nodes."""
    p = ens.params
    sp = scheme.params
    if (sp.lf, sp.kf, sp.rf, sp.ri, sp.alpha) != (p.lf, p.kf, p.rf, p.ri, p.alpha):
        raise ValueError("scheme and ensemble parameters differ")
    maps = _scheme_maps(ens, scheme)
    downloads = mapped_rows(ens, maps, list(ens.info_nodes) + list(ens.initial_parities))
    targets = ens.stack(ens.final_parities)
    return in_span(targets, downloads)


def canonical_codes(params: SplitParams) -> tuple[VectorCode, VectorCode]:
    """The layered Reed-Solomon initial/final code pair for params."""
    fld = params.field()
    initial = make_systematic_mds(params.ni, params.ki, params.alpha, fld)
    final = make_systematic_mds(params.nf, params.kf, params.alpha, fld)
    return initial, final


def _download_order(params: SplitParams):
    """Download rows are stacked data nodes first, parities second, each
    in ascending node order (fixed so values align with coefficients)."""
    return list(range(params.ki)), list(range(params.ri))


def run_conversion(params: SplitParams, initial: VectorCode, final: VectorCode,
                   scheme: ConversionScheme, message: Sequence[int]):
    """Execute one conversion.

    Returns (final_codewords, BandwidthReport) where final_codewords is
    a list of lf arrays of shape (nf, alpha).  Data nodes of the final
    codewords are the unchanged initial data nodes; new parity values
    are produced only from the downloaded rows.

    Raises InfeasibleSchemeError when the scheme cannot produce the
    final parities.  The codes are assumed to satisfy the MDS property
    (see verify_mds); only shapes and feasibility are validated here.
    """
    p = params
    fld = initial.field
    if (initial.n, initial.k, initial.alpha) != (p.ni, p.ki, p.alpha):
        raise ValueError("initial code does not match parameters")
    if (final.n, final.k, final.alpha) != (p.nf, p.kf, p.alpha):
        raise ValueError("final code does not match parameters")
    if initial.field != final.field:
        raise ValueError("initial and final codes use different fields")

    initial_nodes = encode(initial, message)

    # Downloaded rows as linear functions of the message, and the final
    # parity rows they must span.
    info_idx, parity_idx = _download_order(p)
    pieces = []
    for j in info_idx:
        m = scheme.info_maps[j]
        if m.rows:
            pieces.append(m @ initial.node_block(j))
    for i in parity_idx:
        m = scheme.parity_maps[i]
        if m.rows:
            pieces.append(m @ initial.node_block(p.ki + i))
    downloads = vstack(pieces) if pieces else Matrix.zeros(fld, 0, p.message_dim)

    md = p.message_dim
    target_rows = np.zeros((p.lf * p.rf * p.alpha, md), dtype=np.int64)
    for t in range(p.lf):
        off = t * p.kf * p.alpha
        for j in range(p.rf):
            small = final.node_block(p.kf + j).array
            r0 = (t * p.rf + j) * p.alpha
            target_rows[r0:r0 + p.alpha, off:off + p.kf * p.alpha] = small
    targets = Matrix(fld, target_rows)

    combine = solve_left(targets, downloads)
    if combine is None:
        raise InfeasibleSchemeError(
            "downloaded rows do not span the final parity rows")

    # Apply the same maps to the concrete stored values.
    value_pieces = []
    for j in info_idx:
        m = scheme.info_maps[j]
        if m.rows:
            value_pieces.append(fld.arr_matmul(m.array, initial_nodes[j][:, None]))
    for i in parity_idx:
        m = scheme.parity_maps[i]
        if m.rows:
            value_pieces.append(fld.arr_matmul(m.array, initial_nodes[p.ki + i][:, None]))
    if value_pieces:
        downloaded_values = np.vstack(value_pieces)
        new_values = fld.arr_matmul(combine.array, downloaded_values)[:, 0]
    else:
        new_values = np.zeros(p.lf * p.rf * p.alpha, dtype=np.int64)

    final_codewords = []
    for t in range(p.lf):
        cw = np.zeros((p.nf, p.alpha), dtype=np.int64)
        cw[: p.kf, :] = initial_nodes[t * p.kf:(t + 1) * p.kf, :]
        for j in range(p.rf):
            r0 = (t * p.rf + j) * p.alpha
            cw[p.kf + j, :] = new_values[r0:r0 + p.alpha]
        cw.setflags(write=False)
        final_codewords.append(cw)
    return final_codewords, scheme_bandwidth(scheme)

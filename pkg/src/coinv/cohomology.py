"""Rational simplicial cohomology: bases, Poincare pairings, induced maps.

Cochains are dual to chains, so coboundary matrices are transposes of the
boundary matrices.  The pairing of complementary-degree classes is the cup
product (front-face/back-face on the ordered vertices) evaluated against the
fundamental cycle; it is stored as a full matrix between the chosen bases
rather than forcing dual bases, and the trace formula downstream inserts the
matrix and its inverse explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from .exact_linalg import RationalMatrix, kernel_basis, rref, solve
from .simplicial import (
    DegreeOutOfRange,
    OrientedComplex,
    SimplicialMapSpec,
    chain_map_matrix,
    fundamental_cycle,
    validate_simplicial_map,
)


class DegeneratePairing(Exception):
    """Cup pairing is rank deficient; the input is not a closed oriented manifold."""


@dataclass(frozen=True)
class CohomologyBasis:
    complex: OrientedComplex
    degree: int
    basis_cocycles: RationalMatrix  # columns are cocycle representatives
    betti: int


@dataclass(frozen=True)
class PairingMatrix:
    degree: int
    matrix: RationalMatrix  # shape b_p x b_{m-p}


def coboundary_matrix(k: OrientedComplex, q: int) -> RationalMatrix:
    """Matrix of delta: C^q -> C^{q+1}; zero map above the top degree."""
    from .simplicial import boundary_matrix

    if not 0 <= q <= k.dimension:
        raise DegreeOutOfRange("degree %d outside 0..%d" % (q, k.dimension))
    if q == k.dimension:
        return RationalMatrix.zeros(0, len(k.simplices[q]))
    return boundary_matrix(k, q + 1).transpose()


def _coboundary_image(k: OrientedComplex, q: int) -> RationalMatrix:
    """Matrix whose column space is the coboundaries in degree q."""
    if q == 0:
        return RationalMatrix.zeros(len(k.simplices[0]), 0)
    return coboundary_matrix(k, q - 1)


def cohomology_basis(k: OrientedComplex, q: int) -> CohomologyBasis:
    """Representatives of H^q: cocycles independent modulo coboundaries."""
    delta = coboundary_matrix(k, q)
    cocycles = kernel_basis(delta)
    bd = _coboundary_image(k, q)
    # Coboundaries are cocycles, so pivots of [bd | cocycles] beyond the bd
    # block pick out cocycle columns completing a basis of the quotient.
    _, rank_bd, _ = rref(bd)
    _, _, pivots = rref(bd.hstack(cocycles))
    chosen = [p - bd.cols for p in pivots if p >= bd.cols]
    betti = cocycles.cols - rank_bd
    assert len(chosen) == betti
    basis = cocycles.submatrix(range(cocycles.rows), chosen)
    return CohomologyBasis(k, q, basis, betti)


def betti_numbers(k: OrientedComplex) -> tuple:
    return tuple(cohomology_basis(k, q).betti for q in range(k.dimension + 1))


def cup_eval(k: OrientedComplex, p: int, alpha, beta) -> Fraction:
    """Evaluate the cup product of a p- and an (m-p)-cochain on the fundamental cycle.

    Alexander-Whitney on the ordered vertices: the p-cochain eats the front
    face, the complementary cochain eats the back face of each top simplex.
    """
    m = k.dimension
    total = Fraction(0)
    cyc = fundamental_cycle(k)
    for idx, top in enumerate(k.simplices[m]):
        front = top[: p + 1]
        back = top[p:]
        fa = alpha[k.simplex_index(p, front)]
        fb = beta[k.simplex_index(m - p, back)]
        total += cyc[idx] * fa * fb
    return total


def cup_pairing(k: OrientedComplex, p: int) -> PairingMatrix:
    """Pairing matrix D_p between the degree-p and degree-(m-p) bases."""
    m = k.dimension
    if not 0 <= p <= m:
        raise DegreeOutOfRange("degree %d outside 0..%d" % (p, m))
    bp = cohomology_basis(k, p)
    bq = cohomology_basis(k, m - p)
    ent = []
    for i in range(bp.betti):
        a = bp.basis_cocycles.col(i)
        for j in range(bq.betti):
            b = bq.basis_cocycles.col(j)
            ent.append(cup_eval(k, p, a, b))
    mat = RationalMatrix(bp.betti, bq.betti, ent)
    if mat.rank() != bp.betti or bp.betti != bq.betti:
        raise DegeneratePairing(
            "degree-%d pairing has rank %d, expected %d" % (p, mat.rank(), bp.betti)
        )
    return PairingMatrix(p, mat)


def induced_map(s: SimplicialMapSpec, q: int) -> RationalMatrix:
    """Matrix of the cohomology pullback H^q(target) -> H^q(source)."""
    validate_simplicial_map(s)
    if q > s.source.dimension or q > s.target.dimension:
        rows = cohomology_basis(s.source, q).betti if q <= s.source.dimension else 0
        cols = cohomology_basis(s.target, q).betti if q <= s.target.dimension else 0
        return RationalMatrix.zeros(rows, cols)
    pull = chain_map_matrix(s, q).transpose()
    src_basis = cohomology_basis(s.source, q)
    tgt_basis = cohomology_basis(s.target, q)
    bd = _coboundary_image(s.source, q)
    system = src_basis.basis_cocycles.hstack(bd)
    cols = []
    for j in range(tgt_basis.betti):
        u = pull.apply(tgt_basis.basis_cocycles.col(j))
        x = solve(system, u)
        if x is None:
            raise AssertionError("pullback of a cocycle failed to reduce to the basis")
        cols.append(x[: src_basis.betti])
    ent = [cols[j][i] for i in range(src_basis.betti) for j in range(tgt_basis.betti)]
    return RationalMatrix(src_basis.betti, tgt_basis.betti, ent)


@dataclass(frozen=True)
class CohomologyModel:
    """Per-degree Betti data, pairing matrices, and induced-map matrices.

    The pairing tuples are indexed by degree q and hold D_q of shape
    b_q x b_{m-q}; `induced[name][q]` is the matrix of H^q for the map,
    with rows indexed by the domain manifold and columns by the codomain.
    """

    backend: str
    dim_domain: int
    dim_codomain: int
    betti_domain: Tuple[int, ...]
    betti_codomain: Tuple[int, ...]
    pairing_domain: Tuple[RationalMatrix, ...]
    pairing_codomain: Tuple[RationalMatrix, ...]
    induced: Mapping[str, Tuple[RationalMatrix, ...]]

    def betti_dom(self, q: int) -> int:
        return self.betti_domain[q] if 0 <= q <= self.dim_domain else 0

    def betti_cod(self, q: int) -> int:
        return self.betti_codomain[q] if 0 <= q <= self.dim_codomain else 0

    def induced_matrix(self, name: str, q: int) -> RationalMatrix:
        mats = self.induced[name]
        if 0 <= q < len(mats):
            return mats[q]
        return RationalMatrix.zeros(self.betti_dom(q), self.betti_cod(q))


def simplicial_cohomology_model(
    source: OrientedComplex,
    target: OrientedComplex,
    maps: Dict[str, SimplicialMapSpec],
) -> CohomologyModel:
    """Assemble the cohomology data of a pair of complexes and maps between them."""
    for name, s in maps.items():
        if s.source is not source or s.target is not target:
            raise ValueError("map %r does not run between the given complexes" % name)
        validate_simplicial_map(s)
    m = source.dimension
    n = target.dimension
    betti_dom = betti_numbers(source)
    betti_cod = betti_numbers(target) if target is not source else betti_dom
    pair_dom = tuple(cup_pairing(source, q).matrix for q in range(m + 1))
    pair_cod = (
        pair_dom
        if target is source
        else tuple(cup_pairing(target, q).matrix for q in range(n + 1))
    )
    induced = {
        name: tuple(induced_map(s, q) for q in range(max(m, n) + 1))
        for name, s in maps.items()
    }
    return CohomologyModel(
        backend="simplicial",
        dim_domain=m,
        dim_codomain=n,
        betti_domain=betti_dom,
        betti_codomain=betti_cod,
        pairing_domain=pair_dom,
        pairing_codomain=pair_cod,
        induced=induced,
    )

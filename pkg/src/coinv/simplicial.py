"""Finite oriented simplicial complexes modeling closed oriented manifolds.

Vertices are integers 0..v-1 and carry the global total order from which all
sign conventions derive: simplices are stored as strictly increasing tuples,
boundary faces get alternating signs, and the cup product downstream uses the
front-face/back-face split of the same order.

A complex is built from its signed top simplices only; the face closure is
computed here, and the two manifold certificates are checked at build time:
every (m-1)-simplex must lie in exactly two top simplices, and the given
signed sum of top simplices must be a cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exact_linalg import RationalMatrix


class NotClosedManifold(Exception):
    """Some (m-1)-simplex is not shared by exactly two top simplices."""


class NotOrientable(Exception):
    """The signed top chain is not a cycle for the given signs."""


class DegreeOutOfRange(Exception):
    pass


class NotSimplicial(Exception):
    """A vertex map fails to send some simplex across to a simplex."""


def _parity_sort(seq: Sequence[int]):
    """Sort a tuple of distinct ints, returning (sorted_tuple, permutation_sign)."""
    items = list(seq)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return tuple(items), sign


class OrientedComplex:
    """Oriented simplicial complex; immutable after build_complex."""

    def __init__(self, dimension, vertex_count, simplices, top_orientation):
        self.dimension = dimension
        self.vertex_count = vertex_count
        self.simplices = simplices  # per dim q: sorted tuple of increasing tuples
        self.top_orientation = top_orientation  # sign per top simplex
        self._index = [
            {s: i for i, s in enumerate(level)} for level in simplices
        ]

    def simplex_index(self, q: int, simplex: tuple) -> int:
        return self._index[q][simplex]

    def counts(self) -> tuple:
        return tuple(len(level) for level in self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * len(level) for q, level in enumerate(self.simplices))

    def __repr__(self):
        return "OrientedComplex(dim=%d, counts=%s)" % (self.dimension, self.counts())


def _normalize_top(item):
    """Accept either an oriented tuple or a (sign, vertices) pair."""
    if (
        isinstance(item, (tuple, list))
        and len(item) == 2
        and isinstance(item[0], int)
        and item[0] in (1, -1)
        and isinstance(item[1], (tuple, list))
    ):
        sign = item[0]
        verts = tuple(item[1])
    else:
        sign = 1
        verts = tuple(item)
    if len(set(verts)) != len(verts):
        raise ValueError("top simplex has repeated vertices: %s" % (verts,))
    srt, parity = _parity_sort(verts)
    return srt, sign * parity


def build_complex(top_simplices: Iterable) -> OrientedComplex:
    """Build a closed oriented complex from signed top simplices.

    Each item is either an oriented vertex tuple (orientation read off the
    permutation parity relative to increasing order) or a pair
    (sign, vertex_tuple) with sign in {+1, -1}.
    """
    tops = [_normalize_top(item) for item in top_simplices]
    if not tops:
        raise ValueError("no top simplices given")
    m = len(tops[0][0]) - 1
    for s, _ in tops:
        if len(s) != m + 1:
            raise ValueError("top simplices of mixed dimension")
    seen = set()
    for s, _ in tops:
        if s in seen:
            raise NotClosedManifold("top simplex listed twice: %s" % (s,))
        seen.add(s)

    # face closure
    levels = [set() for _ in range(m + 1)]
    for s, _ in tops:
        for q in range(m + 1):
            for face in combinations(s, q + 1):
                levels[q].add(face)
    simplices = tuple(tuple(sorted(level)) for level in levels)

    if m >= 1:
        coface_count = {}
        for s, _ in tops:
            for face in combinations(s, m):
                coface_count[face] = coface_count.get(face, 0) + 1
        bad = [f for f, c in coface_count.items() if c != 2]
        if bad:
            raise NotClosedManifold(
                "(m-1)-simplex %s lies in %d top simplices (want 2)"
                % (bad[0], coface_count[bad[0]])
            )

    verts = max(v for s, _ in tops for v in s) + 1
    order = {s: i for i, s in enumerate(simplices[m])}
    orientation = [0] * len(simplices[m])
    for s, sign in tops:
        orientation[order[s]] = sign
    k = OrientedComplex(m, verts, simplices, tuple(orientation))

    if m >= 1:
        bd = boundary_matrix(k, m)
        if not all(x == 0 for x in bd.apply(fundamental_cycle(k))):
            raise NotOrientable("signed top chain is not a cycle")
    return k


def boundary_matrix(k: OrientedComplex, q: int) -> RationalMatrix:
    """Matrix of the boundary operator C_q -> C_{q-1} in the sorted bases."""
    if not 1 <= q <= k.dimension:
        raise DegreeOutOfRange("boundary degree %d outside 1..%d" % (q, k.dimension))
    nrows = len(k.simplices[q - 1])
    ncols = len(k.simplices[q])
    ent = [Fraction(0)] * (nrows * ncols)
    for j, s in enumerate(k.simplices[q]):
        for i in range(q + 1):
            face = s[:i] + s[i + 1 :]
            r = k.simplex_index(q - 1, face)
            ent[r * ncols + j] += Fraction((-1) ** i)
    return RationalMatrix(nrows, ncols, ent)


def fundamental_cycle(k: OrientedComplex) -> list:
    """Signed indicator vector of the top simplices."""
    return [Fraction(s) for s in k.top_orientation]


@dataclass(frozen=True)
class SimplicialMapSpec:
    source: OrientedComplex
    target: OrientedComplex
    vertex_image: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertex_image", tuple(self.vertex_image))
        if len(self.vertex_image) != self.source.vertex_count:
            raise ValueError("vertex image must cover every source vertex")


def validate_simplicial_map(s: SimplicialMapSpec) -> SimplicialMapSpec:
    """Check every source simplex maps across to a (possibly degenerate) simplex."""
    img = s.vertex_image
    for v in img:
        if not 0 <= v < s.target.vertex_count:
            raise NotSimplicial("vertex image %d outside target complex" % v)
    # Top simplices suffice: faces map into subsets of their images.
    for top in s.source.simplices[s.source.dimension]:
        image = tuple(sorted(set(img[v] for v in top)))
        if image not in s.target._index[len(image) - 1]:
            raise NotSimplicial(
                "simplex %s maps onto %s which is not a target simplex" % (top, image)
            )
    return s


def chain_map_matrix(s: SimplicialMapSpec, q: int) -> RationalMatrix:
    """Matrix of the induced chain map C_q(source) -> C_q(target).

    Degenerate images (repeated vertices) contribute zero; otherwise the
    image tuple is sorted and the permutation parity carried as a sign.
    """
    src = s.source.simplices[q] if q < len(s.source.simplices) else ()
    tgt = s.target.simplices[q] if q < len(s.target.simplices) else ()
    nrows = len(tgt)
    ncols = len(src)
    ent = [Fraction(0)] * (nrows * ncols)
    for j, simplex in enumerate(src):
        image = tuple(s.vertex_image[v] for v in simplex)
        if len(set(image)) != len(image):
            continue
        srt, sign = _parity_sort(image)
        i = s.target.simplex_index(q, srt)
        ent[i * ncols + j] += Fraction(sign)
    return RationalMatrix(nrows, ncols, ent)


# -- canned complexes used throughout the tests and scenarios ---------------


def tetrahedron_boundary() -> OrientedComplex:
    """Boundary of the 3-simplex: the smallest triangulated 2-sphere."""
    return build_complex(
        [(-1, (0, 1, 2)), (1, (0, 1, 3)), (-1, (0, 2, 3)), (1, (1, 2, 3))]
    )


def octahedron() -> OrientedComplex:
    """Octahedron boundary: 6 vertices, 12 edges, 8 triangles; a 2-sphere.

    Poles are 0 and 5, the equator is 1,2,3,4; triangles oriented outward.
    """
    return build_complex(
        [
            (1, (0, 1, 2)),
            (1, (0, 2, 3)),
            (1, (0, 3, 4)),
            (-1, (0, 1, 4)),
            (-1, (1, 2, 5)),
            (-1, (2, 3, 5)),
            (-1, (3, 4, 5)),
            (1, (1, 4, 5)),
        ]
    )


def csaszar_torus() -> OrientedComplex:
    """7-vertex triangulation of the torus (Moebius-Kantor complex).

    Triangles are {i, i+1, i+3} and {i, i+2, i+3} mod 7; every pair of
    vertices spans an edge, so f = (7, 21, 14) and chi = 0.  The orientation
    signs below were solved for once and are re-certified at build time.
    """
    return build_complex(
        [
            (1, (0, 1, 3)),
            (-1, (0, 1, 5)),
            (-1, (0, 2, 3)),
            (1, (0, 2, 6)),
            (1, (0, 4, 5)),
            (-1, (0, 4, 6)),
            (1, (1, 2, 4)),
            (-1, (1, 2, 6)),
            (-1, (1, 3, 4)),
            (1, (1, 5, 6)),
            (1, (2, 3, 5)),
            (-1, (2, 4, 5)),
            (1, (3, 4, 6)),
            (-1, (3, 5, 6)),
        ]
    )


def circle(n: int = 3) -> OrientedComplex:
    """Cyclically oriented n-gon triangulation of the circle."""
    if n < 3:
        raise ValueError("need at least 3 vertices")
    tops = []
    for i in range(n):
        a, b = i, (i + 1) % n
        tops.append((1, (a, b)) if a < b else (-1, (b, a)))
    return build_complex(tops)

"""Exact partition-function arithmetic and the brute-force enumeration oracle.

zed(2l) = 8^l (3l-4)! / ((l-2)! (2l)!) with (-1)! = 1 is the closed-form
partition function printed for free Boltzmann quadrangulations with simple
boundary.  Which map statistic the Boltzmann exponent counts (internal
faces, interior edges, or interior vertices) is settled here by exhaustive
enumeration, never assumed: the enumerator builds every rooted
quadrangulation with boundary for small sizes by gluing polygon sides in
canonical order, so each rooted isomorphism class is produced exactly once.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .planarmap import HalfEdgeMap, validate


def factorial_ext(k):
    """k! with the convention (-1)! = 1."""
    if k == -1:
        return 1
    if k < -1:
        raise ValueError("factorial of integer below -1")
    return math.factorial(k)


def zed(p):
    """Exact free Boltzmann partition function value at perimeter p.

    Odd p gives 0; p must be a positive integer.
    """
    if p <= 0:
        raise ValueError("perimeter must be positive")
    if p % 2:
        return Fraction(0)
    l = p // 2
    return Fraction(8 ** l * factorial_ext(3 * l - 4),
                    factorial_ext(l - 2) * math.factorial(2 * l))


def zed_ratio(l):
    """zed(2l+2)/zed(2l) as an exact fraction (l >= 1)."""
    return zed(2 * l + 2) / zed(2 * l)


def zed_asymptotic_fit(max_l, min_l=None):
    """Fit zed(2l) ~ c * 54^l * (2l)^(-5/2) by log-log regression.

    Returns (c_hat, exponent_hat) where exponent_hat estimates the power of
    (2l) and should approach -5/2.
    """
    if max_l < 20:
        raise ValueError("need max_l >= 20 for a stable fit")
    if min_l is None:
        min_l = max_l // 2
    xs, ys = [], []
    for l in range(min_l, max_l + 1):
        v = zed(2 * l)
        # log(zed) - l*log(54) vs log(2l)
        y = _log_fraction(v) - l * math.log(54)
        xs.append(math.log(2 * l))
        ys.append(y)
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    return math.exp(intercept), slope


def _log_fraction(fr):
    n, d = fr.numerator, fr.denominator
    return _log_int(n) - _log_int(d)


def _log_int(n):
    if n.bit_length() <= 900:
        return math.log(n)
    k = n.bit_length() - 900
    return math.log(n >> k) + k * math.log(2)


# ---------------------------------------------------------------------------
# Exhaustive enumeration by canonical gluing
# ---------------------------------------------------------------------------
#
# A rooted quadrangulation with boundary of perimeter 2l and n internal
# faces is built from one 2l-gon (the external face) and n quadrilaterals
# by gluing their sides in pairs.  Sides are darts; gluing assigns twins.
# The enumeration always resolves the smallest unmatched dart, either by
# gluing it to another dart of the same hole (keeping the surface planar)
# or by attaching a fresh quadrilateral.  Each rooted map arises from
# exactly one decision sequence, so no isomorphism rejection is needed.


class _GluingState:
    __slots__ = ("fnext", "twin", "holes", "hole_of", "quads_left")

    def __init__(self, l, n):
        sides = list(range(2 * l))
        self.fnext = {s: (s + 1) % (2 * l) for s in sides}
        self.twin = {}
        # hole boundary in reverse face order
        hole = list(reversed(sides))
        self.holes = [hole]
        self.quads_left = n


def enumerate_quadrangulations(n, l, yield_maps=True):
    """Yield every rooted quadrangulation with boundary: n internal faces,
    perimeter 2l, root at external-walk position 0.

    Rooted counting convention: maps are counted up to isomorphisms fixing
    the external face and the marked oriented boundary position.
    """
    if l < 1 or n < 0:
        raise ValueError("need l >= 1, n >= 0")
    for twin_fnext in _raw_gluings(n, l):
        yield _finish_map(twin_fnext)


def _glue_search(fnext, holes, twin, quads_left):
    """Iterative DFS over gluing decisions; yields completed twin dicts."""
    # state: (fnext list, holes, twin dict, quads_left); we mutate copies
    stack = [(fnext, holes, twin, quads_left)]
    while stack:
        fnext, holes, twin, quads_left = stack.pop()
        if not holes:
            if quads_left == 0:
                yield twin
            continue
        # canonical slot: smallest dart over all holes
        hi = min(range(len(holes)), key=lambda i: min(holes[i]))
        hole = holes[hi]
        a_pos = min(range(len(hole)), key=lambda p: hole[p])
        a = hole[a_pos]
        rest_holes = holes[:hi] + holes[hi + 1:]
        k = len(hole)
        # option 1: glue a to another dart of the same hole
        for b_off in range(1, k):
            b_pos = (a_pos + b_off) % k
            b = hole[b_pos]
            h1 = [hole[(a_pos + j) % k] for j in range(1, b_off)]
            h2 = [hole[(b_pos + j) % k] for j in range(1, k - b_off)]
            new_holes = rest_holes + [h for h in (h1, h2) if h]
            new_twin = dict(twin)
            new_twin[a] = b
            new_twin[b] = a
            stack.append((fnext, new_holes, new_twin, quads_left))
        # option 2: attach a fresh quadrilateral
        if quads_left > 0:
            base = len(fnext)
            q = [base, base + 1, base + 2, base + 3]
            new_fnext = fnext + [base + 1, base + 2, base + 3, base]
            new_twin = dict(twin)
            new_twin[a] = q[0]
            new_twin[q[0]] = a
            new_hole = [q[3], q[2], q[1]] + [hole[(a_pos + j) % k]
                                             for j in range(1, k)]
            stack.append((new_fnext, rest_holes + [new_hole],
                          new_twin, quads_left - 1))


def _finish_map(twin_and_fnext):
    twin, fnext = twin_and_fnext
    nd = len(fnext)
    twin_arr = [twin[d] for d in range(nd)]
    nxt = [fnext[twin_arr[d]] for d in range(nd)]
    return HalfEdgeMap(twin_arr, nxt, 0, 0)


class OracleCounts:
    """Exhaustive counts of rooted quadrangulations with boundary.

    by_faces[(n, l)], by_interior_edges[(m, l)], by_interior_vertices[(v, l)]
    for general and simple boundary separately.
    """

    def __init__(self):
        self.general_by_faces = {}
        self.simple_by_faces = {}
        self.general_by_int_edges = {}
        self.simple_by_int_edges = {}
        self.general_by_int_verts = {}
        self.simple_by_int_verts = {}
        self.ranges = []

    def tally(self, m: HalfEdgeMap, l):
        rep = validate(m)
        if not rep.ok:
            raise AssertionError("enumerator produced an invalid map: "
                                 + "; ".join(rep.errors))
        n_faces = rep.n_internal_faces
        walk = m.face_walk(m.external_face_dart)
        bdry_edges = {m.edge_of(d) for d in walk}
        bdry_verts = {m.vertex_of[d] for d in walk}
        int_edges = m.n_edges - len(bdry_edges)
        int_verts = m.n_vertices - len(bdry_verts)
        for table, key in ((self.general_by_faces, n_faces),
                           (self.general_by_int_edges, int_edges),
                           (self.general_by_int_verts, int_verts)):
            table[key, l] = table.get((key, l), 0) + 1
        if rep.boundary_simple:
            for table, key in ((self.simple_by_faces, n_faces),
                               (self.simple_by_int_edges, int_edges),
                               (self.simple_by_int_verts, int_verts)):
                table[key, l] = table.get((key, l), 0) + 1


def run_enumeration(n_max, l_values, collect=None):
    """Enumerate all (n <= n_max, l in l_values) maps; tally counts.

    collect, if given, is a callable(map, n, l) invoked per map (used for
    peel-indicator tallies and decode-image comparisons).
    """
    counts = OracleCounts()
    for l in l_values:
        for n in range(n_max + 1):
            for twin_fnext in _raw_gluings(n, l):
                m = _finish_map(twin_fnext)
                counts.tally(m, l)
                if collect is not None:
                    collect(m, n, l)
    counts.ranges.append((n_max, tuple(l_values)))
    return counts


def _raw_gluings(n, l):
    fnext = list(range(1, 2 * l)) + [0]
    for twin in _glue_search(fnext, [list(reversed(range(2 * l)))], {}, n):
        yield twin, _fnext_of(twin, fnext)


def _fnext_of(twin, fnext0):
    # fnext grows as quads are added; rebuild from dart count
    nd = len(twin)
    base = len(fnext0)
    fnext = list(fnext0)
    while len(fnext) < nd:
        b = len(fnext)
        fnext.extend([b + 1, b + 2, b + 3, b])
    return fnext

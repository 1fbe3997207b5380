"""Peeling: single-step indicators, exact step laws, the peeling engine,
boundary/area processes, and rescaled diagnostics.

Peeling a quadrangulation with simple boundary at a boundary edge reveals
the quadrilateral carrying that edge.  The revealed face splits the rest
of the map into at most three components, listed counterclockwise from
the peeled edge; the indicator entry of a component is the number of old
boundary edges it keeps.  Components sharing a vertex with each other are
still distinct when separated by a corner of the revealed face or of the
external face, so connectivity is computed on angular sectors, not on the
vertex graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .planarmap import HalfEdgeMap, boundary_walk, validate

INF = float("inf")


@dataclass
class PeelStep:
    """Outcome of revealing the face at a boundary edge."""
    indicator: tuple          # component sizes ccw from the peeled edge
    target_index: int         # which component carries the target (-1: none)
    exposed: int              # Ex: target-component edges incident to the face
    covered: int              # Co: old boundary edges lost to the target side
    components: list          # per component: dict(darts=set, bdry_edges=int,
                              #   chords=[quad darts], first_quad_slot=int)
    face_darts: list          # inner-side darts of the revealed quadrilateral


def component_perimeter(k, single):
    """Total boundary length of a peel component from its indicator entry.

    k is the component's count of old boundary edges; single says whether
    it was the only component.
    """
    if k == INF:
        return INF
    if single:
        return k + 3
    return k + 1 if k % 2 else k + 2


def peel_indicator(m: HalfEdgeMap, e_dart, target_dart=None) -> PeelStep:
    """Peel m at the boundary edge carrying e_dart.

    target_dart picks the component counted as unexplored (pass a boundary
    dart; defaults to the boundary edge antipodal to the peeled one along
    the external walk).  The trivial one-edge map returns indicator ().
    """
    ext = m.external_face
    if m.face_of[e_dart] != ext:
        e_dart = m.twin[e_dart]
    if m.face_of[e_dart] != ext:
        raise ValueError("peeled edge must be on the boundary")
    inner = m.twin[e_dart]
    if m.face_of[inner] == ext:
        return PeelStep((), -1, 0, 0, [], [])

    face_darts = m.face_walk(inner)
    if len(face_darts) != 4:
        raise AssertionError("boundary-incident face of degree != 4")
    quad_face = m.face_of[inner]

    walk = m.face_walk(e_dart)
    if target_dart is None:
        target_dart = walk[len(walk) // 2]
    ext_edges = {m.edge_of(d) for d in walk}
    e_edge = m.edge_of(e_dart)

    # Sector connectivity: darts d and nxt[d] at the same vertex are joined
    # unless the corner between them belongs to the revealed face or to the
    # external face; twin darts are joined unless the edge is the peeled one.
    skip = {e_dart, inner}
    comp_of = {}
    ncomp = 0
    for d0 in range(m.n_darts):
        if d0 in skip or d0 in comp_of:
            continue
        stack = [d0]
        comp_of[d0] = ncomp
        while stack:
            d = stack.pop()
            neighbors = []
            t = m.twin[d]
            if t not in skip:
                neighbors.append(t)
            for a, b in ((d, m.nxt[d]), (m.prv(d), d)):
                # corner between a and nxt(a)=b has face face_of[b]
                fcorner = m.face_of[b]
                other = b if b != d else a
                if fcorner != quad_face and fcorner != ext and other not in skip:
                    neighbors.append(other)
            for u in neighbors:
                if u not in comp_of:
                    comp_of[u] = ncomp
                    stack.append(u)
        ncomp += 1

    # group darts, count old boundary edges per component
    comps = [{"darts": set(), "bdry_edges": set(), "chords": [],
              "first_quad_slot": None} for _ in range(ncomp)]
    for d, c in comp_of.items():
        comps[c]["darts"].add(d)
        eid = m.edge_of(d)
        if eid in ext_edges and eid != e_edge:
            comps[c]["bdry_edges"].add(eid)

    # attachment order around the quadrilateral, ccw from the peeled edge
    order = []
    for slot, q in enumerate(face_darts):
        if q == inner:
            continue
        c = comp_of[m.twin[q]]
        if comps[c]["first_quad_slot"] is None:
            comps[c]["first_quad_slot"] = slot
            order.append(c)
        if m.edge_of(q) not in ext_edges:
            comps[c]["chords"].append(q)
    if len(order) != ncomp:
        raise AssertionError("component not attached to the revealed face")

    tcomp = comp_of.get(target_dart, comp_of.get(m.twin[target_dart]))
    if tcomp is None:
        raise ValueError("target edge vanished with the peeled edge")
    indicator = tuple(len(comps[c]["bdry_edges"]) for c in order)
    target_index = order.index(tcomp)
    exposed = len(comps[tcomp]["chords"])
    covered = 1 + sum(len(comps[c]["bdry_edges"])
                      for c in order if c != tcomp)
    ordered = [comps[c] for c in order]
    return PeelStep(indicator, target_index, exposed, covered,
                    ordered, face_darts)

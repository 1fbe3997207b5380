"""Rooted combinatorial planar maps with a marked external face.

A map is stored as a dart (half-edge) structure: dart ``d`` has a twin
``twin[d]`` (the same edge traversed the other way) and a successor
``nxt[d]`` (the next dart counterclockwise around the origin vertex of
``d``).  Faces are orbits of ``d -> nxt[twin[d]]``.  Every map in this
package is a quadrangulation with boundary: one distinguished external
face of arbitrary even degree, all other faces of degree 4.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field


class MapStructureError(ValueError):
    """Raised when dart arrays do not describe a valid connected map."""


class HalfEdgeMap:
    __slots__ = ("twin", "nxt", "root", "external_face_dart",
                 "_vertex_of", "_nvert", "_face_of", "_nface", "_prv")

    def __init__(self, twin, nxt, root, external_face_dart):
        self.twin = list(twin)
        self.nxt = list(nxt)
        self.root = root
        self.external_face_dart = external_face_dart
        self._vertex_of = None
        self._nvert = None
        self._face_of = None
        self._nface = None
        self._prv = None

    # -- basic counts ---------------------------------------------------

    @property
    def n_darts(self):
        return len(self.twin)

    @property
    def n_edges(self):
        return len(self.twin) // 2

    def _compute_vertices(self):
        vertex_of = [-1] * self.n_darts
        nv = 0
        for d in range(self.n_darts):
            if vertex_of[d] < 0:
                e = d
                while vertex_of[e] < 0:
                    vertex_of[e] = nv
                    e = self.nxt[e]
                nv += 1
        self._vertex_of = vertex_of
        self._nvert = nv

    @property
    def vertex_of(self):
        """Vertex id at the origin of each dart."""
        if self._vertex_of is None:
            self._compute_vertices()
        return self._vertex_of

    @property
    def n_vertices(self):
        if self._nvert is None:
            self._compute_vertices()
        return self._nvert

    def face_next(self, d):
        """Next dart along the face to the left of d (orbit of nxt o twin)."""
        return self.nxt[self.twin[d]]

    def _compute_faces(self):
        face_of = [-1] * self.n_darts
        nf = 0
        for d in range(self.n_darts):
            if face_of[d] < 0:
                e = d
                while face_of[e] < 0:
                    face_of[e] = nf
                    e = self.nxt[self.twin[e]]
                nf += 1
        self._face_of = face_of
        self._nface = nf

    @property
    def face_of(self):
        if self._face_of is None:
            self._compute_faces()
        return self._face_of

    @property
    def n_faces(self):
        if self._nface is None:
            self._compute_faces()
        return self._nface

    @property
    def external_face(self):
        return self.face_of[self.external_face_dart]

    def prv(self, d):
        """Inverse of nxt (previous dart clockwise around the origin)."""
        if self._prv is None:
            p = [0] * self.n_darts
            for e in range(self.n_darts):
                p[self.nxt[e]] = e
            self._prv = p
        return self._prv[d]

    def head(self, d):
        """Vertex at the head of dart d."""
        return self.vertex_of[self.twin[d]]

    def edge_of(self, d):
        return d if d < self.twin[d] else self.twin[d]

    def face_degrees(self):
        deg = [0] * self.n_faces
        for d in range(self.n_darts):
            deg[self.face_of[d]] += 1
        return deg

    def face_walk(self, d0):
        """Darts of the face containing d0, in face order starting at d0."""
        walk = [d0]
        d = self.nxt[self.twin[d0]]
        while d != d0:
            walk.append(d)
            d = self.nxt[self.twin[d]]
        return walk

    @property
    def perimeter(self):
        return len(self.face_walk(self.external_face_dart))

    def n_internal_faces(self):
        return self.n_faces - 1

    def adjacency(self):
        """Adjacency lists (vertex -> neighbor vertices, with multiplicity)."""
        vo = self.vertex_of
        adj = [[] for _ in range(self.n_vertices)]
        for d in range(self.n_darts):
            adj[vo[d]].append(vo[self.twin[d]])
        return adj

    def vertex_degrees(self):
        deg = [0] * self.n_vertices
        for d in range(self.n_darts):
            deg[self.vertex_of[d]] += 1
        return deg

    # -- serialization ---------------------------------------------------

    def to_json_dict(self):
        return {"twin": list(self.twin), "next": list(self.nxt),
                "root": self.root, "external_face_dart": self.external_face_dart}

    def dumps(self):
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, obj, check=True):
        m = cls(obj["twin"], obj["next"], obj["root"], obj["external_face_dart"])
        if check:
            rep = validate(m)
            if not rep.structure_ok:
                raise MapStructureError("; ".join(rep.errors))
        return m

    @classmethod
    def loads(cls, s, check=True):
        return cls.from_json_dict(json.loads(s), check=check)

    # -- canonical form ---------------------------------------------------

    def canonical_code(self):
        """Canonical relabeling of (twin, nxt) by BFS from the root dart.

        Two rooted maps are isomorphic (orientation-preserving, root- and
        external-face-preserving) iff their codes are equal.
        """
        order = {self.root: 0}
        seq = [self.root]
        i = 0
        while i < len(seq):
            d = seq[i]
            i += 1
            for e in (self.nxt[d], self.twin[d]):
                if e not in order:
                    order[e] = len(seq)
                    seq.append(e)
        nxt_code = tuple(order[self.nxt[d]] for d in seq)
        twin_code = tuple(order[self.twin[d]] for d in seq)
        return (nxt_code, twin_code, order[self.external_face_dart])


@dataclass
class ValidationReport:
    structure_ok: bool = True
    involution_ok: bool = True
    permutation_ok: bool = True
    connected: bool = True
    euler_ok: bool = True
    face_degrees_ok: bool = True
    bipartite: bool = True
    root_on_boundary: bool = True
    boundary_simple: bool = False
    perimeter: int = 0
    n_internal_faces: int = 0
    n_vertices: int = 0
    errors: list = field(default_factory=list)

    @property
    def ok(self):
        return (self.structure_ok and self.euler_ok and self.face_degrees_ok
                and self.bipartite and self.root_on_boundary)


def validate(m: HalfEdgeMap) -> ValidationReport:
    """Check the quadrangulation-with-boundary invariants of m."""
    rep = ValidationReport()
    n = m.n_darts
    if n == 0 or n % 2:
        rep.structure_ok = False
        rep.errors.append("dart count must be positive and even")
        return rep
    rng = range(n)
    if sorted(m.nxt) != list(rng):
        rep.structure_ok = rep.permutation_ok = False
        rep.errors.append("next is not a permutation")
        return rep
    for d in rng:
        t = m.twin[d]
        if not (0 <= t < n) or t == d or m.twin[t] != d:
            rep.structure_ok = rep.involution_ok = False
            rep.errors.append("twin is not a fixed-point-free involution")
            return rep
    seen = [False] * n
    stack = [0]
    seen[0] = True
    cnt = 1
    while stack:
        d = stack.pop()
        for e in (m.nxt[d], m.twin[d]):
            if not seen[e]:
                seen[e] = True
                cnt += 1
                stack.append(e)
    if cnt != n:
        rep.structure_ok = rep.connected = False
        rep.errors.append("map is not connected")
        return rep

    V, E, F = m.n_vertices, m.n_edges, m.n_faces
    rep.n_vertices = V
    rep.euler_ok = (V - E + F == 2)
    if not rep.euler_ok:
        rep.errors.append(f"Euler characteristic {V - E + F} != 2")

    ext = m.external_face
    degs = m.face_degrees()
    rep.perimeter = degs[ext]
    rep.n_internal_faces = F - 1
    for f, deg in enumerate(degs):
        if f != ext and deg != 4:
            rep.face_degrees_ok = False
            rep.errors.append(f"internal face of degree {deg}")
            break

    # bipartite: 2-color via BFS on vertices
    vo = m.vertex_of
    color = [-1] * V
    color[vo[0]] = 0
    q = deque([0])
    visited_dart = [False] * n
    while q:
        d = q.popleft()
        if visited_dart[d]:
            continue
        # walk the star of the origin of d
        e = d
        while True:
            visited_dart[e] = True
            u, w = vo[e], vo[m.twin[e]]
            if color[w] < 0:
                color[w] = 1 - color[u]
                q.append(m.twin[e])
            elif color[w] == color[u]:
                rep.bipartite = False
            e = m.nxt[e]
            if e == d:
                break
    if not rep.bipartite:
        rep.errors.append("graph has an odd cycle")

    walk = m.face_walk(m.external_face_dart)
    rep.root_on_boundary = m.face_of[m.root] == ext
    if not rep.root_on_boundary:
        rep.errors.append("root dart is not on the external face")
    verts = [vo[d] for d in walk]
    if len(walk) == 2 and m.twin[walk[0]] == walk[1]:
        rep.boundary_simple = True          # trivial one-edge map convention
    else:
        rep.boundary_simple = len(set(verts)) == len(verts)
    return rep


def boundary_walk(m: HalfEdgeMap):
    """Darts tracing the external face in cyclic order, starting at root.

    The walk has length equal to the perimeter; edges of multiplicity two
    on the boundary appear twice.  If the root dart is not on the external
    face (it may be the twin of a boundary dart), the walk starts at the
    root's twin.
    """
    d0 = m.root
    if m.face_of[d0] != m.external_face:
        d0 = m.twin[d0]
        if m.face_of[d0] != m.external_face:
            raise MapStructureError("root edge is not on the external face")
    return m.face_walk(d0)


def graph_distance(m: HalfEdgeMap, sources):
    """BFS distances from a set of vertices and/or darts.

    Darts stand for edges; an edge contributes both endpoints at distance
    zero.  Returns a list indexed by vertex (-1 for unreachable, which
    cannot happen on a connected map).
    """
    src = _source_vertices(m, sources)
    if not src:
        raise ValueError("empty source set")
    dist = [-1] * m.n_vertices
    q = deque()
    for v in src:
        if dist[v] < 0:
            dist[v] = 0
            q.append(v)
    adj = m.adjacency()
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                q.append(w)
    return dist


def _source_vertices(m, sources):
    vo = m.vertex_of
    out = set()
    for s in sources:
        if isinstance(s, tuple) and s and s[0] == "dart":
            d = s[1]
            out.add(vo[d])
            out.add(vo[m.twin[d]])
        else:
            out.add(s)
    return out


def darts_of_edge_set(m, darts):
    """Closure of a dart iterable under twin, as a set."""
    s = set()
    for d in darts:
        s.add(d)
        s.add(m.twin[d])
    return s


@dataclass
class FilledBall:
    """B_r(center) together with everything it disconnects from the target."""
    vertices: set
    edges: set            # edge ids (min of the two dart ids)
    whole_map: bool
    radius: int


def filled_ball(m: HalfEdgeMap, center_darts, r, target_darts) -> FilledBall:
    """Filled metric ball B_r^*(center; m) relative to a target edge set.

    center_darts and target_darts are iterables of darts (edges).  The ball
    is the set of vertices at distance <= r from the endpoints of the
    center edges; complement components not containing a target vertex are
    absorbed.  If some target vertex lies in the ball, the whole map is
    returned with whole_map=True.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    dist = graph_distance(m, [("dart", d) for d in center_darts])
    tverts = _source_vertices(m, [("dart", d) for d in target_darts])
    inside = [dist[v] <= r for v in range(m.n_vertices)]
    if any(inside[v] for v in tverts):
        allv = set(range(m.n_vertices))
        alle = {m.edge_of(d) for d in range(m.n_darts)}
        return FilledBall(allv, alle, True, r)
    adj = m.adjacency()
    comp = [-1] * m.n_vertices
    keep = set(v for v in range(m.n_vertices) if inside[v])
    nc = 0
    target_comps = set()
    for v0 in range(m.n_vertices):
        if inside[v0] or comp[v0] >= 0:
            continue
        q = deque([v0])
        comp[v0] = nc
        members = [v0]
        while q:
            u = q.popleft()
            for w in adj[u]:
                if not inside[w] and comp[w] < 0:
                    comp[w] = nc
                    q.append(w)
                    members.append(w)
        if any(v in tverts for v in members):
            target_comps.add(nc)
        else:
            keep.update(members)
        nc += 1
    vo = m.vertex_of
    edges = set()
    for d in range(0, m.n_darts):
        u, w = vo[d], vo[m.twin[d]]
        if u in keep and w in keep:
            # drop edges between two absorbed-complement... all kept pairs stay:
            # an edge with both endpoints kept is in the filled ball by definition
            edges.add(m.edge_of(d))
    return FilledBall(keep, edges, False, r)


# -- core decomposition ----------------------------------------------------


@dataclass
class Dangling:
    """A pendant piece hanging off the core at a single cut vertex."""
    map: HalfEdgeMap
    attach_vertex: int          # vertex id in the parent map
    walk_start: int             # first index of its interval in the parent boundary walk
    walk_len: int


@dataclass
class CoreDecomposition:
    core: HalfEdgeMap
    core_root_walk_index: int   # index into parent boundary walk of the core root edge
    components: list            # list of (component HalfEdgeMap, walk index of first edge)
    dangling: list              # list of Dangling, in boundary-walk order
    core_is_trivial: bool = False


def _submap_from_darts(m, darts, root, ext_dart):
    """Extract the sub-map on a twin-closed dart set, with induced rotation."""
    darts = sorted(darts)
    idx = {d: i for i, d in enumerate(darts)}
    nxt = []
    for d in darts:
        e = m.nxt[d]
        while e not in idx:
            e = m.nxt[e]
        nxt.append(idx[e])
    twin = [idx[m.twin[d]] for d in darts]
    return HalfEdgeMap(twin, nxt, idx[root], idx[ext_dart]), idx


def _region_darts(m, cycle_darts):
    """All darts of the closed region bounded by a component cycle.

    cycle_darts are the inner-side darts of a simple component boundary
    (their faces lie inside the region).  Floods across parent faces
    without crossing the cycle; returns a twin-closed dart set including
    the cycle edges themselves.
    """
    cyc = set(cycle_darts)
    region = set(cyc) | {m.twin[d] for d in cyc}
    walked = set()
    face_stack = list(cyc)
    while face_stack:
        d0 = face_stack.pop()
        if d0 in walked:
            continue
        e = d0
        while True:
            walked.add(e)
            region.add(e)
            region.add(m.twin[e])
            t = m.twin[e]
            if e not in cyc and t not in walked:
                face_stack.append(t)
            e = m.nxt[m.twin[e]]
            if e == d0:
                break
    return region


def core_decompose(m: HalfEdgeMap) -> CoreDecomposition:
    """Split a general-boundary quadrangulation into simple components and
    the danglings hanging off the largest one.

    The simple-boundary components are the interior faces of the boundary
    sub-map; the core is the one with the largest perimeter (ties broken by
    the earliest boundary-walk edge from the root).  Danglings are the
    pendant pieces attached to core boundary vertices, recorded with their
    interval in the parent boundary walk.
    """
    walk = boundary_walk(m)
    ext = m.external_face
    bdry_darts = darts_of_edge_set(m, walk)
    sub, idx = _submap_from_darts(m, bdry_darts, walk[0], walk[0])
    sub_faces = sub.face_of
    ext_sub = sub_faces[idx[walk[0]]]

    # interior faces of the boundary map, each a component boundary cycle
    rev = {i: d for d, i in idx.items()}
    cycles = {}
    for i in range(sub.n_darts):
        f = sub_faces[i]
        if f != ext_sub:
            cycles.setdefault(f, [])
    for f in cycles:
        # walk the face in the submap, convert to parent darts
        start = next(i for i in range(sub.n_darts) if sub_faces[i] == f)
        cyc = [rev[i] for i in sub.face_walk(start)]
        cycles[f] = cyc

    if not cycles:
        # tree-like map: no internal face; core = trivial edge-map at the root
        rd = m.root if m.face_of[m.root] == ext else m.twin[m.root]
        core = HalfEdgeMap([1, 0], [0, 1], 0, 0)
        comps = []
        dang = [Dangling(m, m.vertex_of[rd], 0, len(walk))]
        return CoreDecomposition(core, 0, comps, dang, core_is_trivial=True)

    # perimeter and earliest-walk-position per component
    walk_pos = {d: i for i, d in enumerate(walk)}
    info = []
    for f, cyc in cycles.items():
        per = len(cyc)
        first = min(walk_pos.get(m.twin[d], walk_pos.get(d, len(walk))) for d in cyc)
        info.append((per, -1, first, f))
    info.sort(key=lambda t: (-t[0], t[2]))
    core_face = info[0][3]
    core_cycle = cycles[core_face]

    components = []
    for per, _, first, f in info:
        cyc = cycles[f]
        region = _region_darts(m, cyc)
        d0 = cyc[0]
        comp, _ = _submap_from_darts(m, region, m.twin[d0], m.twin[d0])
        components.append((comp, first, f))

    core_map = next(c for c, first, f in components if f == core_face)

    # danglings: intervals of the boundary walk outside the core cycle
    core_edge_ids = {m.edge_of(d) for d in core_cycle}
    core_region = _region_darts(m, core_cycle)
    n = len(walk)
    on_core = [m.edge_of(d) in core_edge_ids for d in walk]
    dang = []
    # rotate so walk starts on a core edge (exists since core is nonempty)
    start = next(j for j in range(n) if on_core[j])
    order = [(start + j) % n for j in range(n)]
    j = 0
    while j < n:
        p = order[j]
        if on_core[p]:
            j += 1
            continue
        # collect the maximal non-core interval
        k = j
        while k < n and not on_core[order[k]]:
            k += 1
        interval = [walk[order[t]] for t in range(j, k)]
        attach = m.vertex_of[interval[0]]
        piece_darts = darts_of_edge_set(m, interval)
        piece_region = _dangling_region(m, piece_darts, core_region)
        dmap, _ = _submap_from_darts(m, piece_region, interval[0], interval[0])
        dang.append(Dangling(dmap, attach, order[j], k - j))
        j = k

    core_root_idx = _core_root_walk_index(m, walk, on_core)
    return CoreDecomposition(core_map, core_root_idx,
                             [(c, first) for c, first, f in components], dang)


def _dangling_region(m, seed_darts, blocked_darts):
    """Darts reachable from the seeds via shared edges or shared origin
    vertices, never entering the blocked (core-region) dart set."""
    vo = m.vertex_of
    by_vertex = {}
    for d in range(m.n_darts):
        if d not in blocked_darts:
            by_vertex.setdefault(vo[d], []).append(d)
    region = set()
    stack = [d for d in seed_darts if d not in blocked_darts]
    region.update(stack)
    while stack:
        d = stack.pop()
        cands = [m.twin[d]] if m.twin[d] not in blocked_darts else []
        cands.extend(by_vertex.get(vo[d], ()))
        for e in cands:
            if e not in region:
                region.add(e)
                stack.append(e)
    return region


def _core_root_walk_index(m, walk, on_core):
    """Walk index of the core root edge.

    If the root edge lies on the core cycle, that's its own position;
    otherwise it is the last core edge traced before the walk enters the
    dangling containing the root (the edge 'immediately to the left').
    """
    n = len(walk)
    root_edge = m.edge_of(m.root)
    pos = next(i for i in range(n) if m.edge_of(walk[i]) == root_edge)
    if on_core[pos]:
        return pos
    i = pos
    while not on_core[i]:
        i = (i - 1) % n
    return i


def reassemble_check(dec: CoreDecomposition, parent: HalfEdgeMap) -> bool:
    """Check that core + danglings account for the parent exactly.

    The core's edges and each dangling's edges must partition the parent's
    edges; each dangling shares exactly its attachment vertex with the rest,
    and the dangling intervals tile the non-core part of the boundary walk.
    """
    if dec.core_is_trivial:
        edges_ok = (len(dec.dangling) == 1
                    and dec.dangling[0].map.n_edges == parent.n_edges)
        return edges_ok
    total_edges = dec.core.n_edges + sum(d.map.n_edges for d in dec.dangling)
    if total_edges != parent.n_edges:
        return False
    total_verts = dec.core.n_vertices + sum(d.map.n_vertices - 1
                                            for d in dec.dangling)
    if total_verts != parent.n_vertices:
        return False
    walk_len = parent.perimeter
    covered = dec.core.perimeter + sum(d.walk_len for d in dec.dangling)
    return covered == walk_len

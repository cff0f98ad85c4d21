"""
Ideal triangulations as pseudo-manifolds.

A triangulation is a set of tetrahedra whose 2-dimensional faces are glued
in pairs.  Faces of a tetrahedron are indexed 0..3, face f being opposite
vertex f.  A gluing of face f of tetrahedron t to face f' of t' is recorded
by the permutation p of {0,1,2,3} carrying vertex labels of t to vertex
labels of t'; a valid gluing has p[f] = f'.

Edge slots of a tetrahedron are indexed 0..5 in the order
(0,1),(0,2),(0,3),(1,2),(1,3),(2,3).

The text format accepted by ``parse_triangulation``::

    # comment
    tets: 2
    glue 0 0 -> 1 0 [0 1 3 2]
    ...
    peripheral 0 meridian 1 0 2 ... longitude 0 1 0 ...

Each ``glue`` line may be given once per face pair (the inverse gluing is
filled in) or for both sides (then the two must be mutually inverse).
``peripheral`` lines give two normal-curve weight vectors on the cusp's link
triangulation, indexed by link-edge id; they are consumed by the cusp
geometry layer.
"""

EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_SLOT = {pair: i for i, pair in enumerate(EDGE_PAIRS)}


def perm_sign(p):
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def perm_inverse(p):
    inv = [0] * 4
    for i in range(4):
        inv[p[i]] = i
    return tuple(inv)


def edge_slot(a, b):
    """Slot index of the tetrahedron edge with endpoints a, b."""
    return EDGE_SLOT[(a, b) if a < b else (b, a)]


class TriangulationError(ValueError):
    """Raised for malformed gluing data or file syntax."""


class EdgeClass:
    """An edge of the pseudo-manifold: a cyclic fan of tetrahedron edges.

    ``slots`` lists (tet, edge slot) in the cyclic order in which the fan of
    corners is traversed when walking once around the edge.  ``directed``
    holds the corresponding ordered vertex pairs, tracked consistently
    through the gluings, so directed[i] orients slot i compatibly with its
    neighbours.  ``orientation_preserving`` is False when walking once
    around the edge returns with the ends of the edge exchanged.
    """

    def __init__(self, index, slots, directed, orientation_preserving):
        self.index = index
        self.slots = slots
        self.directed = directed
        self.orientation_preserving = orientation_preserving

    @property
    def valence(self):
        return len(self.slots)

    def __repr__(self):
        return "EdgeClass(%d, valence %d)" % (self.index, self.valence)


class VertexClass:
    """An ideal vertex: the set of tetrahedron corners identified to it."""

    def __init__(self, index, corners):
        self.index = index
        self.corners = corners

    def __repr__(self):
        return "VertexClass(%d, %d corners)" % (self.index, len(self.corners))


class LinkTriangle:
    """One triangle of a vertex link, cut from the corner (tet, vertex).

    The three sides lie on the three faces of the tetrahedron containing
    the corner vertex, and are indexed by face number.  The three corners
    of the triangle sit on the tetrahedron edges at the vertex and are
    indexed by the other endpoint of that edge.
    """

    def __init__(self, index, tet, vertex):
        self.index = index
        self.tet = tet
        self.vertex = vertex
        self.faces = tuple(f for f in range(4) if f != vertex)

    def __repr__(self):
        return "LinkTriangle(%d: tet %d, vertex %d)" % (
            self.index, self.tet, self.vertex)


class CuspLink:
    """The triangulated link of an ideal vertex.

    Attributes:
        vertex_class: the VertexClass this link surrounds.
        triangles: list of LinkTriangle, one per corner in the class.
        triangle_index: maps (tet, vertex) -> position in ``triangles``.
        side_gluing: maps (tet, vertex, face) to the identified side
            (tet', vertex', face') across the face pairing.
        edges: list of frozensets of sides (one or two members); the id of a
            link edge is its position here.
        edge_of_side: maps a side triple to its link-edge id.
        link_vertices: list of frozensets of corner triples (tet, vertex,
            other-endpoint); one per end of an edge class at this cusp.
        vertex_of_corner: maps a corner triple to its link-vertex id.
        euler_characteristic: V - E + F of the link surface.
    """

    def __init__(self, triangulation, vertex_class):
        self.triangulation = triangulation
        self.vertex_class = vertex_class
        self.index = vertex_class.index
        self.triangles = []
        self.triangle_index = {}
        for i, (tet, v) in enumerate(vertex_class.corners):
            tri = LinkTriangle(i, tet, v)
            self.triangles.append(tri)
            self.triangle_index[(tet, v)] = i

        # Side identifications induced by the face gluings.
        self.side_gluing = {}
        for tet, v in vertex_class.corners:
            for f in range(4):
                if f == v:
                    continue
                t2, f2, p = triangulation.gluing[(tet, f)]
                self.side_gluing[(tet, v, f)] = (t2, p[v], p[f])

        # Link edges: orbits of sides under the pairing (size 2, or 1 if a
        # side is identified with itself, which validate rejects via
        # orientability).
        self.edges = []
        self.edge_of_side = {}
        for side in sorted(self.side_gluing):
            if side in self.edge_of_side:
                continue
            other = self.side_gluing[side]
            eid = len(self.edges)
            members = frozenset((side, other))
            self.edges.append(members)
            self.edge_of_side[side] = eid
            self.edge_of_side[other] = eid

        # Link vertices: orbits of (tet, vertex, other endpoint) under the
        # gluings, i.e. the ends of edge classes at this cusp.
        corners = []
        for tet, v in vertex_class.corners:
            for w in range(4):
                if w != v:
                    corners.append((tet, v, w))
        parent = {c: c for c in corners}

        def find(c):
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        for tet, v, w in corners:
            for f in range(4):
                if f == v or f == w:
                    continue
                t2, f2, p = triangulation.gluing[(tet, f)]
                a, b = find((tet, v, w)), find((t2, p[v], p[w]))
                if a != b:
                    parent[a] = b
        orbits = {}
        for c in sorted(corners):
            orbits.setdefault(find(c), []).append(c)
        self.link_vertices = [frozenset(v) for _, v in sorted(
            orbits.items(), key=lambda kv: min(kv[1]))]
        self.vertex_of_corner = {}
        for vid, members in enumerate(self.link_vertices):
            for c in members:
                self.vertex_of_corner[c] = vid

        v_count = len(self.link_vertices)
        f_count = len(self.triangles)
        e_count = len(self.edges)
        self.euler_characteristic = v_count - e_count + f_count

    def is_torus(self):
        """True when the link is a closed orientable genus-1 surface.

        Closedness holds by construction (every side has a mate);
        orientability is inherited from the ambient triangulation, so for
        oriented triangulations chi == 0 suffices.
        """
        if any(len(e) != 2 for e in self.edges):
            return False
        return self.euler_characteristic == 0

    def side_endpoints(self, side):
        """The two corner triples at the ends of a side (t, v, f)."""
        tet, v, f = side
        w1, w2 = [w for w in range(4) if w != v and w != f]
        return (tet, v, w1), (tet, v, w2)

    def __repr__(self):
        return "CuspLink(vertex %d, %d triangles, chi=%d)" % (
            self.index, len(self.triangles), self.euler_characteristic)


class IdealTriangulation:
    """Tetrahedra with face pairings, plus derived class data.

    The derived edge classes, vertex classes, cusp links and tetrahedron
    orientations are computed once at construction and never mutated.
    """

    def __init__(self, tet_count, gluings, peripheral_weights=None):
        if tet_count < 1:
            raise TriangulationError("triangulation needs at least one "
                                     "tetrahedron")
        self.tet_count = tet_count
        self.gluing = {}
        for (t, f), (t2, f2, p) in gluings.items():
            self._add_gluing(t, f, t2, f2, tuple(p))
        for t in range(tet_count):
            for f in range(4):
                if (t, f) not in self.gluing:
                    raise TriangulationError(
                        "face %d of tetrahedron %d is unglued" % (f, t))
        # Raw peripheral curve data from the file: cusp -> (meridian
        # weights, longitude weights), indexed by link edge id.
        self.peripheral_weights = peripheral_weights or {}

        self.edge_classes = self._build_edge_classes()
        self.vertex_classes = self._build_vertex_classes()
        self.cusp_links = [CuspLink(self, vc) for vc in self.vertex_classes]
        self.orientations = self._orient()

        self._edge_of_slot = {}
        for ec in self.edge_classes:
            for slot in ec.slots:
                self._edge_of_slot[slot] = ec.index

    # -- construction helpers -------------------------------------------

    def _add_gluing(self, t, f, t2, f2, p):
        for tet, face in ((t, f), (t2, f2)):
            if not (0 <= tet < self.tet_count and 0 <= face < 4):
                raise TriangulationError(
                    "gluing references tetrahedron %d face %d" % (tet, face))
        if sorted(p) != [0, 1, 2, 3]:
            raise TriangulationError("bad vertex permutation %r" % (p,))
        if p[f] != f2:
            raise TriangulationError(
                "permutation %r does not carry face %d to face %d"
                % (p, f, f2))
        if (t, f) == (t2, f2):
            raise TriangulationError(
                "face %d of tetrahedron %d glued to itself" % (f, t))
        inv = perm_inverse(p)
        for key, val in (((t, f), (t2, f2, p)), ((t2, f2), (t, f, inv))):
            if key in self.gluing and self.gluing[key] != val:
                raise TriangulationError(
                    "face %d of tetrahedron %d glued twice" % (key[1], key[0]))
            self.gluing[key] = val

    def _build_edge_classes(self):
        classes = []
        seen = set()
        for t in range(self.tet_count):
            for a, b in EDGE_PAIRS:
                if (t, edge_slot(a, b)) in seen:
                    continue
                ec = self._walk_edge(t, a, b, len(classes))
                seen.update(ec.slots)
                classes.append(ec)
        return classes

    def _walk_edge(self, t, a, b, index):
        """Walk once around the edge (a,b) of tetrahedron t.

        From a tetrahedron we leave through one of the two faces containing
        the edge; the gluing carries the directed edge onward and the next
        exit face is the one not yet used.  The walk closes after exactly
        `valence` steps; if it returns with the edge direction reversed the
        edge neighbourhood is orientation-reversing.
        """
        start_slot = (t, edge_slot(a, b))
        slots = []
        directed = []
        # Leave through the larger-labelled face first; determinism only.
        cur_t, cur_a, cur_b = t, a, b
        exit_face = max(f for f in range(4) if f != cur_a and f != cur_b)
        preserving = True
        while True:
            slots.append((cur_t, edge_slot(cur_a, cur_b)))
            directed.append((cur_t, cur_a, cur_b))
            t2, f2, p = self.gluing[(cur_t, exit_face)]
            cur_t, cur_a, cur_b = t2, p[cur_a], p[cur_b]
            entry_face = f2
            exit_face = next(f for f in range(4)
                             if f not in (cur_a, cur_b, entry_face))
            if (cur_t, edge_slot(cur_a, cur_b)) == start_slot:
                if (cur_a, cur_b) != (a, b):
                    preserving = False
                break
        return EdgeClass(index, slots, directed, preserving)

    def _build_vertex_classes(self):
        corners = [(t, v) for t in range(self.tet_count) for v in range(4)]
        parent = {c: c for c in corners}

        def find(c):
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        for t, v in corners:
            for f in range(4):
                if f == v:
                    continue
                t2, f2, p = self.gluing[(t, f)]
                a, b = find((t, v)), find((t2, p[v]))
                if a != b:
                    parent[a] = b
        orbits = {}
        for c in corners:
            orbits.setdefault(find(c), []).append(c)
        classes = []
        for i, (_, members) in enumerate(
                sorted(orbits.items(), key=lambda kv: min(kv[1]))):
            classes.append(VertexClass(i, sorted(members)))
        return classes

    def _orient(self):
        """Assign +-1 to each tetrahedron so all gluings reverse induced
        boundary orientations, or None if impossible.

        A face pairing with permutation p is compatible with tetrahedron
        signs eps, eps' exactly when eps * eps' * sign(p) == -1.
        """
        eps = [0] * self.tet_count
        for start in range(self.tet_count):
            if eps[start]:
                continue
            eps[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for f in range(4):
                    t2, f2, p = self.gluing[(t, f)]
                    want = -perm_sign(p) * eps[t]
                    if eps[t2] == 0:
                        eps[t2] = want
                        stack.append(t2)
                    elif eps[t2] != want:
                        return None
        return eps

    # -- queries ----------------------------------------------------------

    @property
    def orientable(self):
        return self.orientations is not None

    def edge_class_of(self, tet, a, b):
        """The EdgeClass containing edge (a,b) of tetrahedron ``tet``."""
        return self.edge_classes[self._edge_of_slot[(tet, edge_slot(a, b))]]

    def vertex_links(self):
        return self.cusp_links

    def validate(self):
        """Check the pseudo-manifold against the hypotheses this toolkit
        needs: edge valences >= 3, orientability, all links tori.

        The essential-edges hypothesis (no edge nullhomotopic) has no
        algorithmic check here and is reported as an assumption.
        """
        violations = []
        for ec in self.edge_classes:
            if ec.valence < 3:
                violations.append(
                    "edge %d has valence %d < 3" % (ec.index, ec.valence))
            if not ec.orientation_preserving:
                violations.append(
                    "edge %d is orientation-reversing" % ec.index)
        if not self.orientable:
            violations.append("triangulation is not orientable")
        for link in self.cusp_links:
            if not link.is_torus():
                violations.append(
                    "cusp %d link is not a torus (chi=%d)"
                    % (link.index, link.euler_characteristic))
        return ValidationReport(self, violations)

    def __repr__(self):
        return "IdealTriangulation(%d tetrahedra, %d edges, %d cusps)" % (
            self.tet_count, len(self.edge_classes), len(self.vertex_classes))


class ValidationReport:
    assumptions = ("edges are essential (not checked algorithmically)",)

    def __init__(self, triangulation, violations):
        self.triangulation = triangulation
        self.violations = violations

    @property
    def ok(self):
        return not self.violations

    def lines(self):
        T = self.triangulation
        valences = ",".join(str(ec.valence) for ec in T.edge_classes)
        torus_cusps = sum(1 for c in T.cusp_links if c.is_torus())
        out = ["%d tets, %d edges (valence %s), %d torus cusp%s" % (
            T.tet_count, len(T.edge_classes), valences, torus_cusps,
            "" if torus_cusps == 1 else "s")]
        for v in self.violations:
            out.append("violation: " + v)
        for a in self.assumptions:
            out.append("assumption: " + a)
        return out


def parse_triangulation(text):
    """Parse the structured-text gluing format into an IdealTriangulation.

    Raises TriangulationError on syntax errors, missing or doubled
    gluings, non-involutive data, or a face glued to itself.
    """
    tet_count = None
    gluings = {}
    peripheral = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] in ("tets:", "tets"):
                if tet_count is not None:
                    raise TriangulationError("duplicate tets: line")
                tet_count = int(tokens[-1])
            elif tokens[0] == "glue":
                if len(tokens) < 10 or tokens[3] != "->":
                    raise TriangulationError("malformed glue line")
                t, f = int(tokens[1]), int(tokens[2])
                t2, f2 = int(tokens[4]), int(tokens[5])
                perm_tokens = [tok.strip("[]") for tok in tokens[6:]]
                perm = tuple(int(x) for x in perm_tokens if x)
                if len(perm) != 4:
                    raise TriangulationError("permutation needs 4 entries")
                key = (t, f)
                val = (t2, f2, perm)
                if key in gluings and gluings[key] != val:
                    raise TriangulationError(
                        "face %d of tetrahedron %d glued twice" % (f, t))
                gluings[key] = val
            elif tokens[0] == "peripheral":
                cusp = int(tokens[1])
                if tokens[2] != "meridian" or "longitude" not in tokens:
                    raise TriangulationError("malformed peripheral line")
                split = tokens.index("longitude")
                meridian = tuple(int(x) for x in tokens[3:split])
                longitude = tuple(int(x) for x in tokens[split + 1:])
                if cusp in peripheral:
                    raise TriangulationError(
                        "duplicate peripheral line for cusp %d" % cusp)
                peripheral[cusp] = (meridian, longitude)
            else:
                raise TriangulationError("unknown directive %r" % tokens[0])
        except TriangulationError:
            raise
        except (ValueError, IndexError) as exc:
            raise TriangulationError(
                "line %d: %s" % (lineno, exc)) from exc
    if tet_count is None:
        raise TriangulationError("missing tets: line")

    # Fill in inverse gluings so one line per face pair suffices, then let
    # the constructor check involutivity.
    complete = dict(gluings)
    for (t, f), (t2, f2, p) in gluings.items():
        back = (t2, f2)
        inv = (t, f, perm_inverse(p))
        if back in gluings and gluings[back] != inv:
            raise TriangulationError(
                "gluing of face %d of tetrahedron %d is not involutive"
                % (f, t))
        complete[back] = inv
    return IdealTriangulation(tet_count, complete,
                              peripheral_weights=peripheral)


def serialize_triangulation(T):
    """Inverse of parse_triangulation, emitting one line per face pair."""
    lines = ["tets: %d" % T.tet_count]
    seen = set()
    for t in range(T.tet_count):
        for f in range(4):
            if (t, f) in seen:
                continue
            t2, f2, p = T.gluing[(t, f)]
            seen.add((t, f))
            seen.add((t2, f2))
            lines.append("glue %d %d -> %d %d [%d %d %d %d]"
                         % (t, f, t2, f2, *p))
    for cusp in sorted(T.peripheral_weights):
        m, l = T.peripheral_weights[cusp]
        lines.append("peripheral %d meridian %s longitude %s" % (
            cusp, " ".join(map(str, m)), " ".join(map(str, l))))
    return "\n".join(lines) + "\n"

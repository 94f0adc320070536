"""Tagged arcs on the disc with n boundary marked points and one puncture.

Boundary positions are 0..n-1 counterclockwise, the puncture P sits in the
interior.  Three kinds of curve matter:

* ``chord(a, b)``: endpoints a, b on the boundary; the arc is determined up
  to homotopy by its endpoints and by which side of it the puncture lies.
  Canonically the stored orientation puts the puncture-free side on the
  counterclockwise walk a -> b, which must contain a marked point.
* ``radius(v, tag)``: the arc from v to P, tagged plain or notched at P.
* ``loop(v)``: the untagged loop based at v that encloses P.  It cuts out a
  once-punctured monogon, so it is never admissible, but the machinery that
  replaces conjugate pairs needs it as a first-class object.

Crossing numbers are computed in the branched double cover: a 2n-gon whose
vertex p+n is the second lift of p, with the centre O as the branch point.
A chord lifts to an antipodal pair of polygon chords, a radius to the
diameter through O, and crossing counts upstairs are halved.  Crossings at
O itself never count, which is what makes distinct radii disjoint.

Segment tracing builds the lifted tile complex explicitly (a rotation
system plus half-edge face extraction), routes the lift of an arc through
it by combinatorial nesting order, and folds faces back down through the
deck rotation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "PLAIN",
    "NOTCHED",
    "TaggedArc",
    "chord",
    "radius",
    "loop",
    "all_tagged_arcs",
    "arc_from_dict",
    "arc_to_dict",
    "compatible",
    "intersection",
    "intersection_number",
    "intersection_vector",
    "tagged_triangulations",
    "flip",
    "star",
    "is_permissible",
    "SegmentProfile",
    "trace_segments",
]

PLAIN = "plain"
NOTCHED = "notched"


@dataclass(frozen=True, order=True)
class TaggedArc:
    kind: str            # "chord" | "radius" | "loop"
    a: int               # chord start / radius vertex / loop base
    b: int = -1          # chord end (unused otherwise)
    tag: str = ""        # radius tag (unused otherwise)

    def underlying(self):
        """The untagged arc: conjugate radii collapse, everything else is itself."""
        if self.kind == "radius":
            return ("radius", self.a)
        if self.kind == "chord":
            return ("chord", self.a, self.b)
        return ("loop", self.a)

    def endpoints_boundary(self):
        if self.kind == "chord":
            return (self.a, self.b)
        return (self.a,)

    def incident_to_puncture(self):
        return self.kind == "radius"

    def __repr__(self):
        if self.kind == "chord":
            return f"chord({self.a},{self.b})"
        if self.kind == "radius":
            return f"radius({self.a},{self.tag})"
        return f"loop({self.a})"


def chord(a, b):
    """Chord whose puncture-free side is the ccw walk a -> b."""
    if a == b:
        raise ValueError("chord endpoints must differ")
    return TaggedArc("chord", a, b)


def radius(v, tag):
    if tag not in (PLAIN, NOTCHED):
        raise ValueError(f"tag must be {PLAIN!r} or {NOTCHED!r}")
    return TaggedArc("radius", v, tag=tag)


def loop(v):
    return TaggedArc("loop", v)


def _check_arc(arc, n):
    if not 0 <= arc.a < n:
        raise ValueError(f"position {arc.a} out of range for n={n}")
    if arc.kind == "chord":
        if not 0 <= arc.b < n:
            raise ValueError(f"position {arc.b} out of range for n={n}")
        if (arc.b - arc.a) % n < 2:
            raise ValueError(
                "chord is homotopic to a boundary segment: the puncture-free "
                "side must contain a marked point"
            )


def all_tagged_arcs(n):
    """Every admissible tagged arc: n(n-2) chords plus 2n tagged radii."""
    if n < 4:
        raise ValueError("the once-punctured disc model needs n >= 4")
    arcs = []
    for v in range(n):
        arcs.append(radius(v, PLAIN))
        arcs.append(radius(v, NOTCHED))
    for a in range(n):
        for length in range(2, n):
            arcs.append(chord(a, (a + length) % n))
    return sorted(arcs)


def arc_to_dict(arc):
    """JSON form; chord endpoints are listed with i < j and an explicit puncture side."""
    if arc.kind == "radius":
        return {"kind": "radius", "v": arc.a, "tag": arc.tag}
    if arc.kind == "loop":
        return {"kind": "loop", "v": arc.a}
    i, j = sorted((arc.a, arc.b))
    # puncture side of the ccw walk i -> j: true iff that walk is the
    # puncture side, i.e. the stored puncture-free walk is j -> i
    puncture_ccw = (i, j) != (arc.a, arc.b)
    return {"kind": "chord", "i": i, "j": j, "puncture_ccw": puncture_ccw}


def arc_from_dict(data, n):
    kind = data["kind"]
    if kind == "radius":
        arc = radius(int(data["v"]), data["tag"])
    elif kind == "loop":
        arc = loop(int(data["v"]))
    else:
        i, j = int(data["i"]), int(data["j"])
        arc = chord(j, i) if data.get("puncture_ccw", False) else chord(i, j)
    _check_arc(arc, n)
    return arc


# ---------------------------------------------------------------------------
# crossing numbers via the double cover


def _in_open_ccw(x, a, b, modulus):
    """x strictly inside the ccw interval (a, b)."""
    return 0 < (x - a) % modulus < (b - a) % modulus


def _chord_lifts(arc, n):
    """The two 2n-gon chords covering a boundary chord."""
    length = (arc.b - arc.a) % n
    p = arc.a
    return ((p, (p + length) % (2 * n)), ((p + n) % (2 * n), (p + length + n) % (2 * n)))


def _segments_cross(p, q, r, s, modulus):
    """Strict interleaving of chords (p,q), (r,s) on a cycle; shared endpoints never cross."""
    return (_in_open_ccw(r, p, q, modulus) and _in_open_ccw(s, q, p, modulus)) or (
        _in_open_ccw(s, p, q, modulus) and _in_open_ccw(r, q, p, modulus)
    )


@lru_cache(maxsize=None)
def _int_circ_cached(ua, ub, n):
    kind_a, kind_b = ua[0], ub[0]
    if kind_a == "loop" or kind_b == "loop":
        # orient so the loop is first
        if kind_a != "loop":
            return _int_circ_cached(ub, ua, n)
        v = ua[1]
        if kind_b == "loop":
            return 0 if ub[1] == v else 2
        if kind_b == "radius":
            return 0 if ub[1] == v else 1
        # loop vs chord: twice the crossing of the enclosed radius
        return 2 * _int_circ_cached(("radius", v), ub, n)
    if kind_a == "radius" and kind_b == "radius":
        return 0  # crossings at the branch point do not count
    if kind_a == "radius" or kind_b == "radius":
        if kind_a == "radius":
            v, ch = ua[1], ub
        else:
            v, ch = ub[1], ua
        # radius crossed once iff v lies strictly inside the puncture-free side
        return 1 if _in_open_ccw(v, ch[1], ch[2], n) else 0
    # chord vs chord: count lift crossings in the 2n-gon, halve
    la = _chord_lifts(TaggedArc("chord", ua[1], ua[2]), n)
    lb = _chord_lifts(TaggedArc("chord", ub[1], ub[2]), n)
    crossings = sum(
        _segments_cross(p, q, r, s, 2 * n) for (p, q) in la for (r, s) in lb
    )
    assert crossings % 2 == 0
    return crossings // 2


def intersection_number(alpha, beta, n):
    """Minimal crossing number of the underlying untagged arcs."""
    _check_arc(alpha, n)
    _check_arc(beta, n)
    return _int_circ_cached(alpha.underlying(), beta.underlying(), n)


def intersection(a, beta, n):
    """Int(a|beta): crossings, plus -1 when the untagged arcs agree, plus
    one for each end of beta meeting an endpoint of a with the opposite tag.

    The first argument must not be a loop; arcs of a tagged triangulation
    never are, and that keeps the loop-based component out of play.
    """
    if a.kind == "loop":
        raise ValueError("intersection is defined here for loop-free first arguments")
    total = intersection_number(a, beta, n)
    if a.underlying() == beta.underlying():
        total -= 1
    if a.kind == "radius" and beta.kind == "radius" and a.tag != beta.tag:
        total += 1
    return total


def _compatible_ext(alpha, beta, n):
    """Compatibility including loops (needed for multiset machinery)."""
    if intersection_number(alpha, beta, n) != 0:
        return False
    if alpha.underlying() == beta.underlying():
        # boundary ends are always plain, so one matching end always exists
        return True
    if alpha.kind == "radius" and beta.kind == "radius":
        return alpha.tag == beta.tag
    return True


def compatible(alpha, beta, n):
    """Tagged-arc compatibility; rejects loops, which are not admissible arcs."""
    if alpha.kind == "loop" or beta.kind == "loop":
        raise ValueError("compatibility is defined for tagged arcs, not loops")
    return _compatible_ext(alpha, beta, n)


# ---------------------------------------------------------------------------
# triangulations and flips


@lru_cache(maxsize=None)
def tagged_triangulations(n):
    """All maximal sets of pairwise compatible admissible tagged arcs.

    Bron-Kerbosch with pivoting on the compatibility graph; every maximal
    clique must have exactly n arcs.
    """
    arcs = all_tagged_arcs(n)
    m = len(arcs)
    adj = [set() for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if compatible(arcs[i], arcs[j], n):
                adj[i].add(j)
                adj[j].add(i)
    cliques = []

    def bk(r, p, x):
        if not p and not x:
            cliques.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            bk(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bk(set(), set(range(m)), set())
    out = sorted(tuple(arcs[i] for i in cl) for cl in cliques)
    for t in out:
        if len(t) != n:
            raise AssertionError("maximal compatible set of unexpected size")
    return tuple(out)


def flip(triangulation, k, n):
    """Replace position k by the unique other compatible completion."""
    t = tuple(triangulation)
    rest = t[:k] + t[k + 1:]
    old = t[k]
    replacement = None
    for candidate in all_tagged_arcs(n):
        if candidate == old or candidate in rest:
            continue
        if all(compatible(candidate, other, n) for other in rest):
            if replacement is not None:
                raise AssertionError("flip found two replacements; model bug")
            replacement = candidate
    if replacement is None:
        raise AssertionError("flip found no replacement; model bug")
    return t[:k] + (replacement,) + t[k + 1:]


# ---------------------------------------------------------------------------
# multisets

def _as_multiset(m):
    if isinstance(m, dict):
        out = Counter()
        for arc, mult in m.items():
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult:
                out[arc] += mult
        return out
    return Counter(m)


def intersection_vector(triangulation, multiset, n):
    """(Int(a|M))_{a in T}, coordinates in triangulation order."""
    m = _as_multiset(multiset)
    return tuple(
        sum(mult * intersection(a, arc, n) for arc, mult in m.items())
        for a in triangulation
    )


def star(multiset, triangulation, n):
    """Replace each conjugate pair of radii by the loop wrapping its plain member."""
    m = _as_multiset(multiset)
    tset = set(triangulation)
    if any(arc in tset for arc in m):
        raise ValueError("star is defined for multisets disjoint from the triangulation")
    out = Counter(m)
    for v in range(n):
        pairs = min(out[radius(v, PLAIN)], out[radius(v, NOTCHED)])
        if pairs:
            out[radius(v, PLAIN)] -= pairs
            out[radius(v, NOTCHED)] -= pairs
            out[loop(v)] += pairs
    return Counter({arc: mult for arc, mult in out.items() if mult})


def is_permissible(multiset, triangulation, n):
    """P1 pairwise compatible, P2 no conjugate pair, P3 no loop wrapping a
    triangulation arc, P4 disjoint from the triangulation."""
    m = _as_multiset(multiset)
    arcs = list(m)
    for i, x in enumerate(arcs):
        for y in arcs[i:]:
            if not _compatible_ext(x, y, n):
                return False
    for v in range(n):
        if m[radius(v, PLAIN)] and m[radius(v, NOTCHED)]:
            return False
    wrapped = {a.underlying() for a in triangulation if a.kind == "radius"}
    for arc in arcs:
        if arc.kind == "loop" and ("radius", arc.a) in wrapped:
            return False
    tset = set(triangulation)
    return not any(arc in tset for arc in arcs)


# ---------------------------------------------------------------------------
# the lifted tile complex and segment tracing


class SegmentProfile:
    """Multiset of irreducible segment descriptors of one arc (or multiset).

    A descriptor is (tile id, pair of boundary items, tag at the puncture or
    None); boundary items are the tile sides crossed or the corner instances
    where the arc ends.  The pair is stored sorted: arcs carry no preferred
    orientation.
    """

    def __init__(self, descriptors=None):
        self.descriptors = Counter(descriptors or {})

    def total(self):
        return sum(self.descriptors.values())

    def per_tile(self):
        out = {}
        for (tile, items, tag), mult in self.descriptors.items():
            out.setdefault(tile, Counter())[(items, tag)] += mult
        return out

    def __add__(self, other):
        return SegmentProfile(self.descriptors + other.descriptors)

    def scaled(self, mult):
        return SegmentProfile(Counter({d: c * mult for d, c in self.descriptors.items()}))

    def __eq__(self, other):
        return isinstance(other, SegmentProfile) and self.descriptors == other.descriptors

    def __repr__(self):
        return f"SegmentProfile({dict(self.descriptors)})"


_O = "O"  # the branch point / puncture upstairs


class _LiftComplex:
    """Planar subdivision of the 2n-gon by the lifts of a tagged triangulation."""

    def __init__(self, triangulation, n):
        self.n = n
        self.n2 = 2 * n
        self.t = tuple(triangulation)
        self._build_edges()
        self._build_rotations()
        self._build_faces()
        self._fold()

    # -- construction ----------------------------------------------------

    def _build_edges(self):
        n, n2 = self.n, self.n2
        self.edges = []  # (u, w, label, sub) with sub splitting doubled radii
        radii_here = {}
        for arc in self.t:
            if arc.kind == "radius":
                radii_here.setdefault(arc.a, []).append(arc)
        self.radii_by_vertex = radii_here
        for p in range(n2):
            self.edges.append((p, (p + 1) % n2, ("bd", p % n), 0))
        for arc in self.t:
            if arc.kind == "chord":
                for (p, q) in _chord_lifts(arc, n):
                    self.edges.append((p, q, arc, 0))
            else:
                doubled = len(radii_here[arc.a]) == 2
                # sub orders parallel copies around the strip: the plain copy
                # sits on the ccw side of the walk v -> O
                sub = 0
                if doubled:
                    sub = -1 if arc.tag == PLAIN else 1
                for v in (arc.a, arc.a + n):
                    self.edges.append((v % n2, _O, arc, sub))

    def _build_rotations(self):
        n2 = self.n2
        incident = {}
        for eid, (u, w, label, sub) in enumerate(self.edges):
            incident.setdefault(u, []).append(eid)
            incident.setdefault(w, []).append(eid)

        def key(eid, vertex):
            u, w, label, sub = self.edges[eid]
            other = w if vertex == u else u
            if vertex == _O:
                return (other, -sub)
            if other == _O:
                return (n2 // 2, sub)
            return ((other - vertex) % n2, 0)

        self.rot = {}
        for vertex, eids in incident.items():
            self.rot[vertex] = sorted(eids, key=lambda e: key(e, vertex))
        self._rotkey = key

    def _other_end(self, eid, vertex):
        u, w, _, _ = self.edges[eid]
        return w if vertex == u else u

    def _build_faces(self):
        # half-edge = (vertex, eid) meaning the directed edge leaving vertex
        next_he = {}
        for vertex, eids in self.rot.items():
            deg = len(eids)
            for idx, eid in enumerate(eids):
                # the face to the left of (other -> vertex) continues along
                # the rotation predecessor of eid at vertex
                prev = eids[(idx - 1) % deg]
                next_he[(self._other_end(eid, vertex), eid)] = (vertex, prev)
        faces = []
        seen = set()
        for he in next_he:
            if he in seen:
                continue
            walk = []
            cur = he
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                cur = next_he[cur]
            if cur != he:
                raise AssertionError("face walk did not close")
            faces.append(tuple(walk))
        # outer face: the unique walk made of boundary edges only
        outer = None
        for fi, walk in enumerate(faces):
            if len(walk) == self.n2 and all(
                isinstance(self.edges[eid][2], tuple) and self.edges[eid][2][0] == "bd"
                for _, eid in walk
            ):
                outer = fi
        if outer is None:
            raise AssertionError("outer face not found")
        self.faces = faces
        self.outer_face = outer
        self.face_of = {}
        for fi, walk in enumerate(faces):
            for he in walk:
                self.face_of[he] = fi

    def _label_key(self, label):
        if isinstance(label, TaggedArc):
            return ("arc", label.kind, label.a, label.b, label.tag)
        return label  # ("bd", k)

    def _fold(self):
        """Deck rotation p -> p+n; pair faces and compute downstairs tile data."""
        n, n2 = self.n, self.n2
        edge_index = {}
        for eid, (u, w, label, sub) in enumerate(self.edges):
            edge_index[(u, w, self._label_key(label), sub)] = eid
            edge_index[(w, u, self._label_key(label), sub)] = eid

        def sigma_v(v):
            return _O if v == _O else (v + n) % n2

        self.sigma_edge = {}
        for eid, (u, w, label, sub) in enumerate(self.edges):
            img = edge_index[(sigma_v(u), sigma_v(w), self._label_key(label), sub)]
            self.sigma_edge[eid] = img

        face_key = {}
        for fi, walk in enumerate(self.faces):
            face_key[frozenset(eid for _, eid in walk)] = fi
        self.sigma_face = {}
        for fi, walk in enumerate(self.faces):
            img_edges = frozenset(self.sigma_edge[eid] for _, eid in walk)
            self.sigma_face[fi] = face_key[img_edges]
        for fi, img in self.sigma_face.items():
            if fi != self.outer_face and img == fi:
                raise AssertionError("deck transformation fixed an interior face")

        # downstairs tile ids and corner items per face
        self.tile_of_face = {}
        self.corner_items = {}   # (face, vertex, eid_in, eid_out) -> item
        self.side_item = {}      # eid -> item
        for eid, (u, w, label, sub) in enumerate(self.edges):
            self.side_item[eid] = ("side", self._label_key(label))
        for fi, walk in enumerate(self.faces):
            if fi == self.outer_face:
                continue
            labels = sorted(self._label_key(self.edges[eid][2]) for _, eid in walk)
            self.tile_of_face[fi] = tuple(labels)
            # corner between consecutive walk steps: arrive via eid_in at the
            # next step's source vertex, leave via eid_out
            size = len(walk)
            occur = Counter()
            for idx in range(size):
                v_in, eid_in = walk[idx]
                vertex, eid_out = walk[(idx + 1) % size]
                down_v = "P" if vertex == _O else vertex % n
                base = (
                    down_v,
                    frozenset(
                        (self._label_key(self.edges[eid_in][2]),
                         self._label_key(self.edges[eid_out][2]))
                    ),
                )
                item = ("corner", base, occur[base])
                occur[base] += 1
                self.corner_items[(fi, vertex, eid_in, eid_out)] = item
        # sanity: paired faces present identical downstairs data
        corner_sets = {}
        for (fi, _v, _ei, _eo), item in self.corner_items.items():
            corner_sets.setdefault(fi, Counter())[item] += 1
        for fi in self.tile_of_face:
            fj = self.sigma_face[fi]
            if self.tile_of_face[fi] != self.tile_of_face[fj]:
                raise AssertionError("deck-paired faces disagree on tile id")
            if corner_sets.get(fi) != corner_sets.get(fj):
                raise AssertionError("deck-paired faces disagree on corner items")

    # -- queries ----------------------------------------------------------

    def wedge(self, vertex, direction_key):
        """Face and corner item of the angular sector containing direction_key."""
        eids = self.rot[vertex]
        keys = [self._rotkey(e, vertex) for e in eids]
        idx_hi = None
        for i, k in enumerate(keys):
            if k > direction_key:
                idx_hi = i
                break
        if idx_hi is None:
            idx_hi = 0
        idx_lo = (idx_hi - 1) % len(eids)
        e_lo, e_hi = eids[idx_lo], eids[idx_hi]
        face = self.face_of[(vertex, e_lo)]
        item = self.corner_items.get((face, vertex, e_hi, e_lo))
        if item is None:
            raise AssertionError("wedge corner missing from face data")
        return face, item

    def cross(self, face, eid):
        """The face on the other side of edge eid."""
        u, w, _, _ = self.edges[eid]
        f1, f2 = self.face_of[(u, eid)], self.face_of[(w, eid)]
        if face == f1:
            return f2
        if face == f2:
            return f1
        raise AssertionError("crossing an edge not on the current face")

    def tile(self, face):
        return self.tile_of_face[face]


def _route_descriptors(cx, start, end, crossings, tag):
    """Fold a routed lift into downstairs descriptors.

    start/end are (vertex, direction_key); crossings is the ordered list of
    crossed edge ids.
    """
    face, item = cx.wedge(*start)
    items = [item]
    faces = [face]
    for eid in crossings:
        items.append(cx.side_item[eid])
        face = cx.cross(face, eid)
        faces.append(face)
        items.append(cx.side_item[eid])
    end_face, end_item = cx.wedge(*end)
    if end_face != faces[-1]:
        raise AssertionError("routed lift did not reach its target wedge")
    items.append(end_item)
    descriptors = Counter()
    for i, face in enumerate(faces):
        first, second = items[2 * i], items[2 * i + 1]
        pair = tuple(sorted((first, second), key=repr))
        seg_tag = None
        if tag and any(it[0] == "corner" and it[1][0] == "P" for it in (first, second)):
            seg_tag = tag
        descriptors[(cx.tile(face), pair, seg_tag)] += 1
    return SegmentProfile(descriptors)


def _sorted_chord_crossings(cx, crossed, anchor):
    """Order crossed chord-lift edges by nesting distance from the anchor vertex."""
    def side_size(eid):
        p, q, _, _ = cx.edges[eid]
        if _in_open_ccw(anchor, p, q, cx.n2):
            return (q - p) % cx.n2 - 1
        return (p - q) % cx.n2 - 1
    return sorted(crossed, key=side_size)


def trace_segments(triangulation, gamma, n):
    """Walk gamma through the tiles of the triangulation.

    Returns the multiset of irreducible segment descriptors; the descriptor
    count always equals 1 + sum of crossing numbers with the triangulation.
    """
    t = tuple(triangulation)
    if gamma in t:
        raise ValueError("trace_segments expects an arc outside the triangulation")
    _check_arc(gamma, n)
    cx = _get_complex(t, n)
    n2 = 2 * n

    chord_eids = [
        eid for eid, (u, w, label, sub) in enumerate(cx.edges)
        if isinstance(label, TaggedArc) and label.kind == "chord"
    ]
    spoke_eids = [
        eid for eid, (u, w, label, sub) in enumerate(cx.edges)
        if isinstance(label, TaggedArc) and label.kind == "radius"
    ]

    if gamma.kind == "chord":
        c = gamma.a
        chat = (c + (gamma.b - gamma.a) % n) % n2
        crossings = []
        for eid in chord_eids:
            p, q, _, _ = cx.edges[eid]
            if _segments_cross(p, q, c, chat, n2):
                # key: chords before the branch point sector, then spokes,
                # then chords beyond; nesting size orders within each band
                p_, q_ = p, q
                if _in_open_ccw(c, p_, q_, n2):
                    side = (q_ - p_) % n2 - 1
                    o_in = False  # c on the short side, O beyond
                else:
                    side = (p_ - q_) % n2 - 1
                    o_in = True
                crossings.append(((2 if o_in else 0, side, 0, 0), eid))
        for eid in spoke_eids:
            u, w, label, sub = cx.edges[eid]
            v = u if w == _O else w
            if _in_open_ccw(v, c, chat, n2):
                # entry side decides which parallel copy is met first
                sub_order = sub if _in_open_ccw(c, v, (v + n) % n2, n2) else -sub
                crossings.append(((1, (v - c) % n2, sub_order, 0), eid))
        ordered = [eid for _, eid in sorted(crossings)]
        start = (c, ((chat - c) % n2, 0))
        end = (chat, ((c - chat) % n2, 0))
        return _route_descriptors(cx, start, end, ordered, None)

    if gamma.kind == "radius":
        v = gamma.a
        if v in cx.radii_by_vertex:
            return _parallel_radius_profile(cx, gamma, n)
        crossed = [
            eid for eid in chord_eids
            if _in_open_ccw(v, cx.edges[eid][0], cx.edges[eid][1], n2)
        ]
        ordered = _sorted_chord_crossings(cx, crossed, v)
        start = (v, (n, 0))
        end = (_O, (v, 0))
        return _route_descriptors(cx, start, end, ordered, gamma.tag)

    # loop: from u around the branch point to u+n, swerving counterclockwise
    u = gamma.a
    un = (u + n) % n2
    phase1 = _sorted_chord_crossings(
        cx,
        [eid for eid in chord_eids if _in_open_ccw(u, cx.edges[eid][0], cx.edges[eid][1], n2)],
        u,
    )
    swerve = []
    for eid in spoke_eids:
        a, b, label, sub = cx.edges[eid]
        v = a if b == _O else b
        if _in_open_ccw(v, u, un, n2):
            # a ccw sweep around O meets the notched copy of a doubled
            # radius first (it leans to the cw side of the walk v -> O)
            swerve.append((((v - u) % n2, -sub), eid))
    phase2 = [eid for _, eid in sorted(swerve)]
    phase3 = list(
        reversed(
            _sorted_chord_crossings(
                cx,
                [eid for eid in chord_eids if _in_open_ccw(un, cx.edges[eid][0], cx.edges[eid][1], n2)],
                un,
            )
        )
    )
    start = (u, (n, -2))
    end = (un, (n, 2))
    return _route_descriptors(cx, start, end, phase1 + phase2 + phase3, None)


def _parallel_radius_profile(cx, gamma, n):
    """A radius parallel to a triangulation radius: one corner-to-corner
    segment, canonically assigned to the tile on the ccw side."""
    v = gamma.a
    start = (v, (n, -2))
    end = (_O, (v, 2))
    return _route_descriptors(cx, start, end, [], gamma.tag)


_COMPLEX_CACHE = {}


def _get_complex(t, n):
    key = (t, n)
    if key not in _COMPLEX_CACHE:
        _COMPLEX_CACHE[key] = _LiftComplex(t, n)
    return _COMPLEX_CACHE[key]


def trace_multiset(triangulation, multiset, n):
    """Sum of segment profiles over a multiset with multiplicities."""
    m = _as_multiset(multiset)
    out = SegmentProfile()
    for arc, mult in sorted(m.items()):
        out = out + trace_segments(triangulation, arc, n).scaled(mult)
    return out

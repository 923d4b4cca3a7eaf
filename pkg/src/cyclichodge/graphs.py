"""Marked multigraphs: the combinatorial side of the contraction engine.

A graph has numbered vertices, marked edges (loops and parallel edges
allowed) and marked leaves.  Edge marks name the bivector placed on the
edge; leaf marks name the vector placed on the leaf:

  edge marks   GG (G_- G_+), IDLOOP (identity on a loop, the handle
               carrying the 1/12-weight), ID (identity), PI0, QGP (Q G_+),
               GPQ (G_+ Q), GP, GM
  leaf marks   E<k>  the level-k coupling vector sum_i e_i T[k,i]
               UNIT  the algebra unit
               B<i>  the i-th basis vector (1-based), for pinning tests

Vertices are 0-based internally and 1-based in JSON.  Edge k owns
half-edges 2k (at the lower-numbered endpoint) and 2k+1; leaf j owns
half-edge 2*n_edges + j.
"""

from __future__ import annotations

import json
import re
from itertools import permutations, product

EDGE_MARKS = ("GG", "IDLOOP", "ID", "PI0", "QGP", "GPQ", "GP", "GM")

_LEAF_RE = re.compile(r"^(E(?:0|[1-9]\d*)|UNIT|B[1-9]\d*)$")


def leaf_level(mark):
    """Arrow level of an E<k> leaf mark, else None."""
    if mark.startswith("E"):
        return int(mark[1:])
    return None


def leaf_basis_index(mark):
    """0-based basis index of a B<i> leaf mark, else None."""
    if mark.startswith("B"):
        return int(mark[1:]) - 1
    return None


class MarkedGraph:
    """Immutable-by-convention marked multigraph."""

    __slots__ = ("n_vertices", "edges", "leaves")

    def __init__(self, n_vertices, edges, leaves=()):
        if not isinstance(n_vertices, int) or n_vertices < 1:
            raise ValueError("need at least one vertex")
        norm_edges = []
        for (u, v, mark) in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge endpoint out of range: {(u, v, mark)}")
            if mark not in EDGE_MARKS:
                raise ValueError(f"unknown edge mark {mark!r}")
            if mark == "IDLOOP" and u != v:
                raise ValueError("IDLOOP must be a loop")
            norm_edges.append((min(u, v), max(u, v), mark))
        norm_leaves = []
        for (v, mark) in leaves:
            if not 0 <= v < n_vertices:
                raise ValueError(f"leaf vertex out of range: {(v, mark)}")
            if not _LEAF_RE.match(mark):
                raise ValueError(f"unknown leaf mark {mark!r}")
            norm_leaves.append((v, mark))
        self.n_vertices = n_vertices
        self.edges = tuple(norm_edges)
        self.leaves = tuple(norm_leaves)

    # -- half-edge geometry ------------------------------------------------

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_leaves(self):
        return len(self.leaves)

    @property
    def n_half_edges(self):
        return 2 * self.n_edges + self.n_leaves

    def he_vertex(self, h):
        if h < 2 * self.n_edges:
            u, v, _ = self.edges[h // 2]
            return u if h % 2 == 0 else v
        return self.leaves[h - 2 * self.n_edges][0]

    def vertex_germs(self, v):
        """Half-edges at v, ascending (both halves of a loop included)."""
        return tuple(h for h in range(self.n_half_edges) if self.he_vertex(h) == v)

    def degree(self, v):
        return len(self.vertex_germs(v))

    def leaf_marks_at(self, v):
        return tuple(sorted(mark for (w, mark) in self.leaves if w == v))

    def loop_marks_at(self, v):
        return tuple(sorted(mark for (a, b, mark) in self.edges if a == b == v))

    def vertex_profile(self, v):
        """(own_handles, other_germs): IDLOOP count and remaining degree."""
        own = sum(1 for (a, b, mark) in self.edges
                  if a == b == v and mark == "IDLOOP")
        return own, self.degree(v) - 2 * own

    # -- global invariants --------------------------------------------------

    def is_connected(self):
        seen = {0}
        stack = [0]
        adj = [[] for _ in range(self.n_vertices)]
        for (u, v, _) in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    def genus(self):
        """First Betti number; defined for connected graphs only."""
        if not self.is_connected():
            raise ValueError("genus is defined for connected graphs")
        return self.n_edges - self.n_vertices + 1

    # -- relabeling and isomorphism -----------------------------------------

    def relabel(self, perm):
        """New graph with vertex v renamed perm[v]."""
        if sorted(perm) != list(range(self.n_vertices)):
            raise ValueError("perm must be a permutation of the vertices")
        return MarkedGraph(
            self.n_vertices,
            [(perm[u], perm[v], m) for (u, v, m) in self.edges],
            [(perm[v], m) for (v, m) in self.leaves])

    def _refined_classes(self):
        """1-dimensional color refinement; returns (ranks, ordered classes).

        Ranks are comparable across isomorphic graphs: each round sorts
        the (previous rank, neighborhood multiset) signatures and
        renumbers, and the signatures are built only from marks and
        previous ranks.
        """
        V = self.n_vertices
        sig = [(self.leaf_marks_at(v), self.loop_marks_at(v)) for v in range(V)]
        ranks = self._compress(sig)
        for _ in range(V):
            sig = []
            for v in range(V):
                nb = []
                for (a, b, mark) in self.edges:
                    if a == b:
                        continue
                    if a == v:
                        nb.append((mark, ranks[b]))
                    elif b == v:
                        nb.append((mark, ranks[a]))
                sig.append((ranks[v], tuple(sorted(nb))))
            new_ranks = self._compress(sig)
            if new_ranks == ranks:
                break
            ranks = new_ranks
        classes = {}
        for v in range(V):
            classes.setdefault(ranks[v], []).append(v)
        ordered = [classes[r] for r in sorted(classes)]
        return ranks, ordered

    @staticmethod
    def _compress(sig):
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        return [order[s] for s in sig]

    def _orderings(self):
        _, classes = self._refined_classes()
        for combo in product(*(permutations(c) for c in classes)):
            order = [v for cls in combo for v in cls]
            yield order

    def _encode(self, order):
        newid = {v: i for i, v in enumerate(order)}
        verts = tuple((self.leaf_marks_at(v),) for v in order)
        edges = tuple(sorted(
            (min(newid[u], newid[v]), max(newid[u], newid[v]), m)
            for (u, v, m) in self.edges))
        return (self.n_vertices, verts, edges)

    def canonical_form(self):
        """Isomorphism-invariant string key (same key iff same marked graph
        up to renaming vertices and reordering edges/leaves)."""
        best = min(self._encode(order) for order in self._orderings())
        return repr(best)

    def _pair_marks(self):
        pairs = {}
        for (u, v, m) in self.edges:
            pairs.setdefault((u, v), []).append(m)
        return {k: tuple(sorted(v)) for k, v in pairs.items()}

    def automorphism_order(self):
        """Order of the automorphism group acting on half-edges.

        Counts vertex permutations preserving the marked structure, then
        multiplies by the stabilizer lifts: k! for k parallel equal-mark
        edges, 2^l l! for l equal-mark loops at a vertex, k! for k
        equal-mark leaves at a vertex.
        """
        pairs = self._pair_marks()
        _, classes = self._refined_classes()
        n_sigma = 0
        for combo in product(*(permutations(c) for c in classes)):
            sigma = {}
            for cls, image in zip(classes, combo):
                for v, w in zip(cls, image):
                    sigma[v] = w
            ok = True
            for (u, v), marks in pairs.items():
                a, b = sigma[u], sigma[v]
                if pairs.get((min(a, b), max(a, b))) != marks:
                    ok = False
                    break
            if ok:
                n_sigma += 1
        lifts = 1
        for (u, v), marks in pairs.items():
            for m in set(marks):
                c = marks.count(m)
                if u == v:
                    lifts *= 2 ** c * _factorial(c)
                else:
                    lifts *= _factorial(c)
        for v in range(self.n_vertices):
            marks = self.leaf_marks_at(v)
            for m in set(marks):
                lifts *= _factorial(marks.count(m))
        return n_sigma * lifts

    # -- serialization --------------------------------------------------------

    def to_json_obj(self):
        return {"vertices": self.n_vertices,
                "edges": [[u + 1, v + 1, m] for (u, v, m) in self.edges],
                "leaves": [[v + 1, m] for (v, m) in self.leaves]}

    def to_json(self):
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj):
        if not isinstance(obj, dict) or "vertices" not in obj:
            raise ValueError("graph JSON must be an object with a 'vertices' count")
        nv = obj["vertices"]
        if not isinstance(nv, int) or nv < 1:
            raise ValueError("'vertices' must be a positive integer")
        edges = []
        for ent in obj.get("edges", []):
            if not isinstance(ent, list) or len(ent) != 3:
                raise ValueError(f"bad edge entry {ent!r}")
            edges.append((int(ent[0]) - 1, int(ent[1]) - 1, ent[2]))
        leaves = []
        for ent in obj.get("leaves", []):
            if not isinstance(ent, list) or len(ent) != 2:
                raise ValueError(f"bad leaf entry {ent!r}")
            leaves.append((int(ent[0]) - 1, ent[1]))
        return cls(nv, edges, leaves)

    @classmethod
    def from_json(cls, s):
        return cls.from_json_obj(json.loads(s))

    def __repr__(self):
        return (f"MarkedGraph({self.n_vertices}, edges={list(self.edges)}, "
                f"leaves={list(self.leaves)})")

    def __eq__(self, other):
        return (isinstance(other, MarkedGraph)
                and self.n_vertices == other.n_vertices
                and self.edges == other.edges
                and self.leaves == other.leaves)

    def __hash__(self):
        return hash((self.n_vertices, self.edges, self.leaves))


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def load_graph(path):
    with open(path, "r", encoding="utf-8") as fh:
        return MarkedGraph.from_json_obj(json.load(fh))


def graph_genus(graph):
    return graph.genus()


# ---------------------------------------------------------------------------
# validity of the graphs appearing in the potential sums


def is_valid_smooth_graph(graph, genus):
    """Contributors to the genus-g primary potential: connected, genus g,
    trivalent, all edges GG, all leaves level-0."""
    if not graph.is_connected():
        return False, "not connected"
    if graph.genus() != genus:
        return False, f"genus is {graph.genus()}, expected {genus}"
    for (_, _, m) in graph.edges:
        if m != "GG":
            return False, f"edge mark {m} not allowed in the primary sum"
    for (_, m) in graph.leaves:
        if m != "E0":
            return False, f"leaf mark {m} not allowed in the primary sum"
    for v in range(graph.n_vertices):
        if graph.degree(v) != 3:
            return False, f"vertex {v + 1} has degree {graph.degree(v)}"
    return True, ""


def is_valid_descendant_graph(graph, genus, n):
    """Contributors to the genus-g level-n one-point potential.

    Exactly one arrow leaf E<n> (n >= 1) sits at a special vertex that
    also carries all IDLOOP handles; with g' handles and m' remaining
    germs there, n = 3 g' - 3 + m'.  Every other vertex is a plain
    trivalent one, every other edge is GG, every other leaf is E0.
    """
    if n < 1:
        return False, "arrow level must be >= 1"
    if not graph.is_connected():
        return False, "not connected"
    if graph.genus() != genus:
        return False, f"genus is {graph.genus()}, expected {genus}"
    arrows = [(v, m) for (v, m) in graph.leaves if m not in ("E0",)]
    if len(arrows) != 1:
        return False, "need exactly one non-E0 leaf"
    v0, arrow_mark = arrows[0]
    if leaf_level(arrow_mark) != n:
        return False, f"arrow leaf is {arrow_mark}, expected E{n}"
    for (a, b, m) in graph.edges:
        if m == "IDLOOP":
            if a != v0:
                return False, "IDLOOP away from the arrow vertex"
        elif m != "GG":
            return False, f"edge mark {m} not allowed"
    gprime, mprime = graph.vertex_profile(v0)
    if mprime < 1:
        return False, "arrow vertex needs a non-handle germ"
    if n != 3 * gprime - 3 + mprime:
        return False, (f"arrow vertex has handles={gprime}, germs={mprime}, "
                       f"which encodes level {3 * gprime - 3 + mprime}, not {n}")
    for v in range(graph.n_vertices):
        if v == v0:
            continue
        if graph.degree(v) != 3:
            return False, f"vertex {v + 1} has degree {graph.degree(v)}"
    return True, ""

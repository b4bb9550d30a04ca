"""Edge-coloured bipartite graphs: Feynman graphs and their boundary graphs.

Colour 0 is the propagator, colours 1..D are index strands.  White vertices
carry the sources J (fields phi-bar), black ones the sources J-bar.
"""
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

WHITE = "white"
BLACK = "black"
INTERNAL = "internal"
EXTERNAL = "external"


class GraphError(ValueError):
    """Structural problem with a coloured graph."""


@dataclass(frozen=True)
class Vertex:
    id: int
    parity: str = WHITE
    kind: str = EXTERNAL


class ColoredGraph:
    """Immutable bipartite multigraph with at most one edge of each colour per vertex."""

    def __init__(self, vertices, edges, rank=3):
        self.rank = rank
        vs = []
        for v in vertices:
            if not isinstance(v, Vertex):
                v = Vertex(*v) if isinstance(v, (tuple, list)) else Vertex(**v)
            if v.parity not in (WHITE, BLACK):
                raise GraphError("bad parity %r" % (v.parity,))
            if v.kind not in (INTERNAL, EXTERNAL):
                raise GraphError("bad vertex kind %r" % (v.kind,))
            vs.append(v)
        self.vertices = tuple(vs)
        self._by_id = {v.id: v for v in vs}
        if len(self._by_id) != len(vs):
            raise GraphError("duplicate vertex ids")
        adj = {v.id: {} for v in vs}
        es = []
        for e in edges:
            if isinstance(e, dict):
                u, w, c = e["u"], e["v"], e["color"]
            else:
                u, w, c = e
            if u not in adj or w not in adj:
                raise GraphError("edge (%r, %r) references an unknown vertex" % (u, w))
            if not 0 <= c <= rank:
                raise GraphError("colour %r out of range 0..%d" % (c, rank))
            if self._by_id[u].parity == self._by_id[w].parity:
                raise GraphError("edge (%r, %r) joins two %s vertices" % (u, w, self._by_id[u].parity))
            if c in adj[u] or c in adj[w]:
                raise GraphError("two edges of colour %d at one vertex" % c)
            adj[u][c] = w
            adj[w][c] = u
            es.append((u, w, c))
        self.edges = tuple(es)
        self._adj = adj

    # -- basic queries ----------------------------------------------------

    def neighbour(self, v, color):
        return self._adj[v].get(color)

    def colors_at(self, v):
        return frozenset(self._adj[v])

    def vertex(self, v):
        return self._by_id[v]

    def ids(self, parity=None):
        return [v.id for v in self.vertices if parity is None or v.parity == parity]

    @property
    def whites(self):
        return self.ids(WHITE)

    @property
    def blacks(self):
        return self.ids(BLACK)

    def is_boundary_graph(self):
        full = frozenset(range(1, self.rank + 1))
        return all(self.colors_at(v.id) == full for v in self.vertices)

    def check_boundary(self):
        if not self.is_boundary_graph():
            raise GraphError("not a boundary graph: every vertex needs exactly one edge of each colour 1..%d" % self.rank)

    def color_matching(self, color):
        """Dict white id -> black id along edges of ``color``."""
        return {w: self._adj[w][color] for w in self.whites if color in self._adj[w]}

    # -- serialisation ----------------------------------------------------

    def to_dict(self):
        return {
            "rank": self.rank,
            "vertices": [{"id": v.id, "parity": v.parity, "kind": v.kind} for v in self.vertices],
            "edges": [{"u": u, "v": w, "color": c} for u, w, c in self.edges],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["vertices"], data["edges"], rank=data.get("rank", 3))

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return "ColoredGraph(%d vertices, %d edges, rank=%d)" % (len(self.vertices), len(self.edges), self.rank)

    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (self.rank == other.rank and set(self.vertices) == set(other.vertices)
                and self._edge_set() == other._edge_set())

    def _edge_set(self):
        return frozenset((min(u, w), max(u, w), c) for u, w, c in self.edges)

    def __hash__(self):
        return hash((self.rank, frozenset(self.vertices), self._edge_set()))


def from_permutations(perms, rank=3):
    """Boundary graph with whites 0..k-1 and blacks k..2k-1.

    ``perms[c-1][i] = j`` puts an edge of colour c between white i and black k+j.
    """
    k = len(perms[0])
    vertices = [Vertex(i, WHITE) for i in range(k)] + [Vertex(k + j, BLACK) for j in range(k)]
    edges = [(i, k + perm[i], c) for c, perm in enumerate(perms, start=1) for i in range(k)]
    return ColoredGraph(vertices, edges, rank)


def to_permutations(g):
    """Inverse of :func:`from_permutations` for a boundary graph (ids relabelled by order)."""
    g.check_boundary()
    whites, blacks = g.whites, g.blacks
    bpos = {b: j for j, b in enumerate(blacks)}
    return [tuple(bpos[g.neighbour(w, c)] for w in whites) for c in range(1, g.rank + 1)]


# -- boundary map ------------------------------------------------------------

def boundary(feynman):
    """D-coloured boundary graph on the external vertices of an open Feynman graph."""
    rank = feynman.rank
    full = frozenset(range(rank + 1))
    externals = [v for v in feynman.vertices if v.kind == EXTERNAL]
    for v in feynman.vertices:
        cols = feynman.colors_at(v.id)
        if v.kind == INTERNAL and cols != full:
            raise GraphError("internal vertex %r lacks colours %s" % (v.id, sorted(full - cols)))
        if v.kind == EXTERNAL and cols != frozenset([0]):
            raise GraphError("external vertex %r must carry exactly one colour-0 edge" % v.id)
    if len(externals) < 2 or len(externals) % 2:
        raise GraphError("need an even number (>= 2) of external legs, got %d" % len(externals))
    if sum(v.parity == WHITE for v in externals) * 2 != len(externals):
        raise GraphError("external legs are not balanced between the two parities")

    edges = set()
    limit = 2 * len(feynman.vertices) + 2
    for v in externals:
        for c in range(1, rank + 1):
            u = feynman.neighbour(v.id, 0)
            steps = 0
            while feynman.vertex(u).kind == INTERNAL:
                u = feynman.neighbour(feynman.neighbour(u, c), 0)
                steps += 1
                if steps > limit:
                    raise GraphError("strand of colour %d never leaves the graph" % c)
            a, b = (v.id, u) if v.parity == WHITE else (u, v.id)
            edges.add((a, b, c))
    return ColoredGraph([Vertex(v.id, v.parity, EXTERNAL) for v in externals], sorted(edges), rank)


# -- topology ----------------------------------------------------------------

def _components(g):
    seen, comps = set(), []
    for v in g.ids():
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in g._adj[u].values():
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def connected_components(g):
    return len(_components(g))


def component_subgraphs(g):
    out = []
    for comp in _components(g):
        cs = set(comp)
        out.append(ColoredGraph([g.vertex(v) for v in comp],
                                [e for e in g.edges if e[0] in cs], g.rank))
    return out


def face_count(g, colors=None):
    """Number of bicoloured cycles, summed over all pairs of the given colours."""
    if colors is None:
        colors = range(1, g.rank + 1)
    total = 0
    for c, d in itertools.combinations(colors, 2):
        seen = set()
        for start in g.whites:
            if start in seen:
                continue
            u = start
            while True:
                seen.add(u)
                u = g.neighbour(g.neighbour(u, c), d)
                if u == start:
                    break
            total += 1
    return total


def genus(g):
    """Sum over components of the genus from V - E + F = 2 - 2g (rank 3 only)."""
    if g.rank != 3:
        raise GraphError("genus is only defined here for rank-3 boundary graphs")
    g.check_boundary()
    total = 0
    for comp in component_subgraphs(g):
        chi = len(comp.vertices) - len(comp.edges) + face_count(comp)
        if chi % 2 or chi > 2:
            raise GraphError("Euler characteristic %d is not 2 - 2g" % chi)
        total += (2 - chi) // 2
    return total


# -- swap ----------------------------------------------------------------------

def swap(g, color, whites):
    """Exchange the black endpoints of the ``color`` edges at two white vertices."""
    i, j = whites
    if i == j:
        raise ValueError("swap needs two distinct white vertices")
    if not 1 <= color <= g.rank:
        raise ValueError("colour must be in 1..%d" % g.rank)
    g.check_boundary()
    for w in (i, j):
        if g.vertex(w).parity != WHITE:
            raise ValueError("vertex %r is not white" % w)
    bi, bj = g.neighbour(i, color), g.neighbour(j, color)
    edges = []
    for u, w, c in g.edges:
        if c == color and (u, w) in ((i, bi), (bi, i)):
            edges.append((i, bj, c))
        elif c == color and (u, w) in ((j, bj), (bj, j)):
            edges.append((j, bi, c))
        else:
            edges.append((u, w, c))
    return ColoredGraph(g.vertices, edges, g.rank)


# -- isomorphism ---------------------------------------------------------------

def _signature(g, v):
    return (g.vertex(v).parity, g.colors_at(v))


def isomorphisms(g, h, first_only=False):
    """Yield colour- and parity-preserving bijections g -> h as dicts (backtracking)."""
    if (len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges) or g.rank != h.rank):
        return
    order = []
    seen = set()
    for comp in _components(g):
        # BFS inside each component so that each new vertex has a mapped neighbour
        queue = [comp[0]]
        seen.add(comp[0])
        while queue:
            u = queue.pop(0)
            order.append(u)
            for c in sorted(g._adj[u]):
                w = g._adj[u][c]
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    candidates = {v: [w for w in h.ids() if _signature(h, w) == _signature(g, v)] for v in g.ids()}

    mapping, used = {}, set()

    def consistent(v, w):
        for c, u in g._adj[v].items():
            if u in mapping and h._adj[w].get(c) != mapping[u]:
                return False
        return True

    def extend(n):
        if n == len(order):
            yield dict(mapping)
            return
        v = order[n]
        # a vertex with an already-mapped neighbour has at most one choice
        forced = None
        for c, u in g._adj[v].items():
            if u in mapping:
                forced = h._adj[mapping[u]].get(c)
                break
        pool = [forced] if forced is not None else candidates[v]
        for w in pool:
            if w is None or w in used or _signature(h, w) != _signature(g, v) or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            yield from extend(n + 1)
            del mapping[v]
            used.discard(w)

    for m in extend(0):
        yield m
        if first_only:
            return


def is_isomorphic(g, h):
    return next(isomorphisms(g, h, first_only=True), None) is not None


def count_automorphisms(g):
    """|Aut(g)| by exhaustive search over permutations of the white vertices.

    For a boundary graph a white permutation fixes the black map through
    colour 1; it is an automorphism iff every other colour agrees.
    """
    g.check_boundary()
    whites = g.whites
    count = 0
    for image in itertools.permutations(whites):
        pi = dict(zip(whites, image))
        rho = {g.neighbour(w, 1): g.neighbour(pi[w], 1) for w in whites}
        if all(g.neighbour(pi[w], c) == rho[g.neighbour(w, c)]
               for c in range(2, g.rank + 1) for w in whites):
            count += 1
    return count


# -- catalogue -----------------------------------------------------------------

CLASS_NAMES = (
    "m", "V_1", "V_2", "V_3", "m|m",
    "G_1", "G_2", "G_3", "K", "F_{1;23}", "F_{2;13}", "F_{3;12}",
    "m|V_1", "m|V_2", "m|V_3", "m|m|m",
)

_FILE_NAMES = {name: name.replace("|", "_").replace("{", "").replace("}", "").replace(";", "_")
               for name in CLASS_NAMES}


@dataclass(frozen=True)
class BoundaryClass:
    name: str
    vertex_count: int
    component_count: int
    genus: int

    @property
    def k(self):
        return self.vertex_count // 2


@dataclass(frozen=True)
class Unclassified:
    vertex_count: int
    component_count: int
    genus: int
    name: str = "unclassified"


def _relabel(perms, sigma):
    """Colour relabelling: the edges of colour c move to colour sigma[c]."""
    out = [None] * 3
    for c in range(3):
        out[sigma[c + 1] - 1] = perms[c]
    return out


def canonical_permutations():
    """Representative colour permutations (white i -> black j) for every catalogue class.

    The black vertices follow the momentum conventions of the correlators:
    for V_a with whites (x, y) the blacks are (x_a, y_b, y_c) and (y_a, x_b, x_c);
    for G_a with whites (x, y, z) they are (x_a, y_b, y_c), (y_a, z_b, z_c), (z_a, x_b, x_c);
    for F_{1;23} they are (x1, y2, x3), (y1, x2, z3), (z1, z2, y3); K is the Latin square.
    """
    idt2, sw2 = (0, 1), (1, 0)
    idt3, rot, rot2 = (0, 1, 2), (2, 0, 1), (1, 2, 0)
    reps = {
        "m": [(0,), (0,), (0,)],
        "m|m": [idt2, idt2, idt2],
        "m|m|m": [idt3, idt3, idt3],
        "K": [idt3, rot, rot2],
        # white x -> black j: colour 1 via x-> p1(0); colours 2,3 of p1 come from y
        "F_{1;23}": [idt3, (1, 0, 2), (0, 2, 1)],
    }
    for a in (1, 2, 3):
        v = [sw2, sw2, sw2]
        v[a - 1] = idt2
        reps["V_%d" % a] = v
        gq = [rot, rot, rot]
        gq[a - 1] = idt3
        reps["G_%d" % a] = gq
        mv = [list(p) + [2] for p in ((1, 0), (1, 0), (1, 0))]
        mv[a - 1] = [0, 1, 2]
        reps["m|V_%d" % a] = [tuple(p) for p in mv]
    for name, sigma in (("F_{2;13}", {1: 2, 2: 1, 3: 3}), ("F_{3;12}", {1: 3, 2: 1, 3: 2})):
        reps[name] = _relabel(reps["F_{1;23}"], sigma)
    return reps


def _catalog_dir():
    return resources.files("tensor_sde") / "catalog"


def catalog_path(name):
    return _catalog_dir() / (_FILE_NAMES[name] + ".json")


@lru_cache(maxsize=None)
def catalog_graph(name):
    """Stored representative graph of a catalogue class (loaded from the JSON fixtures)."""
    return ColoredGraph.from_json(catalog_path(name).read_text())


def build_catalog_graph(name):
    """Representative graph built from :func:`canonical_permutations` (used to write the fixtures)."""
    return from_permutations(canonical_permutations()[name])


@lru_cache(maxsize=None)
def catalog():
    out = []
    for name in CLASS_NAMES:
        g = catalog_graph(name)
        out.append(BoundaryClass(name, len(g.vertices), connected_components(g), genus(g)))
    return tuple(out)


def boundary_class(name):
    for bc in catalog():
        if bc.name == name:
            return bc
    raise KeyError(name)


def classify(g):
    """Catalogue class colour-isomorphic to the boundary graph g."""
    g.check_boundary()
    n, b, gen = len(g.vertices), connected_components(g), genus(g)
    if n <= 6:
        for bc in catalog():
            if (bc.vertex_count, bc.component_count, bc.genus) != (n, b, gen):
                continue
            if is_isomorphic(g, catalog_graph(bc.name)):
                return bc
    return Unclassified(n, b, gen)

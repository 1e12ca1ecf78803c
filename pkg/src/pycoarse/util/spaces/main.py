# Finite discrete metric spaces: explicit metrics, graph metrics and word-metric balls
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
from collections import Counter
from typing import Hashable, List, Sequence, Tuple, Union
import numpy as np
import networkx as nx
from scipy.spatial.distance import cdist
import logging
logger = logging.getLogger('pycoarse')
from pycoarse.conf import log, MetricError, GraphError, GroupSpecError, ResourceLimitError, MarginError

ELEMENT_CAP = 200000

# Main
class DiscreteMetricSpace(object):
    """Finite point set with a validated distance matrix

    Use validate_metric, graph_metric or cayley_ball to build one; the
    constructor itself does not check the axioms.
    """

    def __init__(self,
                 points:Sequence[Hashable],
                 d:np.ndarray,
                 ball:"GroupBall"=None):
        """Instantiate

        Args:
            points: ordered point labels
            d: symmetric distance matrix
            ball: the group ball this space is the interior or full enumeration of
        """
        d = np.array(d, dtype=float)
        assert d.ndim == 2 and d.shape == (len(points), len(points)), "Distance matrix must match the point list"
        d.setflags(write=False)
        self.points:tuple = tuple(points)
        self.d:np.ndarray = d
        self.ball = ball
        self._index = {p:i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, point:Hashable) -> int:
        """Index of a point label"""
        try:
            return self._index[point]
        except KeyError:
            raise KeyError(f"Point not in space: {point!r}")

    def realized_distances(self) -> np.ndarray:
        """Sorted distinct off-diagonal distances"""
        if self.n < 2:
            return np.zeros(0)
        off = ~np.eye(self.n, dtype=bool)
        return np.unique(self.d[off])

    def diameter(self) -> float:
        return float(self.d.max()) if self.n else 0.0


class GraphSpace(DiscreteMetricSpace):
    """Vertex set of a connected simple graph with its shortest-path metric"""

    def __init__(self,
                 graph:nx.Graph,
                 d:np.ndarray):
        super().__init__(list(range(graph.number_of_nodes())), d)
        self.graph = graph
        self.edges:tuple = tuple(sorted((min(u, v), max(u, v)) for u, v in graph.edges()))
        self.degrees:np.ndarray = np.array([graph.degree(v) for v in range(graph.number_of_nodes())], dtype=int)

    @property
    def degree(self) -> int:
        """Maximum vertex degree"""
        return int(self.degrees.max()) if self.n else 0

    @property
    def is_regular(self) -> bool:
        return bool(self.n) and bool((self.degrees == self.degrees[0]).all())


class DiagonalNeighborhood(object):
    """The pair set B(R) = {(x,y) : d(x,y) < R} around the diagonal"""

    def __init__(self,
                 space:DiscreteMetricSpace,
                 radius:float):
        assert radius >= 0, "Radius must be nonnegative"
        self.space = space
        self.radius = radius
        mask = space.d < radius
        # the diagonal belongs to every neighborhood, including R = 0
        np.fill_diagonal(mask, True)
        mask.setflags(write=False)
        self.mask:np.ndarray = mask

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __repr__(self) -> str:
        return f"DiagonalNeighborhood(R={self.radius}, pairs={len(self)})"

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.mask)]

    def contains(self, i:int, j:int) -> bool:
        return bool(self.mask[i, j])


@log(set_logger=logger)
def validate_metric(m:Union[np.ndarray, list],
                    points:Sequence[Hashable]=None,
                    tol:float=1e-12) -> DiscreteMetricSpace:
    """Check the metric axioms and wrap the matrix as a space

    Args:
        m: square matrix of pairwise distances
        points: point labels, default 0..n-1
        tol: relative tolerance for symmetry, diagonal and triangle checks
    Returns:
        DiscreteMetricSpace
    Raises:
        MetricError naming the axiom and witness indices
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MetricError("square", (), f"Distance matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    if not np.isfinite(m).all():
        i, j = np.argwhere(~np.isfinite(m))[0]
        raise MetricError("finite", (int(i), int(j)), f"Non-finite distance at ({i},{j})")
    scale = float(np.abs(m).max()) if n else 0.0
    atol = tol * scale

    diag = np.abs(np.diag(m))
    if (diag > atol).any():
        i = int(np.argmax(diag > atol))
        raise MetricError("diagonal", (i,), f"Nonzero diagonal at ({i},{i}): {m[i, i]}")
    if (m < -atol).any():
        i, j = np.argwhere(m < -atol)[0]
        raise MetricError("negative", (int(i), int(j)), f"Negative entry at ({i},{j}): {m[i, j]}")
    asym = np.abs(m - m.T) > atol
    if asym.any():
        i, j = np.argwhere(np.triu(asym))[0]
        raise MetricError("asymmetry", (int(i), int(j)), f"Asymmetry at ({i},{j}): {m[i, j]} != {m[j, i]}")
    off = ~np.eye(n, dtype=bool)
    if (m[off] <= atol).any():
        i, j = np.argwhere(off & (m <= atol))[0]
        raise MetricError("separation", (int(i), int(j)), f"Distinct points at distance zero: ({i},{j})")
    # y runs over middle points: d(x,z) <= d(x,y) + d(y,z)
    for y in range(n):
        viol = m > m[:, [y]] + m[[y], :] + atol
        if viol.any():
            x, z = np.argwhere(viol)[0]
            raise MetricError("triangle", (int(x), y, int(z)),
                              f"Triangle violation ({x},{y},{z}): {m[x, z]} > {m[x, y]} + {m[y, z]}")

    if points is None:
        points = list(range(n))
    assert len(points) == n, "Point labels must match the matrix size"
    return DiscreteMetricSpace(points, m)


def _graph_space(graph:nx.Graph) -> GraphSpace:
    n = graph.number_of_nodes()
    d = np.zeros((n, n), dtype=float)
    for u, lengths in nx.all_pairs_shortest_path_length(graph):
        for v, k in lengths.items():
            d[u, v] = k
    return GraphSpace(graph, d)


@log(set_logger=logger)
def graph_metric(n:int,
                 edges:Sequence[Sequence[int]]) -> GraphSpace:
    """Shortest-path metric of a connected simple graph with unit edge weights

    Args:
        n: number of vertices, labelled 0..n-1
        edges: list of vertex pairs
    Returns:
        GraphSpace
    """
    if n < 1:
        raise GraphError(f"Graph needs at least one vertex, got {n}")
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for edge in edges:
        if len(edge) != 2:
            raise GraphError(f"Edge must be a pair: {edge!r}")
        u, v = int(edge[0]), int(edge[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"Edge ({u},{v}) out of range for {n} vertices")
        if u == v:
            raise GraphError(f"Self-loop at vertex {u}", vertex=u)
        if graph.has_edge(u, v):
            raise GraphError(f"Duplicate edge ({u},{v})")
        graph.add_edge(u, v)
    if not nx.is_connected(graph):
        reached = nx.node_connected_component(graph, 0)
        stranded = min(v for v in range(n) if v not in reached)
        raise GraphError(f"Graph is disconnected: vertex {stranded} is not reachable from 0", vertex=stranded)
    return _graph_space(graph)


@log(set_logger=logger)
def random_regular_graph(n:int,
                         degree:int,
                         seed:int,
                         max_tries:int=100) -> GraphSpace:
    """Seeded random regular graph, resampling until connected

    Args:
        n: number of vertices
        degree: common vertex degree
        seed: base seed, attempt k uses seed + k
        max_tries: attempts before giving up
    Returns:
        GraphSpace
    """
    if degree < 1 or n < 2:
        raise GraphError(f"Need n >= 2 and degree >= 1, got n={n}, degree={degree}")
    if degree >= n:
        raise GraphError(f"Degree {degree} must be smaller than n={n}")
    if (n * degree) % 2:
        raise GraphError(f"n*degree must be even, got {n}*{degree}")
    for attempt in range(max_tries):
        graph = nx.random_regular_graph(degree, n, seed=seed + attempt)
        if nx.is_connected(graph):
            logger.debug(f"random regular graph n={n} d={degree} accepted at attempt {attempt}")
            return _graph_space(nx.convert_node_labels_to_integers(graph, ordering="sorted"))
    raise GraphError(f"No connected {degree}-regular graph on {n} vertices in {max_tries} tries")


# Groups with exact normal forms
class FreeGroup(object):
    """Free group of finite rank; elements are reduced words of signed generator indices"""

    kind = "free"

    def __init__(self, rank:int):
        if rank < 1:
            raise GroupSpecError(f"Free group rank must be positive, got {rank}")
        self.rank = rank

    def __repr__(self) -> str:
        return f"FreeGroup(rank={self.rank})"

    def describe(self) -> dict:
        return {"kind":self.kind, "rank":self.rank}

    @property
    def identity(self) -> tuple:
        return ()

    @property
    def generators(self) -> List[tuple]:
        gens = []
        for i in range(1, self.rank + 1):
            gens += [(i,), (-i,)]
        return gens

    def multiply(self, a:tuple, b:tuple) -> tuple:
        word = list(a)
        for x in b:
            if word and word[-1] == -x:
                word.pop()
            else:
                word.append(x)
        return tuple(word)

    def inverse(self, a:tuple) -> tuple:
        return tuple(-x for x in reversed(a))

    def length(self, a:tuple) -> int:
        return len(a)

    def label(self, a:tuple) -> str:
        if not a:
            return "e"
        if self.rank <= 26:
            return "".join(chr(ord('a') + x - 1) if x > 0 else chr(ord('A') - x - 1) for x in a)
        return ".".join(f"x{x}" if x > 0 else f"X{-x}" for x in a)

    def distance_matrix(self, rows:Sequence[tuple], cols:Sequence[tuple]) -> np.ndarray:
        # l(st^-1) = |s| + |t| - 2 * common suffix
        d = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for i, s in enumerate(rows):
            for j, t in enumerate(cols):
                k = 0
                while k < len(s) and k < len(t) and s[-1 - k] == t[-1 - k]:
                    k += 1
                d[i, j] = len(s) + len(t) - 2 * k
        return d


class LatticeGroup(object):
    """The lattice Z^n with its standard generators"""

    kind = "zn"

    def __init__(self, n:int):
        if n < 1:
            raise GroupSpecError(f"Lattice rank must be positive, got {n}")
        self.n = n

    def __repr__(self) -> str:
        return f"LatticeGroup(n={self.n})"

    def describe(self) -> dict:
        return {"kind":self.kind, "n":self.n}

    @property
    def identity(self) -> tuple:
        return (0,) * self.n

    @property
    def generators(self) -> List[tuple]:
        gens = []
        for i in range(self.n):
            e = [0] * self.n
            e[i] = 1
            gens += [tuple(e), tuple(-x for x in e)]
        return gens

    def multiply(self, a:tuple, b:tuple) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a:tuple) -> tuple:
        return tuple(-x for x in a)

    def length(self, a:tuple) -> int:
        return sum(abs(x) for x in a)

    def label(self, a:tuple) -> str:
        return str(a[0]) if self.n == 1 else "(" + ",".join(str(x) for x in a) + ")"

    def distance_matrix(self, rows:Sequence[tuple], cols:Sequence[tuple]) -> np.ndarray:
        return cdist(np.array(rows, dtype=float).reshape(len(rows), self.n),
                     np.array(cols, dtype=float).reshape(len(cols), self.n),
                     metric="cityblock").round().astype(np.int64)


class TableGroup(object):
    """Finite group given by a multiplication table; elements are row indices"""

    kind = "table"

    def __init__(self,
                 elements:Sequence[Hashable],
                 mul:Sequence[Sequence],
                 generators:Sequence[Hashable]):
        """Instantiate

        Args:
            elements: element labels
            mul: table with mul[i][j] the product of elements i and j, as labels or indices
            generators: generating labels; inverses are added to make the set symmetric
        """
        self.elements = list(elements)
        m = len(self.elements)
        if m == 0:
            raise GroupSpecError("Table group needs at least one element")
        if len(set(self.elements)) != m:
            raise GroupSpecError("Element labels must be unique")
        lookup = {x:i for i, x in enumerate(self.elements)}
        try:
            raw = [list(row) for row in mul]
        except TypeError:
            raise GroupSpecError("Multiplication table must be a list of rows")
        if len(raw) != m or any(len(row) != m for row in raw):
            raise GroupSpecError(f"Multiplication table must be {m}x{m}")
        flat = [x for row in raw for x in row]
        if all(x in lookup for x in flat):
            table = [[lookup[x] for x in row] for row in raw]
        elif all(isinstance(x, int) and 0 <= x < m for x in flat):
            table = raw
        else:
            raise GroupSpecError("Table entries must be element labels or indices")
        self.table = np.array(table, dtype=np.int64)
        self.table.setflags(write=False)

        ar = np.arange(m)
        ids = [i for i in range(m) if (self.table[i] == ar).all() and (self.table[:, i] == ar).all()]
        if not ids:
            raise GroupSpecError("Multiplication table has no identity")
        self._identity = ids[0]
        inv = np.full(m, -1, dtype=np.int64)
        for a in range(m):
            hits = np.flatnonzero(self.table[a] == self._identity)
            if len(hits) != 1 or self.table[hits[0], a] != self._identity:
                raise GroupSpecError(f"Element {self.elements[a]!r} has no two-sided inverse")
            inv[a] = hits[0]
        self._inverse = inv
        if m <= 128:
            left = self.table[self.table]
            right = self.table[ar[:, None, None], self.table[None, :, :]]
            if (left != right).any():
                a, b, c = np.argwhere(left != right)[0]
                raise GroupSpecError(f"Table is not associative at {self.elements[a]!r},{self.elements[b]!r},{self.elements[c]!r}")
        else:
            logger.warning(f"associativity not checked for table of order {m}")

        gens = []
        for g in generators:
            if g in lookup:
                gens.append(lookup[g])
            elif isinstance(g, int) and 0 <= g < m:
                gens.append(g)
            else:
                raise GroupSpecError(f"Unknown generator {g!r}")
        if not gens:
            raise GroupSpecError("Generator list is empty")
        sym = []
        for g in gens + [int(inv[g]) for g in gens]:
            if g not in sym and g != self._identity:
                sym.append(g)
        self._generators = sym

        # word lengths over the whole group
        lengths = np.full(m, -1, dtype=np.int64)
        lengths[self._identity] = 0
        level = [self._identity]
        while level:
            nxt = []
            for a in level:
                for s in self._generators:
                    b = int(self.table[a, s])
                    if lengths[b] < 0:
                        lengths[b] = lengths[a] + 1
                        nxt.append(b)
            level = nxt
        if (lengths < 0).any():
            missing = self.elements[int(np.argmax(lengths < 0))]
            raise GroupSpecError(f"Generators do not generate the group: {missing!r} unreachable")
        self._lengths = lengths

    def __repr__(self) -> str:
        return f"TableGroup(order={len(self.elements)})"

    def describe(self) -> dict:
        return {"kind":self.kind, "elements":self.elements, "mul":self.table.tolist(),
                "generators":[self.elements[g] for g in self._generators]}

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def generators(self) -> List[int]:
        return list(self._generators)

    def multiply(self, a:int, b:int) -> int:
        return int(self.table[a, b])

    def inverse(self, a:int) -> int:
        return int(self._inverse[a])

    def length(self, a:int) -> int:
        return int(self._lengths[a])

    def label(self, a:int):
        return self.elements[a]

    def distance_matrix(self, rows:Sequence[int], cols:Sequence[int]) -> np.ndarray:
        r = np.asarray(rows, dtype=np.int64)
        c = np.asarray(cols, dtype=np.int64)
        return self._lengths[self.table[r[:, None], self._inverse[c][None, :]]]


Group = Union[FreeGroup, LatticeGroup, TableGroup]


class GroupBall(object):
    """Word-metric ball B(N) of a group, enumerated to radius N + W

    Elements are ordered by length and breadth-first discovery, so the
    interior ball B(N) is the prefix of the enumeration. Products landing
    beyond N + W are rejected.
    """

    def __init__(self,
                 group:Group,
                 radius:int,
                 margin:int=0,
                 max_elements:int=ELEMENT_CAP):
        """Instantiate

        Args:
            group: group with exact normal forms
            radius: interior radius N
            margin: enumeration margin W
            max_elements: cap on the enumerated elements
        """
        if radius < 0 or margin < 0:
            raise ValueError(f"Radius and margin must be nonnegative, got {radius}, {margin}")
        self.group = group
        self.radius = int(radius)
        self.margin = int(margin)
        self.max_elements = max_elements

        elements = [group.identity]
        lengths = [0]
        seen = {group.identity}
        level = [group.identity]
        n_interior = 1
        for k in range(1, self.outer_radius + 1):
            nxt = []
            for g in level:
                for s in group.generators:
                    h = group.multiply(g, s)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            if len(elements) + len(nxt) > max_elements:
                raise ResourceLimitError(f"Ball of radius {self.outer_radius} in {group!r} exceeds "
                                         f"{max_elements} elements at sphere {k}")
            elements += nxt
            lengths += [k] * len(nxt)
            if k <= self.radius:
                n_interior = len(elements)
            level = nxt
            if not nxt:
                break

        self.elements:tuple = tuple(elements)
        self.lengths:np.ndarray = np.array(lengths, dtype=np.int64)
        self.lengths.setflags(write=False)
        self.n_interior:int = n_interior
        self._index = {g:i for i, g in enumerate(self.elements)}
        self._space = None
        self._full_space = None
        self._products = {}
        logger.info(f"enumerated {self!r}")

    def __repr__(self) -> str:
        return (f"GroupBall({self.group!r}, radius={self.radius}, margin={self.margin}, "
                f"interior={self.n_interior}, enumerated={self.n_full})")

    def describe(self) -> dict:
        return {**self.group.describe(), "radius":self.radius, "margin":self.margin}

    @property
    def outer_radius(self) -> int:
        return self.radius + self.margin

    @property
    def n_full(self) -> int:
        return len(self.elements)

    @property
    def interior(self) -> tuple:
        return self.elements[:self.n_interior]

    @property
    def identity(self):
        return self.group.identity

    def contains(self, g) -> bool:
        return g in self._index

    def index_of(self, g) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise MarginError(f"Element {self.label(g)} of length {self.group.length(g)} "
                              f"lies outside the enumerated radius {self.outer_radius}")

    def length(self, g) -> int:
        return self.group.length(g)

    def label(self, g) -> str:
        return self.group.label(g)

    def inverse(self, g):
        return self.group.inverse(g)

    def multiply(self, a, b):
        """Product inside the enumerated ball

        Raises:
            MarginError when the product is longer than N + W
        """
        c = self.group.multiply(a, b)
        if self.group.length(c) > self.outer_radius:
            raise MarginError(f"Product {self.label(a)}*{self.label(b)} = {self.label(c)} "
                              f"leaves the enumerated radius {self.outer_radius}")
        return c

    def distance(self, s, t) -> int:
        """Word metric d(s,t) = l(st^-1)"""
        return self.group.length(self.group.multiply(s, self.group.inverse(t)))

    @property
    def space(self) -> DiscreteMetricSpace:
        """Interior ball B(N) as a metric space"""
        if self._space is None:
            inner = self.interior
            d = self.group.distance_matrix(inner, inner)
            self._space = DiscreteMetricSpace([self.label(g) for g in inner], d, ball=self)
        return self._space

    @property
    def full_space(self) -> DiscreteMetricSpace:
        """Enumerated ball B(N + W) as a metric space"""
        if self._full_space is None:
            if self.n_full == self.n_interior:
                self._full_space = self.space
            else:
                d = self.group.distance_matrix(self.elements, self.elements)
                self._full_space = DiscreteMetricSpace([self.label(g) for g in self.elements], d, ball=self)
        return self._full_space

    @property
    def interior_indices(self) -> np.ndarray:
        return np.arange(self.n_interior)

    def pair_distances(self, rows:Sequence[int], cols:Sequence[int]) -> np.ndarray:
        """d(s_i, t_i) for aligned index arrays"""
        el = self.elements
        return np.array([self.distance(el[i], el[j]) for i, j in zip(rows, cols)], dtype=np.int64)

    def product_indices(self, n_rows:int, n_cols:int=None) -> np.ndarray:
        """Index of elements[i] * elements[j], -1 when the product leaves the first n_rows elements

        Args:
            n_rows: size of the prefix the left factors and products must lie in
            n_cols: size of the prefix of right factors, default all enumerated elements
        """
        n_cols = self.n_full if n_cols is None else n_cols
        key = (n_rows, n_cols)
        if key not in self._products:
            el = self.elements
            out = np.full((n_rows, n_cols), -1, dtype=np.int64)
            for i in range(n_rows):
                for j in range(n_cols):
                    k = self._index.get(self.group.multiply(el[i], el[j]), -1)
                    if k < n_rows:
                        out[i, j] = k
            out.setflags(write=False)
            self._products[key] = out
        return self._products[key]

    def inverse_indices(self) -> np.ndarray:
        """Index of the inverse of each enumerated element"""
        return np.array([self._index[self.group.inverse(g)] for g in self.elements], dtype=np.int64)

    def sphere_sizes(self) -> List[int]:
        """|S_k| for k = 0..N"""
        counts = Counter(int(x) for x in self.lengths[:self.n_interior])
        return [counts.get(k, 0) for k in range(self.radius + 1)]

    def is_right_invariant_on(self, triples:Sequence[tuple]) -> bool:
        """d(sr,tr) = d(s,t) on triples whose products stay in the ball"""
        for s, t, r in triples:
            try:
                sr, tr = self.multiply(s, r), self.multiply(t, r)
            except MarginError:
                continue
            if self.distance(sr, tr) != self.distance(s, t):
                return False
        return True


@log(set_logger=logger)
def cayley_ball(group:Group,
                radius:int,
                *,
                margin:int=0,
                max_elements:int=ELEMENT_CAP) -> GroupBall:
    """Enumerate the word-metric ball of a group

    Args:
        group: FreeGroup, LatticeGroup or TableGroup
        radius: interior radius N
        margin: extra enumeration radius W
        max_elements: element cap
    Returns:
        GroupBall
    """
    return GroupBall(group, radius, margin=margin, max_elements=max_elements)


def group_from_spec(spec:dict) -> Group:
    """Build a group from a JSON space spec of kind free, zn or table"""
    kind = spec.get("kind")
    if kind == "free":
        return FreeGroup(int(spec["rank"]))
    elif kind == "zn":
        return LatticeGroup(int(spec["n"]))
    elif kind == "table":
        return TableGroup(spec["elements"], spec["mul"], spec["generators"])
    raise GroupSpecError(f"Unknown group kind: {kind!r}")


@log(set_logger=logger)
def space_from_spec(spec:dict,
                    *,
                    margin:int=0,
                    max_elements:int=ELEMENT_CAP) -> Union[DiscreteMetricSpace, GroupBall]:
    """Build a space from its JSON description

    Args:
        spec: one of the explicit, graph, free, zn or table specs
        margin: enumeration margin for group balls
        max_elements: element cap for group balls
    Returns:
        DiscreteMetricSpace, GraphSpace or GroupBall
    """
    assert isinstance(spec, dict), "Space spec must be a JSON object"
    kind = spec.get("kind")
    if kind == "explicit":
        return validate_metric(spec["d"], points=spec.get("points"))
    elif kind == "graph":
        return graph_metric(int(spec["n"]), spec.get("edges", []))
    elif kind in ("free", "zn", "table"):
        return cayley_ball(group_from_spec(spec), int(spec["radius"]),
                           margin=int(spec.get("margin", margin)), max_elements=max_elements)
    raise ValueError(f"Unknown space kind: {kind!r}")

"""Large and small Weyl graphs, their difference operators and spectra.

Vertices are the Borel-set ids of an enumeration. A directed edge is a pair
``(head, tail)``; the difference operator is ``(dg)(e) = g(head) - g(tail)``
and the edge inner product carries a factor 1/2 over directed edges, so it
equals the plain sum over undirected edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np
import sympy
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .borel import BorelEnumeration, enumerate_borel_sets
from .linalg import integer_rank
from .rootsys import RootSystem


@dataclass
class WeylGraph:
    flavor: str
    enumeration: BorelEnumeration
    edges: list[tuple[int, int]]  # undirected, i < j
    neighbors: list[list[int]] = field(repr=False)

    @property
    def system(self) -> RootSystem:
        return self.enumeration.system

    @property
    def order(self) -> int:
        return len(self.enumeration)

    @property
    def opposite(self) -> tuple[int, ...]:
        return self.enumeration.opposite

    @cached_property
    def directed_edges(self) -> list[tuple[int, int]]:
        """Directed edges as (head, tail); edge 2k and 2k+1 are reverses of each other."""
        out = []
        for i, j in self.edges:
            out.append((i, j))
            out.append((j, i))
        return out

    def reverse(self, k: int) -> int:
        return k ^ 1

    def edge_label(self, head: int, tail: int) -> int:
        """Mask of roots positive on both endpoints."""
        b = self.enumeration.borel_sets
        return b[head].positives & b[tail].positives

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.order, self.order), dtype=np.int64)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.neighbors]

    # -- operators -------------------------------------------------------

    def difference(self, g: np.ndarray) -> np.ndarray:
        """Edge function dg indexed like ``directed_edges``."""
        g = as_vertex_array(g, self.order)
        heads = [h for h, _ in self.directed_edges]
        tails = [t for _, t in self.directed_edges]
        return g[heads] - g[tails]

    def adjoint_difference(self, h: np.ndarray) -> np.ndarray:
        """d* h, the adjoint of d for the edge inner product with factor 1/2."""
        h = np.asarray(h)
        out = np.zeros((self.order,) + h.shape[1:], dtype=h.dtype)
        half = Fraction(1, 2) if h.dtype == object else 0.5
        for k, (head, _) in enumerate(self.directed_edges):
            out[head] = out[head] + half * (h[k] - h[self.reverse(k)])
        return out

    def laplacian_apply(self, g: np.ndarray) -> np.ndarray:
        g = as_vertex_array(g, self.order)
        out = np.zeros_like(g)
        for v, nb in enumerate(self.neighbors):
            for w in nb:
                out[v] = out[v] + (g[v] - g[w])
        return out

    @staticmethod
    def vertex_inner(g: np.ndarray, h: np.ndarray):
        return np.sum(np.conj(np.asarray(g)) * np.asarray(h))

    @staticmethod
    def edge_inner(g: np.ndarray, h: np.ndarray):
        total = np.sum(np.conj(np.asarray(g)) * np.asarray(h))
        return total / 2 if np.asarray(g).dtype != object else total * Fraction(1, 2)

    def edge_norm_sq(self, h: np.ndarray):
        return self.edge_inner(h, h)

    # -- connectivity ----------------------------------------------------

    def _csr(self) -> csr_matrix:
        return csr_matrix(self.adjacency_matrix())

    def components(self) -> list[list[int]]:
        count, labels = connected_components(self._csr(), directed=False)
        return [list(np.flatnonzero(labels == c)) for c in range(count)]

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    @cached_property
    def distances(self) -> np.ndarray:
        return shortest_path(self._csr(), unweighted=True, directed=False)

    def diameter(self) -> int:
        d = self.distances
        if np.isinf(d).any():
            raise ValueError("graph is disconnected; diameter is infinite")
        return int(d.max())

    def bfs_distances(self, source: int) -> list[int]:
        dist = [-1] * self.order
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in self.neighbors[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    # -- export ----------------------------------------------------------

    def to_dot(self, other: "WeylGraph | None" = None) -> str:
        """DOT text; with the companion graph, small edges solid, large-only dashed, opposite pairs dotted."""
        small, large = (self, other) if self.flavor == "small" else (other, self)
        lines = ["graph weyl {"]
        for v in range(self.order):
            lines.append(f"  {v};")
        small_edges = set(small.edges) if small is not None else set()
        if large is not None:
            for i, j in large.edges:
                style = "solid" if (i, j) in small_edges else "dashed"
                lines.append(f"  {i} -- {j} [style={style}];")
        else:
            for i, j in small.edges:
                lines.append(f"  {i} -- {j} [style=solid];")
        for v, w in enumerate(self.opposite):
            if v < w:
                lines.append(f"  {v} -- {w} [style=dotted];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _from_edges(flavor: str, enumeration: BorelEnumeration, edges: list[tuple[int, int]]) -> WeylGraph:
    neighbors: list[list[int]] = [[] for _ in range(len(enumeration))]
    for i, j in edges:
        neighbors[i].append(j)
        neighbors[j].append(i)
    for nb in neighbors:
        nb.sort()
    return WeylGraph(flavor, enumeration, sorted(edges), neighbors)


def large_weyl_graph(source: RootSystem | BorelEnumeration) -> WeylGraph:
    """Borel sets joined whenever they are distinct and not opposite."""
    enumeration = _enumeration(source)
    n = len(enumeration)
    opp = enumeration.opposite
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if opp[i] != j]
    return _from_edges("large", enumeration, edges)


def small_weyl_graph(source: RootSystem | BorelEnumeration) -> WeylGraph:
    """Borel sets f, g joined when each of their two differences fits inside some core."""
    enumeration = _enumeration(source)
    system = enumeration.system
    n = len(enumeration)
    all_vertices = (1 << n) - 1
    cores = enumeration.cores
    # outside[r]: vertices whose core misses root r
    outside = [0] * len(system.roots)
    for v, c in enumerate(cores):
        for r in range(len(system.roots)):
            if not c >> r & 1:
                outside[r] |= 1 << v
    cache: dict[int, bool] = {}

    def inside_some_core(diff: int) -> bool:
        hit = cache.get(diff)
        if hit is None:
            missing = 0
            r = 0
            d = diff
            while d:
                if d & 1:
                    missing |= outside[r]
                d >>= 1
                r += 1
            hit = missing != all_vertices
            cache[diff] = hit
        return hit

    positives = [b.positives for b in enumeration.borel_sets]
    edges = []
    for i in range(n):
        pi = positives[i]
        for j in range(i + 1, n):
            pj = positives[j]
            if inside_some_core(pi & ~pj) and inside_some_core(pj & ~pi):
                edges.append((i, j))
    return _from_edges("small", enumeration, edges)


def _enumeration(source) -> BorelEnumeration:
    if isinstance(source, BorelEnumeration):
        return source
    return enumerate_borel_sets(source)


# -- spectra ---------------------------------------------------------------


@dataclass
class Spectrum:
    """Laplacian eigenvalues with multiplicities and how they were obtained."""

    eigenvalues: list[tuple[object, int]]
    method: str
    spectral_gap: object | None

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "eigenvalues": [[str(v), m] for v, m in self.eigenvalues],
            "spectral_gap": None if self.spectral_gap is None else str(self.spectral_gap),
        }


def large_graph_identity_holds(graph: WeylGraph) -> bool:
    """Whether the adjacency matrix equals J - I - P entrywise."""
    n = graph.order
    a = graph.adjacency_matrix()
    expected = np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)
    for v, w in enumerate(graph.opposite):
        expected[v, w] -= 1
    return bool((a == expected).all())


def laplacian_spectrum(graph: WeylGraph, exact_limit: int = 200, charpoly_limit: int = 64) -> Spectrum:
    """Laplacian spectrum of a Weyl graph.

    For the large graph the spectrum is verified exactly: either by kernel
    ranks of A - (N-2)I, A and A + 2I over the rationals (N up to
    ``exact_limit``) or by the identity A = J - I - P for larger N.
    """
    if not graph.is_connected():
        raise ValueError(f"graph is disconnected with components {graph.components()}")
    n = graph.order
    if graph.flavor == "large":
        if not large_graph_identity_holds(graph):
            raise AssertionError("large Weyl graph adjacency differs from J - I - P")
        if n <= exact_limit:
            a = graph.adjacency_matrix()
            eye = np.eye(n, dtype=np.int64)
            kernels = [n - integer_rank((a - shift * eye).tolist()) for shift in (n - 2, 0, -2)]
            if kernels != [1, n // 2, n // 2 - 1]:
                raise AssertionError(f"unexpected adjacency eigenspace dimensions {kernels}")
            method = "exact kernel ranks"
        else:
            method = "identity A = J - I - P"
        pairs = [(0, 1), (n - 2, n // 2)]
        if n // 2 - 1 > 0:
            pairs.append((n, n // 2 - 1))
        return Spectrum(pairs, method, n - 2)
    a = graph.adjacency_matrix()
    lap = np.diag(a.sum(axis=1)) - a
    if n <= charpoly_limit:
        x = sympy.Symbol("x")
        _, factors = sympy.factor_list(sympy.Matrix(lap.tolist()).charpoly(x).as_expr())
        values: dict = {}
        for factor, mult in factors:
            poly = sympy.Poly(factor, x)
            found = sympy.roots(poly)
            if sum(found.values()) < poly.degree():
                found = {r: 1 for r in poly.nroots()}
            for root, k in found.items():
                values[root] = values.get(root, 0) + k * mult
        items = sorted(values.items(), key=lambda t: float(sympy.re(t[0])))
        return Spectrum(items, "characteristic polynomial", items[1][0] if len(items) > 1 else None)
    vals, vecs = np.linalg.eigh(lap.astype(float))
    residual = np.linalg.norm(lap @ vecs - vecs * vals, axis=0).max()
    if residual > 1e-9 * max(1.0, np.linalg.norm(lap, 2)):
        raise ArithmeticError(f"eigensolver residual {residual} exceeds tolerance")
    rounded: dict[float, int] = {}
    for v in vals:
        key = round(float(v), 9)
        rounded[key] = rounded.get(key, 0) + 1
    items = sorted(rounded.items())
    return Spectrum(items, "floating eigensolver", items[1][0] if len(items) > 1 else None)


def adjacency_spectrum_large(n: int) -> list[tuple[int, int]]:
    return [(n - 2, 1), (0, n // 2), (-2, n // 2 - 1)]


# -- path constant ---------------------------------------------------------


@dataclass
class PathConstant:
    """Certified constant C with ||d_l g||^2 <= C ||d_s g||^2.

    Each large-graph edge is routed along small-graph geodesics. With
    ``routing="optimal"`` the split over geodesics comes from a linear
    program minimizing the worst edge load (weights are rationalized and the
    load recomputed exactly), ``"uniform"`` splits evenly over all
    geodesics, and ``"lowest"`` uses the single lowest-id geodesic. By Cauchy-Schwarz a
    route of length k bounds the squared difference by k times the sum over
    its edges, and averaging over routes keeps the bound, so C is the largest
    total weighted length routed through one small edge.
    """

    constant: Fraction
    routing: str
    routes: dict[tuple[int, int], list[int]]
    geodesic_counts: dict[tuple[int, int], int]
    congestion: dict[tuple[int, int], Fraction]
    small_edge_count: int

    @property
    def edge_factor(self) -> Fraction:
        """Half the number of directed small-graph edges."""
        return Fraction(2 * self.small_edge_count, 2)

    @property
    def a_constant(self) -> Fraction:
        return self.constant

    @property
    def b_constant(self) -> Fraction:
        return self.constant * self.edge_factor


def lowest_shortest_path(graph: WeylGraph, source: int, target: int) -> list[int]:
    """Shortest path from source to target choosing the lowest-id next vertex at each step."""
    dist = graph.bfs_distances(target)
    if dist[source] < 0:
        raise ValueError("no path between the vertices")
    path = [source]
    v = source
    while v != target:
        v = min(w for w in graph.neighbors[v] if dist[w] == dist[v] - 1)
        path.append(v)
    return path


def _geodesic_counts(graph: WeylGraph, source: int) -> tuple[list[int], list[int]]:
    dist = graph.bfs_distances(source)
    order = sorted(range(graph.order), key=lambda v: dist[v])
    counts = [0] * graph.order
    counts[source] = 1
    for v in order:
        if v == source or dist[v] < 0:
            continue
        counts[v] = sum(counts[w] for w in graph.neighbors[v] if dist[w] == dist[v] - 1)
    return dist, counts


def all_geodesics(graph: WeylGraph, source: int, target: int, limit: int = 10000) -> list[list[int]]:
    dist = graph.bfs_distances(target)
    paths = [[source]]
    for _ in range(dist[source]):
        paths = [p + [w] for p in paths for w in graph.neighbors[p[-1]] if dist[w] == dist[p[-1]] - 1]
        if len(paths) > limit:
            raise ValueError("too many geodesics to route explicitly")
    return paths


def _optimal_congestion(large: WeylGraph, small: WeylGraph) -> dict[tuple[int, int], Fraction]:
    from scipy.optimize import linprog

    edge_id = {e: k for k, e in enumerate(small.edges)}
    commodities = [all_geodesics(small, i, j) for i, j in large.edges]
    nvars = sum(len(c) for c in commodities) + 1
    rows = []
    eq_rows = []
    usage = np.zeros((len(small.edges), nvars))
    col = 0
    for paths in commodities:
        eq = np.zeros(nvars)
        for path in paths:
            for a, b in zip(path, path[1:]):
                usage[edge_id[(min(a, b), max(a, b))], col] += len(path) - 1
            eq[col] = 1
            col += 1
        eq_rows.append(eq)
    usage[:, -1] = -1
    rows = usage
    cost = np.zeros(nvars)
    cost[-1] = 1
    result = linprog(cost, A_ub=rows, b_ub=np.zeros(len(small.edges)), A_eq=np.array(eq_rows),
                     b_eq=np.ones(len(eq_rows)), bounds=[(0, None)] * nvars, method="highs")
    if not result.success:
        raise ArithmeticError(f"routing program failed: {result.message}")
    congestion = {e: Fraction(0) for e in small.edges}
    col = 0
    for paths in commodities:
        weights = [Fraction(max(w, 0.0)).limit_denominator(1000) for w in result.x[col:col + len(paths)]]
        col += len(paths)
        total = sum(weights)
        weights = [w / total for w in weights]
        for path, w in zip(paths, weights):
            for a, b in zip(path, path[1:]):
                congestion[(min(a, b), max(a, b))] += w * (len(path) - 1)
    return congestion


def path_constant(source: RootSystem | BorelEnumeration, routing: str = "optimal") -> PathConstant:
    """Certified C with ||d_l g||^2 <= C ||d_s g||^2 for every vertex function g."""
    if routing not in ("optimal", "uniform", "lowest"):
        raise ValueError("routing must be 'optimal', 'uniform' or 'lowest'")
    enumeration = _enumeration(source)
    large = large_weyl_graph(enumeration)
    small = small_weyl_graph(enumeration)
    if not small.is_connected():
        raise ValueError("small Weyl graph is disconnected")
    tables = [_geodesic_counts(small, v) for v in range(small.order)]
    routes = {}
    counts = {}
    congestion = {e: Fraction(0) for e in small.edges}
    for i, j in large.edges:
        routes[(i, j)] = lowest_shortest_path(small, i, j)
        dist_i, from_i = tables[i]
        dist_j, from_j = tables[j]
        length = dist_i[j]
        counts[(i, j)] = from_i[j]
        if routing == "optimal":
            continue
        if routing == "lowest":
            path = routes[(i, j)]
            for a, b in zip(path, path[1:]):
                congestion[(min(a, b), max(a, b))] += length
            continue
        total = from_i[j]
        for a, b in small.edges:
            for x, y in ((a, b), (b, a)):
                if dist_i[x] + 1 + dist_j[y] == length:
                    congestion[(a, b)] += Fraction(length * from_i[x] * from_j[y], total)
    if routing == "optimal":
        congestion = _optimal_congestion(large, small)
    return PathConstant(max(congestion.values()), routing, routes, counts, congestion, len(small.edges))


REFERENCE_PATH_CONSTANTS = {"A2": 5, "B2": 3, "BC2": 3, "G2": 2}
REFERENCE_RANK2_D = 1


def norm_sq(values: np.ndarray):
    return np.sum(np.abs(values) ** 2) if values.dtype != object else sum(x * x for x in values.ravel())


def random_vertex_function(order: int, width: int, rng: np.random.Generator, complex_values: bool = False) -> np.ndarray:
    g = rng.standard_normal((order, width))
    if complex_values:
        g = g + 1j * rng.standard_normal((order, width))
    return g


def spectrum_csv(spectrum: Spectrum) -> str:
    rows = ["eigenvalue,multiplicity"]
    rows += [f"{v},{m}" for v, m in spectrum.eigenvalues]
    return "\n".join(rows) + "\n"


def claim_half_edges(graph: WeylGraph, vertex: int) -> list[tuple[int, int]]:
    """For each position t of the induced ordering, (|E_{f,t}|, |E_f|) where E_{f,t}
    are the edges into the vertex whose label misses the t-th root."""
    enumeration = graph.enumeration
    order = enumeration.induced_ordering(vertex)
    into = [k for k, (head, _) in enumerate(graph.directed_edges) if head == vertex]
    out = []
    for root in order:
        missing = sum(1 for k in into if not graph.edge_label(*graph.directed_edges[k]) >> root & 1)
        out.append((missing, len(into)))
    return out


def claim_union_cover(graph: WeylGraph, vertex: int) -> bool:
    """For each t, the labels of edges missing the t-th root cover the positives off its line."""
    enumeration = graph.enumeration
    system = graph.system
    positives = enumeration.borel_sets[vertex].positives
    into = [graph.directed_edges[k] for k in range(len(graph.directed_edges)) if graph.directed_edges[k][0] == vertex]
    for root in enumeration.induced_ordering(vertex):
        union = 0
        for head, tail in into:
            label = graph.edge_label(head, tail)
            if not label >> root & 1:
                union |= label
        needed = positives & ~system.line_masks[system.line_index[root]]
        if needed & ~union:
            return False
    return True


def as_vertex_array(g, order: int) -> np.ndarray:
    """Stack vertex values into an array, rejecting ragged or wrongly sized input."""
    if isinstance(g, np.ndarray):
        arr = g
    else:
        shapes = {np.shape(v) for v in g}
        if len(shapes) > 1:
            raise ValueError("vertex function values have different dimensions")
        arr = np.array(list(g))
    if arr.shape[0] != order:
        raise ValueError(f"expected values on {order} vertices, got {arr.shape[0]}")
    return arr

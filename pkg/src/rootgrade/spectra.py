"""Codistances, Kazhdan-type bounds and the spectral criterion on finite groups.

Finite groups are stored as multiplication tables. Their unitary
representations are either permutation representations (the regular
representation above all) or explicit unitary matrices on an invariant
block. Fixed subspaces come from averaging projectors.

Codistance of subspaces U_1..U_n is the top eigenvalue of (1/n) sum P_{U_i}.
For finite groups everything is evaluated on l^2_0(G), the complement of the
constants in the regular representation, which contains every irreducible
representation without invariant vectors.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import scipy.linalg
import sympy

from .borel import enumerate_borel_sets
from .rings import FiniteRing
from .steinberg import ElementSet, GradedGroupModel, matrix_keys
from .weylgraph import laplacian_spectrum, large_weyl_graph, path_constant

TOLERANCE = 1e-9


class SpectraError(ValueError):
    pass


# -- finite groups -----------------------------------------------------------------------


@dataclass(eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table: table[a, b] is the index of a*b."""

    table: np.ndarray
    identity: int = 0
    name: str = "G"
    keys: dict[bytes, int] | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.table)

    @cached_property
    def inverse(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == self.identity)
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        return inv

    def generated(self, generators: Iterable[int]) -> tuple[int, ...]:
        """The subgroup generated by the given elements, by BFS."""
        gens = sorted(set(int(g) for g in generators))
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(self.table[x, g])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return tuple(sorted(seen))

    def is_subgroup(self, indices: Iterable[int]) -> bool:
        s = np.array(sorted(set(indices)), dtype=np.int64)
        if len(s) == 0 or self.identity not in s:
            return False
        return bool(np.isin(self.table[np.ix_(s, s)], s).all())

    def check_subgroup(self, indices: Iterable[int]) -> tuple[int, ...]:
        out = tuple(sorted(set(int(i) for i in indices)))
        if not self.is_subgroup(out):
            raise SpectraError("the given elements are not closed under products")
        return out

    def all(self) -> tuple[int, ...]:
        return tuple(range(self.order))

    def is_normal(self, indices: Iterable[int]) -> bool:
        s = np.array(sorted(set(indices)), dtype=np.int64)
        conj = self.table[self.table[self.inverse][:, s], np.arange(self.order)[:, None]]
        return bool(np.isin(conj, s).all())

    def center(self) -> tuple[int, ...]:
        return tuple(int(z) for z in range(self.order) if np.array_equal(self.table[z], self.table[:, z]))

    def quotient(self, normal: Iterable[int]) -> tuple["FiniteGroup", np.ndarray]:
        """G/N and the projection G -> G/N as an index array."""
        normal = self.check_subgroup(normal)
        if not self.is_normal(normal):
            raise SpectraError("the subgroup is not normal")
        coset = -np.ones(self.order, dtype=np.int64)
        reps = []
        for g in range(self.order):
            if coset[g] < 0:
                coset[self.table[g, list(normal)]] = len(reps)
                reps.append(g)
        table = coset[self.table[np.ix_(reps, reps)]]
        return FiniteGroup(table, int(coset[self.identity]), f"{self.name}/N"), coset

    @classmethod
    def from_matrices(cls, ring: FiniteRing, elements: ElementSet, name: str = "G") -> "FiniteGroup":
        mats = elements.matrices
        n, d = len(mats), mats.shape[-1]
        keys = {k: i for i, k in enumerate(matrix_keys(mats))}
        table = np.empty((n, n), dtype=np.int64)
        step = max(1, 200_000 // n)
        for start in range(0, n, step):
            block = ring.matmul(mats[start:start + step, None], mats[None])
            flat = matrix_keys(block.reshape(-1, d, d))
            table[start:start + step] = np.array([keys[k] for k in flat]).reshape(-1, n)
        identity = keys[matrix_keys(ring.identity_matrix(d)[None])[0]]
        return cls(table, identity, name, keys)

    def indices_of(self, elements: ElementSet) -> tuple[int, ...]:
        if self.keys is None:
            raise SpectraError("the group has no matrix realization")
        return tuple(sorted(self.keys[k] for k in elements.index))

    @classmethod
    def from_permutations(cls, generators: Sequence[Sequence[int]], name: str = "G") -> "FiniteGroup":
        """The permutation group generated by the given permutations (lists of images)."""
        gens = [tuple(g) for g in generators]
        identity = tuple(range(len(gens[0])))
        elements = [identity]
        index = {identity: 0}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = tuple(x[i] for i in g)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    queue.append(y)
        n = len(elements)
        table = np.empty((n, n), dtype=np.int64)
        for a, x in enumerate(elements):
            for b, y in enumerate(elements):
                table[a, b] = index[tuple(x[i] for i in y)]
        return cls(table, 0, name)

    @classmethod
    def abelian(cls, moduli: Sequence[int], name: str | None = None) -> "FiniteGroup":
        """Z/m_1 x ... x Z/m_r; element index is the mixed-radix number of its coordinates."""
        coords = np.array(list(itertools.product(*[range(m) for m in moduli])), dtype=np.int64)
        sums = (coords[:, None, :] + coords[None, :, :]) % np.array(moduli)
        weights = np.array([int(np.prod(moduli[i + 1:])) for i in range(len(moduli))], dtype=np.int64)
        return cls(sums @ weights, 0, name or "x".join(f"Z{m}" for m in moduli))

    def abelian_element(self, moduli: Sequence[int], coords: Sequence[int]) -> int:
        weights = [int(np.prod(moduli[i + 1:])) for i in range(len(moduli))]
        return int(sum((c % m) * w for c, m, w in zip(coords, moduli, weights)))


def heisenberg_group(p: int = 3) -> tuple[FiniteGroup, tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Upper unitriangular 3x3 matrices over F_p, with X_12, X_23 and the center."""
    from .rings import zmod
    from .steinberg import subgroup_closure

    ring = zmod(p)

    def x(i, j, r):
        m = ring.identity_matrix(3)
        m[i, j] = r
        return m

    full = subgroup_closure(ring, [x(0, 1, 1), x(1, 2, 1)])
    group = FiniteGroup.from_matrices(ring, full, f"Heis(F{p})")
    sub = lambda i, j: group.indices_of(ElementSet.of(np.stack([x(i, j, r) for r in range(p)])))  # noqa: E731
    return group, sub(0, 1), sub(1, 2), sub(0, 2)


def symmetric_group(n: int) -> FiniteGroup:
    swap = list(range(n))
    swap[0], swap[1] = 1, 0
    cycle = list(range(1, n)) + [0]
    return FiniteGroup.from_permutations([swap, cycle], f"S{n}")


# -- representations --------------------------------------------------------------------------


@dataclass(eq=False)
class RepresentationModel:
    """A unitary representation: a permutation action perms[g] or explicit matrices[g]."""

    group: FiniteGroup
    perms: np.ndarray | None = None
    matrices: np.ndarray | None = None
    _projectors: dict = field(default_factory=dict, repr=False)

    @classmethod
    def regular(cls, group: FiniteGroup) -> "RepresentationModel":
        """Left regular representation on l^2(G): g e_x = e_{gx}."""
        return cls(group, perms=group.table.copy())

    @property
    def dim(self) -> int:
        return self.perms.shape[1] if self.perms is not None else self.matrices.shape[1]

    def action(self, g: int) -> np.ndarray:
        if self.perms is not None:
            m = np.zeros((self.dim, self.dim))
            m[self.perms[g], np.arange(self.dim)] = 1
            return m
        return self.matrices[g]

    def apply(self, g: int, v: np.ndarray) -> np.ndarray:
        if self.perms is not None:
            out = np.empty_like(v)
            out[self.perms[g]] = v
            return out
        return self.matrices[g] @ v

    def moved(self, elements: Sequence[int], v: np.ndarray) -> np.ndarray:
        """||g v - v|| for every listed g."""
        if self.perms is not None:
            inv = np.argsort(self.perms[list(elements)], axis=1)
            return np.linalg.norm(v[inv] - v[None], axis=1)
        return np.array([np.linalg.norm(self.matrices[g] @ v - v) for g in elements])

    def is_unitary(self, tol: float = 1e-10) -> bool:
        if self.perms is not None:
            return all(sorted(p) == list(range(self.dim)) for p in self.perms.tolist())
        eye = np.eye(self.dim)
        return all(np.allclose(m.conj().T @ m, eye, atol=tol) for m in self.matrices)

    def projector(self, subgroup: Iterable[int]) -> np.ndarray:
        """P = (1/|H|) sum_h rho(h), the orthogonal projection onto V^H."""
        key = frozenset(int(h) for h in subgroup)
        if key not in self._projectors:
            self.group.check_subgroup(key)
            hs = sorted(key)
            if self.perms is not None:
                P = np.zeros((self.dim, self.dim))
                cols = np.arange(self.dim)
                for h in hs:
                    P[self.perms[h], cols] += 1
                P /= len(hs)
            else:
                P = self.matrices[hs].mean(axis=0)
            self._projectors[key] = P
        return self._projectors[key]

    def projector_exact(self, subgroup: Iterable[int]) -> list[list[Fraction]]:
        """The averaging projector with exact rational entries (permutation representations)."""
        if self.perms is None:
            raise SpectraError("exact projectors need a permutation representation")
        hs = self.group.check_subgroup(subgroup)
        counts = np.zeros((self.dim, self.dim), dtype=np.int64)
        cols = np.arange(self.dim)
        for h in hs:
            counts[self.perms[h], cols] += 1
        return [[Fraction(int(c), len(hs)) for c in row] for row in counts]

    def invariant_projector(self) -> np.ndarray:
        return self.projector(self.group.all())

    def reduced_projector(self, subgroup: Iterable[int]) -> np.ndarray:
        """Projection onto V^H inside the complement of the G-invariant vectors."""
        return self.projector(subgroup) - self.invariant_projector()

    def fixed_subspace(self, subgroup: Iterable[int], reduced: bool = False) -> np.ndarray:
        """Orthonormal basis (columns) of V^H, or of V^H minus the G-invariants when reduced."""
        hs = self.group.check_subgroup(subgroup)
        if self.perms is not None and not reduced:
            orbit = -np.ones(self.dim, dtype=np.int64)
            count = 0
            for x in range(self.dim):
                if orbit[x] < 0:
                    orbit[self.perms[list(hs), x]] = count
                    count += 1
            basis = np.zeros((self.dim, count))
            basis[np.arange(self.dim), orbit] = 1
            return basis / np.sqrt(basis.sum(axis=0))
        P = self.reduced_projector(hs) if reduced else self.projector(hs)
        return range_basis(P)

    def restrict(self, basis: np.ndarray) -> "RepresentationModel":
        """The representation on an invariant subspace with orthonormal basis columns."""
        mats = np.stack([basis.conj().T @ self.apply_matrix(g) @ basis for g in range(self.group.order)])
        return RepresentationModel(self.group, matrices=mats)

    def apply_matrix(self, g: int) -> np.ndarray:
        return self.action(g)

    def irreducible_blocks(self, seed: int = 0, tol: float = 1e-7) -> list[np.ndarray]:
        """Orthonormal bases of irreducible subrepresentations of the regular representation.

        Eigenspaces of a generic Hermitian element of the right-regular algebra are
        irreducible left subrepresentations; irreducibility is confirmed through the
        character norm sum |chi(g)|^2 / |G| = 1.
        """
        if self.perms is None or not np.array_equal(self.perms, self.group.table):
            raise SpectraError("block decomposition is implemented for the regular representation")
        G = self.group
        n = G.order
        rng = np.random.default_rng(seed)
        for _ in range(10):
            c = rng.normal(size=n) + 1j * rng.normal(size=n)
            c = (c + np.conj(c[G.inverse])) / 2
            M = np.zeros((n, n), dtype=complex)
            # right action: (R(g) f)(x) = f(x g)
            for g in range(n):
                M[np.arange(n), G.table[:, g]] += c[g]
            vals, vecs = np.linalg.eigh((M + M.conj().T) / 2)
            blocks = []
            start = 0
            for k in range(1, n + 1):
                if k == n or vals[k] - vals[k - 1] > tol:
                    blocks.append(vecs[:, start:k])
                    start = k
            if all(_character_norm(self, b) == 1 for b in blocks):
                return blocks
        raise SpectraError("no generic element found for the block decomposition")


def _character_norm(rep: RepresentationModel, basis: np.ndarray) -> int:
    chars = np.array([np.trace(basis.conj().T @ rep.apply(g, basis)) for g in range(rep.group.order)])
    return int(round(float(np.sum(np.abs(chars) ** 2)) / rep.group.order))


def range_basis(P: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of the range of a Hermitian projection."""
    vals, vecs = np.linalg.eigh((P + P.conj().T) / 2)
    return vecs[:, vals > 0.5]


def basis_projector(basis: np.ndarray) -> np.ndarray:
    return basis @ basis.conj().T


# -- codistance ---------------------------------------------------------------------------------


def _as_projectors(subspaces: Sequence[np.ndarray], projectors: bool) -> list[np.ndarray]:
    return [np.asarray(s) if projectors else basis_projector(np.asarray(s)) for s in subspaces]


def codistance(subspaces: Sequence[np.ndarray], projectors: bool = False) -> float:
    """Top eigenvalue of (1/n) sum P_{U_i}; the subspaces are bases (columns) or projectors."""
    Ps = _as_projectors(subspaces, projectors)
    if not Ps:
        raise SpectraError("need at least one subspace")
    M = sum(Ps) / len(Ps)
    M = (M + M.conj().T) / 2
    return float(scipy.linalg.eigh(M, eigvals_only=True, subset_by_index=[len(M) - 1, len(M) - 1])[0])


def codistance_alternating(subspaces: Sequence[np.ndarray], projectors: bool = False, seed: int = 0,
                           starts: int = 4, iterations: int = 2000, tol: float = 1e-13) -> float:
    """Alternate between U_1 x ... x U_n and the diagonal of V^n and read off the ratio
    ||u_1 + ... + u_n||^2 / (n sum ||u_i||^2) directly from the vectors."""
    Ps = _as_projectors(subspaces, projectors)
    n, dim = len(Ps), Ps[0].shape[0]
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(starts):
        v = rng.normal(size=dim)
        value = 0.0
        for _ in range(iterations):
            us = [P @ v for P in Ps]
            denom = n * sum(float(np.vdot(u, u).real) for u in us)
            if denom == 0:
                break
            total = sum(us)
            new = float(np.vdot(total, total).real) / denom
            v = total / max(np.linalg.norm(total), 1e-300)
            if abs(new - value) < tol:
                value = new
                break
            value = new
        best = max(best, value)
    return best


def orth(U: np.ndarray, W: np.ndarray) -> float:
    """Largest |<u, w>| over unit vectors of the two spaces (bases as columns)."""
    if U.shape[1] == 0 or W.shape[1] == 0:
        return 0.0
    return float(np.linalg.svd(U.conj().T @ W, compute_uv=False)[0])


def reduced_orth(U: np.ndarray, W: np.ndarray, tol: float = 1e-9) -> float:
    """orth after removing the intersection of the two spaces."""
    if U.shape[1] == 0 or W.shape[1] == 0:
        return 0.0
    s = np.linalg.svd(U.conj().T @ W, compute_uv=False)
    rest = s[s < 1 - tol]
    return float(rest[0]) if len(rest) else 0.0


def complement(basis: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement."""
    return scipy.linalg.null_space(basis.conj().T)


@dataclass
class CodistanceReport:
    value: float
    generates: bool
    subgroup_orders: list[int]
    block_value: float | None = None

    def to_json(self) -> dict:
        return self.__dict__.copy()


def group_codistance(group: FiniteGroup, subgroups: Sequence[Iterable[int]], blocks: bool = False,
                     seed: int = 0) -> CodistanceReport:
    """Codistance of V^{H_1}, ..., V^{H_n} on l^2_0(G).

    When the H_i do not generate G the fixed spaces share a vector orthogonal to the
    constants and the value is 1; the report flags that case. With ``blocks`` the value
    is recomputed as a maximum over the nontrivial irreducible blocks of l^2(G).
    """
    subs = [group.check_subgroup(h) for h in subgroups]
    rep = RepresentationModel.regular(group)
    generated = group.generated(itertools.chain(*subs))
    value = codistance([rep.reduced_projector(h) for h in subs], projectors=True)
    report = CodistanceReport(value, len(generated) == group.order, [len(h) for h in subs])
    if blocks:
        report.block_value = block_codistance(rep, subs, seed)
    return report


def block_codistance(rep: RepresentationModel, subgroups: Sequence[Sequence[int]], seed: int = 0) -> float:
    best = 0.0
    for basis in rep.irreducible_blocks(seed):
        if basis.shape[1] == 1 and np.allclose(rep.apply(0, basis), basis):
            constant = np.allclose(basis[:, 0], basis[0, 0])
            if constant:
                continue
        Ps = [basis.conj().T @ rep.projector(h) @ basis for h in subgroups]
        best = max(best, codistance(Ps, projectors=True))
    return best


def exactly_pairwise_orthogonal(rep: RepresentationModel, subgroups: Sequence[Sequence[int]]) -> bool:
    """Are the reduced fixed spaces pairwise orthogonal, in exact rational arithmetic?

    Then their codistance is exactly 1/n.
    """
    n = rep.dim
    reduced = []
    for h in subgroups:
        P = rep.projector_exact(h)
        reduced.append(sympy.Matrix(n, n, lambda i, j: sympy.Rational(P[i][j].numerator, P[i][j].denominator)
                                    - sympy.Rational(1, n)))
    return all((reduced[a] * reduced[b]).is_zero_matrix for a in range(len(reduced)) for b in range(a + 1, len(reduced)))


# -- Hilbert-Schmidt identities ---------------------------------------------------------------


def _unit(rng, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def rank_one(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.trace(a.conj().T @ b))


def iota(v: np.ndarray) -> np.ndarray:
    """||v|| P_{v/||v||} = v v* / ||v||."""
    norm = np.linalg.norm(v)
    return rank_one(v) / norm if norm else np.zeros((len(v), len(v)), dtype=complex)


def vector_codistance(vectors: Sequence[np.ndarray]) -> float:
    """||sum u_i||^2 / (k sum ||u_i||^2), with the Hilbert-Schmidt norm for matrices."""
    total = sum(vectors)
    num = float(np.sum(np.abs(total) ** 2))
    den = len(vectors) * sum(float(np.sum(np.abs(u) ** 2)) for u in vectors)
    return num / den


@dataclass
class HSReport:
    pw_pairs: int
    pw_identity_residual: float
    pw_lipschitz_violation: float
    codist_tuples: int
    codist_violation: float
    pv_blocks: list[dict]
    pv_residual: float
    seed: int

    @property
    def holds(self) -> bool:
        return (self.pw_identity_residual <= 1e-12 and self.pw_lipschitz_violation <= 1e-12
                and self.codist_violation <= 1e-12 and self.pv_residual <= 1e-9)

    def to_json(self) -> dict:
        out = self.__dict__.copy()
        out["holds"] = self.holds
        return out


def hs_pairs_check(pairs: int = 1000, dim: int = 6, seed: int = 0) -> tuple[float, float]:
    """max | <P_u, P_v> - |<u, v>|^2 | and max (||P_u - P_v|| - sqrt2 ||u - v||) over random unit pairs."""
    rng = np.random.default_rng(seed)
    worst_identity = worst_lipschitz = 0.0
    for _ in range(pairs):
        u, v = _unit(rng, dim), _unit(rng, dim)
        Pu, Pv = rank_one(u), rank_one(v)
        worst_identity = max(worst_identity, abs(hs_inner(Pu, Pv) - abs(np.vdot(u, v)) ** 2))
        worst_lipschitz = max(worst_lipschitz, np.linalg.norm(Pu - Pv) - math.sqrt(2) * np.linalg.norm(u - v))
    return float(worst_identity), float(max(worst_lipschitz, 0.0))


def hs_codist_check(tuples: int = 200, dim: int = 5, max_k: int = 5, seed: int = 0) -> float:
    """Largest violation of 2 codist(v) - 1 <= codist(iota(v)) over random tuples with 2 <= k <= max_k."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(tuples):
        k = 2 + t % (max_k - 1)
        # mix nearly parallel and random tuples so the inequality is tested near equality too
        base = _unit(rng, dim)
        spread = rng.uniform(0, 2)
        vs = [rng.uniform(0.2, 2) * (base + spread * _unit(rng, dim)) for _ in range(k)]
        lhs = 2 * vector_codistance(vs) - 1
        rhs = vector_codistance([iota(v) for v in vs])
        worst = max(worst, lhs - rhs)
    return float(max(worst, 0.0))


def hs_irreducible_projection(rep: RepresentationModel, basis: np.ndarray, v: np.ndarray) -> float:
    """||P_{HS(V)^G}(P_v)||^2 on the block spanned by ``basis``, via the averaging projector."""
    G = rep.group
    Pv = rank_one(v)
    avg = np.zeros_like(Pv)
    for g in range(G.order):
        rho = basis.conj().T @ rep.apply(g, basis)
        avg += rho @ Pv @ rho.conj().T
    avg /= G.order
    return float(np.sum(np.abs(avg) ** 2))


def hs_pv_check(groups: Sequence[FiniteGroup], seed: int = 0, vectors: int = 3) -> tuple[list[dict], float]:
    rng = np.random.default_rng(seed)
    rows = []
    worst = 0.0
    for G in groups:
        rep = RepresentationModel.regular(G)
        for basis in rep.irreducible_blocks(seed):
            m = basis.shape[1]
            for _ in range(vectors):
                value = hs_irreducible_projection(rep, basis, _unit(rng, m))
                worst = max(worst, abs(value - 1 / m))
            rows.append({"group": G.name, "dim": m})
    return rows, worst


def hs_lemma_suite(seed: int = 0, pairs: int = 1000, tuples: int = 200) -> HSReport:
    identity, lipschitz = hs_pairs_check(pairs, seed=seed)
    codist = hs_codist_check(tuples, seed=seed)
    heis = heisenberg_group(3)[0]
    blocks, pv = hs_pv_check([symmetric_group(3), heis], seed)
    return HSReport(pairs, identity, lipschitz, tuples, codist, blocks, pv, seed)


# -- bound evaluators -------------------------------------------------------------------------------


def _exact(x) -> sympy.Expr:
    if isinstance(x, sympy.Basic):
        return x
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    if isinstance(x, int):
        return sympy.Integer(x)
    if isinstance(x, str):
        return sympy.Rational(x)
    return sympy.Float(x)


def kazhdan_table_value(family: str, n: int, d: int) -> sympy.Expr:
    """K(Phi, d) for reduced irreducible classical Phi of rank >= 2 (valid up to an absolute constant)."""
    family = family.upper()
    if (family, n) in {("B", 2), ("C", 2), ("G", 2)}:
        return 1 / sympy.sqrt(2) ** d
    if family == "A" and n >= 2 or family == "B" and n >= 3 or family == "D" and n >= 4:
        return 1 / sympy.sqrt(n + d)
    if family == "E" and n in (6, 7, 8) or family == "F" and n == 4:
        if d < 1:
            raise SpectraError("constraint violated: d >= 1 for the exceptional rows")
        return 1 / sympy.sqrt(d)
    if family == "C" and n >= 3:
        return 1 / sympy.sqrt(n + 2 ** d)
    raise SpectraError(f"no table row for {family}{n}")


@dataclass(frozen=True)
class BoundFormula:
    name: str
    parameters: tuple[str, ...]
    statement: str
    formula: Callable[..., sympy.Expr]
    constraints: tuple[tuple[str, Callable[..., bool]], ...] = ()
    monotone: tuple[tuple[str, int], ...] = ()


def _harmonic(kappas):
    return 1 / sum(1 / k for k in kappas)


BOUNDS: dict[str, BoundFormula] = {b.name: b for b in [
    BoundFormula(
        "orthogonality_kazhdan", ("rho",), "kappa(G, U H_i) >= sqrt(2(1 - rho))",
        lambda rho: sympy.sqrt(2 * (1 - rho)),
        (("0 <= rho < 1", lambda rho: 0 <= rho < 1),),
        (("rho", -1),)),
    BoundFormula(
        "spectral_criterion", ("lam1", "p", "k"), "kappa >= sqrt(2(lam1 - 2pk) / (lam1 (1 - p)))",
        lambda lam1, p, k: sympy.sqrt(2 * (lam1 - 2 * p * k) / (lam1 * (1 - p))),
        (("lam1 > 0", lambda lam1, p, k: lam1 > 0), ("k > 0", lambda lam1, p, k: k > 0),
         ("0 <= p < lam1/(2k)", lambda lam1, p, k: 0 <= p < lam1 / (2 * k))),
        (("p", -1), ("k", -1))),
    BoundFormula(
        "generalized_spectral_criterion", ("eps", "k", "lam1", "A", "B"),
        "kappa >= sqrt(4 eps k / (eps lam1 A + (2k - lam1) B))",
        lambda eps, k, lam1, A, B: sympy.sqrt(4 * eps * k / (eps * lam1 * A + (2 * k - lam1) * B)),
        (("eps > 0", lambda eps, k, lam1, A, B: eps > 0), ("A, B > 0", lambda eps, k, lam1, A, B: A > 0 and B > 0),
         ("0 < lam1 <= 2k", lambda eps, k, lam1, A, B: 0 < lam1 <= 2 * k)),
        (("eps", 1), ("A", -1), ("B", -1))),
    BoundFormula(
        "core_epsilon", ("N", "roots"), "eps = 8 / ((N - 2) 4^(|Phi|/2))",
        lambda N, roots: sympy.Integer(8) / ((N - 2) * sympy.Integer(4) ** (sympy.Rational(roots, 2))),
        (("N > 2", lambda N, roots: N > 2), ("|Phi| > 0", lambda N, roots: roots > 0)),
        (("N", -1), ("roots", -1))),
    BoundFormula(
        "central_extension", ("eps", "delta", "A", "B"),
        "kappa(G, N; A u B u C) >= min{12 eps / (5 sqrt(72 eps^2 |A| + 25 |B|)), delta} / sqrt 3",
        lambda eps, delta, A, B: sympy.Min(12 * eps / (5 * sympy.sqrt(72 * eps ** 2 * A + 25 * B)), delta) / sympy.sqrt(3),
        (("eps > 0", lambda eps, delta, A, B: eps > 0), ("delta > 0", lambda eps, delta, A, B: delta > 0),
         ("|A|, |B| >= 0 and |A| + |B| > 0", lambda eps, delta, A, B: A >= 0 and B >= 0 and A + B > 0)),
        (("eps", 1), ("delta", 1), ("A", -1), ("B", -1))),
    BoundFormula(
        "bounded_generation", ("kappas",), "kappa_r(G, B_1...B_k; S) >= 1 / sum(1/kappa_r(G, B_i; S))",
        lambda kappas: _harmonic(kappas),
        (("every kappa_i > 0", lambda kappas: len(kappas) > 0 and all(k > 0 for k in kappas)),)),
    BoundFormula(
        "normal_subgroup_ratio", ("a", "b"), "kappa_r(G, H; Sigma) >= 1 / sqrt(2a^2 + 4b^2)",
        lambda a, b: 1 / sympy.sqrt(2 * a ** 2 + 4 * b ** 2),
        (("a > 0", lambda a, b: a > 0), ("b > 0", lambda a, b: b > 0)),
        (("a", -1), ("b", -1))),
    BoundFormula(
        "ratio_product", ("kappa", "ratio"), "kappa(G, S) >= kappa(G, B) kappa_r(G, B; S)",
        lambda kappa, ratio: kappa * ratio,
        (("kappa >= 0", lambda kappa, ratio: kappa >= 0), ("ratio >= 0", lambda kappa, ratio: ratio >= 0)),
        (("kappa", 1), ("ratio", 1))),
    BoundFormula(
        "nilpotent_codistance", ("c", "k"), "codist <= 1 - 1/(4^(c-1) k)",
        lambda c, k: 1 - 1 / (sympy.Integer(4) ** (c - 1) * k),
        (("c >= 1", lambda c, k: c >= 1), ("k >= 1", lambda c, k: k >= 1)),
        (("c", 1), ("k", 1))),
    BoundFormula(
        "central_codistance_step", ("m", "eps"), "codist <= 1 - (m - 1) eps / (2m)",
        lambda m, eps: 1 - (m - 1) * eps / (2 * m),
        (("m >= 1", lambda m, eps: m >= 1), ("0 <= eps <= 1", lambda m, eps: 0 <= eps <= 1)),
        (("m", -1), ("eps", -1))),
    BoundFormula(
        "kazhdan_table", ("family", "n", "d"), "K(Phi, d), up to an absolute constant",
        lambda family, n, d: kazhdan_table_value(family, int(n), int(d)),
        (("d >= 0", lambda family, n, d: d >= 0),),
        (("d", -1),)),
    BoundFormula(
        "relative_an", ("d", "n"), "kappa_r(G', N; S) >= 1/sqrt(d + n), up to an absolute constant",
        lambda d, n: 1 / sympy.sqrt(d + n),
        (("n >= 2", lambda d, n: n >= 2), ("d >= 0", lambda d, n: d >= 0)),
        (("d", -1), ("n", -1))),
    BoundFormula(
        "relative_b2", ("d",), "kappa(St_A1(R) x N, N; S) >= 2^(-d/2), up to an absolute constant",
        lambda d: 1 / sympy.sqrt(2) ** d,
        (("d >= 0", lambda d: d >= 0),),
        (("d", -1),)),
]}


def evaluate_bound(name: str, inputs: Mapping[str, object]) -> sympy.Expr:
    """Exact value of a named bound; inputs are ints, Fractions, rational strings or sympy numbers."""
    if name not in BOUNDS:
        raise SpectraError(f"unknown bound {name}; known: {sorted(BOUNDS)}")
    formula = BOUNDS[name]
    missing = [p for p in formula.parameters if p not in inputs]
    if missing:
        raise SpectraError(f"{name} needs {missing}")
    args = {}
    for p in formula.parameters:
        value = inputs[p]
        if p == "family":
            args[p] = str(value)
        elif p == "kappas":
            args[p] = [_exact(v) for v in value]
        else:
            args[p] = _exact(value)
    for text, check in formula.constraints:
        if not bool(check(**args)):
            raise SpectraError(f"constraint violated for {name}: {text}")
    return sympy.simplify(formula.formula(**args))


def epsilon_phi(system) -> Fraction:
    """The core epsilon of a root system, from its Borel-set count and size."""
    N = len(enumerate_borel_sets(system))
    value = evaluate_bound("core_epsilon", {"N": N, "roots": len(system.roots)})
    if not value.is_rational:
        raise SpectraError("core epsilon is not rational for this system")
    return Fraction(int(value.p), int(value.q))


# -- the spectral pipeline --------------------------------------------------------------------------


@dataclass
class PipelineCheck:
    name: str
    bound: float
    worst: float
    holds: bool
    inputs: dict
    witness: dict | None = None
    kind: str = "upper"

    @property
    def margin(self) -> float:
        """Positive when the inequality holds: worst stays below an upper bound or above a lower one."""
        return self.bound - self.worst if self.kind == "upper" else self.worst - self.bound

    def to_json(self) -> dict:
        out = self.__dict__.copy()
        out["margin"] = self.margin
        return out


@dataclass
class PipelineReport:
    model: str
    group_order: int
    seed: int
    checks: list[PipelineCheck]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    def check(self, name: str) -> PipelineCheck:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {"model": self.model, "group_order": self.group_order, "seed": self.seed, "holds": self.holds,
                "checks": [c.to_json() for c in self.checks]}


def _unit_real(rng, dim) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def spectral_pipeline(model: GradedGroupModel, seed: int = 0, samples: int = 50, tolerance: float = TOLERANCE,
                      routing: str = "optimal") -> PipelineReport:
    """Check every inequality of the spectral argument on H = l^2_0(G) for a finite graded model.

    Vertex groups G_f are generated by the root subgroups of the Borel sets, edge groups by
    the intersections of adjacent Borel sets, core groups by the cores.
    """
    system = model.system
    rng = np.random.default_rng(seed)
    group = FiniteGroup.from_matrices(model.ring, model.full_group(), model.name)
    rep = RepresentationModel.regular(group)
    n = group.order
    enum = enumerate_borel_sets(system)
    large = large_weyl_graph(enum)
    N = len(enum)
    k = len(large.neighbors[0])
    spectrum = laplacian_spectrum(large)
    lam1 = min(v for v, _ in spectrum.eigenvalues if v > 0)
    p_bar = Fraction(lam1) / (2 * k)
    eps = epsilon_phi(system)
    pc = path_constant(enum, routing)
    A, B = pc.a_constant, pc.b_constant

    def sub(mask: int) -> tuple[int, ...]:
        roots = [r for r in system.members(mask) if r in model.subgroups]
        return group.indices_of(model.closure(roots))

    vertex = [sub(b.positives) for b in enum.borel_sets]
    core = [sub(enum.core(b.id)) for b in enum.borel_sets]
    edge = {}
    for u, v in large.edges:
        edge[(u, v)] = edge[(v, u)] = sub(enum.borel_sets[u].positives & enum.borel_sets[v].positives)
    P0 = rep.invariant_projector()
    PV = [rep.projector(h) - P0 for h in vertex]
    PC_perp = [np.eye(n) - rep.projector(h) for h in core]
    checks = []

    # vertex codistances, on the complement of the G_f-invariant vectors
    worst, witness = 0.0, None
    for f in range(N):
        Q = np.eye(n) - rep.projector(vertex[f])
        value = codistance([rep.projector(edge[(e, f)]) @ Q for e in large.neighbors[f]], projectors=True)
        if value > worst:
            worst, witness = value, {"vertex": f}
    checks.append(PipelineCheck("vertex_codistance", float(p_bar), worst, worst <= p_bar + tolerance,
                                {"p_bar": str(p_bar)}, witness))

    # away from the core invariants
    bound = (1 - eps) / 2
    worst, witness = 0.0, None
    for f in range(N):
        Q = PC_perp[f]
        if np.allclose(Q, 0):
            continue
        Ps = [rep.projector(edge[(e, f)]) @ Q for e in large.neighbors[f]]
        value = codistance(Ps, projectors=True)
        if value > worst:
            worst, witness = value, {"vertex": f}
    checks.append(PipelineCheck("core_free_codistance", float(bound), worst, worst <= bound + tolerance,
                                {"epsilon": str(eps), "N": N, "roots": len(system.roots)}, witness))

    # norm inequality and Laplacian angle on random g with g(f) in H^{G_f}
    directed = [(u, v) for u in range(N) for v in large.neighbors[u]]
    angle = eps / (B * (1 - p_bar) + eps * A * p_bar)
    worst_norm, worst_angle = -np.inf, -np.inf
    norm_witness = angle_witness = None
    for trial in range(samples):
        g = np.stack([PV[f] @ rng.normal(size=n) for f in range(N)])
        d_sq = rho1_sq = rho3_sq = 0.0
        for u, v in directed:
            dg = g[v] - g[u]
            d_sq += dg @ dg / 2
            r1 = PV[v] @ dg
            rho1_sq += r1 @ r1 / 2
            r3 = PC_perp[v] @ dg
            rho3_sq += r3 @ r3 / 2
        excess = d_sq - float(A) * rho1_sq - float(B) * rho3_sq
        if excess / max(d_sq, 1e-300) > worst_norm:
            worst_norm, norm_witness = float(excess / max(d_sq, 1e-300)), {"trial": trial}
        lap = np.stack([sum(g[f] - g[e] for e in large.neighbors[f]) for f in range(N)])
        lap_sq = float(np.sum(lap * lap))
        proj_sq = float(sum((PV[f] @ lap[f]) @ (PV[f] @ lap[f]) for f in range(N)))
        if lap_sq > 0:
            deficit = float(angle) - proj_sq / lap_sq
            if deficit > worst_angle:
                worst_angle, angle_witness = deficit, {"trial": trial, "ratio": proj_sq / lap_sq}
    checks.append(PipelineCheck("norm_inequality", 0.0, worst_norm, bool(worst_norm <= tolerance),
                                {"A": str(A), "B": str(B), "samples": samples}, norm_witness))
    checks.append(PipelineCheck("laplacian_angle", 0.0, worst_angle, worst_angle <= tolerance,
                                {"ratio_bound": str(angle), "samples": samples}, angle_witness))

    # Kazhdan-type movement bounds for unit vectors in l^2_0(G)
    root_groups = [group.indices_of(model.closure([r])) for r in sorted(model.subgroups)]
    rho = codistance([rep.projector(h) - P0 for h in root_groups], projectors=True)
    root_bound = float(evaluate_bound("orthogonality_kazhdan", {"rho": sympy.Float(min(rho, 1 - 1e-15))}))
    gen_bound = float(evaluate_bound("generalized_spectral_criterion",
                                     {"eps": eps, "k": k, "lam1": lam1, "A": A, "B": B}))
    union_roots = sorted(set(itertools.chain(*root_groups)))
    union_vertex = sorted(set(itertools.chain(*vertex)))
    vectors = []
    reduced = np.eye(n) - P0
    for _ in range(samples):
        v = reduced @ rng.normal(size=n)
        vectors.append(v / np.linalg.norm(v))
    M = sum(rep.projector(h) - P0 for h in root_groups) / len(root_groups)
    vals, vecs = np.linalg.eigh(M)
    vectors.append(vecs[:, -1])
    for name, elements, bound, inputs in (
            ("root_subgroup_kazhdan", union_roots, root_bound, {"rho": rho}),
            ("vertex_group_kazhdan", union_vertex, gen_bound,
             {"eps": str(eps), "k": k, "lam1": lam1, "A": str(A), "B": str(B)}),
            ("whole_group_kazhdan", list(range(n)), math.sqrt(2), {})):
        worst, witness = np.inf, None
        for i, v in enumerate(vectors):
            moved = float(rep.moved(elements, v).max())
            if moved < worst:
                worst, witness = moved, {"vector": i}
        checks.append(PipelineCheck(name, bound, worst, worst >= bound - tolerance, inputs, witness, "lower"))
    return PipelineReport(model.name, n, seed, checks)

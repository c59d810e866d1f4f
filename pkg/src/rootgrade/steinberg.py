"""Finite matrix models of groups graded by root systems.

A model is a family of finite root subgroups {X_a} of matrices over a
finite ring, indexed by the roots of a RootSystem. On top of it this module
provides subgroup closures by breadth-first search, the grading condition,
strongness inside Borel subgroups, normality of core subgroups, elementary
Chevalley models, standard generating sets, the named identities used for
bounded generation, coarsening along a reduction and the unique
factorization test for Borel subgroups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .borel import enumerate_borel_sets, induced_ordering
from .chevalley import (
    AdjointGroup,
    PolyMatrix,
    chevalley_basis,
    commutator,
    normalize_rank2_signs,
    rank2_base,
    rank2_type,
    root_of,
    t2_identity_holds,
)
from .reduction import GoodnessChecker, Reduction
from .rings import FiniteRing
from .rootsys import RootSystem, build_classical, scale

DEFAULT_CAP = 2_000_000


class ClosureOverflow(RuntimeError):
    """The closure grew beyond its cap; ``size`` is the number of elements found so far."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"closure exceeded the cap of {cap} elements (reached {size})")
        self.size = size
        self.cap = cap


class ModelError(ValueError):
    pass


# -- matrices as hashable keys -------------------------------------------------


def matrix_keys(batch: np.ndarray) -> list[bytes]:
    """Entries are ring elements below 256, so one byte per entry identifies a matrix."""
    if len(batch) == 0:
        return []
    flat = np.ascontiguousarray(batch.reshape(len(batch), -1), dtype=np.uint8)
    return [row.tobytes() for row in flat]


def matrix_key(m: np.ndarray) -> bytes:
    return matrix_keys(m[None])[0]


def _as_batch(matrices, d: int | None = None) -> np.ndarray:
    if isinstance(matrices, np.ndarray):
        return matrices.reshape(-1, matrices.shape[-2], matrices.shape[-1])
    items = list(matrices)
    if not items:
        if d is None:
            raise ModelError("empty generator list without a dimension")
        return np.zeros((0, d, d), dtype=np.int64)
    return np.stack([np.asarray(m) for m in items]).reshape(-1, items[0].shape[-2], items[0].shape[-1])


@dataclass(eq=False)
class ElementSet:
    """A finite set of matrices with constant-time membership."""

    matrices: np.ndarray
    index: dict[bytes, int]

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, m: np.ndarray) -> bool:
        return matrix_key(m) in self.index

    def contains_all(self, batch: np.ndarray) -> bool:
        return all(k in self.index for k in matrix_keys(_as_batch(batch)))

    def missing(self, batch: np.ndarray) -> list[int]:
        return [i for i, k in enumerate(matrix_keys(_as_batch(batch))) if k not in self.index]

    def issubset(self, other: "ElementSet") -> bool:
        return all(k in other.index for k in self.index)

    @classmethod
    def of(cls, batch: np.ndarray) -> "ElementSet":
        batch = _as_batch(batch)
        index: dict[bytes, int] = {}
        keep = []
        for i, k in enumerate(matrix_keys(batch)):
            if k not in index:
                index[k] = len(keep)
                keep.append(i)
        return cls(batch[keep], index)


def _chunk(ring: FiniteRing, d: int, gens: int) -> int:
    per_product = d * d * (4 if ring.modulus is not None or ring.linear_structure is not None else d)
    return max(1, 4_000_000 // (per_product * max(gens, 1)))


def subgroup_closure(ring: FiniteRing, generators, cap: int = DEFAULT_CAP, d: int | None = None) -> ElementSet:
    """All products of the generators (a finite monoid, hence the generated group), by BFS from the identity."""
    gens = _as_batch(generators, d)
    d = gens.shape[-1]
    identity = ring.identity_matrix(d)
    gens = ElementSet.of(gens).matrices if len(gens) else gens
    id_key = matrix_key(identity)
    gens = np.array([g for g, k in zip(gens, matrix_keys(gens)) if k != id_key], dtype=np.int64).reshape(-1, d, d)
    index = {id_key: 0}
    store = [identity[None]]
    frontier = identity[None]
    chunk = _chunk(ring, d, len(gens))
    while len(frontier) and len(gens):
        fresh = []
        for start in range(0, len(frontier), chunk):
            block = frontier[start:start + chunk]
            prods = ring.right_products(block, gens).reshape(-1, d, d)
            for key, m in zip(matrix_keys(prods), prods):
                if key not in index:
                    index[key] = len(index)
                    fresh.append(m)
                    if len(index) > cap:
                        raise ClosureOverflow(len(index), cap)
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, d, d)
        store.append(frontier)
    return ElementSet(np.concatenate(store), index)


def batch_inverse(ring: FiniteRing, batch: np.ndarray) -> np.ndarray:
    """Inverses of invertible matrices: Neumann series for unipotent ones, powers otherwise."""
    batch = _as_batch(batch)
    n, d = len(batch), batch.shape[-1]
    identity = ring.identity_matrix(d)
    nil = ring.add_table[batch, ring.neg_table[identity]]  # g - 1
    minus_nil = ring.neg_table[nil]
    inv = np.broadcast_to(identity, batch.shape).copy()
    power = inv.copy()
    for _ in range(d):
        power = ring.matmul(power, minus_nil)
        inv = ring.add_table[inv, power]
    check = ring.matmul(batch, inv)
    bad = [i for i in range(n) if not np.array_equal(check[i], identity)]
    for i in bad:
        inv[i] = _inverse_by_powers(ring, batch[i])
    return inv


def _inverse_by_powers(ring: FiniteRing, g: np.ndarray, limit: int = 1_000_000) -> np.ndarray:
    identity = ring.identity_matrix(g.shape[-1])
    previous, current = identity, g
    for _ in range(limit):
        if np.array_equal(current, identity):
            return previous
        previous, current = current, ring.matmul(current, g)
    raise ModelError("matrix is not invertible or has very large order")


def commutator_batch(ring: FiniteRing, a: np.ndarray, a_inv: np.ndarray, b: np.ndarray, b_inv: np.ndarray) -> np.ndarray:
    """All [x, y] = x^-1 y^-1 x y for x in a, y in b, shape (len a, len b, d, d)."""
    left = ring.matmul(a_inv[:, None], b_inv[None, :])
    left = ring.matmul(left, a[:, None])
    return ring.matmul(left, b[None, :])


def product(ring: FiniteRing, factors: Sequence[np.ndarray]) -> np.ndarray:
    out = factors[0]
    for f in factors[1:]:
        out = ring.matmul(out, f)
    return out


# -- root subgroups and models ---------------------------------------------------


@dataclass(eq=False)
class RootSubgroup:
    """Matrices of one root subgroup, listed with their parameters."""

    params: tuple
    matrices: np.ndarray
    labels: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.params)

    @cached_property
    def position(self) -> dict:
        return {p: i for i, p in enumerate(self.params)}

    def matrix(self, param) -> np.ndarray:
        return self.matrices[self.position[param]]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(self.params[i])


def positive_cone_roots(system: RootSystem, a: int, b: int) -> list[int]:
    """Roots x*a + y*b with real x, y >= 1."""
    ra, rb = system.roots[a], system.roots[b]

    def dot(u, v):
        return sum((x * y for x, y in zip(u, v)), Fraction(0))

    aa, ab, bb = dot(ra, ra), dot(ra, rb), dot(rb, rb)
    det = aa * bb - ab * ab
    out = []
    if det == 0:
        c = ab / aa  # rb = c ra
        for g, rg in enumerate(system.roots):
            lam = dot(rg, ra) / aa
            if list(rg) == list(scale(lam, ra)) and lam >= 1 + c:
                out.append(g)
        return out
    for g, rg in enumerate(system.roots):
        ga, gb = dot(rg, ra), dot(rg, rb)
        x = (ga * bb - gb * ab) / det
        y = (gb * aa - ga * ab) / det
        if x >= 1 and y >= 1 and all(v == x * p + y * q for v, p, q in zip(rg, ra, rb)):
            out.append(g)
    return out


def negatively_proportional(system: RootSystem, a: int, b: int) -> bool:
    ra, rb = system.roots[a], system.roots[b]
    for x, y in zip(ra, rb):
        if x != 0:
            c = y / x
            return c < 0 and all(v == c * u for u, v in zip(ra, rb))
    return False


@dataclass(eq=False)
class GradedGroupModel:
    """Root subgroups X_a (a an index into ``system.roots``) of matrices over ``ring``."""

    name: str
    ring: FiniteRing
    system: RootSystem
    dim: int
    subgroups: dict[int, RootSubgroup]
    cap: int = DEFAULT_CAP
    _closures: dict = field(default_factory=dict, repr=False)
    _inverses: dict = field(default_factory=dict, repr=False)
    _generating: dict = field(default_factory=dict, repr=False)

    def root_index(self, root) -> int:
        from .rootsys import rational_vector

        return self.system.index[rational_vector(root)]

    def element(self, root: int, param) -> np.ndarray:
        return self.subgroups[root].matrix(param)

    def inverses(self, root: int) -> np.ndarray:
        if root not in self._inverses:
            self._inverses[root] = batch_inverse(self.ring, self.subgroups[root].matrices)
        return self._inverses[root]

    def small_generators(self, root: int) -> np.ndarray:
        """A greedy generating subset of X_root, which keeps closure searches short."""
        if root not in self._generating:
            sub = self.subgroups[root]
            chosen: list[np.ndarray] = []
            span = ElementSet.of(self.ring.identity_matrix(self.dim)[None])
            for m in sub.matrices:
                if m not in span:
                    chosen.append(m)
                    span = subgroup_closure(self.ring, chosen, self.cap, self.dim)
            self._generating[root] = np.array(chosen, dtype=np.int64).reshape(-1, self.dim, self.dim)
        return self._generating[root]

    def generators(self, roots: Iterable[int]) -> np.ndarray:
        mats = [self.small_generators(r) for r in sorted(set(roots))]
        return np.concatenate(mats) if mats else np.zeros((0, self.dim, self.dim), dtype=np.int64)

    def closure(self, roots: Iterable[int]) -> ElementSet:
        key = frozenset(roots)
        if key not in self._closures:
            self._closures[key] = subgroup_closure(self.ring, self.generators(key), self.cap, self.dim)
        return self._closures[key]

    def full_group(self) -> ElementSet:
        return self.closure(range(len(self.system.roots)))

    def root_label(self, root: int) -> str:
        return "(" + ",".join(str(x) for x in self.system.roots[root]) + ")"

    # -- invariants ----------------------------------------------------------

    def subgroup_failures(self) -> list[str]:
        """Each X_a must be closed under products and contain the identity."""
        out = []
        identity = self.ring.identity_matrix(self.dim)
        for root, sub in self.subgroups.items():
            members = ElementSet.of(sub.matrices)
            if identity not in members:
                out.append(f"X{self.root_label(root)} misses the identity")
                continue
            prods = self.ring.matmul(sub.matrices[:, None], sub.matrices[None, :]).reshape(-1, self.dim, self.dim)
            if not members.contains_all(prods):
                out.append(f"X{self.root_label(root)} is not closed under products")
        return out

    def grading_failures(self, first_only: bool = False) -> list[dict]:
        """Pairs (a, b), b not a negative multiple of a, with [X_a, X_b] outside <X_g : g = xa + yb, x, y >= 1>."""
        out = []
        n = len(self.system.roots)
        for a in range(n):
            for b in range(n):
                if a not in self.subgroups or b not in self.subgroups:
                    continue
                if negatively_proportional(self.system, a, b):
                    continue
                failure = self.pair_failure(a, b)
                if failure is not None:
                    out.append(failure)
                    if first_only:
                        return out
        return out

    def pair_failure(self, a: int, b: int) -> dict | None:
        targets = [g for g in positive_cone_roots(self.system, a, b) if g in self.subgroups]
        target = self.closure(targets)
        A, B = self.subgroups[a], self.subgroups[b]
        comms = commutator_batch(self.ring, A.matrices, self.inverses(a), B.matrices, self.inverses(b))
        flat = comms.reshape(-1, self.dim, self.dim)
        missing = target.missing(flat)
        if not missing:
            return None
        i, j = divmod(missing[0], len(B))
        return {"alpha": self.root_label(a), "beta": self.root_label(b),
                "targets": [self.root_label(g) for g in targets],
                "witness": [A.label(i), B.label(j)], "violations": len(missing)}

    def grading_holds(self) -> bool:
        return not self.grading_failures(first_only=True)

    def strong_at(self, gamma: int, positives: int) -> bool:
        """X_gamma inside <X_b : b in the Borel set, b not on the line of gamma>."""
        line = self.system.line_masks[self.system.line_index[gamma]]
        roots = [b for b in self.system.members(positives & ~line) if b in self.subgroups]
        return self.closure(roots).contains_all(self.subgroups[gamma].matrices)

    def strong_report(self) -> dict:
        """Strongness at every pair (gamma, f) with gamma in the core of f."""
        enum = enumerate_borel_sets(self.system)
        pairs, failures = 0, []
        for b in enum.borel_sets:
            for gamma in self.system.members(enum.core(b.id)):
                pairs += 1
                if not self.strong_at(gamma, b.positives):
                    failures.append({"borel": b.id, "gamma": self.root_label(gamma)})
        return {"model": self.name, "pairs": pairs, "strong": not failures, "failures": failures}

    def core_normality_failures(self) -> list[dict]:
        """G_{C_f} must be normal in G_f: conjugates of its elements by the generators of G_f stay inside."""
        enum = enumerate_borel_sets(self.system)
        out = []
        for b in enum.borel_sets:
            core = self.closure(r for r in self.system.members(enum.core(b.id)) if r in self.subgroups)
            roots = [r for r in self.system.members(b.positives) if r in self.subgroups]
            if not roots:
                continue
            gens = self.generators(roots)
            gens_inv = batch_inverse(self.ring, gens)
            conj = self.ring.matmul(self.ring.matmul(gens_inv[:, None], core.matrices[None, :]), gens[:, None])
            if not core.contains_all(conj.reshape(-1, self.dim, self.dim)):
                out.append({"borel": b.id})
        return out

    def fattened(self) -> "GradedGroupModel":
        """X~_a = <X_{ca} : c >= 1>; changes only non-reduced systems."""
        system = self.system
        subgroups = {}
        for a in self.subgroups:
            multiples = [g for g in self.subgroups
                         if system.line_index[g] == system.line_index[a] and _ratio(system.roots[g], system.roots[a]) >= 1]
            if multiples == [a]:
                subgroups[a] = self.subgroups[a]
            else:
                closure = self.closure(multiples)
                subgroups[a] = RootSubgroup(tuple(range(len(closure))), closure.matrices)
        return GradedGroupModel(self.name + "~", self.ring, system, self.dim, subgroups, self.cap)

    def with_subgroup(self, root: int, sub: RootSubgroup, name: str | None = None) -> "GradedGroupModel":
        subgroups = dict(self.subgroups)
        subgroups[root] = sub
        return GradedGroupModel(name or self.name + "'", self.ring, self.system, self.dim, subgroups, self.cap)

    def summary(self) -> dict:
        return {"name": self.name, "ring": self.ring.name, "system": self.system.label, "dim": self.dim,
                "root_subgroup_orders": sorted({len(s) for s in self.subgroups.values()})}


def _ratio(u, v) -> Fraction:
    for x, y in zip(u, v):
        if y != 0:
            return x / y
    return Fraction(0)


# -- elementary Chevalley models -----------------------------------------------------


def normalized_table(system: RootSystem):
    table = chevalley_basis(system)
    return normalize_rank2_signs(table) if rank2_type(system) else table


def _reduce_integer_matrix(ring: FiniteRing, m: np.ndarray) -> np.ndarray:
    ints = np.rint(m).astype(np.int64)
    values = {int(v): ring.from_int(int(v)) for v in np.unique(ints)}
    out = np.vectorize(values.__getitem__, otypes=[np.int64])(ints)
    return out


def elementary_chevalley_model(system: RootSystem, ring: FiniteRing, table=None) -> GradedGroupModel:
    """x_a(r) = sum_k r^k ad(x_a)^k / k! reduced into R, in the adjoint representation."""
    if not ring.is_commutative:
        raise ModelError("elementary Chevalley models need a commutative ring")
    table = table or normalized_table(system)
    group = AdjointGroup(table)
    d = table.dim
    subgroups = {}
    params = tuple(ring.elements)
    for a in range(len(system.roots)):
        reduced = [_reduce_integer_matrix(ring, p) for p in group.ad_powers(a)]
        mats = np.empty((ring.size, d, d), dtype=np.int64)
        for r in params:
            acc = np.zeros((d, d), dtype=np.int64)
            rk = ring.one
            for p in reduced:
                acc = ring.add_table[acc, ring.mul_table[rk, p]]
                rk = ring.mul(rk, r)
            mats[r] = acc
        subgroups[a] = RootSubgroup(params, mats, ring.labels)
    return GradedGroupModel(f"E_{system.label}({ring.name})", ring, system, d, subgroups)


def elementary_linear_model(n: int, ring: FiniteRing) -> GradedGroupModel:
    """x_{e_i - e_j}(r) = 1 + r E_ij in GL_n(R), graded by A_{n-1}; R may be noncommutative."""
    system = build_classical("A", n - 1)
    subgroups = {}
    for a, root in enumerate(system.roots):
        i = next(k for k, x in enumerate(root) if x == 1)
        j = next(k for k, x in enumerate(root) if x == -1)
        mats = np.broadcast_to(ring.identity_matrix(n), (ring.size, n, n)).copy()
        mats[:, i, j] = np.arange(ring.size)
        subgroups[a] = RootSubgroup(tuple(ring.elements), mats, ring.labels)
    return GradedGroupModel(f"EL_{n}({ring.name})", ring, system, n, subgroups)


def positive_unipotent(model: GradedGroupModel, positives: int | None = None) -> ElementSet:
    if positives is None:
        enum = enumerate_borel_sets(model.system)
        positives = enum.borel_sets[0].positives
    return model.closure(model.system.members(positives))


# -- standard generators -----------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    root: int
    param: int


def products_of_distinct(ring: FiniteRing, T: Sequence[int]) -> list[int]:
    """T*: products t_{i1}...t_{ik} over nonempty index sets i1 < ... < ik."""
    out = set()
    for k in range(1, len(T) + 1):
        for combo in itertools.combinations(T, k):
            value = ring.one
            for t in combo:
                value = ring.mul(value, t)
            out.add(value)
    return sorted(out)


def standard_generator_case(system: RootSystem) -> int:
    label = (system.label or "").upper()
    family = label.rstrip("0123456789")
    kind = rank2_type(system)
    if kind == "G2" or family == "G":
        return 3
    if kind == "B2" or family == "C" or label in ("B2",):
        return 2
    if not system.is_reduced():
        raise ModelError("standard generators are defined for reduced systems")
    return 1


def standard_generators(system: RootSystem, ring: FiniteRing, T: Sequence[int]) -> list[Generator]:
    """Sigma_Phi(T): x_a(t) with t in T or T* according to the root length and the type."""
    T = [ring.parse(t) for t in T]
    if not T or T[0] != ring.one:
        raise ModelError("T must start with t_0 = 1")
    case = standard_generator_case(system)
    star = products_of_distinct(ring, T)
    classes = system.length_classes()
    long_norm = max(system.norm(r) for r in system.roots)
    out = []
    for a, root in enumerate(system.roots):
        is_long = system.norm(root) == long_norm and len(classes) > 1
        if case == 1:
            values = T
        elif case == 2:
            values = star if is_long else T
        else:
            values = T if is_long else star
        out.extend(Generator(a, t) for t in sorted(set(values)))
    return out


@dataclass
class GenerationReport:
    generated: bool
    method: str
    sigma_size: int
    closure_size: int | None = None
    full_size: int | None = None
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"generated": self.generated, "method": self.method, "sigma_size": self.sigma_size,
                "closure_size": self.closure_size, "full_size": self.full_size, "witnesses": self.witnesses}


def verify_generation(model: GradedGroupModel, sigma: Sequence[Generator], method: str = "auto",
                      exhaustive_limit: int = 200_000) -> GenerationReport:
    """Does <Sigma> equal the group generated by all root subgroups?

    ``closure`` compares the two closures element by element. ``borel``
    shows every root subgroup X_a lies in <Sigma ∩ U_f> for a Borel set f
    containing a, which never leaves the finite unipotent subgroups.
    ``auto`` tries the closure first and falls back to the Borel route once
    the full group passes ``exhaustive_limit`` elements.
    """
    mats = np.stack([model.element(g.root, g.param) for g in sigma])
    if method in ("auto", "closure"):
        try:
            limit = exhaustive_limit if method == "auto" else model.cap
            full = subgroup_closure(model.ring, model.generators(model.subgroups), limit, model.dim)
            generated = subgroup_closure(model.ring, mats, limit, model.dim)
            return GenerationReport(len(generated) == len(full) and generated.issubset(full), "closure",
                                    len(sigma), len(generated), len(full))
        except ClosureOverflow:
            if method == "closure":
                raise
    enum = enumerate_borel_sets(model.system)
    witnesses = {}
    cache: dict[int, ElementSet] = {}
    for a in model.subgroups:
        for b in enum.borel_sets:
            if not b.positives >> a & 1:
                continue
            if b.id not in cache:
                inside = [i for i, g in enumerate(sigma) if b.positives >> g.root & 1]
                cache[b.id] = subgroup_closure(model.ring, mats[inside], model.cap, model.dim)
            if cache[b.id].contains_all(model.subgroups[a].matrices):
                witnesses[model.root_label(a)] = b.id
                break
        else:
            return GenerationReport(False, "borel", len(sigma), witnesses=witnesses | {model.root_label(a): None})
    return GenerationReport(True, "borel", len(sigma), witnesses=witnesses)


# -- named identities ------------------------------------------------------------------


@dataclass
class NamedIdentityResult:
    name: str
    statement: str
    holds: bool
    defect: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "statement": self.statement, "holds": self.holds, "defect": self.defect}


def _x(group: AdjointGroup, root: int, coefficient: int, i: int, j: int) -> PolyMatrix:
    return group.element(root, coefficient, i, j)


def _comm(group: AdjointGroup, first: tuple, second: tuple) -> PolyMatrix:
    (a, ca, ia, ja), (b, cb, ib, jb) = first, second
    return commutator(_x(group, a, ca, ia, ja), _x(group, b, cb, ib, jb),
                      _x(group, a, -ca, ia, ja), _x(group, b, -cb, ib, jb))


def _identify_root_element(group: AdjointGroup, residual: PolyMatrix, names: dict[int, str]) -> str | None:
    """Name x_g(c t^i s^j) equal to ``residual``, searching small c, i, j."""
    if residual.is_identity():
        return "identity"
    for g, name in names.items():
        for i in range(5):
            for j in range(5):
                for c in range(-4, 5):
                    if c and residual == _x(group, g, c, i, j):
                        return f"x_{{{name}}}({c} t^{i} s^{j})"
    return None


def verify_named_identities(b2_table=None, g2_ring: FiniteRing | None = None) -> list[NamedIdentityResult]:
    """The B2 generation identities over Z[t, s] and the G2 bounded-generation membership over a finite ring."""
    from .rings import zmod

    table = b2_table or normalized_table(build_classical("B", 2))
    group = AdjointGroup(table)
    a, b = rank2_base(table)
    ab, a2b, na = root_of(table, 1, 1), root_of(table, 1, 2), root_of(table, -1, 0)
    names = {root_of(table, i, j): n for (i, j), n in
             {(1, 0): "a", (0, 1): "b", (1, 1): "a+b", (1, 2): "a+2b", (-1, 0): "-a", (0, -1): "-b",
              (-1, -1): "-a-b", (-1, -2): "-a-2b"}.items()}
    results = [NamedIdentityResult("t2", "x_{a+2b}(t^2) = [x_a(1), x_b(t)] x_{a+b}(-t)", t2_identity_holds(table))]

    def check(name, statement, lhs: PolyMatrix, rhs: PolyMatrix, lhs_inverse: PolyMatrix):
        holds = lhs == rhs
        defect = None if holds else _identify_root_element(group, lhs_inverse @ rhs, names)
        results.append(NamedIdentityResult(name, statement, holds, defect))

    # variables: t and s stand for (m1, m2), (m, -) or (t, m1) as in each statement
    check("generatorsB2-case1", "x_{a+2b}(m1 m2^2) = [x_a(m1), x_b(m2)] x_{a+b}(-m1 m2)",
          _x(group, a2b, 1, 1, 2), _comm(group, (a, 1, 1, 0), (b, 1, 0, 1)) @ _x(group, ab, -1, 1, 1),
          _x(group, a2b, -1, 1, 2))
    check("generatorsB2-case2a", "x_{a+b}(m) = [x_a(m), x_b(1)] x_{a+2b}(-m)",
          _x(group, ab, 1, 1, 0), _comm(group, (a, 1, 1, 0), (b, 1, 0, 0)) @ _x(group, a2b, -1, 1, 0),
          _x(group, ab, -1, 1, 0))
    check("generatorsB2-case2b", "x_{a+b}(t^2 m1) = [x_a(t^2), x_b(m1)] [x_a(1), x_b(-t m1)] x_{a+b}(t m1)",
          _x(group, ab, 1, 2, 1),
          _comm(group, (a, 1, 2, 0), (b, 1, 0, 1)) @ _comm(group, (a, 1, 0, 0), (b, -1, 1, 1)) @ _x(group, ab, 1, 1, 1),
          _x(group, ab, -1, 2, 1))
    check("generatorsB2-case3a", "x_b(m) = [x_{-a}(m), x_{a+b}(1)] x_{a+2b}(m)",
          _x(group, b, 1, 1, 0), _comm(group, (na, 1, 1, 0), (ab, 1, 0, 0)) @ _x(group, a2b, 1, 1, 0),
          _x(group, b, -1, 1, 0))
    check("generatorsB2-case3b", "x_b(t^2 m1) = [x_{-a}(t^2), x_{a+b}(m1)] [x_{-a}(1), x_{a+b}(-t m1)] x_b(t m1)",
          _x(group, b, 1, 2, 1),
          _comm(group, (na, 1, 2, 0), (ab, 1, 0, 1)) @ _comm(group, (na, 1, 0, 0), (ab, -1, 1, 1)) @ _x(group, b, 1, 1, 1),
          _x(group, b, -1, 2, 1))
    results.extend(g2_bounded_generation(g2_ring or zmod(4)))
    return results


def g2_bounded_generation(ring: FiniteRing) -> list[NamedIdentityResult]:
    """Membership of x_g(2r), g = a + 2b, in products of conjugated long root subgroups of G2(R)."""
    system = build_classical("G", 2)
    table = normalized_table(system)
    model = elementary_chevalley_model(system, ring, table)
    a, b = rank2_base(table)
    gamma, a3b, a23b = root_of(table, 1, 2), root_of(table, 1, 3), root_of(table, 2, 3)
    R = ring
    two = R.from_int(2)
    xb = {k: model.element(b, R.from_int(k)) for k in (1, 2, -1, -2)}
    Xa = model.subgroups[a].matrices

    def conj(X, k):  # X^{x_b(k)} = x_b(k)^-1 X x_b(k)
        return R.matmul(R.matmul(xb[-k][None], X), xb[k][None])

    def product_set(parts):
        current = ElementSet.of(parts[0])
        for part in parts[1:]:
            prods = R.matmul(current.matrices[:, None], part[None]).reshape(-1, model.dim, model.dim)
            current = ElementSet.of(prods)
        return current

    five_factor = product_set([conj(Xa, 2), Xa, conj(Xa, 1), model.subgroups[a3b].matrices, model.subgroups[a23b].matrices])
    six_factor = product_set([Xa, conj(Xa, 2), conj(Xa, 1), Xa, model.subgroups[a3b].matrices,
                           model.subgroups[a23b].matrices])
    targets = np.stack([model.element(gamma, R.mul(two, r)) for r in R.elements])

    # the commutator product itself, compared with x_g(2r) modulo the long roots a+3b, 2a+3b
    def element_product(r):
        c1 = commutator_batch(R, model.element(a, r)[None], model.element(a, R.neg(r))[None], xb[2][None], xb[-2][None])[0, 0]
        c2 = commutator_batch(R, model.element(a, R.mul(two, r))[None], model.element(a, R.neg(R.mul(two, r)))[None],
                              xb[1][None], xb[-1][None])[0, 0]
        return R.matmul(c1, batch_inverse(R, c2[None])[0])

    long_tail = product_set([model.subgroups[a3b].matrices, model.subgroups[a23b].matrices])
    quotient_ok = True
    for r in R.elements:
        p = element_product(r)
        inv_target = model.element(gamma, R.neg(R.mul(two, r)))
        if R.matmul(inv_target, p) not in long_tail:
            quotient_ok = False
    return [
        NamedIdentityResult("G2-bounded-five-factor",
                            f"x_{{a+2b}}(2r) in X_a^{{x_b(2)}} X_a X_a^{{x_b(1)}} X_{{a+3b}} X_{{2a+3b}} over {R.name}",
                            five_factor.contains_all(targets), None if five_factor.contains_all(targets)
                            else f"{len(five_factor.missing(targets))} of {R.size} elements x_g(2r) lie outside"),
        NamedIdentityResult("G2-bounded-six-factor",
                            f"x_{{a+2b}}(2r) in X_a X_a^{{x_b(2)}} X_a^{{x_b(1)}} X_a X_{{a+3b}} X_{{2a+3b}} over {R.name}",
                            six_factor.contains_all(targets), None if six_factor.contains_all(targets)
                            else f"{len(six_factor.missing(targets))} of {R.size} elements x_g(2r) lie outside"),
        NamedIdentityResult("G2-commutator-product",
                            f"[x_a(r), x_b(2)][x_a(2r), x_b(1)]^-1 in x_{{a+2b}}(2r) X_{{a+3b}} X_{{2a+3b}} over {R.name}",
                            quotient_ok),
    ]


# -- coarsening and unique factorization -------------------------------------------


@dataclass(eq=False)
class CoarsenedModel:
    model: GradedGroupModel
    reduction: Reduction
    absorbed: dict[str, int]  # kernel root -> Borel id of the certifying subsystem


def coarsened_grading(model: GradedGroupModel, reduction: Reduction, k: int = 2) -> CoarsenedModel:
    """Y_b = <X_a : a maps to b>; kernel root subgroups must be absorbed by rank-k witnesses."""
    if model.system.roots != reduction.source.roots:
        raise ModelError("the model is not graded by the source of the reduction")
    source = reduction.source
    checker = GoodnessChecker(reduction, k)
    absorbed = {}
    for gamma in reduction.kernel_roots:
        data = checker.kernel_witness(gamma)
        found = None
        if data is not None:
            line = source.line_masks[source.line_index[gamma]]
            for positives, core, gid in data.borel:
                if core >> gamma & 1 and model.strong_at(gamma, positives & ~line):
                    found = gid
                    break
        if found is None:
            raise ModelError(f"kernel root subgroup X{model.root_label(gamma)} is not absorbed by the other root subgroups")
        absorbed[model.root_label(gamma)] = found
    induced = reduction.induced
    subgroups = {}
    for b in range(len(induced.roots)):
        fiber = reduction.fibers.get(b, [])
        closure = model.closure(fiber)
        subgroups[b] = RootSubgroup(tuple(range(len(closure))), closure.matrices)
    coarse = GradedGroupModel(f"{model.name}/{reduction.name}", model.ring, induced, model.dim, subgroups, model.cap)
    return CoarsenedModel(coarse, reduction, absorbed)


def _int_keys(ring: FiniteRing, batch: np.ndarray):
    flat = batch.reshape(len(batch), -1).astype(np.int64)
    q = ring.size
    if flat.shape[1] * np.log2(q) < 62:
        weights = q ** np.arange(flat.shape[1], dtype=np.int64)
        return flat @ weights
    return np.array(matrix_keys(batch), dtype=object)


@dataclass
class FactorizationReport:
    bijective: bool
    order: list[str]
    product_count: int
    distinct: int
    borel_order: int

    def to_json(self) -> dict:
        return self.__dict__.copy()


def unique_factorization_check(model: GradedGroupModel, positives: int | None = None,
                               order: Sequence[int] | None = None, chunk: int = 200_000) -> FactorizationReport:
    """Is (x_1, ..., x_m) -> x_1 ... x_m a bijection from the product of the root subgroups of a Borel set onto its Borel subgroup?"""
    enum = enumerate_borel_sets(model.system)
    borel = enum.borel_sets[0] if positives is None else enum.find(positives)
    if order is None:
        order = induced_ordering(model.system, borel)
    order = [r for r in order if r in model.subgroups]
    R, d = model.ring, model.dim
    partial = model.subgroups[order[0]].matrices
    for root in order[1:-1]:
        nxt = model.subgroups[root].matrices
        partial = R.matmul(partial[:, None], nxt[None]).reshape(-1, d, d)
    last = model.subgroups[order[-1]].matrices if len(order) > 1 else None
    keys = []
    if last is None:
        keys.append(_int_keys(R, partial))
    else:
        step = max(1, chunk // len(last))
        for start in range(0, len(partial), step):
            block = R.matmul(partial[start:start + step, None], last[None]).reshape(-1, d, d)
            keys.append(_int_keys(R, block))
    allkeys = np.concatenate(keys)
    distinct = len(np.unique(allkeys)) if allkeys.dtype != object else len(set(allkeys.tolist()))
    total = int(np.prod([len(model.subgroups[r]) for r in order]))
    borel_group = model.closure(model.system.members(borel.positives))
    return FactorizationReport(distinct == total == len(borel_group), [model.root_label(r) for r in order],
                               total, distinct, len(borel_group))

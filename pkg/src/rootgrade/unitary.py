"""Hyperbolic (C_n-graded) and odd-dimensional (BC_n-graded) unitary models.

Root elements are explicit products of elementary matrices 1 + r E_ab over
a ring with involution. Indices in the formulas are 1-based with the mirror
index bar(i) = 2n+1-i (hyperbolic) or 2n+2-i (odd, with the middle index
n+1). The displayed commutator relations are checked exhaustively on small
rings and on seeded samples otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .chevalley import PolyMatrix, chevalley_basis, commutator_constants
from .reduction import apply_reduction
from .rings import FiniteRing
from .rootsys import RootSystem, build_classical
from .steinberg import GradedGroupModel, ModelError, RootSubgroup, batch_inverse, commutator_batch

EXHAUSTIVE_LIMIT = 16
SAMPLES = 1000


class UnitaryError(ValueError):
    pass


# -- scalar operations shared by the finite and the polynomial models ------------------


class RingOps:
    """Arithmetic on ring elements, with omega a central unit."""

    def __init__(self, ring: FiniteRing, omega: int):
        self.ring = ring
        self.omega = omega
        self.omega_star = ring.conj(omega)

    def conj(self, a):
        return self.ring.conj(a)

    def neg(self, a):
        return self.ring.neg(a)

    def mul(self, a, b):
        return self.ring.mul(a, b)


class SignOps:
    """Integer coefficients of one monomial when * is trivial and omega = +-1."""

    def __init__(self, omega: int):
        self.omega = omega
        self.omega_star = omega

    def conj(self, a):
        return a

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b


# -- root element formulas ------------------------------------------------------------
# Each formula returns the elementary factors (row, column, value), 1-based.


def hyperbolic_factors(n: int, kind: str, i: int, j: int, r, ops) -> list[tuple[int, int, object]]:
    bar = lambda k: 2 * n + 1 - k  # noqa: E731
    if kind == "diff":
        if i < j:
            return [(i, j, r), (bar(j), bar(i), ops.neg(ops.conj(r)))]
        return [(i, j, ops.neg(ops.conj(r))), (bar(j), bar(i), r)]
    if kind == "sum":
        return [(i, bar(j), r), (j, bar(i), ops.neg(ops.mul(ops.omega, ops.conj(r))))]
    if kind == "negsum":
        return [(bar(j), i, ops.neg(ops.conj(r))), (bar(i), j, ops.mul(ops.omega_star, r))]
    if kind == "long":
        return [(i, bar(i), r)]
    if kind == "neglong":
        return [(bar(i), i, ops.neg(ops.conj(r)))]
    raise UnitaryError(f"unknown root kind {kind}")


def odd_factors(n: int, kind: str, i: int, j: int, r, ops) -> list[tuple[int, int, object]]:
    bar = lambda k: 2 * n + 2 - k  # noqa: E731
    mid = n + 1
    if kind == "diff":
        if i < j:
            return [(i, j, r), (bar(j), bar(i), ops.neg(ops.conj(r)))]
        return [(i, j, ops.neg(ops.conj(r))), (bar(j), bar(i), r)]
    if kind == "sum":
        return [(i, bar(j), r), (j, bar(i), ops.neg(ops.conj(r)))]
    if kind == "negsum":
        return [(bar(j), i, ops.neg(ops.conj(r))), (bar(i), j, r)]
    if kind == "short":
        a, t = r
        return [(i, mid, a), (mid, bar(i), ops.neg(ops.conj(a))), (i, bar(i), t)]
    if kind == "negshort":
        a, t = r
        return [(mid, i, ops.neg(ops.conj(a))), (bar(i), mid, a), (bar(i), i, ops.neg(ops.conj(t)))]
    raise UnitaryError(f"unknown root kind {kind}")


def classify_c_root(root) -> tuple[str, int, int]:
    """(kind, i, j) of a C_n or BC_n root written in epsilon coordinates (1-based indices)."""
    nz = [(k + 1, x) for k, x in enumerate(root) if x != 0]
    if len(nz) == 1:
        (i, x), = nz
        if abs(x) == 2:
            return ("long" if x > 0 else "neglong"), i, i
        return ("short" if x > 0 else "negshort"), i, i
    (i, x), (j, y) = nz
    if x > 0 and y < 0:
        return "diff", i, j
    if x < 0 and y > 0:
        return "diff", j, i
    return ("sum" if x > 0 else "negsum"), i, j


# -- finite models ----------------------------------------------------------------------


def _elementary_product(ring: FiniteRing, d: int, factors) -> np.ndarray:
    out = ring.identity_matrix(d)
    for a, b, value in factors:
        m = ring.identity_matrix(d)
        m[a - 1, b - 1] = ring.add(m[a - 1, b - 1], value)
        out = ring.matmul(out, m)
    return out


@dataclass(eq=False)
class UnitaryModel:
    """A unitary model: root element formulas plus the parameter domain of every root."""

    name: str
    ring: FiniteRing
    n: int
    omega: int
    dim: int
    system: RootSystem
    formula: Callable
    domains: dict[str, tuple]
    J: tuple[int, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def ops(self) -> RingOps:
        return RingOps(self.ring, self.omega)

    def z(self, kind: str, i: int, j: int, r) -> np.ndarray:
        key = (kind, i, j, r)
        if key not in self._cache:
            self._cache[key] = _elementary_product(self.ring, self.dim, self.formula(self.n, kind, i, j, r, self.ops))
        return self._cache[key]

    def domain(self, kind: str) -> tuple:
        return self.domains[kind]

    def graded_model(self) -> GradedGroupModel:
        subgroups = {}
        for a, root in enumerate(self.system.roots):
            kind, i, j = classify_c_root(root)
            params = self.domain(kind)
            mats = np.stack([self.z(kind, i, j, p) for p in params])
            labels = tuple(_param_label(self.ring, p) for p in params)
            subgroups[a] = RootSubgroup(tuple(params), mats, labels)
        return GradedGroupModel(self.name, self.ring, self.system, self.dim, subgroups)


def _param_label(ring: FiniteRing, p) -> str:
    if isinstance(p, tuple):
        return "(" + ",".join(ring.label(x) for x in p) + ")"
    return ring.label(p)


def _check_omega(ring: FiniteRing, omega: int):
    if ring.star is None:
        raise UnitaryError("the ring needs an involution")
    if not ring.is_central_unitary(omega):
        raise UnitaryError(f"omega = {ring.label(omega)} is not a central unit with omega omega* = 1")


def unitary_steinberg_model(n: int, ring: FiniteRing, omega=1, J: Iterable | None = None) -> UnitaryModel:
    """The hyperbolic unitary model graded by C_n in GL_{2n}(R); long roots take parameters in J."""
    if n < 2:
        raise UnitaryError("need n >= 2")
    omega = ring.parse(omega)
    _check_omega(ring, omega)
    sym = ring.sym(omega)
    if J is None:
        J = sym
    else:
        J = tuple(sorted(ring.parse(x) for x in J))
        if not set(J) <= set(sym):
            raise UnitaryError("J must lie in Sym_{-omega}")
    short = tuple(ring.elements)
    domains = {"diff": short, "sum": short, "negsum": short, "long": tuple(J), "neglong": tuple(J)}
    return UnitaryModel(f"St_C{n}^{ring.label(omega)}({ring.name})", ring, n, omega, 2 * n,
                        build_classical("C", n), hyperbolic_factors, domains, tuple(J))


def odd_unitary_model(n: int, ring: FiniteRing) -> UnitaryModel:
    """The odd-dimensional unitary model graded by BC_n in GL_{2n+1}(R)."""
    if n < 2:
        raise UnitaryError("need n >= 2")
    if ring.star is None:
        raise UnitaryError("the ring needs an involution")
    R = ring
    short = tuple(R.elements)
    pairs = tuple((r, t) for r in R.elements for t in R.elements
                  if R.mul(r, R.conj(r)) == R.add(t, R.conj(t)))
    doubles = tuple(p for p in pairs if p[0] == 0)
    domains = {"diff": short, "sum": short, "negsum": short, "short": pairs, "negshort": pairs}
    model = UnitaryModel(f"St_BC{n}({R.name})", R, n, R.one, 2 * n + 1, build_classical("BC", n),
                         _odd_formula, domains)
    model.domains["long"] = doubles
    model.domains["neglong"] = doubles
    return model


def _odd_formula(n, kind, i, j, r, ops):
    if kind == "long":
        return odd_factors(n, "short", i, j, r, ops)
    if kind == "neglong":
        return odd_factors(n, "negshort", i, j, r, ops)
    return odd_factors(n, kind, i, j, r, ops)


# -- relation checking ----------------------------------------------------------------------


@dataclass
class Relation:
    name: str
    indices: list[tuple[int, ...]]
    domains: Callable[[tuple[int, ...]], list[tuple]]
    evaluate: Callable  # (indices, params) -> (lhs, [(kind, i, j, param)], context)


@dataclass
class RelationReport:
    name: str
    instances: int
    failures: int
    exhaustive: bool
    first_failure: dict | None = None

    def to_json(self) -> dict:
        return self.__dict__.copy()


def _commutator(model: UnitaryModel, first, second) -> np.ndarray:
    R = model.ring
    a = model.z(*first)[None]
    b = model.z(*second)[None]
    return commutator_batch(R, a, batch_inverse(R, a), b, batch_inverse(R, b))[0, 0]


def _sorted_pair(i, j):
    return (i, j) if i < j else (j, i)


def even_relations(model: UnitaryModel) -> list[Relation]:
    R, n, w = model.ring, model.n, model.omega
    idx = range(1, n + 1)
    J = model.J
    Rall = tuple(R.elements)
    mul, conj, neg, add, sub = R.mul, R.conj, R.neg, R.add, R.sub

    def e1(ix, ps):
        i, j, k = ix
        r, s = ps
        return ("diff", i, j, r), ("diff", j, k, s), [("diff", i, k, mul(r, s))]

    def e2(ix, ps):
        i, j = ix
        r, s = ps
        return ("diff", i, j, r), ("sum", i, j, s), [("long", i, i, sub(mul(s, conj(r)), mul(w, mul(r, conj(s)))))]

    def e3(ix, ps):
        i, j = ix
        r, s = ps
        return ("long", j, j, r), ("diff", i, j, s), [("sum", i, j, neg(mul(s, r))), ("long", i, i, mul(mul(s, r), conj(s)))]

    def e4(ix, ps):
        i, j, k = ix
        r, s = ps
        if i < j < k:
            value = mul(r, s)
        elif k < i < j:
            value = mul(s, conj(r))
        else:
            value = neg(mul(w, mul(r, conj(s))))
        return ("diff", i, j, r), ("sum", *_sorted_pair(j, k), s), [("sum", *_sorted_pair(i, k), value)]

    def e5(ix, ps):
        i, j = ix
        r, s = ps
        if i < j:
            rhs = [("diff", j, i, neg(mul(conj(r), s))), ("long", j, j, mul(mul(conj(s), r), s))]
        else:
            rhs = [("diff", j, i, mul(s, conj(r))), ("long", j, j, mul(mul(s, r), conj(s)))]
        return ("neglong", i, i, r), ("sum", *_sorted_pair(i, j), s), rhs

    triples = [t for t in itertools.product(idx, repeat=3) if t[0] < t[1] < t[2]]
    e4_triples = [t for t in itertools.permutations(idx, 3)
                  if t[0] < t[1] < t[2] or t[2] < t[0] < t[1] or t[0] < t[2] < t[1]]
    pairs = [(i, j) for i in idx for j in idx if i < j]
    ordered = [(i, j) for i in idx for j in idx if i != j]
    return [
        Relation("E1", triples, lambda ix: [Rall, Rall], e1),
        Relation("E2", pairs, lambda ix: [Rall, Rall], e2),
        Relation("E3", pairs, lambda ix: [J, Rall], e3),
        Relation("E4", e4_triples, lambda ix: [Rall, Rall], e4),
        Relation("E5", ordered, lambda ix: [J, Rall], e5),
    ]


def odd_relations(model: UnitaryModel, e3: str = "minus_st") -> list[Relation]:
    """The odd-dimensional relation list.

    ``e3="minus_st"`` uses z_{e_i+e_j}(-st) as the second factor of E3; that form holds only when rr* = 0.
    ``e3="st_star"`` uses z_{e_i+e_j}(st*) = z_{e_i+e_j}(s(rr* - t)), which is what the matrices give.
    """
    if e3 not in ("minus_st", "st_star"):
        raise UnitaryError("e3 must be 'minus_st' or 'st_star'")
    minus_st_e3 = e3 == "minus_st"
    R, n = model.ring, model.n
    idx = range(1, n + 1)
    Rall = tuple(R.elements)
    pairs_dom = model.domain("short")
    mul, conj, neg, sub = R.mul, R.conj, R.neg, R.sub

    def e1(ix, ps):
        i, j, k = ix
        r, s = ps
        return ("diff", i, j, r), ("diff", j, k, s), [("diff", i, k, mul(r, s))]

    def e2(ix, ps):
        i, j = ix
        r, s = ps
        return ("diff", i, j, r), ("sum", i, j, s), [("short", i, i, (0, sub(mul(s, conj(r)), mul(r, conj(s)))))]

    def e3(ix, ps):
        i, j = ix
        (r, t), s = ps
        last = neg(mul(s, t)) if minus_st_e3 else mul(s, conj(t))
        return (("short", j, j, (r, t)), ("diff", i, j, s),
                [("short", i, i, (neg(mul(s, r)), mul(mul(s, t), conj(s)))), ("sum", i, j, last)])

    def e4(ix, ps):
        i, j = ix
        (r, t), (s, q) = ps
        return ("short", i, i, (r, t)), ("short", j, j, (s, q)), [("sum", i, j, neg(mul(r, conj(s))))]

    def e5(ix, ps):
        i, j, k = ix
        r, s = ps
        if i < j < k:
            value = mul(r, s)
        elif k < i < j:
            value = mul(s, conj(r))
        else:
            value = neg(mul(r, conj(s)))
        return ("diff", i, j, r), ("sum", *_sorted_pair(j, k), s), [("sum", *_sorted_pair(i, k), value)]

    triples = [t for t in itertools.product(idx, repeat=3) if t[0] < t[1] < t[2]]
    e5_triples = [t for t in itertools.permutations(idx, 3)
                  if t[0] < t[1] < t[2] or t[2] < t[0] < t[1] or t[0] < t[2] < t[1]]
    pairs = [(i, j) for i in idx for j in idx if i < j]
    return [
        Relation("E1", triples, lambda ix: [Rall, Rall], e1),
        Relation("E2", pairs, lambda ix: [Rall, Rall], e2),
        Relation("E3", pairs, lambda ix: [pairs_dom, Rall], e3),
        Relation("E4", pairs, lambda ix: [pairs_dom, pairs_dom], e4),
        Relation("E5", e5_triples, lambda ix: [Rall, Rall], e5),
    ]


def _in_domain(model: UnitaryModel, kind: str, param) -> bool:
    return param in set(model.domain(kind))


def check_relations(model: UnitaryModel, relations: Sequence[Relation], exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                    samples: int = SAMPLES, seed: int = 0) -> list[RelationReport]:
    """Compare both sides of every relation instance; right-hand parameters must lie in their domains."""
    R = model.ring
    rng = np.random.default_rng(seed)
    exhaustive = R.size <= exhaustive_limit
    reports = []
    for rel in relations:
        count = failures = 0
        first = None
        for ix in rel.indices:
            domains = rel.domains(ix)
            if exhaustive:
                tuples = itertools.product(*domains)
            else:
                tuples = (tuple(d[int(rng.integers(len(d)))] for d in domains) for _ in range(samples))
            for ps in tuples:
                first_elt, second_elt, rhs = rel.evaluate(ix, ps)
                lhs = _commutator(model, first_elt, second_elt)
                in_domain = all(_in_domain(model, kind, p) for kind, _, _, p in rhs)
                right = R.identity_matrix(model.dim)
                for kind, i, j, p in rhs:
                    right = R.matmul(right, model.z(kind, i, j, p))
                count += 1
                if not (in_domain and np.array_equal(lhs, right)):
                    failures += 1
                    if first is None:
                        first = {"indices": list(ix), "params": [_param_label(R, p) for p in ps],
                                 "rhs_in_domain": in_domain}
        reports.append(RelationReport(rel.name, count, failures, exhaustive, first))
    return reports


# -- degenerations: exact commutator constants over Z[t, s] ----------------------------


def _poly_elementary(d: int, factors, power: tuple[int, int]) -> PolyMatrix:
    out = PolyMatrix.identity(d)
    i, j = power
    for a, b, value in factors:
        c = np.zeros((i + 1, j + 1, d, d))
        c[0, 0] = np.eye(d)
        c[i, j, a - 1, b - 1] += value
        out = out @ PolyMatrix(c)
    return out


@dataclass
class SignedModel:
    """Hyperbolic model over Z[t, s] with trivial involution and omega = +-1."""

    n: int
    omega: int
    system: RootSystem

    @property
    def dim(self) -> int:
        return 2 * self.n

    def element(self, root: int, coefficient: int, i: int, j: int) -> PolyMatrix:
        kind, a, b = classify_c_root(self.system.roots[root])
        return _poly_elementary(self.dim, hyperbolic_factors(self.n, kind, a, b, coefficient, SignOps(self.omega)), (i, j))

    def signature(self, root: int) -> tuple[int, int, int]:
        kind, a, b = classify_c_root(self.system.roots[root])
        row, col, sign = hyperbolic_factors(self.n, kind, a, b, 1, SignOps(self.omega))[0]
        return row - 1, col - 1, sign

    def constants(self, a: int, b: int, allowed: set[int] | None = None) -> dict[tuple[int, int, int], int]:
        """c_ij with [z_a(t), z_b(s)] = prod z_{ia+jb}(c_ij t^i s^j), product ordered by (i+j, i)."""
        roots = self.system.roots
        index = self.system.index
        terms = []
        for i in range(1, 4):
            for j in range(1, 4):
                v = tuple(i * x + j * y for x, y in zip(roots[a], roots[b]))
                if v in index:
                    terms.append((i, j, index[v]))
        terms.sort(key=lambda x: (x[0] + x[1], x[0]))
        g = (self.element(a, -1, 1, 0) @ self.element(b, -1, 0, 1) @ self.element(a, 1, 1, 0)
             @ self.element(b, 1, 0, 1))
        residual = g
        out = {}
        for i, j, c in terms:
            row, col, sign = self.signature(c)
            block = residual.coeffs[i, j] if i < residual.coeffs.shape[0] and j < residual.coeffs.shape[1] else None
            value = 0 if block is None else int(round(block[row, col])) * sign
            if value:
                if allowed is not None and c not in allowed:
                    raise ModelError("a commutator leaves the allowed root subgroups")
                out[(i, j, c)] = value
                residual = self.element(c, -value, i, j) @ residual
        if not residual.is_identity():
            raise ModelError(f"commutator of roots {a}, {b} is not a product of root elements")
        return out


def solve_gf2(rows: list[tuple[int, int]], nvars: int) -> list[int] | None:
    """Solve sum_k m_k x_k = rhs over GF(2) for rows (mask, rhs); returns one solution or None."""
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        for bit, (pm, pr) in pivots.items():
            if mask >> bit & 1:
                mask ^= pm
                rhs ^= pr
        if mask == 0:
            if rhs:
                return None
            continue
        bit = mask.bit_length() - 1
        for other, (pm, pr) in list(pivots.items()):
            if pm >> bit & 1:
                pivots[other] = (pm ^ mask, pr ^ rhs)
        pivots[bit] = (mask, rhs)
    solution = [0] * nvars
    for bit, (mask, rhs) in pivots.items():
        solution[bit] = rhs  # free variables are 0 and every pivot row has a single pivot bit left
    return solution


@dataclass
class DegenerationReport:
    name: str
    holds: bool
    pairs: int
    magnitude_mismatches: list
    signs: dict | None

    def to_json(self) -> dict:
        return self.__dict__.copy()


def _match_constants(name: str, unitary: dict, chevalley: dict, roots: Sequence[int], system: RootSystem) -> DegenerationReport:
    position = {r: k for k, r in enumerate(roots)}
    rows = []
    mismatches = []
    for (a, b), terms in chevalley.items():
        u = unitary[(a, b)]
        keys = set(terms) | set(u)
        for key in keys:
            i, j, c = key
            cv, uv = terms.get(key, 0), u.get(key, 0)
            if abs(cv) != abs(uv):
                mismatches.append({"pair": [str(system.roots[a]), str(system.roots[b])], "term": [i, j],
                                   "chevalley": cv, "unitary": uv})
                continue
            if cv == 0:
                continue
            mask = (1 << position[c])
            if i % 2:
                mask ^= 1 << position[a]
            if j % 2:
                mask ^= 1 << position[b]
            rows.append((mask, int(cv != uv)))
    solution = None if mismatches else solve_gf2(rows, len(roots))
    signs = None if solution is None else {"(" + ",".join(str(x) for x in system.roots[r]) + ")": (-1) ** solution[k]
                                           for k, r in enumerate(roots)}
    return DegenerationReport(name, solution is not None, len(chevalley), mismatches[:10], signs)


def _chevalley_terms(table, pairs) -> dict:
    raw = commutator_constants(table, pairs)
    return {key: {(t.i, t.j, t.root): t.coefficient for t in terms} for key, terms in raw.items()}


def degeneration_symplectic(n: int) -> DegenerationReport:
    """Trivial involution, omega = -1: the hyperbolic model realizes the C_n relations after sign changes."""
    system = build_classical("C", n)
    model = SignedModel(n, -1, system)
    pairs = [(a, b) for a in range(len(system.roots)) for b in range(len(system.roots))
             if a != b and system.negation[a] != b]
    unitary = {p: model.constants(*p) for p in pairs}
    chevalley = _chevalley_terms(chevalley_basis(system), pairs)
    return _match_constants(f"C{n} from omega=-1", unitary, chevalley, list(range(len(system.roots))), system)


def degeneration_orthogonal(n: int) -> DegenerationReport:
    """Trivial involution, omega = 1, J = {0}: the short roots carry the D_n relations after sign changes."""
    system = build_classical("C", n)
    model = SignedModel(n, 1, system)
    d_system = build_classical("D", n)
    short = [system.index[r] for r in d_system.roots]
    pairs = [(a, b) for a in short for b in short if a != b and system.negation[a] != b]
    unitary = {p: model.constants(*p, allowed=set(short)) for p in pairs}
    d_pairs = [(d_system.index[system.roots[a]], d_system.index[system.roots[b]]) for a, b in pairs]
    chev = _chevalley_terms(chevalley_basis(d_system), d_pairs)
    to_c = {k: system.index[r] for k, r in enumerate(d_system.roots)}
    chevalley = {(to_c[a], to_c[b]): {(i, j, to_c[c]): v for (i, j, c), v in terms.items()}
                 for (a, b), terms in chev.items()}
    return _match_constants(f"D{n} from omega=1, J=0", unitary, chevalley, short, system)


# -- rescaling omega ------------------------------------------------------------------------


@dataclass
class RescalingReport:
    omega: str
    omega_prime: str
    mu: str
    holds: bool
    checked: int
    failures: list

    def to_json(self) -> dict:
        return self.__dict__.copy()


def rescaling_isomorphism(n: int, ring: FiniteRing, omega, mu) -> RescalingReport:
    """phi(z_g(r)) = z'_g(r), z'_g(mu* r), z'_g(mu^-1 r) for g = e_i - e_j, e_i + e_j (2e_i), -e_i - e_j (-2e_i).

    phi is realized by conjugation with diag(1, ..., 1, c, ..., c), c = (mu*)^-1, so agreement on every
    root element shows it extends to an isomorphism of the generated groups.
    """
    R = ring
    omega, mu = R.parse(omega), R.parse(mu)
    if not R.is_central(mu) or R.inverse(mu) is None:
        raise UnitaryError("mu must be a central unit")
    mu_star = R.conj(mu)
    omega_prime = R.mul(omega, R.mul(R.inverse(mu), mu_star))
    first = unitary_steinberg_model(n, R, omega)
    second = unitary_steinberg_model(n, R, omega_prime)
    c = R.inverse(mu_star)
    D = R.identity_matrix(2 * n)
    D_inv = R.identity_matrix(2 * n)
    for k in range(n, 2 * n):
        D[k, k] = c
        D_inv[k, k] = mu_star
    mu_inv = R.inverse(mu)

    def phi(kind, r):
        if kind in ("sum", "long"):
            return R.mul(mu_star, r)
        if kind in ("negsum", "neglong"):
            return R.mul(mu_inv, r)
        return r

    failures = []
    checked = 0
    for root in first.system.roots:
        kind, i, j = classify_c_root(root)
        for r in first.domain(kind):
            image = phi(kind, r)
            checked += 1
            conj = R.matmul(R.matmul(D, first.z(kind, i, j, r)), D_inv)
            if image not in set(second.domain(kind)) or not np.array_equal(conj, second.z(kind, i, j, image)):
                failures.append({"root": [str(x) for x in root], "param": R.label(r)})
    return RescalingReport(R.label(omega), R.label(omega_prime), R.label(mu), not failures, checked, failures[:10])


# -- form parameters -----------------------------------------------------------------------


@dataclass(frozen=True)
class FormParameter:
    ring: FiniteRing = field(compare=False)
    omega: int
    J: frozenset

    def violations(self) -> list[str]:
        R = self.ring
        out = []
        sym, sym_min = set(R.sym(self.omega)), set(R.sym_min(self.omega))
        if not sym_min <= self.J:
            out.append("J does not contain Sym^min")
        if not self.J <= sym:
            out.append("J is not inside Sym")
        if any(R.add(a, b) not in self.J for a in self.J for b in self.J):
            out.append("J is not additively closed")
        if any(R.mul(R.mul(R.conj(s), u), s) not in self.J for u in self.J for s in R.elements):
            out.append("J is not stable under u -> s* u s")
        return out

    def labels(self) -> list[str]:
        return [self.ring.label(x) for x in sorted(self.J)]


def form_parameter_closure(ring: FiniteRing, omega, A: Iterable = ()) -> FormParameter:
    """The smallest form parameter containing A, by fixed-point iteration."""
    R = ring
    omega = R.parse(omega)
    _check_omega(R, omega)
    A = {R.parse(a) for a in A}
    sym = set(R.sym(omega))
    if not A <= sym:
        bad = sorted(A - sym)
        raise UnitaryError(f"elements {[R.label(a) for a in bad]} are not in Sym_-omega")
    J = set(R.sym_min(omega)) | A | {0}
    while True:
        grown = set(J)
        grown |= {R.mul(R.mul(R.conj(s), u), s) for u in J for s in R.elements}
        grown |= {R.add(a, b) for a in grown for b in grown}
        if grown == J:
            break
        J = grown
    return FormParameter(R, omega, frozenset(J))


def form_parameter_normal_form(ring: FiniteRing, omega, A: Iterable = ()) -> frozenset:
    """Elements sum_{a in A} s_a a s_a* + (r - r* omega): one twisted term per generator."""
    R = ring
    omega = R.parse(omega)
    A = sorted({R.parse(a) for a in A})
    values = set(R.sym_min(omega))
    for a in A:
        twists = {R.mul(R.mul(s, a), R.conj(s)) for s in R.elements}
        values = {R.add(v, t) for v in values for t in twists}
    return frozenset(values & set(R.sym(omega)))


# -- the Y-level grading of the hyperbolic example ----------------------------------------


def hyperbolic_reduction(n: int):
    """eta: e_i -> eps_i (i <= n), e_i -> -eps_{2n+1-i} (i > n), from A_{2n-1} onto C_n."""
    rows = []
    for k in range(1, n + 1):
        row = [Fraction(0)] * (2 * n)
        row[k - 1] = Fraction(1)
        row[2 * n - k] = Fraction(-1)
        rows.append(tuple(row))
    return apply_reduction(rows, build_classical("A", 2 * n - 1), build_classical("C", n), f"A{2 * n - 1}-C{n}")


def standard_positive_mask(system: RootSystem) -> int:
    """Roots on which the functional (n, n-1, ..., 1) is positive."""
    n = system.dim
    weights = [Fraction(n - k) for k in range(n)]
    mask = 0
    for idx, r in enumerate(system.roots):
        if sum((w * x for w, x in zip(weights, r)), Fraction(0)) > 0:
            mask |= 1 << idx
    return mask


# -- loading models from JSON descriptions -------------------------------------------------


def build_model(spec: dict) -> GradedGroupModel:
    """A graded model from a JSON description.

    ``{"kind": "chevalley", "system": "B2", "ring": "Z/4"}``,
    ``{"kind": "linear", "n": 3, "ring": ...}``,
    ``{"kind": "unitary", "n": 2, "ring": "F9*", "omega": 1, "J": [...]}`` or
    ``{"kind": "odd_unitary", "n": 2, "ring": "F9*"}``. Rings are strings understood by
    ``parse_ring`` or objects understood by ``ring_from_json``.
    """
    from .rings import parse_ring, ring_from_json
    from .rootsys import system_from_label
    from .steinberg import elementary_chevalley_model, elementary_linear_model

    ring_spec = spec.get("ring")
    if ring_spec is None:
        raise UnitaryError("model description needs a ring")
    ring = parse_ring(ring_spec) if isinstance(ring_spec, str) else ring_from_json(ring_spec)
    kind = spec.get("kind", "chevalley")
    if kind == "chevalley":
        return elementary_chevalley_model(system_from_label(spec["system"]), ring)
    if kind == "linear":
        return elementary_linear_model(int(spec["n"]), ring)
    if kind == "unitary":
        return unitary_steinberg_model(int(spec["n"]), ring, spec.get("omega", 1), spec.get("J")).graded_model()
    if kind == "odd_unitary":
        model = odd_unitary_model(int(spec["n"]), ring).graded_model()
        return model.fattened() if spec.get("fattened", False) else model
    raise UnitaryError(f"unknown model kind {kind!r}")

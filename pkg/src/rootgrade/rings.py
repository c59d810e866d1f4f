"""Finite rings given by addition and multiplication tables.

Elements are the integers 0..size-1. Every constructor below fills the
tables from a structured description (residues, polynomials, matrices,
products), so the same table-driven arithmetic serves commutative and
noncommutative rings alike. An optional involution and an optional
automorphism of declared order travel with the ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np


class RingError(ValueError):
    pass


@dataclass(eq=False)
class FiniteRing:
    name: str
    add_table: np.ndarray
    mul_table: np.ndarray
    one: int
    labels: tuple[str, ...]
    description: dict = field(default_factory=dict)
    star: tuple[int, ...] | None = None
    sigma: tuple[int, ...] | None = None
    sigma_order: int | None = None
    modulus: int | None = None  # set when the ring is Z/m with element x = residue x

    zero = 0

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    @cached_property
    def neg_table(self) -> np.ndarray:
        out = np.empty(self.size, dtype=np.int64)
        for a in self.elements:
            (b,) = np.flatnonzero(self.add_table[a] == 0)
            out[a] = b
        return out

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def conj(self, a: int) -> int:
        if self.star is None:
            raise RingError(f"{self.name} has no involution")
        return self.star[a]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> R."""
        out = 0
        step = self.one if n >= 0 else self.neg(self.one)
        for _ in range(abs(n)):
            out = self.add(out, step)
        return out

    @cached_property
    def characteristic(self) -> int:
        n, x = 1, self.one
        while x != 0:
            x = self.add(x, self.one)
            n += 1
        return n

    def int_table(self, low: int, high: int) -> dict[int, int]:
        return {n: self.from_int(n) for n in range(low, high + 1)}

    def power(self, a: int, k: int) -> int:
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def sum(self, values) -> int:
        out = 0
        for v in values:
            out = self.add(out, v)
        return out

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul_table, self.mul_table.T))

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(a for a in self.elements if self.inverse(a) is not None)

    def inverse(self, a: int) -> int | None:
        left = np.flatnonzero(self.mul_table[a] == self.one)
        for b in left:
            if self.mul_table[b, a] == self.one:
                return int(b)
        return None

    @cached_property
    def center(self) -> tuple[int, ...]:
        m = self.mul_table
        return tuple(a for a in self.elements if np.array_equal(m[a], m[:, a]))

    def is_central(self, a: int) -> bool:
        return a in self.center

    def label(self, a: int) -> str:
        return self.labels[a]

    def parse(self, label) -> int:
        if isinstance(label, int) and not isinstance(label, bool):
            if self.modulus is not None:
                return label % self.modulus
            return self.from_int(label)
        text = str(label).strip()
        if text in self.labels:
            return self.labels.index(text)
        try:
            return self.from_int(int(text))
        except ValueError:
            raise RingError(f"unknown element {label!r} of {self.name}") from None

    # -- structure checks --------------------------------------------------

    def axiom_failures(self, limit: int = 256) -> list[str]:
        """Exhaustive check of the ring axioms (and of the involution/automorphism) for |R| <= limit."""
        if self.size > limit:
            raise RingError(f"exhaustive axiom check is limited to |R| <= {limit}")
        A, M = self.add_table, self.mul_table
        n = self.size
        x = np.arange(n)
        out = []
        if not np.array_equal(A, A.T):
            out.append("addition is not commutative")
        if not (np.array_equal(A[0], x) and np.array_equal(M[self.one], x) and np.array_equal(M[:, self.one], x)):
            out.append("identity elements fail")
        if any(sorted(row) != list(x) for row in A.tolist()):
            out.append("addition rows are not permutations (no inverses)")
        pairs = A[x[None, :, None], x[None, None, :]]
        if not np.array_equal(A[A[:, :, None], x[None, None, :]], A[x[:, None, None], pairs]):
            out.append("addition is not associative")
        assoc_l = M[M[:, :, None], x[None, None, :]]
        assoc_r = M[x[:, None, None], M[x[None, :, None], x[None, None, :]]]
        if not np.array_equal(assoc_l, assoc_r):
            out.append("multiplication is not associative")
        left = M[x[:, None, None], A[x[None, :, None], x[None, None, :]]]
        left_expanded = A[M[:, :, None], M[:, None, :]]
        if not np.array_equal(left, left_expanded):
            out.append("left distributivity fails")
        right = M[A[:, :, None], x[None, None, :]]
        right_expanded = A[M[:, None, :], M[None, :, :]]
        if not np.array_equal(right, right_expanded):
            out.append("right distributivity fails")
        if self.star is not None:
            s = np.array(self.star)
            if not np.array_equal(s[s], x):
                out.append("involution is not of order <= 2")
            if not np.array_equal(s[A], A[s[:, None], s[None, :]]):
                out.append("involution is not additive")
            if not np.array_equal(s[M], M[s[None, :], s[:, None]]):
                out.append("involution is not anti-multiplicative")
        if self.sigma is not None:
            g = np.array(self.sigma)
            if not np.array_equal(g[A], A[g[:, None], g[None, :]]) or not np.array_equal(g[M], M[g[:, None], g[None, :]]):
                out.append("automorphism does not respect the operations")
            power = x.copy()
            order = None
            for k in range(1, n + 2):
                power = g[power]
                if np.array_equal(power, x):
                    order = k
                    break
            if order != self.sigma_order:
                out.append(f"automorphism has order {order}, declared {self.sigma_order}")
        return out

    def check(self, limit: int = 256) -> "FiniteRing":
        failures = self.axiom_failures(limit)
        if failures:
            raise RingError(f"{self.name}: " + "; ".join(failures))
        return self

    def with_involution(self, star: Sequence[int], name: str | None = None) -> "FiniteRing":
        ring = FiniteRing(name or self.name, self.add_table, self.mul_table, self.one, self.labels,
                          dict(self.description, involution=list(star)), tuple(int(v) for v in star),
                          self.sigma, self.sigma_order, self.modulus)
        if self.size <= 256:
            ring.check()
        return ring

    def with_automorphism(self, sigma: Sequence[int], order: int) -> "FiniteRing":
        ring = FiniteRing(self.name, self.add_table, self.mul_table, self.one, self.labels,
                          dict(self.description, automorphism=list(sigma), order=order), self.star,
                          tuple(int(v) for v in sigma), order, self.modulus)
        if self.size <= 256:
            ring.check()
        return ring

    def identity_involution(self) -> "FiniteRing":
        if not self.is_commutative:
            raise RingError("the identity is an involution only on commutative rings")
        return self.with_involution(range(self.size), self.name)

    # -- forms ---------------------------------------------------------------

    def is_central_unitary(self, omega: int) -> bool:
        return self.is_central(omega) and self.mul(omega, self.conj(omega)) == self.one

    def sym(self, omega: int) -> tuple[int, ...]:
        """Sym_{-omega}: elements r with r* omega = -r."""
        return tuple(r for r in self.elements if self.mul(self.conj(r), omega) == self.neg(r))

    def sym_min(self, omega: int) -> tuple[int, ...]:
        """Sym^min_{-omega}: elements r - r* omega."""
        return tuple(sorted({self.sub(r, self.mul(self.conj(r), omega)) for r in self.elements}))

    # -- matrices over the ring ------------------------------------------------

    @cached_property
    def linear_structure(self) -> tuple | None:
        """(p, coordinates, decode, structure constants) when (R, +) is an F_p-vector space, else None.

        coordinates[x] is the coefficient vector of x in a greedy additive basis b_0..b_{e-1},
        decode maps the base-p code of a vector back to the element, and
        constants[u, v] holds the coordinates of b_u b_v.
        """
        p = self.characteristic
        if any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            return None
        basis: list[int] = []
        coords = {0: ()}
        for x in self.elements:
            if x in coords:
                continue
            basis.append(x)
            multiples = [0]
            for _ in range(p - 1):
                multiples.append(self.add(multiples[-1], x))
            coords = {self.add(y, m): c + (k,) for y, c in coords.items() for k, m in enumerate(multiples)}
        e = len(basis)
        if len(coords) != self.size or p ** e != self.size:
            return None
        table = np.zeros((self.size, e), dtype=np.int64)
        decode = np.zeros(self.size, dtype=np.int64)
        weights = p ** np.arange(e)
        for x, c in coords.items():
            table[x] = c
            decode[int(np.dot(c, weights))] = x
        constants = np.array([[table[self.mul(u, v)] for v in basis] for u in basis], dtype=np.int64)
        return p, table, decode, constants, weights

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Batched matrix product with entries in the ring (broadcasting leading axes)."""
        if self.modulus is not None:
            return np.matmul(a, b) % self.modulus
        structure = self.linear_structure
        if structure is not None:
            p, table, decode, constants, weights = structure
            ca, cb = table[a], table[b]
            e = len(weights)
            out = None
            for u in range(e):
                for v in range(e):
                    if not constants[u, v].any():
                        continue
                    prod = np.matmul(ca[..., u], cb[..., v])
                    term = prod[..., None] * constants[u, v]
                    out = term if out is None else out + term
            if out is None:
                return np.zeros(np.broadcast_shapes(a.shape[:-1] + (b.shape[-1],), a.shape[:-2] + (a.shape[-2], b.shape[-1])), dtype=np.int64)
            return decode[(out % p) @ weights]
        prods = self.mul_table[a[..., :, :, None], b[..., None, :, :]]
        acc = prods[..., :, 0, :]
        for k in range(1, prods.shape[-2]):
            acc = self.add_table[acc, prods[..., :, k, :]]
        return acc

    def right_products(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """All products x y for x in left (F, d, d) and y in right (G, d, d), shape (F, G, d, d).

        Done as a single (F d) x d by d x (G d) floating point product per
        coordinate pair; entries stay far below 2^53, so the result is exact.
        """
        F, d, _ = left.shape
        G = right.shape[0]

        def wide(x):  # (G, d, d) -> (d, G d)
            return np.ascontiguousarray(x.transpose(1, 0, 2).reshape(d, G * d), dtype=np.float64)

        def unwide(y):  # (F d, G d) -> (F, G, d, d)
            return y.reshape(F, d, G, d).transpose(0, 2, 1, 3)

        if self.modulus is not None:
            prod = left.reshape(F * d, d).astype(np.float64) @ wide(right)
            return unwide(np.rint(prod).astype(np.int64) % self.modulus)
        structure = self.linear_structure
        if structure is None:
            return self.matmul(left[:, None], right[None])
        p, table, decode, constants, weights = structure
        e = len(weights)
        cl = [np.ascontiguousarray(table[left][..., u].reshape(F * d, d), dtype=np.float64) for u in range(e)]
        cr = [wide(table[right][..., v]) for v in range(e)]
        coords = [np.zeros((F * d, G * d)) for _ in range(e)]
        for u in range(e):
            for v in range(e):
                if constants[u, v].any():
                    prod = cl[u] @ cr[v]
                    for w in range(e):
                        if constants[u, v, w]:
                            coords[w] += constants[u, v, w] * prod
        code = np.zeros((F * d, G * d), dtype=np.int64)
        for w in range(e):
            code += (np.rint(coords[w]).astype(np.int64) % p) * int(weights[w])
        return unwide(decode[code])

    def identity_matrix(self, d: int) -> np.ndarray:
        out = np.zeros((d, d), dtype=np.int64)
        out[np.arange(d), np.arange(d)] = self.one
        return out

    def to_json(self) -> dict:
        return dict(self.description, name=self.name, size=self.size)


# -- constructors -------------------------------------------------------------------


def _tables(size: int, add, mul) -> tuple[np.ndarray, np.ndarray]:
    A = np.empty((size, size), dtype=np.int64)
    M = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        for b in range(size):
            A[a, b] = add(a, b)
            M[a, b] = mul(a, b)
    return A, M


def zmod(m: int) -> FiniteRing:
    if m < 2:
        raise RingError("Z/m needs m >= 2")
    A, M = _tables(m, lambda a, b: (a + b) % m, lambda a, b: a * b % m)
    return FiniteRing(f"Z/{m}", A, M, 1, tuple(str(i) for i in range(m)),
                      {"kind": "zmod", "modulus": m}, modulus=m)


def _digits(x: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _encode(digits: Sequence[int], p: int) -> int:
    return sum(d * p ** i for i, d in enumerate(digits))


def _poly_label(digits: Sequence[int], var: str) -> str:
    terms = []
    for i, c in enumerate(digits):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if i == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


def polynomial_quotient(p: int, modulus: Sequence[int], var: str = "t", name: str | None = None) -> FiniteRing:
    """F_p[var]/(f) with f monic, given by its coefficients from the constant term up."""
    f = [c % p for c in modulus]
    e = len(f) - 1
    if e < 1 or f[-1] != 1:
        raise RingError("the modulus must be monic of degree >= 1")
    size = p ** e

    def mul(a: int, b: int) -> int:
        x, y = _digits(a, p, e), _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] += u * v
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(e + 1):
                    prod[k - e + i] -= c * f[i]
        return _encode([c % p for c in prod[:e]], p)

    def add(a: int, b: int) -> int:
        return _encode([(u + v) % p for u, v in zip(_digits(a, p, e), _digits(b, p, e))], p)

    A, M = _tables(size, add, mul)
    labels = tuple(_poly_label(_digits(a, p, e), var) for a in range(size))
    poly = _poly_label(f, var)
    return FiniteRing(name or f"F{p}[{var}]/({poly})", A, M, 1, labels,
                      {"kind": "polynomial", "p": p, "modulus": list(f), "var": var},
                      modulus=p if e == 1 and f == [0, 1] else None)


def _is_field(ring: FiniteRing) -> bool:
    return all(ring.inverse(a) is not None for a in range(1, ring.size))


def galois_field(q: int, var: str = "x") -> FiniteRing:
    """F_q, realized as F_p[x]/(f) with f the first monic irreducible polynomial in lexicographic order."""
    p, e = _prime_power(q)
    if e == 1:
        ring = zmod(p)
        ring.name = f"F{p}"
        ring.description = {"kind": "field", "q": q}
        return ring
    for code in range(p ** e):
        lower = _digits(code, p, e)
        if lower[0] == 0:
            continue
        ring = polynomial_quotient(p, lower + [1], var, name=f"F{q}")
        if _is_field(ring):
            ring.description = {"kind": "field", "q": q, "modulus": lower + [1], "var": var}
            return ring
    raise RingError(f"no irreducible polynomial found for F{q}")


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                break
            return p, e
    raise RingError(f"{q} is not a prime power")


def frobenius(ring: FiniteRing, k: int = 1) -> tuple[int, ...]:
    """The map x -> x^(p^k) on a field of characteristic p."""
    exponent = ring.characteristic ** k
    return tuple(ring.power(a, exponent) for a in ring.elements)


def field_with_frobenius(q2: int) -> FiniteRing:
    """F_{q^2} with the involution x -> x^q."""
    p, e = _prime_power(q2)
    if e % 2:
        raise RingError("the Frobenius involution needs a field of square order")
    ring = galois_field(q2)
    star = tuple(ring.power(a, p ** (e // 2)) for a in ring.elements)
    return ring.with_involution(star, f"F{q2}")


def product_ring(*factors: FiniteRing) -> FiniteRing:
    sizes = [f.size for f in factors]
    size = int(np.prod(sizes))
    tuples = list(itertools.product(*[range(s) for s in sizes]))
    index = {t: i for i, t in enumerate(tuples)}

    def add(a, b):
        return index[tuple(f.add(x, y) for f, x, y in zip(factors, tuples[a], tuples[b]))]

    def mul(a, b):
        return index[tuple(f.mul(x, y) for f, x, y in zip(factors, tuples[a], tuples[b]))]

    A, M = _tables(size, add, mul)
    labels = tuple("(" + ",".join(f.label(x) for f, x in zip(factors, t)) + ")" for t in tuples)
    star = None
    if all(f.star is not None for f in factors):
        star = tuple(index[tuple(f.conj(x) for f, x in zip(factors, t))] for t in tuples)
    return FiniteRing(" x ".join(f.name for f in factors), A, M, index[tuple(f.one for f in factors)], labels,
                      {"kind": "product", "factors": [f.to_json() for f in factors]}, star)


def matrix_ring(n: int, p: int, transpose_involution: bool = True) -> FiniteRing:
    """M_n(F_p) with entries read row by row; optionally with the transpose involution."""
    size = p ** (n * n)
    mats = [np.array(_digits(a, p, n * n)).reshape(n, n) for a in range(size)]

    def code(m):
        return _encode([int(v) % p for v in m.reshape(-1)], p)

    A, M = _tables(size, lambda a, b: code(mats[a] + mats[b]), lambda a, b: code(mats[a] @ mats[b]))
    labels = tuple("[" + ";".join(",".join(str(v) for v in row) for row in m.tolist()) + "]" for m in mats)
    one = code(np.eye(n, dtype=int))
    ring = FiniteRing(f"M{n}(F{p})", A, M, one, labels, {"kind": "matrix", "n": n, "p": p})
    if transpose_involution:
        ring = ring.with_involution([code(m.T) for m in mats])
    return ring


def from_tables(name: str, add_table, mul_table, one: int = 1, labels=None, star=None) -> FiniteRing:
    A = np.array(add_table, dtype=np.int64)
    M = np.array(mul_table, dtype=np.int64)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(A)))
    ring = FiniteRing(name, A, M, one, labels, {"kind": "tables", "add": A.tolist(), "mul": M.tolist()},
                      tuple(star) if star is not None else None)
    return ring.check() if ring.size <= 256 else ring


def ring_from_json(spec: dict) -> FiniteRing:
    """Build a ring from {"kind": ..., ...} plus optional "involution": "identity" | "frobenius" | "transpose" | [table]."""
    kind = spec.get("kind")
    if kind == "zmod":
        ring = zmod(int(spec["modulus"]))
    elif kind == "field":
        ring = galois_field(int(spec["q"]))
    elif kind == "polynomial":
        ring = polynomial_quotient(int(spec["p"]), [int(c) for c in spec["modulus"]], spec.get("var", "t"))
    elif kind == "product":
        ring = product_ring(*[ring_from_json(f) for f in spec["factors"]])
    elif kind == "matrix":
        ring = matrix_ring(int(spec["n"]), int(spec["p"]), transpose_involution=False)
    elif kind == "tables":
        ring = from_tables(spec.get("name", "R"), spec["add"], spec["mul"], int(spec.get("one", 1)), spec.get("labels"))
    else:
        raise RingError(f"unknown ring kind {kind!r}")
    involution = spec.get("involution")
    if involution == "identity":
        ring = ring.identity_involution()
    elif involution == "frobenius":
        p, e = _prime_power(ring.size)
        ring = ring.with_involution(frobenius(ring, e // 2))
    elif involution == "transpose":
        n, p = int(spec["n"]), int(spec["p"])
        mats = [np.array(_digits(a, p, n * n)).reshape(n, n) for a in range(ring.size)]
        ring = ring.with_involution([_encode(m.T.reshape(-1).tolist(), p) for m in mats])
    elif isinstance(involution, list):
        ring = ring.with_involution(involution)
    if "automorphism" in spec:
        ring = ring.with_automorphism(spec["automorphism"], int(spec["order"]))
    return ring


def parse_ring(text: str) -> FiniteRing:
    """Short names: Z/4, F9, F9*, F2[t]/(t^2), M2(F2)*; a trailing * adds the natural involution."""
    text = text.strip()
    involution = text.endswith("*")
    core = text.rstrip("*")
    if core.startswith("Z/"):
        ring = zmod(int(core[2:]))
        return ring.identity_involution() if involution else ring
    if core.startswith("F") and core[1:].isdigit():
        if involution:
            q = int(core[1:])
            _, e = _prime_power(q)
            return field_with_frobenius(q) if e % 2 == 0 else galois_field(q).identity_involution()
        return galois_field(int(core[1:]))
    if core.startswith("M") and "(F" in core:
        n = int(core[1:core.index("(")])
        p = int(core[core.index("(F") + 2:-1])
        return matrix_ring(n, p, transpose_involution=involution)
    if "[" in core and "]/(" in core:
        p = int(core[1:core.index("[")])
        var = core[core.index("[") + 1:core.index("]")]
        poly = core[core.index("]/(") + 3:-1]
        ring = polynomial_quotient(p, _parse_poly(poly, var, p), var, name=core)
        return ring.identity_involution() if involution else ring
    raise RingError(f"cannot parse ring {text!r}")


def _parse_poly(text: str, var: str, p: int) -> list[int]:
    coeffs: dict[int, int] = {}
    for term in text.replace("-", "+-").split("+"):
        term = term.strip()
        if not term:
            continue
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("-")
        if var in term:
            head, _, tail = term.partition(var)
            c = int(head) if head else 1
            k = int(tail.lstrip("^")) if tail else 1
        else:
            c, k = int(term), 0
        coeffs[k] = coeffs.get(k, 0) + sign * c
    degree = max(coeffs)
    return [coeffs.get(k, 0) % p for k in range(degree + 1)]

"""Root systems with exact rational coordinates.

A root system is stored as a lexicographically sorted tuple of Fraction
tuples. Roots are referred to by their index in that tuple throughout the
package, and sets of roots are often handled as integer bitmasks.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .linalg import dot, nullspace, primitive_integer_vector, rank, rref, solve

Root = tuple[Fraction, ...]

FAMILIES = ("A", "B", "C", "D", "BC", "E", "F", "G", "I")


def rational_vector(coords: Iterable) -> Root:
    return tuple(Fraction(c) for c in coords)


def neg(v: Root) -> Root:
    return tuple(-x for x in v)


def add(u: Root, v: Root) -> Root:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v: Root) -> Root:
    c = Fraction(c)
    return tuple(c * x for x in v)


@dataclass(frozen=True, eq=False)
class AdmissibleForm:
    """A symmetric bilinear form given by its Gram matrix on the ambient space."""

    gram: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def euclidean(cls, dim: int, factor=1) -> "AdmissibleForm":
        factor = Fraction(factor)
        return cls(tuple(tuple(factor if i == j else Fraction(0) for j in range(dim)) for i in range(dim)))

    @cached_property
    def scalar(self) -> Fraction | None:
        """The factor c when the Gram matrix is c times the identity."""
        c = self.gram[0][0]
        for i, row in enumerate(self.gram):
            for j, g in enumerate(row):
                if g != (c if i == j else 0):
                    return None
        return c

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        c = self.scalar
        if c is not None:
            return c * sum((a * b for a, b in zip(u, v)), Fraction(0))
        return sum((u[i] * sum((g * y for g, y in zip(row, v)), Fraction(0)) for i, row in enumerate(self.gram)), Fraction(0))

    def pairing(self, beta: Sequence, alpha: Sequence) -> Fraction:
        """The Cartan number 2(beta, alpha)/(alpha, alpha)."""
        return 2 * self.inner(beta, alpha) / self.inner(alpha, alpha)

    def problems(self, system: "RootSystem") -> list[str]:
        """Reasons the form fails to be admissible for the system (empty if admissible)."""
        out = []
        basis = system.span_basis
        gram = [[self.inner(u, v) for v in basis] for u in basis]
        for k in range(1, len(basis) + 1):
            minor = _determinant([row[:k] for row in gram[:k]])
            if minor <= 0:
                out.append(f"leading minor {k} of the span Gram matrix is {minor}, not positive")
                break
        index = system.index
        for a in system.roots:
            for b in system.roots:
                p = self.pairing(b, a)
                if p.denominator != 1:
                    out.append(f"pairing <{_fmt(b)},{_fmt(a)}> = {p} is not an integer")
                    return out
                image = tuple(x - p * y for x, y in zip(b, a))
                if image not in index:
                    out.append(f"reflection of {_fmt(b)} in {_fmt(a)} leaves the system")
                    return out
        return out


def _determinant(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def _fmt(v: Sequence) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A finite, symmetric set of nonzero rational vectors.

    ``form_factor`` fixes the canonical admissible form as that multiple of
    the Euclidean inner product; ``None`` means no form is known.
    """

    roots: tuple[Root, ...]
    label: str | None = None
    form_factor: Fraction | None = Fraction(1)
    _declared_rank: int | None = field(default=None, repr=False)

    def __post_init__(self):
        roots = tuple(sorted(set(rational_vector(r) for r in self.roots)))
        if not roots:
            raise ValueError("a root system needs at least one root")
        dims = {len(r) for r in roots}
        if len(dims) != 1:
            raise ValueError("roots have different ambient dimensions")
        object.__setattr__(self, "roots", roots)
        index = {r: i for i, r in enumerate(roots)}
        for r in roots:
            if all(x == 0 for x in r):
                raise ValueError("the zero vector is not allowed as a root")
            if neg(r) not in index:
                raise ValueError(f"root system is not closed under negation at {_fmt(r)}")
        if self._declared_rank is not None and self.rank != self._declared_rank:
            raise ValueError(f"declared rank {self._declared_rank} but the roots span rank {self.rank}")

    def __eq__(self, other):
        return isinstance(other, RootSystem) and self.roots == other.roots

    def __hash__(self):
        return hash(self.roots)

    def __len__(self):
        return len(self.roots)

    def __repr__(self):
        name = self.label or "RootSystem"
        return f"<{name}: {len(self.roots)} roots in dimension {self.dim}>"

    @property
    def dim(self) -> int:
        return len(self.roots[0])

    @cached_property
    def index(self) -> dict[Root, int]:
        return {r: i for i, r in enumerate(self.roots)}

    @cached_property
    def negation(self) -> tuple[int, ...]:
        return tuple(self.index[neg(r)] for r in self.roots)

    @cached_property
    def span_basis(self) -> tuple[Root, ...]:
        reduced, _ = rref(self.roots)
        return tuple(tuple(row) for row in reduced)

    @cached_property
    def rank(self) -> int:
        return len(self.span_basis)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.roots)) - 1

    def mask(self, indices: Iterable[int]) -> int:
        m = 0
        for i in indices:
            m |= 1 << i
        return m

    def members(self, mask: int) -> list[int]:
        return [i for i in range(len(self.roots)) if mask >> i & 1]

    def vectors(self, mask: int) -> list[Root]:
        return [self.roots[i] for i in self.members(mask)]

    @cached_property
    def form(self) -> AdmissibleForm | None:
        if self.form_factor is None:
            return None
        return AdmissibleForm.euclidean(self.dim, self.form_factor)

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        if self.form is None:
            raise ValueError("this root system carries no admissible form")
        return self.form.inner(u, v)

    def pairing(self, beta: Sequence, alpha: Sequence) -> int:
        p = self.form.pairing(beta, alpha)
        if p.denominator != 1:
            raise ValueError("non-integral Cartan pairing")
        return int(p)

    def norm(self, v: Sequence) -> Fraction:
        return self.inner(v, v)

    @cached_property
    def line_of(self) -> tuple[tuple[int, ...], ...]:
        """Primitive integer direction (up to sign) of each root."""
        return tuple(primitive_integer_vector(r) for r in self.roots)

    @cached_property
    def lines(self) -> tuple[tuple[int, ...], ...]:
        """Roots grouped by line through the origin, in order of first appearance."""
        groups: dict[tuple[int, ...], list[int]] = {}
        for i, key in enumerate(self.line_of):
            groups.setdefault(key, []).append(i)
        return tuple(tuple(g) for g in groups.values())

    @cached_property
    def line_index(self) -> tuple[int, ...]:
        out = [0] * len(self.roots)
        for k, group in enumerate(self.lines):
            for i in group:
                out[i] = k
        return tuple(out)

    @cached_property
    def line_masks(self) -> tuple[int, ...]:
        return tuple(self.mask(g) for g in self.lines)

    def is_reduced(self) -> bool:
        return all(len(g) <= 2 for g in self.lines)

    def length_classes(self) -> dict[int, str]:
        """Label each root as short, long or double (twice another root)."""
        norms = {i: self.norm(r) for i, r in enumerate(self.roots)}
        doubles = {i for i, r in enumerate(self.roots) if scale(Fraction(1, 2), r) in self.index}
        rest = sorted({norms[i] for i in norms if i not in doubles})
        out = {}
        for i in norms:
            if i in doubles:
                out[i] = "double"
            elif len(rest) == 1:
                out[i] = "long"
            else:
                out[i] = "short" if norms[i] == rest[0] else "long"
        return out

    # -- planes and rank-2 structure -------------------------------------

    def plane_groups(self, alpha: int) -> list[list[int]]:
        """Roots not proportional to ``alpha`` grouped by the plane they span with it."""
        a = self.roots[alpha]
        aa = dot(a, a)
        groups: dict[tuple[int, ...], list[int]] = {}
        alpha_line = self.line_index[alpha]
        for j, b in enumerate(self.roots):
            if self.line_index[j] == alpha_line:
                continue
            c = dot(a, b) / aa
            key = primitive_integer_vector(tuple(y - c * x for x, y in zip(a, b)))
            groups.setdefault(key, []).append(j)
        return list(groups.values())

    def plane_system(self, alpha: int, members: Sequence[int]) -> list[int]:
        """All roots of the plane through alpha and the given non-proportional roots."""
        alpha_line = self.line_index[alpha]
        return sorted(set(members) | set(self.lines[alpha_line]))

    def line_count(self, indices: Iterable[int]) -> int:
        return len({self.line_index[i] for i in indices})

    def rank2_neighborhood(self, alpha: int | Root) -> list[int]:
        """Roots beta such that span(alpha, beta) meets the system in an irreducible rank-2 system."""
        alpha = self._as_index(alpha)
        out = []
        for group in self.plane_groups(alpha):
            plane = self.plane_system(alpha, group)
            if self.line_count(plane) >= 3:
                out.extend(group)
        return sorted(out)

    def regularity_witness(self) -> dict[int, list[int]] | None:
        """Map each root to an irreducible rank-2 subsystem containing it, or None if some root has none."""
        witness = {}
        for i in range(len(self.roots)):
            found = None
            for group in self.plane_groups(i):
                plane = self.plane_system(i, group)
                if self.line_count(plane) >= 3:
                    found = plane
                    break
            if found is None:
                return None
            witness[i] = found
        return witness

    def is_regular(self) -> bool:
        return self.regularity_witness() is not None

    # -- components ------------------------------------------------------

    def irreducible_components(self, use_form: bool | None = None) -> list["RootSystem"]:
        """Split into irreducible components.

        With a form, roots are coupled when non-orthogonal. Without one, roots
        are coupled when proportional or when they lie in a common irreducible
        rank-2 subsystem.
        """
        if use_form is None:
            use_form = self.form is not None
        n = len(self.roots)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for group in self.lines:
            for j in group[1:]:
                union(group[0], j)
        if use_form:
            for i in range(n):
                for j in range(i + 1, n):
                    if self.inner(self.roots[i], self.roots[j]) != 0:
                        union(i, j)
        else:
            for i in range(n):
                for group in self.plane_groups(i):
                    if self.line_count(self.plane_system(i, group)) >= 3:
                        for j in group:
                            union(i, j)
        comps: dict[int, list[int]] = {}
        for i in range(n):
            comps.setdefault(find(i), []).append(i)
        return [
            RootSystem(tuple(self.roots[i] for i in members), None, self.form_factor)
            for members in comps.values()
        ]

    def is_irreducible(self) -> bool:
        return len(self.irreducible_components()) == 1

    # -- subsystems ------------------------------------------------------

    def subsystem(self, basis: Sequence[Sequence]) -> "RootSystem":
        """The roots lying in the rational span of the given vectors."""
        basis = [rational_vector(b) for b in basis]
        base_rank = rank(basis)
        if rank(list(basis) + list(self.span_basis)) != self.rank:
            raise ValueError("basis vectors must lie in the span of the root system")
        normals = nullspace(basis, self.dim) if base_rank else []
        chosen = [r for r in self.roots if all(dot(n, r) == 0 for n in normals)]
        if not chosen:
            raise ValueError("the span contains no roots")
        return RootSystem(tuple(chosen), None, self.form_factor)

    def sub_by_indices(self, indices: Iterable[int]) -> "RootSystem":
        return RootSystem(tuple(self.roots[i] for i in indices), None, self.form_factor)

    def contains(self, other: "RootSystem") -> bool:
        return all(r in self.index for r in other.roots)

    def _as_index(self, alpha) -> int:
        if isinstance(alpha, int):
            if not 0 <= alpha < len(self.roots):
                raise ValueError("root index out of range")
            return alpha
        key = rational_vector(alpha)
        if key not in self.index:
            raise ValueError(f"{_fmt(key)} is not a root of this system")
        return self.index[key]

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "roots": [[[x.numerator, x.denominator] for x in r] for r in self.roots],
            "label": self.label,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RootSystem":
        roots = tuple(tuple(Fraction(n, d) for n, d in r) for r in data["roots"])
        system = cls(roots, data.get("label"))
        if system.dim != data["dim"]:
            raise ValueError("dimension field disagrees with the roots")
        return system

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# -- lattice membership --------------------------------------------------


def _integer_rows(vectors: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    den = 1
    for v in vectors:
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
    return [[int(x * den) for x in v] for v in vectors], den


def _hermite_basis(rows: list[list[int]]) -> list[list[int]]:
    """Row-echelon Z-basis of the lattice spanned by integer rows."""
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis = []
    col = 0
    while rows and col < ncols:
        nonzero = [r for r in rows if r[col] != 0]
        zero = [r for r in rows if r[col] == 0]
        if not nonzero:
            col += 1
            continue
        while len(nonzero) > 1:
            nonzero.sort(key=lambda r: abs(r[col]))
            pivot = nonzero[0]
            new = [pivot]
            for r in nonzero[1:]:
                q = r[col] // pivot[col]
                reduced = [a - q * b for a, b in zip(r, pivot)]
                if reduced[col] != 0:
                    new.append(reduced)
                elif any(reduced):
                    zero.append(reduced)
            nonzero = new
        basis.append(nonzero[0])
        rows = zero
        col += 1
    return basis


def lattice_contains(generators: Sequence[Sequence[Fraction]], vector: Sequence[Fraction]) -> bool:
    """Whether ``vector`` is an integer combination of ``generators``."""
    ints, den = _integer_rows(list(generators) + [vector])
    basis = _hermite_basis(ints[:-1])
    if not basis:
        return not any(ints[-1])
    coeffs = solve([list(col) for col in zip(*basis)], ints[-1])
    if coeffs is None:
        return False
    return all(c.denominator == 1 for c in coeffs)


def is_weak_subsystem(system: RootSystem, sub: RootSystem) -> bool:
    """Sub is contained in the system and the system meets the integer span of sub exactly in sub."""
    if not system.contains(sub):
        return False
    generators = list(sub.roots)
    for r in system.roots:
        if r in sub.index:
            continue
        if lattice_contains(generators, r):
            return False
    return True


# -- classical constructions ----------------------------------------------


def _unit(n: int, i: int, c=1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def _pm_pairs(n: int) -> list[Root]:
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for si in (1, -1):
            for sj in (1, -1):
                v = [Fraction(0)] * n
                v[i] = Fraction(si)
                v[j] = Fraction(sj)
                out.append(tuple(v))
    return out


def _signed_units(n: int, c=1) -> list[Root]:
    out = []
    for i in range(n):
        out.append(tuple(_unit(n, i, c)))
        out.append(tuple(_unit(n, i, -c)))
    return out


def _e8_roots() -> list[Root]:
    half = Fraction(1, 2)
    out = list(_pm_pairs(8))
    for signs in itertools.product((half, -half), repeat=8):
        if sum(signs) % 2 == 0:
            out.append(tuple(signs))
    return out


def _g2_roots() -> list[Root]:
    out = []
    for v in itertools.product(range(-2, 3), repeat=3):
        if sum(v) == 0 and sum(x * x for x in v) in (2, 6):
            out.append(rational_vector(v))
    return out


def build_classical(family: str, n: int) -> RootSystem:
    """Standard realization of a classical root system with its canonical form.

    The canonical form is the Euclidean inner product, doubled for F4 so that
    its short roots have squared length 2.
    """
    family = family.upper()
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    minimum = {"A": 1, "B": 2, "C": 2, "D": 3, "BC": 1}
    if family in minimum and n < minimum[family]:
        raise ValueError(f"{family}_n requires n >= {minimum[family]}, got n = {n}")
    factor = Fraction(1)
    if family == "A":
        roots = [tuple(Fraction(int(k == i) - int(k == j)) for k in range(n + 1))
                 for i in range(n + 1) for j in range(n + 1) if i != j]
    elif family == "B":
        roots = _pm_pairs(n) + _signed_units(n)
    elif family == "C":
        roots = _pm_pairs(n) + _signed_units(n, 2)
    elif family == "D":
        roots = _pm_pairs(n)
    elif family == "BC":
        roots = _pm_pairs(n) + _signed_units(n) + _signed_units(n, 2)
    elif family == "G":
        if n != 2:
            raise ValueError("G_n exists only for n = 2")
        roots = _g2_roots()
    elif family == "F":
        if n != 4:
            raise ValueError("F_n exists only for n = 4")
        half = Fraction(1, 2)
        roots = _signed_units(4) + _pm_pairs(4) + [tuple(s) for s in itertools.product((half, -half), repeat=4)]
        factor = Fraction(2)
    elif family == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n exists only for n in {6, 7, 8}")
        roots = _e8_roots()
        if n <= 7:
            roots = [r for r in roots if r[6] == r[7]]
        if n == 6:
            roots = [r for r in roots if r[5] == r[6]]
    else:  # dihedral I_2(m) with rational coordinates
        dihedral = {2: ("A1xA1", None), 3: ("A", 2), 4: ("B", 2), 6: ("G", 2)}
        if n not in dihedral:
            raise ValueError(f"I_2({n}) needs irrational coordinates; only m in {{2, 3, 4, 6}} is supported")
        fam, rk = dihedral[n]
        if fam == "A1xA1":
            return RootSystem(tuple(_signed_units(2)), "I2(2)")
        base = build_classical(fam, rk)
        return RootSystem(base.roots, f"I2({n})", base.form_factor)
    label = f"{family}{n}"
    return RootSystem(tuple(roots), label, factor, n)


def parse_label(label: str) -> tuple[str, int]:
    """Split a label such as ``BC3``, ``G2`` or ``I2(6)`` into family and rank (m for dihedral types)."""
    label = label.strip().upper()
    dihedral = re.fullmatch(r"I2\((\d+)\)", label)
    if dihedral:
        return "I", int(dihedral.group(1))
    family = label.rstrip("0123456789")
    digits = label[len(family):]
    if not family or not digits:
        raise ValueError(f"cannot parse root system label {label!r}")
    return family, int(digits)


def system_from_label(label: str) -> RootSystem:
    """Build a system from its label; ``x`` joins summands, e.g. ``A1xA2``."""
    if label.upper() in ("A1XA1", "A1A1"):
        return RootSystem(tuple(_signed_units(2)), "A1xA1")
    parts = label.upper().split("X")
    if len(parts) == 1:
        return build_classical(*parse_label(label))
    system = build_classical(*parse_label(parts[0]))
    for part in parts[1:]:
        system = direct_sum(system, build_classical(*parse_label(part)))
    return RootSystem(system.roots, "x".join(parts), system.form_factor)


def standard_count(family: str, n: int) -> int:
    """Number of roots from the closed formulas."""
    family = family.upper()
    table = {"A": n * (n + 1), "B": 2 * n * n, "C": 2 * n * n, "BC": 2 * n * n + 2 * n,
             "D": 2 * n * (n - 1)}
    if family in table:
        return table[family]
    return {("G", 2): 12, ("F", 4): 48, ("E", 6): 72, ("E", 7): 126, ("E", 8): 240}[(family, n)]


def direct_sum(first: RootSystem, second: RootSystem) -> RootSystem:
    """Orthogonal direct sum in the concatenated ambient space."""
    zero1 = (Fraction(0),) * first.dim
    zero2 = (Fraction(0),) * second.dim
    roots = [r + zero2 for r in first.roots] + [zero1 + r for r in second.roots]
    return RootSystem(tuple(roots), None, Fraction(1))

"""Linear reductions of root systems and exhaustive k-goodness checks.

A reduction is a rational matrix applied to the roots of a source system.
The nonzero images form the induced system; the roots sent to zero are the
kernel roots. ``is_k_good`` verifies both conditions of k-goodness by
searching candidate subsystems through each root and records one witness per
obligation, so the outcome can be audited without repeating the search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .borel import BorelEnumeration, enumerate_borel_sets
from .linalg import primitive_integer_vector, rank, solve
from .rootsys import Root, RootSystem, build_classical, rational_vector


def _fmt(v: Sequence[Fraction]) -> list[str]:
    return [str(x) for x in v]


@dataclass(eq=False)
class Reduction:
    """A linear map applied to a root system, with its induced system and fibers."""

    source: RootSystem
    matrix: tuple[tuple[Fraction, ...], ...]
    name: str = "reduction"
    declared_k: int = 2
    images: list[Root] = field(init=False, repr=False)
    induced: RootSystem = field(init=False, repr=False)

    def __post_init__(self):
        self.matrix = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        if any(len(row) != self.source.dim for row in self.matrix):
            raise ValueError("matrix columns must match the ambient dimension of the source")
        self.images = [self.apply(r) for r in self.source.roots]
        nonzero = [v for v in self.images if any(v)]
        if not nonzero:
            raise ValueError("the map kills every root; the target space would be trivial")
        self.induced = RootSystem(tuple(nonzero), None, Fraction(1))
        if self.induced.form.problems(self.induced):
            self.induced = RootSystem(tuple(nonzero), None, None)

    def apply(self, v: Sequence) -> Root:
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.matrix)

    @cached_property
    def image_index(self) -> tuple[int | None, ...]:
        """Induced-root index of each source root, or None for kernel roots."""
        index = self.induced.index
        return tuple(index[v] if any(v) else None for v in self.images)

    @cached_property
    def kernel_roots(self) -> list[int]:
        return [i for i, j in enumerate(self.image_index) if j is None]

    @cached_property
    def kernel_mask(self) -> int:
        return self.source.mask(self.kernel_roots)

    @cached_property
    def fibers(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {j: [] for j in range(len(self.induced.roots))}
        for i, j in enumerate(self.image_index):
            if j is not None:
                out[j].append(i)
        return out

    def fiber_over(self, target: Sequence) -> list[Root]:
        j = self.induced.index[rational_vector(target)]
        return [self.source.roots[i] for i in self.fibers[j]]

    def check_surjective(self, target: RootSystem) -> None:
        """The image of span(source) must be the span of the target system."""
        image_rank = rank(self.images)
        if image_rank != target.rank or rank(list(self.images) + list(target.roots)) != target.rank:
            raise ValueError(
                f"map is not surjective onto the target span: image rank {image_rank}, target rank {target.rank}"
            )

    def describe(self) -> dict:
        return {
            "name": self.name,
            "matrix": [_fmt(row) for row in self.matrix],
            "source_roots": len(self.source.roots),
            "induced_roots": len(self.induced.roots),
            "kernel_roots": [_fmt(self.source.roots[i]) for i in self.kernel_roots],
        }


def apply_reduction(matrix: Sequence[Sequence], source: RootSystem, target: RootSystem | None = None,
                    name: str = "reduction", k: int = 2) -> Reduction:
    reduction = Reduction(source, tuple(tuple(r) for r in matrix), name, k)
    if target is not None:
        reduction.check_surjective(target)
    return reduction


# -- subsystem data used by the checker -----------------------------------


@dataclass
class SubsystemData:
    """A subsystem of the source with its Borel sets translated to source masks."""

    mask: int
    rank: int
    irreducible: bool
    regular: bool
    borel: list[tuple[int, int, int]]  # (positives, core, id) as source masks
    system: RootSystem


class _SubsystemCache:
    def __init__(self, source: RootSystem):
        self.source = source
        self.by_key: dict[tuple, SubsystemData] = {}

    def get(self, members: Sequence[int]) -> SubsystemData:
        key = tuple(members)
        data = self.by_key.get(key)
        if data is not None:
            return data
        source = self.source
        sub = source.sub_by_indices(members)
        mask = source.mask(members)
        components = sub.irreducible_components()
        irreducible = len(components) == 1
        enumeration = enumerate_borel_sets(sub)
        translate = [source.index[r] for r in sub.roots]

        def to_source(m: int) -> int:
            out = 0
            for i, j in enumerate(translate):
                if m >> i & 1:
                    out |= 1 << j
            return out

        borel = [(to_source(b.positives), to_source(enumeration.core(b.id)), b.id) for b in enumeration.borel_sets]
        regular = irreducible and (sub.rank == 2 or sub.is_regular())
        data = SubsystemData(mask, sub.rank, irreducible, regular, borel, sub)
        self.by_key[key] = data
        return data


def _project_away(v: Sequence[Fraction], a: Sequence[Fraction]) -> Root:
    c = sum((x * y for x, y in zip(v, a)), Fraction(0)) / sum((x * x for x in a), Fraction(0))
    return tuple(y - c * x for x, y in zip(a, v))


def _candidate_subsystems(source: RootSystem, gamma: int, k: int, cache: _SubsystemCache) -> list[SubsystemData]:
    """Irreducible rank-k subsystems through gamma in a deterministic order.

    Rank-3 spans through gamma are planes in the quotient by the line of
    gamma, so they are found by grouping the projected roots twice.
    """
    if k == 2:
        out = []
        for group in source.plane_groups(gamma):
            plane = source.plane_system(gamma, group)
            if source.line_count(plane) < 3:
                continue
            out.append(cache.get(plane))
        return out
    if k != 3:
        raise ValueError("only k = 2 and k = 3 are supported")
    g = source.roots[gamma]
    quotient: dict[tuple[int, ...], list[int]] = {}
    directions: dict[tuple[int, ...], Root] = {}
    for j, r in enumerate(source.roots):
        if source.line_index[j] == source.line_index[gamma]:
            continue
        p = _project_away(r, g)
        key = primitive_integer_vector(p)
        quotient.setdefault(key, []).append(j)
        directions.setdefault(key, p)
    keys = list(quotient)
    seen: set[frozenset] = set()
    out = []
    gamma_line = list(source.lines[source.line_index[gamma]])
    for a in keys:
        groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for b in keys:
            if b == a:
                continue
            groups.setdefault(primitive_integer_vector(_project_away(directions[b], directions[a])), []).append(b)
        for group in groups.values():
            lines = frozenset([a, *group])
            if lines in seen:
                continue
            seen.add(lines)
            members = sorted(gamma_line + [j for q in lines for j in quotient[q]])
            data = cache.get(members)
            if data.irreducible and data.rank == 3:
                out.append(data)
    return out


# -- goodness ----------------------------------------------------------------


@dataclass
class GoodnessResult:
    good: bool
    k: int
    kernel_rows: list[dict]
    core_rows: list[dict]
    failure: dict | None = None

    def to_json(self) -> dict:
        return {
            "good": self.good,
            "k": self.k,
            "kernel_rows": self.kernel_rows,
            "core_rows": self.core_rows,
            "failure": self.failure,
        }


_INTEGER_ROOTS: dict[tuple, tuple[list[tuple[int, ...]], dict[tuple[int, ...], int]]] = {}


def _integer_roots(system: RootSystem):
    data = _INTEGER_ROOTS.get(system.roots)
    if data is None:
        den = 1
        for r in system.roots:
            for x in r:
                den = den * x.denominator // gcd(den, x.denominator)
        ints = [tuple(int(x * den) for x in r) for r in system.roots]
        data = (ints, {v: i for i, v in enumerate(ints)})
        _INTEGER_ROOTS[system.roots] = data
    return data


def simple_roots(system: RootSystem, positives: int) -> list[int]:
    """Positive roots that are not a sum of two positive roots."""
    ints, index = _integer_roots(system)
    members = system.members(positives)
    out = []
    for i in members:
        r = ints[i]
        decomposable = False
        for j in members:
            k = index.get(tuple(a - b for a, b in zip(r, ints[j])))
            if k is not None and positives >> k & 1:
                decomposable = True
                break
        if not decomposable:
            out.append(i)
    return out


def borel_from_base(system: RootSystem, base: Sequence[Sequence]) -> int:
    """Positives mask of the Borel set whose base is given (a functional equal to 1 on the base)."""
    base = [rational_vector(b) for b in base]
    gram = [[sum((x * y for x, y in zip(a, b)), Fraction(0)) for b in base] for a in base]
    coeffs = solve(gram, [Fraction(1)] * len(base))
    if coeffs is None:
        raise ValueError("base vectors are linearly dependent")
    covector = [sum((c * b[i] for c, b in zip(coeffs, base)), Fraction(0)) for i in range(system.dim)]
    mask = 0
    for i, r in enumerate(system.roots):
        value = sum((a * b for a, b in zip(covector, r)), Fraction(0))
        if value == 0:
            raise ValueError("base does not determine a Borel set of this system")
        if value > 0:
            mask |= 1 << i
    return mask


class GoodnessChecker:
    def __init__(self, reduction: Reduction, k: int):
        self.reduction = reduction
        self.k = k
        self.source = reduction.source
        self.cache = _SubsystemCache(self.source)
        self._candidates: dict[int, list[SubsystemData]] = {}
        self.induced_enum = enumerate_borel_sets(reduction.induced)
        induced = reduction.induced
        # roots of the source mapping into each induced line, kernel included
        self.preimage_line = []
        for line in induced.lines:
            mask = reduction.kernel_mask
            for j in line:
                for i in reduction.fibers[j]:
                    mask |= 1 << i
            self.preimage_line.append(mask)

    def candidates(self, gamma: int) -> list[SubsystemData]:
        if gamma not in self._candidates:
            self._candidates[gamma] = _candidate_subsystems(self.source, gamma, self.k, self.cache)
        return self._candidates[gamma]

    def allowed_mask(self, f: int) -> int:
        """Source roots whose image lies in the Borel set f of the induced system."""
        positives = self.induced_enum.borel_sets[f].positives
        mask = 0
        for i, j in enumerate(self.reduction.image_index):
            if j is not None and positives >> j & 1:
                mask |= 1 << i
        return mask

    def kernel_witness(self, gamma: int):
        line = self.source.line_masks[self.source.line_index[gamma]]
        for data in self.candidates(gamma):
            if not data.regular:
                continue
            if data.mask & self.reduction.kernel_mask & ~line:
                continue
            return data
        return None

    def core_witnesses(self, f: int, gamma_prime: int, gamma: int, allowed: int, first_only: bool = True):
        source = self.source
        line = source.line_masks[source.line_index[gamma]]
        forbidden = self.preimage_line[self.reduction.induced.line_index[gamma_prime]] & ~line
        found = []
        for data in self.candidates(gamma):
            if data.mask & forbidden:
                continue
            for positives, core, gid in data.borel:
                if core >> gamma & 1 and positives & ~allowed == 0:
                    found.append((data, positives, gid))
                    if first_only:
                        return found
        return found

    def _row(self, f: int, gamma_prime: int, gamma: int, data: SubsystemData, positives: int) -> dict:
        source = self.source
        induced = self.reduction.induced
        base_f = simple_roots(induced, self.induced_enum.borel_sets[f].positives)
        base_g = simple_roots(source, positives)
        return {
            "f": f,
            "gamma_prime": _fmt(induced.roots[gamma_prime]),
            "gamma": _fmt(source.roots[gamma]),
            "base_f": [_fmt(induced.roots[i]) for i in base_f],
            "base_g": [_fmt(source.roots[i]) for i in base_g],
        }

    def run(self, all_witnesses: bool = False) -> GoodnessResult:
        source = self.source
        kernel_rows = []
        for gamma in self.reduction.kernel_roots:
            data = self.kernel_witness(gamma)
            if data is None:
                failure = {"condition": "a", "gamma": _fmt(source.roots[gamma])}
                return GoodnessResult(False, self.k, kernel_rows, [], failure)
            kernel_rows.append({"gamma": _fmt(source.roots[gamma]),
                                "psi_roots": [_fmt(r) for r in data.system.roots]})
        core_rows = []
        for b in self.induced_enum.borel_sets:
            allowed = self.allowed_mask(b.id)
            for gamma_prime in self.reduction.induced.members(self.induced_enum.core(b.id)):
                for gamma in self.reduction.fibers[gamma_prime]:
                    found = self.core_witnesses(b.id, gamma_prime, gamma, allowed, not all_witnesses)
                    if not found:
                        failure = {
                            "condition": "b",
                            "f": b.id,
                            "gamma_prime": _fmt(self.reduction.induced.roots[gamma_prime]),
                            "gamma": _fmt(source.roots[gamma]),
                        }
                        return GoodnessResult(False, self.k, kernel_rows, core_rows, failure)
                    row = self._row(b.id, gamma_prime, gamma, found[0][0], found[0][1])
                    if all_witnesses:
                        row["all_base_g"] = [[_fmt(source.roots[i]) for i in simple_roots(source, p)] for _, p, _ in found]
                    core_rows.append(row)
        return GoodnessResult(True, self.k, kernel_rows, core_rows)


def is_k_good(reduction: Reduction, k: int | None = None, all_witnesses: bool = False) -> GoodnessResult:
    """Exhaustively verify k-goodness, returning a certificate or the first failing obligation."""
    k = reduction.declared_k if k is None else k
    return GoodnessChecker(reduction, k).run(all_witnesses)


# -- independent re-verification --------------------------------------------


def verify_core_row(reduction: Reduction, gamma_prime: Sequence, gamma: Sequence,
                    base_f: Sequence[Sequence], base_g: Sequence[Sequence],
                    spans: dict | None = None) -> list[str]:
    """Check one witness row from scratch; returns the list of violated requirements."""
    source = reduction.source
    induced = reduction.induced
    problems = []
    gp = rational_vector(gamma_prime)
    g = rational_vector(gamma)
    if g not in source.index:
        return ["gamma is not a source root"]
    if reduction.apply(g) != gp:
        problems.append("gamma does not map to gamma'")
    f_mask = borel_from_base(induced, base_f)
    enumeration = enumerate_borel_sets(induced)
    f = enumeration.find(f_mask)
    if not enumeration.core(f.id) >> induced.index[gp] & 1:
        problems.append("gamma' is not in the core of f")
    base_vectors = [rational_vector(b) for b in base_g]
    spans = {} if spans is None else spans
    key = tuple(sorted(base_vectors))
    if key not in spans:
        sub = source.subsystem(base_vectors)
        spans[key] = (sub, len(sub.irreducible_components()) == 1)
    psi, irreducible = spans[key]
    if not irreducible or psi.rank != len(base_vectors):
        problems.append("Psi is not irreducible of the stated rank")
    if g not in psi.index:
        return problems + ["gamma does not lie in Psi"]
    g_mask = borel_from_base(psi, base_vectors)
    psi_enum = enumerate_borel_sets(psi)
    gb = psi_enum.find(g_mask)
    if not psi_enum.core(gb.id) >> psi.index[g] & 1:
        problems.append("gamma is not in the core of g")
    for r in psi.vectors(g_mask):
        image = reduction.images[source.index[r]]
        if not any(image) or not f_mask >> induced.index[image] & 1:
            problems.append(f"image of {_fmt(r)} is not in the Borel set f")
            break
    gp_line = induced.line_of[induced.index[gp]]
    g_line = source.line_of[source.index[g]]
    for r in psi.roots:
        image = reduction.images[source.index[r]]
        on_line = not any(image) or induced.line_of[induced.index[image]] == gp_line
        if on_line and source.line_of[source.index[r]] != g_line:
            problems.append(f"{_fmt(r)} maps to the line of gamma' but is off the line of gamma")
            break
    return problems


def verify_certificate(reduction: Reduction, result: GoodnessResult) -> list[str]:
    """Re-verify every row of a certificate without searching."""
    problems = []
    source = reduction.source
    kernel = set(reduction.kernel_roots)
    if {source.index[rational_vector(r["gamma"])] for r in result.kernel_rows} != kernel:
        problems.append("kernel rows do not cover the kernel roots")
    for row in result.kernel_rows:
        psi = RootSystem(tuple(rational_vector(v) for v in row["psi_roots"]), None, source.form_factor)
        gamma = rational_vector(row["gamma"])
        if gamma not in psi.index or not source.contains(psi):
            problems.append("kernel witness does not contain gamma")
            continue
        if psi != source.subsystem(psi.span_basis):
            problems.append("kernel witness is not a subsystem")
        if psi.rank != result.k or not psi.is_irreducible() or not psi.is_regular():
            problems.append("kernel witness is not irreducible regular of rank k")
        g_line = source.line_of[source.index[gamma]]
        for r in psi.roots:
            if not any(reduction.apply(r)) and source.line_of[source.index[r]] != g_line:
                problems.append("kernel witness meets the kernel off the line of gamma")
                break
    spans: dict = {}
    for row in result.core_rows:
        problems.extend(verify_core_row(reduction, row["gamma_prime"], row["gamma"], row["base_f"], row["base_g"], spans))
    return problems


# -- catalog -------------------------------------------------------------------


def _row(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def reduction_a_to_a2(n: int, i: int, j: int) -> Reduction:
    if not 1 <= i < j < n + 1:
        raise ValueError("need 1 <= i < j < n + 1")
    m = n + 1
    matrix = [
        _row(1 if c < i else 0 for c in range(m)),
        _row(1 if i <= c < j else 0 for c in range(m)),
        _row(1 if c >= j else 0 for c in range(m)),
    ]
    return apply_reduction(matrix, build_classical("A", n), build_classical("A", 2), f"A{n}-A2({i},{j})")


def _first_coordinates(n: int, count: int) -> list[tuple[Fraction, ...]]:
    return [_row(int(c == r) for c in range(n)) for r in range(count)]


def reduction_b_to_b2(n: int) -> Reduction:
    if n < 3:
        raise ValueError("B_n -> B2 needs n >= 3")
    return apply_reduction(_first_coordinates(n, 2), build_classical("B", n), build_classical("B", 2), f"B{n}-B2")


def reduction_d_to_b2(n: int) -> Reduction:
    if n < 3:
        raise ValueError("D_n -> B2 needs n >= 3")
    return apply_reduction(_first_coordinates(n, 2), build_classical("D", n), build_classical("B", 2), f"D{n}-B2")


def reduction_c_to_bc2(n: int) -> Reduction:
    if n < 3:
        raise ValueError("C_n -> BC2 needs n >= 3")
    return apply_reduction(_first_coordinates(n, 2), build_classical("C", n), build_classical("BC", 2), f"C{n}-BC2")


def reduction_c_to_b2(n: int, i: int | None = None) -> Reduction:
    """Sum the first i and the last n - i coordinates, then map C2 to B2 by half sums and differences."""
    if n < 3:
        raise ValueError("C_n -> B2 needs n >= 3")
    i = n - 1 if i is None else i
    if not 1 <= i < n:
        raise ValueError("need 1 <= i < n")
    half = Fraction(1, 2)
    first = [half if c < i else -half for c in range(n)]
    second = [half for _ in range(n)]
    return apply_reduction([_row(first), _row(second)], build_classical("C", n), build_classical("B", 2), f"C{n}-B2({i})")


def reduction_bc_to_bc2(n: int) -> Reduction:
    if n < 3:
        raise ValueError("BC_n -> BC2 needs n >= 3")
    return apply_reduction(_first_coordinates(n, 2), build_classical("BC", n), build_classical("BC", 2), f"BC{n}-BC2")


def reduction_bc_to_bc3(n: int) -> Reduction:
    if n < 3:
        raise ValueError("BC_n -> BC3 needs n >= 3")
    r = apply_reduction(_first_coordinates(n, 3), build_classical("BC", n), build_classical("BC", 3), f"BC{n}-BC3", 3)
    return r


def _g2_matrix(dim: int) -> list[tuple[Fraction, ...]]:
    rows = [[0] * dim for _ in range(3)]
    rows[0][0], rows[0][1] = 1, -1
    rows[1][1], rows[1][2] = 1, -1
    rows[2][2], rows[2][0] = 1, -1
    return [_row(r) for r in rows]


def reduction_f4_to_g2() -> Reduction:
    return apply_reduction(_g2_matrix(4), build_classical("F", 4), build_classical("G", 2), "F4-G2")


def reduction_e_to_g2(n: int) -> Reduction:
    return apply_reduction(_g2_matrix(8), build_classical("E", n), build_classical("G", 2), f"E{n}-G2")


CATALOG = {
    "An-A2": reduction_a_to_a2,
    "Bn-B2": reduction_b_to_b2,
    "Dn-B2": reduction_d_to_b2,
    "Cn-BC2": reduction_c_to_bc2,
    "Cn-B2": reduction_c_to_b2,
    "BCn-BC2": reduction_bc_to_bc2,
    "F4-G2": reduction_f4_to_g2,
    "En-G2": reduction_e_to_g2,
    "BCn-BC3": reduction_bc_to_bc3,
}


def builtin_reductions() -> dict:
    """The nine catalog families, keyed by name, as constructors."""
    return dict(CATALOG)


def catalog_instances(max_rank: int = 4) -> list[Reduction]:
    """Every catalog family instantiated for each rank from 3 to max_rank, with all parameter choices."""
    out = []
    for n in range(3, max_rank + 1):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            out.append(reduction_a_to_a2(n, i, j))
        out.append(reduction_b_to_b2(n))
        out.append(reduction_d_to_b2(n))
        out.append(reduction_c_to_bc2(n))
        for i in range(1, n):
            out.append(reduction_c_to_b2(n, i))
        out.append(reduction_bc_to_bc2(n))
        out.append(reduction_bc_to_bc3(n))
    out.append(reduction_f4_to_g2())
    return out


def builtin(name: str, n: int | None = None, i: int | None = None, j: int | None = None) -> Reduction:
    """Look up a catalog reduction by name such as ``F4-G2``, ``B4-B2`` or ``A5-A2``."""
    key = name.upper().replace("_", "-")
    fixed = {"F4-G2": reduction_f4_to_g2, "E6-G2": lambda: reduction_e_to_g2(6),
             "E7-G2": lambda: reduction_e_to_g2(7), "E8-G2": lambda: reduction_e_to_g2(8)}
    if key in fixed:
        return fixed[key]()
    source, _, target = key.partition("-")
    family = source.rstrip("0123456789N")
    digits = source[len(family):]
    if digits and digits != "N":
        n = int(digits)
    if n is None:
        raise ValueError(f"reduction {name!r} needs a rank")
    table = {("A", "A2"): lambda: reduction_a_to_a2(n, i or 1, j or 2),
             ("B", "B2"): lambda: reduction_b_to_b2(n),
             ("D", "B2"): lambda: reduction_d_to_b2(n),
             ("C", "BC2"): lambda: reduction_c_to_bc2(n),
             ("C", "B2"): lambda: reduction_c_to_b2(n, i),
             ("BC", "BC2"): lambda: reduction_bc_to_bc2(n),
             ("BC", "BC3"): lambda: reduction_bc_to_bc3(n),
             ("E", "G2"): lambda: reduction_e_to_g2(n)}
    if (family, target) not in table:
        raise ValueError(f"unknown reduction {name!r}; known: {', '.join(CATALOG)}")
    return table[(family, target)]()


def identity_reduction(system: RootSystem, k: int = 2) -> Reduction:
    matrix = [_row(int(r == c) for c in range(system.dim)) for r in range(system.dim)]
    return Reduction(system, tuple(matrix), f"identity-{system.label}", k)


@dataclass
class CoarseIndex:
    """Class of each source root under a reduction; kernel roots are 'absorbed'."""

    reduction: Reduction
    mapping: dict[int, int | str]
    warnings: list[str]

    def classes(self) -> dict[Root, list[Root]]:
        induced = self.reduction.induced
        source = self.reduction.source
        return {induced.roots[j]: [source.roots[i] for i in members]
                for j, members in self.reduction.fibers.items()}

    def members(self, target: Sequence) -> list[Root]:
        return self.reduction.fiber_over(target)

    def absorbed(self) -> list[Root]:
        return [self.reduction.source.roots[i] for i in self.reduction.kernel_roots]


def coarsen_index(reduction: Reduction, goodness: GoodnessResult | None = None) -> CoarseIndex:
    """Index map used to coarsen a grading along a reduction.

    Kernel roots are absorbed into the coarse root subgroups; that is only
    harmless when condition (a) has been certified, so a warning is attached
    otherwise.
    """
    mapping = {i: ("absorbed" if j is None else j) for i, j in enumerate(reduction.image_index)}
    warnings = []
    if reduction.kernel_roots and (goodness is None or not goodness.good):
        warnings.append("kernel roots are absorbed but 2-goodness has not been verified")
    return CoarseIndex(reduction, mapping, warnings)

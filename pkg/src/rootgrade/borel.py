"""Functionals, Borel sets and their enumeration by wall crossing.

A Borel set is stored as a bitmask over the root indices of its system. The
enumeration walks the chambers of the root hyperplane arrangement: from a
chamber we try to flip each root line and keep the flip only when a
certifying functional for the new sign pattern is found.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np

from .linalg import primitive_integer_vector, rank, strictly_feasible_point
from .rootsys import RootSystem


@dataclass(frozen=True)
class Functional:
    """A linear functional given by its covector in ambient coordinates."""

    covector: tuple[Fraction, ...]

    def __call__(self, v: Sequence) -> Fraction:
        return sum((a * b for a, b in zip(self.covector, v)), Fraction(0))

    def is_generic_for(self, system: RootSystem) -> bool:
        values = [self(r) for r in system.roots]
        return all(v != 0 for v in values) and len(set(values)) == len(values)


def generic_functional(system: RootSystem, seed: int = 0, max_tries: int = 1000) -> Functional:
    """A deterministic functional with nonzero, pairwise distinct values on the roots."""
    rng = random.Random(seed)
    covector = [Fraction(rng.randint(-997, 997)) for _ in range(system.dim)]
    for _ in range(max_tries):
        f = Functional(tuple(covector))
        if f.is_generic_for(system):
            return f
        covector = [c + Fraction(rng.randint(-997, 997), rng.randint(1, 97)) for c in covector]
    raise RuntimeError("could not find a generic functional; the retry cap was reached")


def positive_mask(system: RootSystem, covector: Sequence) -> int:
    mask = 0
    for i, r in enumerate(system.roots):
        if sum((a * b for a, b in zip(covector, r)), Fraction(0)) > 0:
            mask |= 1 << i
    return mask


@dataclass(frozen=True)
class BorelSet:
    id: int
    positives: int
    representative: tuple[Fraction, ...]

    def functional(self) -> Functional:
        return Functional(self.representative)


def _scaled_roots(system: RootSystem) -> tuple[np.ndarray, int]:
    den = 1
    for r in system.roots:
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
    return np.array([[int(x * den) for x in r] for r in system.roots], dtype=np.int64), den


def _mask_from_signs(signs: np.ndarray) -> int:
    mask = 0
    for i in np.flatnonzero(signs):
        mask |= 1 << int(i)
    return mask


def _generic_point_near(system: RootSystem, point: Sequence[Fraction], seed: int) -> tuple[Fraction, ...]:
    """Perturb a point with strict signs on the roots into a generic functional with the same signs."""
    base = Functional(tuple(point))
    values = [base(r) for r in system.roots]
    margin = min(abs(v) for v in values)
    rng = random.Random(seed)
    for _ in range(200):
        direction = [Fraction(rng.randint(-50, 50)) for _ in point]
        spread = max(abs(Functional(tuple(direction))(r)) for r in system.roots) or Fraction(1)
        delta = margin / (2 * spread)
        candidate = Functional(tuple(p + delta * d for p, d in zip(point, direction)))
        if candidate.is_generic_for(system) and all(
            (candidate(r) > 0) == (v > 0) for r, v in zip(system.roots, values)
        ):
            return candidate.covector
    raise RuntimeError("could not perturb certificate into a generic functional")


def lp_certificate(system: RootSystem, mask: int) -> tuple[Fraction, ...] | None:
    """A generic functional positive exactly on ``mask``, found by exact linear programming, or None."""
    normals = [r if mask >> i & 1 else tuple(-x for x in r) for i, r in enumerate(system.roots)]
    point = strictly_feasible_point(normals)
    if point is None:
        return None
    return _generic_point_near(system, point, seed=mask % 1000003)


class BorelEnumeration:
    """All Borel sets of a root system together with their wall adjacencies.

    ``method`` selects how a flipped sign pattern is certified:
    ``"reflection"`` composes the current functional with the reflection in
    the flipped root (requires the canonical admissible form), ``"lp"`` solves
    an exact linear program. Both verify the certificate exactly.
    """

    def __init__(self, system: RootSystem, method: str | None = None, seed: int = 0):
        if method is None:
            method = "reflection" if system.form is not None else "lp"
        if method not in ("reflection", "lp"):
            raise ValueError("method must be 'reflection' or 'lp'")
        if method == "reflection" and system.form is None:
            raise ValueError("the reflection method needs an admissible form")
        self.system = system
        self.method = method
        self.seed = seed
        self.borel_sets: list[BorelSet] = []
        self.by_mask: dict[int, int] = {}
        self.walls: list[dict[int, int]] = []  # vertex -> {line index: neighbor id}
        self._enumerate()

    def _enumerate(self):
        system = self.system
        start = generic_functional(system, self.seed)
        scaled, _ = _scaled_roots(system)
        line_masks = system.line_masks
        self._add(positive_mask(system, start.covector), start.covector)
        queue = deque([0])
        while queue:
            vid = queue.popleft()
            current = self.borel_sets[vid]
            walls = {}
            for line, lmask in enumerate(line_masks):
                target = current.positives ^ lmask
                known = self.by_mask.get(target)
                if known is not None:
                    # two chambers separated by a single hyperplane are adjacent
                    walls[line] = known
                    continue
                cert = self._certify(current, line, target, scaled)
                if cert is None:
                    continue
                known = self._add(target, cert)
                queue.append(known)
                walls[line] = known
            self.walls.append(walls)
            assert len(self.walls) == vid + 1

    def _add(self, mask: int, covector) -> int:
        vid = len(self.borel_sets)
        self.borel_sets.append(BorelSet(vid, mask, tuple(Fraction(x) for x in covector)))
        self.by_mask[mask] = vid
        return vid

    def _certify(self, current: BorelSet, line: int, target: int, scaled: np.ndarray):
        system = self.system
        if self.method == "lp":
            return lp_certificate(system, target)
        gamma = system.roots[system.lines[line][0]]
        f = current.representative
        f_gamma = sum((a * b for a, b in zip(f, gamma)), Fraction(0))
        gg = sum((x * x for x in gamma), Fraction(0))
        # covector of f composed with the Euclidean reflection in gamma
        reflected = [a - 2 * f_gamma / gg * g for a, g in zip(f, gamma)]
        ints = primitive_integer_vector(reflected, fix_sign=False)
        if max(abs(x) for x in ints) > 1 << 40:
            raise OverflowError("certificate coordinates grew too large")
        values = scaled @ np.array(ints, dtype=np.int64)
        if _mask_from_signs(values > 0) != target:
            return None
        return tuple(Fraction(x) for x in ints)

    # -- queries ---------------------------------------------------------

    def __len__(self):
        return len(self.borel_sets)

    def __getitem__(self, i: int) -> BorelSet:
        return self.borel_sets[i]

    def find(self, positives: int) -> BorelSet:
        return self.borel_sets[self.by_mask[positives]]

    def comaximal_neighbors(self, vid: int) -> list[int]:
        return sorted(set(self.walls[vid].values()))

    @cached_property
    def comaximal_pairs(self) -> list[tuple[int, int]]:
        return sorted({(min(a, b), max(a, b)) for a in range(len(self)) for b in self.walls[a].values()})

    @cached_property
    def opposite(self) -> tuple[int, ...]:
        full = self.system.full_mask
        return tuple(self.by_mask[full ^ b.positives] for b in self.borel_sets)

    def are_opposite(self, a: int, b: int) -> bool:
        return self.borel_sets[a].positives & self.borel_sets[b].positives == 0

    def are_comaximal(self, a: int, b: int) -> bool:
        """Distinct Borel sets whose difference spans a line."""
        if a == b:
            return False
        diff = self.borel_sets[a].positives & ~self.borel_sets[b].positives
        return rank(self.system.vectors(diff)) == 1

    def are_cominimal(self, a: int, b: int) -> bool:
        return self.are_comaximal(a, self.opposite[b])

    @cached_property
    def boundaries(self) -> tuple[int, ...]:
        out = []
        for vid, b in enumerate(self.borel_sets):
            mask = 0
            for line in self.walls[vid]:
                mask |= self.system.line_masks[line]
            out.append(mask & b.positives)
        return tuple(out)

    @cached_property
    def cores(self) -> tuple[int, ...]:
        return tuple(b.positives & ~bd for b, bd in zip(self.borel_sets, self.boundaries))

    def boundary(self, vid: int) -> int:
        return self.boundaries[vid]

    def core(self, vid: int) -> int:
        return self.cores[vid]

    def induced_ordering(self, vid: int) -> list[int]:
        return induced_ordering(self.system, self.borel_sets[vid])

    def to_json(self) -> dict:
        return {
            "system": self.system.to_json(),
            "borel_sets": [
                {
                    "id": b.id,
                    "positives": self.system.members(b.positives),
                    "representative": [str(x) for x in b.representative],
                }
                for b in self.borel_sets
            ],
            "comaximal_pairs": [list(p) for p in self.comaximal_pairs],
        }


def induced_ordering(system: RootSystem, borel: BorelSet | Functional) -> list[int]:
    """Positive roots sorted by strictly decreasing value of the representative functional."""
    f = borel.functional() if isinstance(borel, BorelSet) else borel
    values = [(f(r), i) for i, r in enumerate(system.roots)]
    positives = [(v, i) for v, i in values if v > 0]
    ordered = sorted(positives, key=lambda t: -t[0])
    if len({v for v, _ in ordered}) != len(ordered):
        raise ValueError("functional is not generic: repeated values on positive roots")
    return [i for _, i in ordered]


_CACHE: dict[tuple, BorelEnumeration] = {}


def enumerate_borel_sets(system: RootSystem, method: str | None = None) -> BorelEnumeration:
    """Cached enumeration keyed by the root tuple and method."""
    key = (system.roots, system.form_factor, method)
    if key not in _CACHE:
        _CACHE[key] = BorelEnumeration(system, method)
    return _CACHE[key]

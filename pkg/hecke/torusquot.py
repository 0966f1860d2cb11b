"""
The torus quotient X/bar = (Q/Z) (x) X with its W-action, the subgroups W_lambda
and the groupoid of minimal coset representatives
"""
from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from config.config import Config
from hecke.coeff import RatMod1, format_rational, parse_rational
from hecke.exceptions import GuardrailError, PreconditionError
from hecke.rootdata import Coroot, RootDatum, WeylElt, is_positive, weyl_generate
from utils.logger import log


@dataclass(frozen=True, order=True)
class TorusPoint:
    """A point of (Q/Z) (x) X in fundamental-weight coordinates"""
    coords: Tuple[RatMod1, ...]

    @classmethod
    def from_values(cls, values: Iterable) -> 'TorusPoint':
        return cls(tuple(RatMod1(Fraction(v)) for v in values))

    @classmethod
    def parse(cls, text: str) -> 'TorusPoint':
        """Parse "0,1/2" style comma separated rationals"""
        return cls.from_values(parse_rational(c) for c in text.split(','))

    @classmethod
    def zero(cls, rank: int) -> 'TorusPoint':
        return cls(tuple(RatMod1(Fraction(0)) for _ in range(rank)))

    @property
    def values(self) -> Tuple[Fraction, ...]:
        return tuple(c.value for c in self.coords)

    def __add__(self, other: 'TorusPoint') -> 'TorusPoint':
        return TorusPoint(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> 'TorusPoint':
        return TorusPoint(tuple(-c for c in self.coords))

    def scale(self, n: int) -> 'TorusPoint':
        return TorusPoint(tuple(c * n for c in self.coords))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def to_json(self) -> List[str]:
        return [format_rational(v) for v in self.values]

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def pair(d: RootDatum, coroot: Coroot, lam: TorusPoint) -> RatMod1:
    """The pairing of a coroot with a point of the torus quotient, in Q/Z"""
    return RatMod1(sum((c * x for c, x in zip(coroot, lam.values)), Fraction(0)))


def act(d: RootDatum, w: WeylElt, lam: TorusPoint) -> TorusPoint:
    """w(lambda) reduced mod 1"""
    values = lam.values
    r = len(values)
    return TorusPoint.from_values(
        sum((w.matrix[i][j] * values[j] for j in range(r)), Fraction(0)) for i in range(r)
    )


def in_xbar_m(lam: TorusPoint, m: int) -> bool:
    """m^2 lambda = lambda"""
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    return lam.scale(m * m - 1).is_zero()


def enumerate_xbar(d: RootDatum, n: int) -> List[TorusPoint]:
    """
    All lambda with N lambda = 0, in lexicographic order

    Args:
        d: root datum
        n: the denominator N

    Returns:
        List[TorusPoint]: the N-torsion points
    """
    if n < 1:
        raise PreconditionError(f"denominator must be >= 1, got {n}")
    if n ** d.rank > Config.MAX_INDEX_SET:
        raise GuardrailError(f"{n}^{d.rank} torsion points exceed the configured cap {Config.MAX_INDEX_SET}")
    steps = [Fraction(k, n) for k in range(n)]
    return [TorusPoint.from_values(p) for p in itertools.product(steps, repeat=d.rank)]


def orbits(d: RootDatum, points: Sequence[TorusPoint]) -> List[List[TorusPoint]]:
    """
    Partition a W-stable set of points into W-orbits

    Raises:
        PreconditionError: when the input is not closed under W
    """
    remaining = set(points)
    result = []
    for start in sorted(remaining):
        if start not in remaining:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            lam = queue.popleft()
            for s in d.simple_reflections:
                image = act(d, s, lam)
                if image not in remaining:
                    raise PreconditionError(f"point set is not W-stable: {image} missing")
                if image not in orbit:
                    orbit.add(image)
                    queue.append(image)
        remaining -= orbit
        result.append(sorted(orbit))
    return result


def orbit_of(d: RootDatum, lam: TorusPoint) -> List[TorusPoint]:
    """The W-orbit of a single point, sorted"""
    seen = {lam}
    queue = deque([lam])
    while queue:
        current = queue.popleft()
        for s in d.simple_reflections:
            image = act(d, s, current)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return sorted(seen)


@dataclass(frozen=True, eq=False)
class LittleWeylData:
    """The coroot system of lambda and the Coxeter group W_lambda it generates"""
    base: TorusPoint
    coroots: Tuple[Coroot, ...]
    positives: Tuple[Coroot, ...]
    simples: Tuple[Coroot, ...]
    generators: Tuple[WeylElt, ...]
    elements: FrozenSet[WeylElt]

    def contains(self, w: WeylElt) -> bool:
        return w in self.elements

    def is_trivial(self) -> bool:
        return not self.simples


def _simple_system(positives: Sequence[Coroot]) -> Tuple[Coroot, ...]:
    sums = set()
    for a, b in itertools.combinations_with_replacement(positives, 2):
        sums.add(tuple(x + y for x, y in zip(a, b)))
    return tuple(beta for beta in positives if beta not in sums)


def _close(identity: WeylElt, generators: Sequence[WeylElt]) -> FrozenSet[WeylElt]:
    seen = {identity}
    queue = deque([identity])
    while queue:
        w = queue.popleft()
        for g in generators:
            wg = w * g
            if wg not in seen:
                seen.add(wg)
                queue.append(wg)
    return frozenset(seen)


@functools.lru_cache(maxsize=None)
def little_weyl(d: RootDatum, lam: TorusPoint) -> LittleWeylData:
    """Coroots pairing to zero with lambda, their simple system and W_lambda"""
    coroots = tuple(c for c in d.coroots if pair(d, c, lam).is_zero())
    positives = tuple(c for c in coroots if is_positive(c))
    simples = _simple_system(positives)
    generators = tuple(d.reflection(beta) for beta in simples)
    log.debug(f"W_lambda for {lam}: {len(positives)} positive coroots, {len(simples)} simple")
    return LittleWeylData(
        base=lam,
        coroots=coroots,
        positives=positives,
        simples=simples,
        generators=generators,
        elements=_close(d.identity, generators),
    )


def _require_member(d: RootDatum, u: WeylElt, lam: TorusPoint) -> LittleWeylData:
    data = little_weyl(d, lam)
    if not data.contains(u):
        raise PreconditionError(f"element is not in W_lambda for lambda={lam}")
    return data


def length_lambda(d: RootDatum, u: WeylElt, lam: TorusPoint) -> int:
    """Inversions of u inside the positive coroots of lambda"""
    data = _require_member(d, u, lam)
    return sum(1 for beta in data.positives if not is_positive(u.apply_to_coroot(beta)))


def reduced_word_lambda(d: RootDatum, u: WeylElt, lam: TorusPoint) -> List[Coroot]:
    """
    Reduced word of u in the simple reflections of W_lambda

    Greedy on left descents, trying simple coroots in their fixed order.

    Returns:
        List[Coroot]: simple coroots beta_1..beta_k with u = s_beta_1 ... s_beta_k
    """
    data = _require_member(d, u, lam)
    word = []
    current = u
    while not current.is_identity():
        for beta, s in zip(data.simples, data.generators):
            if not is_positive(current.inverse.apply_to_coroot(beta)):
                word.append(beta)
                current = s * current
                break
        else:
            raise PreconditionError("element of W_lambda has no left descent")
    return word


def min_coset(d: RootDatum, w: WeylElt, lam: TorusPoint) -> WeylElt:
    """The unique z in w W_lambda with z(positive coroots of lambda) positive"""
    data = little_weyl(d, lam)
    z = w
    while True:
        for beta, s in zip(data.simples, data.generators):
            if not is_positive(z.apply_to_coroot(beta)):
                z = z * s
                break
        else:
            return z


def maps_positive(d: RootDatum, z: WeylElt, lam: TorusPoint) -> bool:
    """z sends every positive coroot of lambda to a positive coroot"""
    return all(is_positive(z.apply_to_coroot(beta)) for beta in little_weyl(d, lam).positives)


def bracket_contains(d: RootDatum, target: TorusPoint, z: WeylElt, source: TorusPoint) -> bool:
    """z in [target, source]: z(source) = target and z is minimal in z W_source"""
    return act(d, z, source) == target and maps_positive(d, z, source)


def bracket(d: RootDatum, target: TorusPoint, source: TorusPoint) -> List[WeylElt]:
    return [z for z in weyl_generate(d) if bracket_contains(d, target, z, source)]


@dataclass(frozen=True)
class GroupoidArrow:
    """A morphism (target, z, source) of the groupoid of minimal coset representatives"""
    target: TorusPoint
    z: WeylElt
    source: TorusPoint

    @classmethod
    def build(cls, d: RootDatum, target: TorusPoint, z: WeylElt, source: TorusPoint) -> 'GroupoidArrow':
        if not bracket_contains(d, target, z, source):
            raise PreconditionError(f"z is not in [{target}, {source}]")
        return cls(target, z, source)

    def compose(self, other: 'GroupoidArrow') -> 'GroupoidArrow':
        """self after other"""
        if self.source != other.target:
            raise PreconditionError(f"arrows do not compose: {self.source} != {other.target}")
        return GroupoidArrow(self.target, self.z * other.z, other.source)

    def inverse(self) -> 'GroupoidArrow':
        return GroupoidArrow(self.source, self.z.inverse, self.target)

    def is_valid(self, d: RootDatum) -> bool:
        return bracket_contains(d, self.target, self.z, self.source)

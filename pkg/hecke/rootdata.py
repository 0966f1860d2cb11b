"""
Simply connected root data of finite Cartan type and their Weyl groups

Conventions:
    A[i][j] = <coroot_i, root_j>. X is the weight lattice with basis the
    fundamental weights w_1..w_r (<coroot_j, w_i> = delta_ij), so the simple
    root alpha_i has w-coordinates given by column i of A, and
    s_i(x) = x - <coroot_i, x> alpha_i. A WeylElt is the integer matrix of
    its action on X in w-coordinates. Coroots live in Y with the simple
    coroot basis; w acts on Y by the contragredient matrix (M^-1)^T, which
    keeps <w(y), w(x)> = <y, x>.

Simple reflections are labelled 1..r in words and in every public API.
"""
from __future__ import annotations

import functools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from config.config import Config
from hecke.exceptions import GuardrailError, InvalidCartanTypeError, PreconditionError
from utils.logger import log

Matrix = Tuple[Tuple[int, ...], ...]
Coroot = Tuple[int, ...]

_RANK_LIMITS = {
    'A': (1, None),
    'B': (2, None),
    'C': (2, None),
    'D': (3, None),
    'E': (6, 8),
    'F': (4, 4),
    'G': (2, 2),
}


@dataclass(frozen=True)
class CartanType:
    """A product of irreducible finite Cartan types, e.g. A1xA1"""
    factors: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        if not self.factors:
            raise InvalidCartanTypeError("empty Cartan type")
        for family, rank in self.factors:
            if family not in _RANK_LIMITS:
                raise InvalidCartanTypeError(f"unknown family {family!r}")
            low, high = _RANK_LIMITS[family]
            if rank < low or (high is not None and rank > high):
                raise InvalidCartanTypeError(f"rank {rank} invalid for family {family}")

    @classmethod
    def parse(cls, text: str) -> 'CartanType':
        """
        Parse strings like "A2", "B3", "A1xA1", "G2"

        Args:
            text: factors joined by 'x' (case-insensitive separator)

        Returns:
            CartanType: parsed type
        """
        pieces = [p.strip() for p in re.split(r'[xX×]', text.strip()) if p.strip()]
        factors = []
        for piece in pieces:
            match = re.fullmatch(r'([A-Ga-g])\s*(\d+)', piece)
            if not match:
                raise InvalidCartanTypeError(f"cannot parse Cartan type factor {piece!r} in {text!r}")
            factors.append((match.group(1).upper(), int(match.group(2))))
        return cls(tuple(factors))

    @property
    def rank(self) -> int:
        return sum(rank for _, rank in self.factors)

    def __str__(self):
        return 'x'.join(f"{family}{rank}" for family, rank in self.factors)


def _irreducible_cartan(family: str, n: int) -> List[List[int]]:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    if family == 'D':
        edges = [(k, k + 1) for k in range(n - 2)] + [(n - 3, n - 1)]
    elif family == 'E':
        # Bourbaki labels: 1-3-4-5-...-n with 2 attached to 4
        edges = [(0, 2), (2, 3), (1, 3)] + [(k, k + 1) for k in range(3, n - 1)]
    else:
        edges = [(k, k + 1) for k in range(n - 1)]
    for i, j in edges:
        a[i][j] = a[j][i] = -1
    if family == 'B':
        # alpha_n short
        a[n - 1][n - 2] = -2
    elif family == 'C':
        # alpha_n long
        a[n - 2][n - 1] = -2
    elif family == 'F':
        # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        a[2][1] = -2
    elif family == 'G':
        # alpha_1 short, alpha_2 long
        a[0][1] = -3
    return a


def cartan_matrix(t: CartanType) -> List[List[int]]:
    """Block-diagonal Cartan matrix of a product type"""
    r = t.rank
    a = [[0] * r for _ in range(r)]
    offset = 0
    for family, n in t.factors:
        block = _irreducible_cartan(family, n)
        for i in range(n):
            for j in range(n):
                a[offset + i][offset + j] = block[i][j]
        offset += n
    return a


@functools.lru_cache(maxsize=None)
def _inverse_matrix(matrix: Matrix) -> Matrix:
    """Inverse of a finite-order integer matrix, found as its last power before the identity"""
    m = np.array(matrix, dtype=np.int64)
    ident = np.eye(m.shape[0], dtype=np.int64)
    power = ident
    prev = ident
    for _ in range(256):
        prev = power
        power = power @ m
        if np.array_equal(power, ident):
            return tuple(tuple(int(x) for x in row) for row in prev)
    raise PreconditionError("matrix has no finite order; not a Weyl group element")


@functools.total_ordering
@dataclass(frozen=True)
class WeylElt:
    """A Weyl group element as the integer matrix of its action on X"""
    matrix: Matrix

    def __mul__(self, other: 'WeylElt') -> 'WeylElt':
        product = np.array(self.matrix, dtype=np.int64) @ np.array(other.matrix, dtype=np.int64)
        return WeylElt(tuple(tuple(int(x) for x in row) for row in product))

    def __lt__(self, other: 'WeylElt') -> bool:
        return self.matrix < other.matrix

    @cached_property
    def inverse(self) -> 'WeylElt':
        return WeylElt(_inverse_matrix(self.matrix))

    @cached_property
    def coroot_matrix(self) -> np.ndarray:
        """Matrix of the action on Y in the simple-coroot basis"""
        return np.array(self.inverse.matrix, dtype=np.int64).T

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == (1 if i == j else 0)
                   for i in range(self.rank) for j in range(self.rank))

    def apply_to_coroot(self, coroot: Coroot) -> Coroot:
        image = self.coroot_matrix @ np.array(coroot, dtype=np.int64)
        return tuple(int(x) for x in image)


def identity_element(rank: int) -> WeylElt:
    return WeylElt(tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)))


def is_positive(coroot: Coroot) -> bool:
    return any(c > 0 for c in coroot) and all(c >= 0 for c in coroot)


def _negate(coroot: Coroot) -> Coroot:
    return tuple(-c for c in coroot)


@dataclass(frozen=True, eq=False)
class RootDatum:
    """
    Simply connected root datum of a finite Cartan type

    Hashing is by identity; `build_root_datum` returns one shared instance
    per Cartan type so caches keyed by the datum are shared too.
    """
    cartan_type: CartanType
    cartan: Tuple[Tuple[int, ...], ...]
    positive_coroots: Tuple[Coroot, ...]
    positive_roots: Tuple[Coroot, ...]
    simple_reflections: Tuple[WeylElt, ...]
    weight_basis: str = field(default='fundamental')

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @cached_property
    def coroots(self) -> Tuple[Coroot, ...]:
        return self.positive_coroots + tuple(_negate(c) for c in self.positive_coroots)

    @cached_property
    def coroot_set(self) -> FrozenSet[Coroot]:
        return frozenset(self.coroots)

    @cached_property
    def identity(self) -> WeylElt:
        return identity_element(self.rank)

    @cached_property
    def simple_coroots(self) -> Tuple[Coroot, ...]:
        return tuple(tuple(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def _positive_coroot_array(self) -> np.ndarray:
        return np.array(self.positive_coroots, dtype=np.int64).T

    @cached_property
    def _reflections(self) -> Dict[Coroot, WeylElt]:
        """s_beta for every positive coroot, found by conjugating simple reflections"""
        table: Dict[Coroot, WeylElt] = {}
        queue = deque()
        for i, beta in enumerate(self.simple_coroots):
            table[beta] = self.simple_reflections[i]
            queue.append(beta)
        while queue:
            beta = queue.popleft()
            for s in self.simple_reflections:
                image = s.apply_to_coroot(beta)
                if not is_positive(image):
                    continue
                if image not in table:
                    table[image] = s * table[beta] * s
                    queue.append(image)
        return table

    def reflection(self, coroot: Coroot) -> WeylElt:
        """The reflection s_beta with s_beta(beta) = -beta"""
        key = coroot if is_positive(coroot) else _negate(coroot)
        try:
            return self._reflections[key]
        except KeyError:
            raise PreconditionError(f"{coroot} is not a coroot") from None

    def coxeter_number(self, i: int, j: int) -> int:
        """m_ij for 1-based simple reflection labels"""
        if i == j:
            return 1
        product = self.cartan[i - 1][j - 1] * self.cartan[j - 1][i - 1]
        return {0: 2, 1: 3, 2: 4, 3: 6}[product]


def _close_positive(cartan: Sequence[Sequence[int]], transpose: bool) -> Tuple[Coroot, ...]:
    """Positive roots (transpose=False) or coroots (transpose=True) by reflection closure"""
    r = len(cartan)
    simples = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    found = list(simples)
    seen = set(found)
    queue = deque(found)
    while queue:
        vec = queue.popleft()
        for i in range(r):
            if transpose:
                # <beta, alpha_i> for a coroot beta
                pairing = sum(vec[j] * cartan[j][i] for j in range(r))
            else:
                # <coroot_i, alpha> for a root alpha
                pairing = sum(vec[j] * cartan[i][j] for j in range(r))
            image = list(vec)
            image[i] -= pairing
            image = tuple(image)
            if is_positive(image) and image not in seen:
                seen.add(image)
                found.append(image)
                queue.append(image)
    return tuple(sorted(found, key=lambda v: (sum(v), tuple(-c for c in v))))


@functools.lru_cache(maxsize=None)
def _build(type_text: str) -> RootDatum:
    t = CartanType.parse(type_text)
    if t.rank > Config.MAX_RANK:
        raise GuardrailError(f"rank {t.rank} of {t} exceeds the configured cap {Config.MAX_RANK}")
    a = cartan_matrix(t)
    r = t.rank
    reflections = []
    for i in range(r):
        rows = tuple(
            tuple((1 if j == k else 0) - (a[j][i] if k == i else 0) for k in range(r))
            for j in range(r)
        )
        reflections.append(WeylElt(rows))
    datum = RootDatum(
        cartan_type=t,
        cartan=tuple(tuple(row) for row in a),
        positive_coroots=_close_positive(a, transpose=True),
        positive_roots=_close_positive(a, transpose=False),
        simple_reflections=tuple(reflections),
    )
    log.info(f"Built root datum {t}: rank {r}, {len(datum.positive_coroots)} positive coroots")
    return datum


def build_root_datum(t) -> RootDatum:
    """
    Build the simply connected root datum of a Cartan type

    Args:
        t: CartanType or its string form ("A2", "A1xA1", ...)

    Returns:
        RootDatum: shared instance for that type
    """
    text = str(t) if isinstance(t, CartanType) else str(CartanType.parse(t))
    return _build(text)


def coroot_image(d: RootDatum, w: WeylElt, coroot: Coroot) -> Coroot:
    return w.apply_to_coroot(coroot)


def pairing(d: RootDatum, coroot: Coroot, weight: Sequence) -> object:
    """<y, x> for y in simple-coroot coordinates and x in fundamental-weight coordinates"""
    return sum(c * x for c, x in zip(coroot, weight))


def act_on_weight(w: WeylElt, weight: Sequence) -> tuple:
    """w(x) for x in fundamental-weight coordinates (entries may be Fractions)"""
    return tuple(sum(w.matrix[i][j] * weight[j] for j in range(len(weight))) for i in range(len(weight)))


@functools.lru_cache(maxsize=None)
def _generate(d: RootDatum) -> Tuple[WeylElt, ...]:
    log.info(f"Generating Weyl group of {d.cartan_type}")
    seen = {d.identity}
    queue = deque([d.identity])
    while queue:
        w = queue.popleft()
        for s in d.simple_reflections:
            ws = w * s
            if ws not in seen:
                seen.add(ws)
                if len(seen) > Config.MAX_GROUP_ORDER:
                    raise GuardrailError(
                        f"Weyl group of {d.cartan_type} exceeds the configured cap {Config.MAX_GROUP_ORDER}"
                    )
                queue.append(ws)
    elements = tuple(sorted(seen))
    log.info(f"Weyl group of {d.cartan_type} has {len(elements)} elements")
    return elements


def weyl_generate(d: RootDatum) -> Tuple[WeylElt, ...]:
    """All elements of W, sorted lexicographically by matrix"""
    return _generate(d)


def length(d: RootDatum, w: WeylElt) -> int:
    """Number of positive coroots sent to negative coroots"""
    images = w.coroot_matrix @ d._positive_coroot_array
    return int(np.count_nonzero((images < 0).any(axis=0)))


def is_left_descent(d: RootDatum, w: WeylElt, i: int) -> bool:
    """|s_i w| < |w|, i.e. w^-1(coroot_i) is negative (1-based i)"""
    image = w.inverse.apply_to_coroot(d.simple_coroots[i - 1])
    return not is_positive(image)


def reduced_word(d: RootDatum, w: WeylElt) -> List[int]:
    """
    Lexicographically smallest reduced word of w, 1-based labels

    The smallest left descent always starts the lexicographically smallest
    reduced word, so the word is read off greedily.
    """
    word = []
    current = w
    while not current.is_identity():
        for i in range(1, d.rank + 1):
            if is_left_descent(d, current, i):
                word.append(i)
                current = d.simple_reflections[i - 1] * current
                break
        else:
            raise PreconditionError("element has no left descent but is not the identity")
    return word


def word_to_element(d: RootDatum, word: Sequence[int]) -> WeylElt:
    """Product s_{word[0]} s_{word[1]} ..."""
    w = d.identity
    for i in word:
        if not 1 <= i <= d.rank:
            raise PreconditionError(f"simple reflection label {i} outside 1..{d.rank}")
        w = w * d.simple_reflections[i - 1]
    return w


def involutions(d: RootDatum) -> Tuple[WeylElt, ...]:
    """All w with w^2 = 1, identity included"""
    return tuple(w for w in weyl_generate(d) if (w * w).is_identity())


def longest_element(d: RootDatum) -> WeylElt:
    return max(weyl_generate(d), key=lambda w: length(d, w))


def coxeter_matrix(d: RootDatum) -> Tuple[Tuple[int, ...], ...]:
    """m_ij indexed 0-based, entries in {1, 2, 3, 4, 6}"""
    r = d.rank
    return tuple(tuple(d.coxeter_number(i + 1, j + 1) for j in range(r)) for i in range(r))

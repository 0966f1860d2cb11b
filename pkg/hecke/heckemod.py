"""
The module M_m with basis a_{w,lambda}, (w, lambda) an m-twisted involution

`HeckeModule` realizes the generator actions T_s directly from the four-case
formula. `BlockTransport` rebuilds the same action blockwise: the involution
module action of each W_lambda on its block, carried around the orbit by
minimal coset representatives. The second construction is used as an oracle.
"""
from __future__ import annotations

from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from hecke.coeff import (
    ONE,
    V2_MINUS_VM2,
    V2_MINUS_VM2_MINUS_1,
    V_MINUS_VINV,
    V_PLUS_VINV,
    ZERO,
    LaurentInt,
)
from hecke.exceptions import IndexOutsideModuleError, InvariantViolation, PreconditionError
from hecke.extweyl import Block, Index, TwistedInvolution, enumerate_txm, iota
from hecke.rootdata import Coroot, RootDatum, WeylElt, length, reduced_word, weyl_generate
from hecke.torusquot import (
    TorusPoint,
    act,
    bracket_contains,
    length_lambda,
    little_weyl,
    min_coset,
    pair,
    reduced_word_lambda,
)
from utils.logger import log

Scalar = Union[int, LaurentInt]


def index_key(idx: Index) -> Tuple:
    w, lam = idx
    return (lam, w)


class ModuleVector:
    """Finitely supported combination of basis elements a_{w,lambda} with Laurent coefficients"""

    __slots__ = ('_terms',)

    def __init__(self, terms: Optional[Mapping[Index, LaurentInt]] = None):
        clean = {}
        for idx, coeff in (terms or {}).items():
            if isinstance(coeff, int):
                coeff = LaurentInt.const(coeff)
            if not coeff.is_zero():
                clean[idx] = coeff
        self._terms = clean

    @classmethod
    def basis(cls, w: WeylElt, lam: TorusPoint) -> 'ModuleVector':
        return cls({(w, lam): ONE})

    @classmethod
    def accumulate(cls, pairs: Iterable[Tuple[Index, LaurentInt]]) -> 'ModuleVector':
        out: Dict[Index, LaurentInt] = {}
        for idx, coeff in pairs:
            out[idx] = out.get(idx, ZERO) + coeff
        return cls(out)

    @property
    def terms(self) -> Mapping[Index, LaurentInt]:
        return MappingProxyType(self._terms)

    def items(self) -> List[Tuple[Index, LaurentInt]]:
        """Terms sorted by (lambda, w)"""
        return sorted(self._terms.items(), key=lambda kv: index_key(kv[0]))

    def support(self) -> List[Index]:
        return [idx for idx, _ in self.items()]

    def coefficient(self, idx: Index) -> LaurentInt:
        return self._terms.get(idx, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: 'ModuleVector') -> 'ModuleVector':
        return ModuleVector.accumulate(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> 'ModuleVector':
        return ModuleVector({idx: -c for idx, c in self._terms.items()})

    def __sub__(self, other: 'ModuleVector') -> 'ModuleVector':
        return self + (-other)

    def scale(self, f: Scalar) -> 'ModuleVector':
        return ModuleVector({idx: c * f for idx, c in self._terms.items()})

    def bar_coefficients(self) -> 'ModuleVector':
        return ModuleVector({idx: c.bar() for idx, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        body = " + ".join(f"({c})*a[{w.matrix},{lam}]" for (w, lam), c in self.items())
        return f"ModuleVector({body or '0'})"


def one_lambda(lam: TorusPoint, xi: ModuleVector) -> ModuleVector:
    """The projection 1_lambda: keep the terms whose second index is lambda"""
    return ModuleVector({idx: c for idx, c in xi.terms.items() if idx[1] == lam})


def specialize_v1(xi: ModuleVector) -> Dict[Index, int]:
    """Coefficients evaluated at v = 1, zero entries dropped"""
    out = {}
    for idx, c in xi.items():
        value = c.eval_one()
        if value:
            out[idx] = value
    return out


class HeckeModule:
    """
    M_m truncated to the N-torsion points, with the generator actions tabulated

    Args:
        d: root datum
        m: twisting parameter
        n: denominator N
    """

    def __init__(self, d: RootDatum, m: int, n: int):
        self.datum = d
        self.m = m
        self.n = n
        self.items: List[TwistedInvolution] = enumerate_txm(d, m, n)
        self.lookup: Dict[Index, TwistedInvolution] = {ti.index: ti for ti in self.items}
        self.position: Dict[Index, int] = {ti.index: k for k, ti in enumerate(self.items)}
        # read-only after construction
        group = weyl_generate(d)
        self._lengths: Mapping[WeylElt, int] = MappingProxyType({w: length(d, w) for w in group})
        self._words: Mapping[WeylElt, Tuple[int, ...]] = MappingProxyType({w: tuple(reduced_word(d, w)) for w in group})
        self._ts: Dict[Tuple[int, Index], ModuleVector] = {}
        self._ts_inv: Dict[Tuple[int, Index], ModuleVector] = {}
        self._build_tables()

    # -- index handling ----------------------------------------------------

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def indices(self) -> List[Index]:
        return [ti.index for ti in self.items]

    @property
    def lambdas(self) -> List[TorusPoint]:
        return sorted({ti.lam for ti in self.items})

    def __len__(self):
        return len(self.items)

    def contains(self, idx: Index) -> bool:
        return idx in self.lookup

    def require(self, idx: Index) -> TwistedInvolution:
        try:
            return self.lookup[idx]
        except KeyError:
            w, lam = idx
            raise IndexOutsideModuleError(
                f"a[{reduced_word(self.datum, w)}, {lam}] is not an m-twisted involution for m={self.m}, N={self.n}"
            ) from None

    def basis_vector(self, w: WeylElt, lam: TorusPoint) -> ModuleVector:
        self.require((w, lam))
        return ModuleVector.basis(w, lam)

    def check_vector(self, xi: ModuleVector) -> None:
        for idx in xi.terms:
            self.require(idx)

    def length(self, w: WeylElt) -> int:
        return self._lengths[w]

    def word(self, w: WeylElt) -> List[int]:
        return list(self._words[w])

    def delta(self, s: int, lam: TorusPoint) -> int:
        """1 when s lies in W_lambda, else 0"""
        return 1 if pair(self.datum, self.datum.simple_coroots[s - 1], lam).is_zero() else 0

    # -- generator tables ----------------------------------------------------

    def _ts_basis(self, s: int, ti: TwistedInvolution) -> ModuleVector:
        sr = self.datum.simple_reflections[s - 1]
        w, lam = ti.w, ti.lam
        delta = self.delta(s, lam)
        sw, ws = sr * w, w * sr
        up = self.length(sw) > self.length(w)
        s_lam = act(self.datum, sr, lam)
        terms: List[Tuple[Index, LaurentInt]] = []
        if sw != ws:
            terms.append(((sr * w * sr, s_lam), ONE))
            if not up and delta:
                terms.append(((w, lam), V2_MINUS_VM2))
        elif up:
            terms.append(((w, s_lam), ONE))
            if delta:
                terms.append(((sw, lam), V_PLUS_VINV))
        elif delta:
            terms.append(((sw, lam), V_MINUS_VINV))
            terms.append(((w, lam), V2_MINUS_VM2_MINUS_1))
        else:
            terms.append(((w, s_lam), ONE))
        for idx, _ in terms:
            self.require(idx)
        return ModuleVector.accumulate(terms)

    def _build_tables(self):
        log.info(f"Tabulating generator actions on {len(self.items)} basis elements "
                 f"({self.datum.cartan_type}, m={self.m}, N={self.n})")
        for s in range(1, self.rank + 1):
            for ti in self.items:
                image = self._ts_basis(s, ti)
                self._ts[(s, ti.index)] = image
                if self.delta(s, ti.lam):
                    image = image - ModuleVector.basis(ti.w, ti.lam).scale(V2_MINUS_VM2)
                self._ts_inv[(s, ti.index)] = image

    def _check_generator(self, s: int):
        if not 1 <= s <= self.rank:
            raise PreconditionError(f"simple reflection label {s} outside 1..{self.rank}")

    def _apply(self, table: Dict[Tuple[int, Index], ModuleVector], s: int, xi: ModuleVector) -> ModuleVector:
        self._check_generator(s)
        pairs = []
        for idx, coeff in xi.terms.items():
            self.require(idx)
            for target, c in table[(s, idx)].terms.items():
                pairs.append((target, c * coeff))
        return ModuleVector.accumulate(pairs)

    # -- operators -------------------------------------------------------------

    def ts_act(self, s: int, xi: ModuleVector) -> ModuleVector:
        """T_s applied to xi"""
        return self._apply(self._ts, s, xi)

    def ts_inv_act(self, s: int, xi: ModuleVector) -> ModuleVector:
        """T_s^-1 applied to xi; on the lambda-part T_s^-1 = T_s - Delta (v^2 - v^-2)"""
        return self._apply(self._ts_inv, s, xi)

    def tw_act(self, w: WeylElt, xi: ModuleVector) -> ModuleVector:
        """T_w = T_{s_1} ... T_{s_k} along the canonical reduced word"""
        for s in reversed(self.word(w)):
            xi = self.ts_act(s, xi)
        return xi

    def tw_inv_act(self, w: WeylElt, xi: ModuleVector) -> ModuleVector:
        """T_w^-1 = T_{s_k}^-1 ... T_{s_1}^-1"""
        for s in self.word(w):
            xi = self.ts_inv_act(s, xi)
        return xi

    def word_act(self, word: Sequence[int], xi: ModuleVector) -> ModuleVector:
        """T_{s_1} ... T_{s_k} for an arbitrary word, not necessarily reduced"""
        for s in reversed(word):
            xi = self.ts_act(s, xi)
        return xi

    def one_lambda(self, lam: TorusPoint, xi: ModuleVector) -> ModuleVector:
        return one_lambda(lam, xi)

    def extended_generator(self, s: int, lam: TorusPoint, xi: ModuleVector) -> ModuleVector:
        """T_s 1_lambda"""
        return self.ts_act(s, one_lambda(lam, xi))

    def tw_lambda_act(self, w: WeylElt, lam: TorusPoint, xi: ModuleVector) -> ModuleVector:
        """T_w 1_lambda"""
        return self.tw_act(w, one_lambda(lam, xi))

    # -- tables and specialization --------------------------------------------

    def orbit_indices(self, orbit: Iterable[TorusPoint]) -> List[Index]:
        wanted = set(orbit)
        return [ti.index for ti in self.items if ti.lam in wanted]

    def action_table(self, s: int) -> List[Tuple[Index, List[Tuple[Index, LaurentInt]]]]:
        """For each basis index, the image of T_s as sorted (target, coefficient) pairs"""
        self._check_generator(s)
        return [(ti.index, self._ts[(s, ti.index)].items()) for ti in self.items]

    def generator_matrix_v1(self, s: int) -> np.ndarray:
        """Matrix of T_s at v = 1; column j is the image of the j-th basis element"""
        self._check_generator(s)
        size = len(self.items)
        matrix = np.zeros((size, size), dtype=np.int64)
        for ti in self.items:
            column = self.position[ti.index]
            for target, value in specialize_v1(self._ts[(s, ti.index)]).items():
                matrix[self.position[target], column] = value
        return matrix


# -- block transport oracle ---------------------------------------------------


def decompose_tw1lambda(d: RootDatum, w: WeylElt, lam: TorusPoint) -> Tuple[WeylElt, WeylElt]:
    """
    Write w = u z with z = min(w W_lambda) and u in W_{z(lambda)}

    Returns:
        Tuple[WeylElt, WeylElt]: (u, z)
    """
    z = min_coset(d, w, lam)
    u = w * z.inverse
    if not little_weyl(d, act(d, z, lam)).contains(u):
        raise InvariantViolation("w z^-1 is not in W_{z(lambda)}", witness=(w, lam))
    return u, z


class BlockTransport:
    """
    The action of the extended Hecke algebra rebuilt from the blocks

    On a block (z, lambda) each simple reflection sigma of W_lambda acts by the
    involution module formulas for (W_lambda, iota_z); T_u T_z 1_lambda acts by
    transporting a basis element along z and then applying T_u blockwise.
    """

    def __init__(self, module: HeckeModule):
        self.module = module
        self.datum = module.datum
        grouped: Dict[Index, List[WeylElt]] = {}
        for ti in module.items:
            grouped.setdefault(ti.block_key, []).append(ti.u)
        self.blocks: Dict[Index, Block] = {
            key: Block(z=key[0], lam=key[1], m=module.m, members=tuple(sorted(members)))
            for key, members in grouped.items()
        }

    def _sigma(self, lam: TorusPoint, beta: Coroot) -> WeylElt:
        data = little_weyl(self.datum, lam)
        if beta not in data.simples:
            raise PreconditionError(f"coroot {beta} is not simple for W_lambda, lambda={lam}")
        return self.datum.reflection(beta)

    def lv_circle_act(self, block: Block, beta: Coroot, xi: ModuleVector) -> ModuleVector:
        """
        (T_sigma 1_lambda) acting on a vector supported on one block

        Args:
            block: the block (z, lambda) with its members
            beta: simple coroot of W_lambda, sigma = s_beta
            xi: vector supported on {a_{z u, lambda}}

        Returns:
            ModuleVector: image, again supported on the block
        """
        d = self.datum
        z, lam = block.z, block.lam
        sigma = self._sigma(lam, beta)
        twisted = iota(d, z, lam, sigma)
        members = set(block.members)
        pairs: List[Tuple[Index, LaurentInt]] = []
        for (w, mu), coeff in xi.terms.items():
            u = z.inverse * w
            if mu != lam or u not in members:
                raise PreconditionError(f"vector leaves the block ({reduced_word(d, z)}, {lam})")
            u_sigma = u * sigma
            up = length_lambda(d, u_sigma, lam) > length_lambda(d, u, lam)
            if u_sigma != twisted * u:
                pairs.append(((z * twisted * u_sigma, lam), coeff))
                if not up:
                    pairs.append(((w, lam), V2_MINUS_VM2 * coeff))
            elif up:
                pairs.append(((w, lam), coeff))
                pairs.append(((z * u_sigma, lam), V_PLUS_VINV * coeff))
            else:
                pairs.append(((z * u_sigma, lam), V_MINUS_VINV * coeff))
                pairs.append(((w, lam), V2_MINUS_VM2_MINUS_1 * coeff))
        return ModuleVector.accumulate(pairs)

    def lv_circle_inv_act(self, block: Block, beta: Coroot, xi: ModuleVector) -> ModuleVector:
        """(T_sigma^-1 1_lambda) on a block, T_sigma^-1 = T_sigma - (v^2 - v^-2)"""
        return self.lv_circle_act(block, beta, xi) - xi.scale(V2_MINUS_VM2)

    def block_of(self, idx: Index) -> Block:
        return self.blocks[self.module.require(idx).block_key]

    def bullet_act(self, u: WeylElt, z: WeylElt, lam: TorusPoint, xi: ModuleVector) -> ModuleVector:
        """
        (T_u T_z 1_lambda) acting on xi

        Terms with second index other than lambda are killed. A term
        a_{z~ u~, lambda} is sent to a_{z w~ z^-1, z(lambda)} and then acted on
        by T_u through the block action of W_{z(lambda)}.
        """
        d = self.datum
        target = act(d, z, lam)
        if not bracket_contains(d, target, z, lam):
            raise PreconditionError(f"z is not in [{target}, {lam}]")
        if not little_weyl(d, target).contains(u):
            raise PreconditionError(f"u is not in W_lambda for lambda={target}")
        word = reduced_word_lambda(d, u, target)
        result = ModuleVector()
        for (w, mu), coeff in xi.terms.items():
            if mu != lam:
                continue
            self.module.require((w, mu))
            moved = (z * w * z.inverse, target)
            block = self.block_of(moved)
            image = ModuleVector({moved: coeff})
            for beta in reversed(word):
                image = self.lv_circle_act(block, beta, image)
            result = result + image
        return result

    def tw1lambda_act(self, w: WeylElt, lam: TorusPoint, xi: ModuleVector) -> ModuleVector:
        """T_w 1_lambda computed through the block transport"""
        u, z = decompose_tw1lambda(self.datum, w, lam)
        return self.bullet_act(u, z, lam, xi)

"""
The extended Weyl group W x| X/bar, its *-automorphism and the m-twisted involutions

A twisted involution (w, lambda) has w^2 = 1 and w(lambda) = -m lambda. Each one
splits as w = z u with z = min(w W_lambda) and u an iota_z-twisted involution of
W_lambda; the pairs (z, lambda) with u = 1 label the blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from config.config import Config
from hecke.exceptions import GuardrailError, InvariantViolation, PreconditionError, SignParityError
from hecke.rootdata import RootDatum, WeylElt, involutions, length, weyl_generate
from hecke.torusquot import (
    GroupoidArrow,
    TorusPoint,
    act,
    bracket_contains,
    enumerate_xbar,
    in_xbar_m,
    length_lambda,
    little_weyl,
    min_coset,
)
from utils.logger import log

Index = Tuple[WeylElt, TorusPoint]


@dataclass(frozen=True)
class ExtElt:
    """An element (w, lambda) of the extended Weyl group"""
    w: WeylElt
    lam: TorusPoint


def ext_identity(d: RootDatum) -> ExtElt:
    return ExtElt(d.identity, TorusPoint.zero(d.rank))


def ext_mul(d: RootDatum, a: ExtElt, b: ExtElt) -> ExtElt:
    """(w, l)(w', l') = (w w', w'^-1(l) + l')"""
    return ExtElt(a.w * b.w, act(d, b.w.inverse, a.lam) + b.lam)


def star(a: ExtElt, m: int) -> ExtElt:
    """(w, lambda) -> (w, m lambda); an involution on W x| X_m"""
    if not in_xbar_m(a.lam, m):
        raise PreconditionError(f"lambda={a.lam} is not fixed by m^2 for m={m}")
    return ExtElt(a.w, a.lam.scale(m))


def twist_target(lam: TorusPoint, m: int) -> TorusPoint:
    """-m lambda"""
    return -lam.scale(m)


def is_twisted_involution(d: RootDatum, w: WeylElt, lam: TorusPoint, m: int) -> bool:
    return (w * w).is_identity() and act(d, w, lam) == twist_target(lam, m)


@dataclass(frozen=True, order=True)
class TwistedInvolution:
    """
    A basis index (w, lambda) of the module together with its decomposition

    Ordering and equality use (lambda, w, m) only.
    """
    lam: TorusPoint
    w: WeylElt
    m: int
    z: WeylElt = field(compare=False)
    u: WeylElt = field(compare=False)
    sign: int = field(compare=False)

    @property
    def index(self) -> Index:
        return (self.w, self.lam)

    @property
    def block_key(self) -> Index:
        return (self.z, self.lam)


def permutes_simple_coroots(d: RootDatum, z: WeylElt, lam: TorusPoint) -> bool:
    """True when z maps the simple coroots of W_lambda onto themselves"""
    simples = little_weyl(d, lam).simples
    return sorted(z.apply_to_coroot(beta) for beta in simples) == sorted(simples)


def iota(d: RootDatum, z: WeylElt, lam: TorusPoint, u: WeylElt) -> WeylElt:
    """
    The automorphism u -> z u z^-1 of W_lambda

    Args:
        d: root datum
        z: an element of [-m lambda, lambda]
        lam: the base point
        u: an element of W_lambda

    Returns:
        WeylElt: z u z^-1, again in W_lambda
    """
    data = little_weyl(d, lam)
    if not data.contains(u):
        raise PreconditionError(f"iota_z applied to an element outside W_lambda, lambda={lam}")
    if not bracket_contains(d, act(d, z, lam), z, lam):
        raise PreconditionError("z is not a minimal coset representative for lambda")
    if not permutes_simple_coroots(d, z, lam):
        raise InvariantViolation(f"z does not permute the simple coroots of lambda={lam}", witness=z)
    image = z * u * z.inverse
    if not data.contains(image):
        raise InvariantViolation(f"iota_z left W_lambda for lambda={lam}", witness=(z, u))
    return image


def decompose(d: RootDatum, w: WeylElt, lam: TorusPoint, m: int) -> Tuple[WeylElt, WeylElt]:
    """
    Split a twisted involution as w = z u

    Returns:
        Tuple[WeylElt, WeylElt]: (z, u) with z = min(w W_lambda), u = z^-1 w
    """
    if not is_twisted_involution(d, w, lam, m):
        raise PreconditionError(f"(w, {lam}) is not an m-twisted involution for m={m}")
    z = min_coset(d, w, lam)
    u = z.inverse * w
    target = twist_target(lam, m)
    if not (z * z).is_identity():
        raise InvariantViolation("minimal coset representative is not an involution", witness=(w, lam))
    if not bracket_contains(d, target, z, lam):
        raise InvariantViolation(f"z is not in [{target}, {lam}]", witness=(w, lam))
    if not little_weyl(d, lam).contains(u):
        raise InvariantViolation("u is not in W_lambda", witness=(w, lam))
    if not (iota(d, z, lam, u) * u).is_identity():
        raise InvariantViolation("u is not an iota_z-twisted involution", witness=(w, lam))
    return z, u


def sign_of(d: RootDatum, u: WeylElt, lam: TorusPoint) -> int:
    """(-1)^|u|, checked against the parity of |u|_lambda"""
    parity = length(d, u) % 2
    if parity != length_lambda(d, u, lam) % 2:
        raise SignParityError(f"|u| and |u|_lambda differ in parity for lambda={lam}", witness=(u, lam))
    return -1 if parity else 1


def make_twisted_involution(d: RootDatum, w: WeylElt, lam: TorusPoint, m: int) -> TwistedInvolution:
    z, u = decompose(d, w, lam, m)
    return TwistedInvolution(lam=lam, w=w, m=m, z=z, u=u, sign=sign_of(d, u, lam))


def e_sign(ti: TwistedInvolution) -> int:
    """E(w, lambda) = (-1)^|u|"""
    return ti.sign


def check_index_set(d: RootDatum, n: int) -> None:
    size = len(weyl_generate(d)) * n ** d.rank
    if size > Config.MAX_INDEX_SET:
        raise GuardrailError(
            f"|W| * N^rank = {size} for {d.cartan_type}, N={n} exceeds the configured cap {Config.MAX_INDEX_SET}"
        )


def enumerate_txm(d: RootDatum, m: int, n: int) -> List[TwistedInvolution]:
    """
    All m-twisted involutions with N lambda = 0

    Args:
        d: root datum
        m: twisting parameter, m >= 1
        n: denominator N

    Returns:
        List[TwistedInvolution]: sorted by (lambda, w), each with (z, u, sign) cached
    """
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    check_index_set(d, n)
    result = []
    invols = involutions(d)
    for lam in enumerate_xbar(d, n):
        if not in_xbar_m(lam, m):
            continue
        target = twist_target(lam, m)
        for w in invols:
            if act(d, w, lam) == target:
                result.append(make_twisted_involution(d, w, lam, m))
    result.sort()
    log.info(f"Enumerated {len(result)} twisted involutions for {d.cartan_type}, m={m}, N={n}")
    return result


def star_involutions(d: RootDatum, m: int, n: int) -> List[Index]:
    """Twisted involutions found as the g with g g* = 1 in the extended group"""
    one = ext_identity(d)
    found = []
    for lam in enumerate_xbar(d, n):
        if not in_xbar_m(lam, m):
            continue
        for w in weyl_generate(d):
            g = ExtElt(w, lam)
            if ext_mul(d, g, star(g, m)) == one:
                found.append((w, lam))
    return sorted(found, key=lambda idx: (idx[1], idx[0]))


def xtilde_zero(d: RootDatum, m: int, n: int) -> List[Index]:
    """Pairs (z, lambda) with z^2 = 1 and z in [-m lambda, lambda]"""
    out = []
    for lam in enumerate_xbar(d, n):
        if not in_xbar_m(lam, m):
            continue
        target = twist_target(lam, m)
        for z in involutions(d):
            if bracket_contains(d, target, z, lam):
                out.append((z, lam))
    return sorted(out, key=lambda idx: (idx[1], idx[0]))


@dataclass(frozen=True)
class Block:
    """The iota_z-twisted involutions of W_lambda for one (z, lambda)"""
    z: WeylElt
    lam: TorusPoint
    m: int
    members: Tuple[WeylElt, ...]

    def indices(self) -> List[Index]:
        return [(self.z * u, self.lam) for u in self.members]


def block_involutions(d: RootDatum, z: WeylElt, lam: TorusPoint, m: int) -> Block:
    """All u in W_lambda with iota_z(u) u = 1"""
    if not (z * z).is_identity() or not bracket_contains(d, twist_target(lam, m), z, lam):
        raise PreconditionError(f"(z, {lam}) does not label a block for m={m}")
    data = little_weyl(d, lam)
    members = tuple(sorted(u for u in data.elements if (z * u * z.inverse * u).is_identity()))
    return Block(z=z, lam=lam, m=m, members=members)


def blocks(d: RootDatum, m: int, n: int) -> List[Block]:
    return [block_involutions(d, z, lam, m) for z, lam in xtilde_zero(d, m, n)]


def check_bijection(d: RootDatum, m: int, n: int) -> Tuple[int, int]:
    """
    Reconcile the block decomposition with the enumerated twisted involutions

    Returns:
        Tuple[int, int]: (sum of block sizes, number of twisted involutions)

    Raises:
        InvariantViolation: when (z, lambda, u) -> (z u, lambda) is not a bijection
    """
    images: Dict[Index, Index] = {}
    total = 0
    for block in blocks(d, m, n):
        for u in block.members:
            total += 1
            key = (block.z * u, block.lam)
            if key in images:
                raise InvariantViolation("two block members map to the same twisted involution", witness=key)
            images[key] = (block.z, block.lam)
    expected = {ti.index for ti in enumerate_txm(d, m, n)}
    if set(images) != expected:
        raise InvariantViolation("block members do not cover the twisted involutions exactly")
    return total, len(expected)


def closure_images(d: RootDatum, w: WeylElt, lam: TorusPoint, s: int) -> List[Index]:
    """
    Neighbours of (w, lambda) under a simple reflection that stay twisted involutions

    (s w s, s lambda) always; (w, s lambda) when s w = w s; (s w, lambda) when
    additionally s lambda = lambda.
    """
    sr = d.simple_reflections[s - 1]
    s_lam = act(d, sr, lam)
    out = [(sr * w * sr, s_lam)]
    if sr * w == w * sr:
        out.append((w, s_lam))
        if s_lam == lam:
            out.append((sr * w, lam))
    return out


def groupoid_star(arrow: GroupoidArrow, m: int) -> GroupoidArrow:
    """(l', z, l) -> (-m l, z^-1, -m l')"""
    if not (in_xbar_m(arrow.source, m) and in_xbar_m(arrow.target, m)):
        raise PreconditionError(f"arrow endpoints must lie in X_m for m={m}")
    return GroupoidArrow(twist_target(arrow.source, m), arrow.z.inverse, twist_target(arrow.target, m))


def embed_block(z: WeylElt, lam: TorusPoint, m: int) -> GroupoidArrow:
    """(z, lambda) -> (-m lambda, z, lambda)"""
    return GroupoidArrow(twist_target(lam, m), z, lam)

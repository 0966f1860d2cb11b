"""
Brute-force checks of two point-counting identities over F_{q^2}

F_{q^2} is F_q[x]/(x^2 - r) with r the least quadratic non-residue mod q;
elements are pairs (a, b) meaning a + b x. Frobenius is (a, b) -> (a, -b).
Counts run over every d in F_{q^2} at once on numpy arrays.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
from sympy import isprime
from sympy.ntheory import is_quad_residue

from config.config import Config
from hecke.exceptions import GuardrailError, PreconditionError
from utils.logger import log

Elt = Tuple[int, int]


@dataclass(frozen=True)
class GF:
    """The field F_{q^2} presented as F_q[x]/(x^2 - r)"""
    q: int
    r: int

    @property
    def order(self) -> int:
        return self.q * self.q

    @property
    def zero(self) -> Elt:
        return (0, 0)

    @property
    def one(self) -> Elt:
        return (1, 0)

    def elt(self, a: int, b: int = 0) -> Elt:
        return (a % self.q, b % self.q)

    def elements(self) -> List[Elt]:
        return [(a, b) for a, b in itertools.product(range(self.q), repeat=2)]

    def add(self, x: Elt, y: Elt) -> Elt:
        return self.elt(x[0] + y[0], x[1] + y[1])

    def neg(self, x: Elt) -> Elt:
        return self.elt(-x[0], -x[1])

    def sub(self, x: Elt, y: Elt) -> Elt:
        return self.add(x, self.neg(y))

    def mul(self, x: Elt, y: Elt) -> Elt:
        return self.elt(x[0] * y[0] + self.r * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def power(self, x: Elt, n: int) -> Elt:
        result, base = self.one, x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, x: Elt) -> Elt:
        if x == self.zero:
            raise PreconditionError("zero has no inverse")
        return self.power(x, self.order - 2)

    def frob(self, x: Elt) -> Elt:
        """x -> x^q"""
        return self.elt(x[0], -x[1])

    def in_prime_field(self, x: Elt) -> bool:
        return x[1] == 0

    def is_trace_zero(self, x: Elt) -> bool:
        """x^q + x = 0"""
        return self.add(self.frob(x), x) == self.zero

    def norm(self, x: Elt) -> Elt:
        """x^(q+1)"""
        return self.mul(self.frob(x), x)

    @cached_property
    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coordinates of all field elements as two flat arrays"""
        a, b = np.meshgrid(np.arange(self.q, dtype=np.int64), np.arange(self.q, dtype=np.int64), indexing='ij')
        return a.ravel(), b.ravel()

    def fmt(self, x: Elt) -> str:
        return f"{x[0]}+{x[1]}x"


def least_non_residue(q: int) -> int:
    for r in range(2, q):
        if not is_quad_residue(r, q):
            return r
    raise PreconditionError(f"no quadratic non-residue mod {q}")


def gf_build(q: int) -> GF:
    """
    Build F_{q^2} for an odd prime q

    Args:
        q: odd prime, at most the configured characteristic cap

    Returns:
        GF: the field with modulus x^2 - r
    """
    if q > Config.MAX_FIELD_CHAR:
        raise GuardrailError(f"q={q} exceeds the configured cap {Config.MAX_FIELD_CHAR}")
    if q == 2 or not isprime(q):
        raise PreconditionError(f"q must be an odd prime, got {q}")
    field_ = GF(q, least_non_residue(q))
    log.debug(f"Built F_{q}^2 with modulus x^2 - {field_.r}")
    return field_


@dataclass(frozen=True)
class IdentityCheck:
    """One brute-force count against its expected value"""
    count: int
    expected: int
    delta_expected: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.count == self.expected

    @property
    def delta_form_agrees(self) -> bool:
        return self.delta_expected is None or self.delta_expected == self.count


def count_norm_solutions(f: GF, a: Elt, b: Elt) -> IdentityCheck:
    """
    Count d in F_{q^2} with d^(q+1) a - a^-1 = b

    The count is 1 when b = -a^-1 and 1 + q otherwise. The Kronecker-delta
    form 1 if a = b else 1 + q coincides with it exactly when a^2 = -1.

    Args:
        f: the field
        a: nonzero with a^q + a = 0
        b: with b^q + b = 0

    Returns:
        IdentityCheck: count, corrected expectation and delta-form expectation
    """
    if a == f.zero or not f.is_trace_zero(a) or not f.is_trace_zero(b):
        raise PreconditionError("the norm equation needs a != 0 and a^q + a = b^q + b = 0")
    q = f.q
    da, db = f.grid
    norm = (da * da - f.r * db * db) % q
    a_inv = f.inv(a)
    target = f.add(b, a_inv)
    hits = ((norm * a[0]) % q == target[0]) & ((norm * a[1]) % q == target[1])
    expected = 1 if b == f.neg(a_inv) else 1 + q
    delta = 1 if a == b else 1 + q
    return IdentityCheck(int(np.count_nonzero(hits)), expected, delta)


def semilinear_solutions(f: GF, a1: Elt, b: Elt) -> List[Elt]:
    """All d with -a' d^q + a'^-1 d = b"""
    q = f.q
    da, db = f.grid
    c = f.neg(a1)
    ai = f.inv(a1)
    # -a' d^q with d^q = (da, -db)
    x0 = c[0] * da - f.r * c[1] * db
    x1 = c[1] * da - c[0] * db
    y0 = ai[0] * da + f.r * ai[1] * db
    y1 = ai[0] * db + ai[1] * da
    hits = ((x0 + y0) % q == b[0]) & ((x1 + y1) % q == b[1])
    return [(int(u), int(w)) for u, w in zip(da[hits], db[hits])]


def count_semilinear_solutions(f: GF, a1: Elt, b: Elt) -> IdentityCheck:
    """
    Count d in F_{q^2} with -a' d^q + a'^-1 d = b; expected q

    Args:
        f: the field
        a1: a' with a'^(q+1) = 1
        b: with b^q + b = 0
    """
    if f.norm(a1) != f.one or not f.is_trace_zero(b):
        raise PreconditionError("the semilinear equation needs a'^(q+1) = 1 and b^q + b = 0")
    return IdentityCheck(len(semilinear_solutions(f, a1, b)), f.q)


# Short operation names
count_identity_e = count_norm_solutions
count_identity_f = count_semilinear_solutions


def is_coset_of(f: GF, solutions: List[Elt], a1: Elt) -> bool:
    """True when the solution set is d0 + a' F_q for one of its elements d0"""
    if not solutions:
        return False
    d0 = solutions[0]
    expected = {f.add(d0, f.mul(a1, (t, 0))) for t in range(f.q)}
    return set(solutions) == expected


def check_frobenius(f: GF) -> Optional[str]:
    """None when Frobenius is a field automorphism of order 2 fixing exactly F_q"""
    elements = f.elements()
    for x in elements:
        if f.power(x, f.order) != x:
            return f"x^(q^2) != x at {f.fmt(x)}"
        if f.power(x, f.q) != f.frob(x):
            return f"x^q disagrees with the conjugation at {f.fmt(x)}"
        if (f.frob(x) == x) != f.in_prime_field(x):
            return f"Frobenius fixed points differ from F_q at {f.fmt(x)}"
    for x, y in itertools.product(elements[: 2 * f.q], elements):
        if f.frob(f.add(x, y)) != f.add(f.frob(x), f.frob(y)):
            return "Frobenius is not additive"
        if f.frob(f.mul(x, y)) != f.mul(f.frob(x), f.frob(y)):
            return "Frobenius is not multiplicative"
    return None


@dataclass
class FFReport:
    """Outcome of the exhaustive finite-field checks for one q"""
    q: int
    r: int
    norm_checked: int = 0
    norm_failures: List[Tuple[Elt, Elt, int, int]] = field(default_factory=list)
    norm_delta_disagreements: int = 0
    semilinear_checked: int = 0
    semilinear_failures: List[Tuple[Elt, Elt, int, int]] = field(default_factory=list)
    semilinear_non_cosets: int = 0
    frobenius: Optional[str] = None

    @property
    def passed(self) -> bool:
        return not (self.norm_failures or self.semilinear_failures or self.semilinear_non_cosets or self.frobenius)


def run_ffcheck(q: int) -> FFReport:
    """
    Check both identities for every admissible pair over F_{q^2}

    Returns:
        FFReport: counts of checked pairs and every failing pair
    """
    f = gf_build(q)
    report = FFReport(q=q, r=f.r, frobenius=check_frobenius(f))
    trace_zero = [x for x in f.elements() if f.is_trace_zero(x)]
    norm_one = [x for x in f.elements() if f.norm(x) == f.one]
    for a in trace_zero:
        if a == f.zero:
            continue
        for b in trace_zero:
            check = count_norm_solutions(f, a, b)
            report.norm_checked += 1
            if not check.holds:
                report.norm_failures.append((a, b, check.count, check.expected))
            if not check.delta_form_agrees:
                report.norm_delta_disagreements += 1
    for a1 in norm_one:
        for b in trace_zero:
            solutions = semilinear_solutions(f, a1, b)
            report.semilinear_checked += 1
            if len(solutions) != q:
                report.semilinear_failures.append((a1, b, len(solutions), q))
            elif not is_coset_of(f, solutions, a1):
                report.semilinear_non_cosets += 1
    if report.passed:
        log.info(f"F_{q}^2: {report.norm_checked} norm pairs and {report.semilinear_checked} semilinear pairs, all hold")
    else:
        log.error(f"F_{q}^2: {len(report.norm_failures)} norm and {len(report.semilinear_failures)} semilinear failures")
    return report

"""
The bar operator on M_m and its canonical basis

B(f a_{w,lambda}) = bar(f) E(w,lambda) T_w^-1 a_{w,-m lambda}. The canonical
basis element a^_{w,lambda} is the unique B-fixed vector congruent to
a_{w,lambda} modulo the v^-1 Z[v^-1]-span of the standard basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from hecke.coeff import ONE, ZERO, LaurentInt
from hecke.exceptions import InvariantViolation, TriangularityError
from hecke.extweyl import Index, twist_target
from hecke.heckemod import BlockTransport, HeckeModule, ModuleVector
from hecke.rootdata import weyl_generate
from hecke.torusquot import TorusPoint, length_lambda, reduced_word_lambda
from utils.logger import log


def bar_basis(module: HeckeModule, idx: Index) -> ModuleVector:
    """B(a_{w,lambda})"""
    ti = module.require(idx)
    w, lam = idx
    start = module.basis_vector(w, twist_target(lam, module.m))
    return module.tw_inv_act(w, start).scale(ti.sign)


def bar_act(module: HeckeModule, xi: ModuleVector) -> ModuleVector:
    """The semilinear bar operator B applied to xi"""
    result = ModuleVector()
    for idx, coeff in xi.terms.items():
        result = result + bar_basis(module, idx).scale(coeff.bar())
    return result


@dataclass
class BarMatrix:
    """Columns B(a_x) for the basis elements x of one orbit"""
    indices: Tuple[Index, ...]
    columns: Dict[Index, ModuleVector]

    def entry(self, row: Index, column: Index) -> LaurentInt:
        return self.columns[column].coefficient(row)


def bar_matrix(module: HeckeModule, indices: Sequence[Index]) -> BarMatrix:
    return BarMatrix(tuple(indices), {idx: bar_basis(module, idx) for idx in indices})


@dataclass
class BarReport:
    """Outcome of the exhaustive bar-operator checks"""
    passed: bool = True
    checked: int = 0
    failure: Optional[str] = None
    witness: Optional[Tuple] = None

    def fail(self, message: str, witness: Tuple):
        if self.passed:
            self.passed = False
            self.failure = message
            self.witness = witness


def verify_bar(module: HeckeModule) -> BarReport:
    """
    Check B T_s = T_s^-1 B, B T_s^-1 = T_s B, B^2 = 1, the block condition and
    B(a_{z,lambda}) = a_{z,lambda} on every basis element

    Returns:
        BarReport: first violation, if any, with its (check, generator, index) witness
    """
    report = BarReport()
    log.info(f"Verifying the bar operator on {len(module)} basis elements")
    for ti in module.items:
        idx = ti.index
        a = ModuleVector.basis(*idx)
        b = bar_basis(module, idx)
        report.checked += 1
        if bar_act(module, b) != a:
            report.fail("B^2 != 1", ("square", None, idx))
        allowed = {ti.block_key, (ti.z, twist_target(ti.lam, module.m))}
        if any(module.require(target).block_key not in allowed for target in b.terms):
            report.fail("B leaves the block", ("block", None, idx))
        if ti.u.is_identity() and b != a:
            report.fail("B does not fix a_{z,lambda}", ("fixed", None, idx))
        for s in range(1, module.rank + 1):
            report.checked += 2
            if bar_act(module, module.ts_act(s, a)) != module.ts_inv_act(s, b):
                report.fail("B T_s != T_s^-1 B", ("intertwine", s, idx))
            if bar_act(module, module.ts_inv_act(s, a)) != module.ts_act(s, b):
                report.fail("B T_s^-1 != T_s B", ("intertwine_inverse", s, idx))
        if not report.passed:
            log.error(f"Bar check failed: {report.failure} at {report.witness}")
            break
    return report


def verify_bar_words(module: HeckeModule) -> BarReport:
    """B T_w^-1 = T_{w^-1} B for every w in W"""
    report = BarReport()
    for ti in module.items:
        a = ModuleVector.basis(*ti.index)
        b = bar_basis(module, ti.index)
        for w in weyl_generate(module.datum):
            report.checked += 1
            if bar_act(module, module.tw_inv_act(w, a)) != module.tw_act(w.inverse, b):
                report.fail("B T_w^-1 != T_{w^-1} B", ("word", module.word(w), ti.index))
                return report
    return report


@dataclass
class CanonicalBasisTable:
    """The canonical basis of one orbit, in processing order"""
    order: Tuple[Index, ...]
    vectors: Dict[Index, ModuleVector] = field(default_factory=dict)

    def transition_entry(self, row: Index, column: Index) -> LaurentInt:
        return self.vectors[column].coefficient(row)

    def __eq__(self, other):
        if not isinstance(other, CanonicalBasisTable):
            return NotImplemented
        return self.vectors == other.vectors


def _order_key(module: HeckeModule) -> Callable[[Index], Tuple[int, int]]:
    def key(idx: Index) -> Tuple[int, int]:
        ti = module.require(idx)
        return (length_lambda(module.datum, ti.u, ti.lam), module.position[idx])
    return key


def check_triangular(bar: BarMatrix, key: Callable[[Index], Tuple]) -> None:
    """
    Raise TriangularityError unless B(a_x) = a_x + (terms strictly below x)
    """
    for x in bar.indices:
        column = bar.columns[x]
        if column.coefficient(x) != ONE:
            raise TriangularityError(f"diagonal entry of B at {x} is {column.coefficient(x)}", witness=x)
        for y in column.terms:
            if y != x and not key(y) < key(x):
                raise TriangularityError("bar matrix has an entry above the diagonal", witness=(y, x))


def antisymmetric_solution(c: LaurentInt, where) -> LaurentInt:
    """The q in v^-1 Z[v^-1] with q - bar(q) = c; c must satisfy bar(c) = -c"""
    pos, const, neg = c.split()
    if not const.is_zero() or neg != -pos.bar():
        raise InvariantViolation(f"correction coefficient {c} is not bar-antisymmetric", witness=where)
    return neg


def _solve(module: HeckeModule, bar: BarMatrix, order: Sequence[Index], key) -> CanonicalBasisTable:
    table = CanonicalBasisTable(order=tuple(order))
    for x in order:
        residual = bar.columns[x] - ModuleVector.basis(*x)
        hat = ModuleVector.basis(*x)
        while not residual.is_zero():
            y = max(residual.terms, key=key)
            if y not in table.vectors:
                raise TriangularityError("residual reaches an unprocessed basis element", witness=(y, x))
            c = residual.coefficient(y)
            residual = residual - table.vectors[y].scale(c)
            q = antisymmetric_solution(c, (y, x))
            hat = hat + table.vectors[y].scale(q)
        table.vectors[x] = hat
    return table


def _components(module: HeckeModule, indices: Sequence[Index]) -> List[List[Index]]:
    """Indices grouped by block, blocks in enumeration order"""
    grouped: Dict[Index, List[Index]] = {}
    for idx in indices:
        grouped.setdefault(module.require(idx).block_key, []).append(idx)
    return list(grouped.values())


def canonical_basis(module: HeckeModule, orbit: Sequence[TorusPoint]) -> CanonicalBasisTable:
    """
    Canonical basis of the span of {a_{w,lambda} : lambda in orbit}

    Args:
        module: the module M_m
        orbit: a W-stable set of points of the N-torsion lattice

    Returns:
        CanonicalBasisTable: one B-fixed vector per basis element

    Raises:
        TriangularityError: when B is not unitriangular for the chosen order
        InvariantViolation: when the recomputation in another order disagrees
    """
    indices = module.orbit_indices(orbit)
    log.info(f"Computing canonical basis of {len(indices)} basis elements")
    bar = bar_matrix(module, indices)
    key = _order_key(module)
    check_triangular(bar, key)
    table = _solve(module, bar, sorted(indices, key=key), key)

    def permuted_key(idx: Index) -> Tuple[int, int]:
        length_key, position = key(idx)
        return (length_key, -position)

    check_triangular(bar, permuted_key)
    permuted_order = []
    for component in reversed(_components(module, indices)):
        permuted_order.extend(sorted(component, key=permuted_key))
    again = _solve(module, bar, permuted_order, permuted_key)
    if again != table:
        raise InvariantViolation("canonical basis depends on the processing order")
    return table


def verify_canonical(module: HeckeModule, table: CanonicalBasisTable) -> Optional[str]:
    """None when every vector is B-fixed and congruent to its basis element, else a message"""
    for x, hat in table.vectors.items():
        if bar_act(module, hat) != hat:
            return f"canonical vector at {x} is not bar-fixed"
        if hat.coefficient(x) != ONE:
            return f"canonical vector at {x} has diagonal {hat.coefficient(x)}"
        for y, c in hat.terms.items():
            if y != x and not c.in_negative_span():
                return f"canonical vector at {x} has coefficient {c} at {y} outside v^-1 Z[v^-1]"
    return None


def lv_sector_bar(module: HeckeModule) -> BarMatrix:
    """
    The bar operator on the lambda = 0 sector built from the block action

    There W_0 = W and iota = id, so B(a_u) = (-1)^|u| T_u^-1 a_u with T_u^-1
    applied through the involution module formulas.
    """
    transport = BlockTransport(module)
    zero = TorusPoint.zero(module.rank)
    indices = module.orbit_indices([zero])
    columns = {}
    for idx in indices:
        ti = module.require(idx)
        block = transport.block_of(idx)
        vector = ModuleVector.basis(*idx)
        for beta in reduced_word_lambda(module.datum, ti.u, zero):
            vector = transport.lv_circle_inv_act(block, beta, vector)
        columns[idx] = vector.scale(ti.sign)
    return BarMatrix(tuple(indices), columns)


def lv_sector_canonical_basis(module: HeckeModule) -> CanonicalBasisTable:
    """
    Canonical basis of the lambda = 0 sector solved entrywise

    With R the matrix of the sector bar operator, the coefficients P[z][x] of
    a^_x satisfy P[z][x] - bar(P[z][x]) = sum over z < y <= x of R[z][y] bar(P[y][x]).
    """
    bar = lv_sector_bar(module)
    key = _order_key(module)
    check_triangular(bar, key)
    order = sorted(bar.indices, key=key)
    table = CanonicalBasisTable(order=tuple(order))
    for col, x in enumerate(order):
        p: Dict[Index, LaurentInt] = {x: ONE}
        for row in range(col - 1, -1, -1):
            z = order[row]
            rhs = ZERO
            for y in order[row + 1:col + 1]:
                if y in p:
                    rhs = rhs + bar.entry(z, y) * p[y].bar()
            value = antisymmetric_solution(rhs, (z, x))
            if not value.is_zero():
                p[z] = value
        table.vectors[x] = ModuleVector(p)
    return table

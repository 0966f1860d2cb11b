"""
Named verification suites run by `hecke verify`

Each suite checks one family of identities exhaustively on every basis element
of a HeckeModule and returns a SuiteReport carrying the first failure.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from hecke.barcanon import (
    canonical_basis,
    lv_sector_canonical_basis,
    verify_bar,
    verify_bar_words,
    verify_canonical,
)
from hecke.coeff import ONE, V2_MINUS_VM2
from hecke.exceptions import HeckeError
from hecke.extweyl import check_bijection, closure_images, star_involutions
from hecke.heckemod import BlockTransport, HeckeModule, ModuleVector, one_lambda
from hecke.rootdata import weyl_generate
from hecke.torusquot import TorusPoint, act, bracket_contains, orbits
from utils.logger import log


@dataclass
class SuiteReport:
    """Result of one verification suite"""
    name: str
    passed: bool = True
    checked: int = 0
    failure: Optional[str] = None
    elapsed: float = 0.0

    def fail(self, message: str) -> 'SuiteReport':
        self.passed = False
        self.failure = message
        return self


def _basis(module: HeckeModule) -> List[ModuleVector]:
    return [ModuleVector.basis(*ti.index) for ti in module.items]


def _alternating(s: int, t: int, count: int) -> List[int]:
    return [s if k % 2 == 0 else t for k in range(count)]


def braid_suite(module: HeckeModule) -> SuiteReport:
    """T_s T_t T_s ... = T_t T_s T_t ... with m_st factors on each side"""
    report = SuiteReport('braid')
    d = module.datum
    for s in range(1, module.rank + 1):
        for t in range(s + 1, module.rank + 1):
            count = d.coxeter_number(s, t)
            left, right = _alternating(s, t, count), _alternating(t, s, count)
            for a in _basis(module):
                report.checked += 1
                if module.word_act(left, a) != module.word_act(right, a):
                    return report.fail(f"braid relation for s{s}, s{t} fails on {a}")
    return report


def quadratic_suite(module: HeckeModule) -> SuiteReport:
    """Quadratic relation, inverses, idempotents, T_s 1_lambda = 1_{s lambda} T_s, length-additive products"""
    report = SuiteReport('quadratic')
    d = module.datum
    lambdas = module.lambdas
    basis = _basis(module)
    for s in range(1, module.rank + 1):
        sr = d.simple_reflections[s - 1]
        for ti, a in zip(module.items, basis):
            report.checked += 1
            ta = module.ts_act(s, a)
            expected = a + ta.scale(V2_MINUS_VM2 * module.delta(s, ti.lam))
            if module.ts_act(s, ta) != expected:
                return report.fail(f"quadratic relation for s{s} fails on {a}")
            if module.ts_inv_act(s, ta) != a or module.ts_act(s, module.ts_inv_act(s, a)) != a:
                return report.fail(f"T_s^-1 is not inverse to T_s for s{s} on {a}")
            for lam in lambdas:
                if module.ts_act(s, one_lambda(lam, a)) != one_lambda(act(d, sr, lam), ta):
                    return report.fail(f"T_s 1_lambda != 1_(s lambda) T_s for s{s}, lambda={lam}")
    for a in basis:
        total = ModuleVector()
        for lam in lambdas:
            report.checked += 1
            once = one_lambda(lam, a)
            total = total + once
            for mu in lambdas:
                twice = one_lambda(mu, once)
                if twice != (once if mu == lam else ModuleVector()):
                    return report.fail(f"1_lambda 1_mu != delta 1_lambda for lambda={lam}, mu={mu}")
        if total != a:
            return report.fail(f"sum of the idempotents is not the identity on {a}")
    for w in weyl_generate(d):
        for s in range(1, module.rank + 1):
            ws = w * d.simple_reflections[s - 1]
            if module.length(ws) <= module.length(w):
                continue
            for a in basis:
                report.checked += 1
                if module.tw_act(w, module.ts_act(s, a)) != module.tw_act(ws, a):
                    return report.fail(f"T_w T_s != T_ws for w={module.word(w)}, s{s}")
    return report


def oracle_suite(module: HeckeModule) -> SuiteReport:
    """Direct T_w 1_lambda against the block transport, plus undistorted transport"""
    report = SuiteReport('oracle')
    d = module.datum
    transport = BlockTransport(module)
    basis = _basis(module)
    for w in weyl_generate(d):
        for lam in module.lambdas:
            for a in basis:
                report.checked += 1
                if module.tw_lambda_act(w, lam, a) != transport.tw1lambda_act(w, lam, a):
                    return report.fail(f"transport disagrees with T_w 1_lambda, w={module.word(w)}, lambda={lam}")
    for lam in module.lambdas:
        for z in weyl_generate(d):
            if not bracket_contains(d, act(d, z, lam), z, lam):
                continue
            for ti, a in zip(module.items, basis):
                if ti.lam != lam:
                    continue
                report.checked += 1
                image = transport.bullet_act(d.identity, z, lam, a)
                if len(image) != 1 or next(iter(image.terms.values())) != ONE:
                    return report.fail(f"transport along z={module.word(z)} distorts {a}")
    zero = TorusPoint.zero(module.rank)
    for a in (ModuleVector.basis(*idx) for idx in module.orbit_indices([zero])):
        for s in range(1, module.rank + 1):
            report.checked += 1
            if any(lam != zero for _, lam in module.ts_act(s, a).terms):
                return report.fail(f"lambda = 0 span is not stable under T_s{s}")
    return report


def bar_suite(module: HeckeModule) -> SuiteReport:
    report = SuiteReport('bar')
    for result in (verify_bar(module), verify_bar_words(module)):
        report.checked += result.checked
        if not result.passed:
            return report.fail(f"{result.failure} at {result.witness}")
    return report


def _point_orbits(module: HeckeModule) -> List[List[TorusPoint]]:
    return orbits(module.datum, module.lambdas)


def canonical_suite(module: HeckeModule) -> SuiteReport:
    report = SuiteReport('canonical')
    for orbit in _point_orbits(module):
        table = canonical_basis(module, orbit)
        report.checked += len(table.vectors)
        problem = verify_canonical(module, table)
        if problem:
            return report.fail(problem)
    return report


def v1_suite(module: HeckeModule) -> SuiteReport:
    """At v = 1 the generators square to 1 and satisfy the braid relations"""
    report = SuiteReport('v1')
    d = module.datum
    matrices = {s: module.generator_matrix_v1(s) for s in range(1, module.rank + 1)}
    identity = np.eye(len(module), dtype=np.int64)
    for s, sigma in matrices.items():
        report.checked += 1
        if not np.array_equal(sigma @ sigma, identity):
            return report.fail(f"sigma_s{s} does not square to the identity")
        for t in range(s + 1, module.rank + 1):
            report.checked += 1
            count = d.coxeter_number(s, t)
            left, right = identity, identity
            for k in range(count):
                left = left @ matrices[s if k % 2 == 0 else t]
                right = right @ matrices[t if k % 2 == 0 else s]
            if not np.array_equal(left, right):
                return report.fail(f"v = 1 braid relation fails for s{s}, s{t}")
    return report


def sign_suite(module: HeckeModule) -> SuiteReport:
    """E(sws, s lambda) = E(w, lambda); E(ws, lambda) = -E(w, lambda) when sw = ws and s in W_lambda"""
    report = SuiteReport('sign')
    d = module.datum
    for ti in module.items:
        for s in range(1, module.rank + 1):
            sr = d.simple_reflections[s - 1]
            report.checked += 1
            conj = module.require((sr * ti.w * sr, act(d, sr, ti.lam)))
            if conj.sign != ti.sign:
                return report.fail(f"E(sws, s lambda) != E(w, lambda) for s{s}, w={module.word(ti.w)}")
            if sr * ti.w == ti.w * sr and module.delta(s, ti.lam):
                report.checked += 1
                if module.require((ti.w * sr, ti.lam)).sign != -ti.sign:
                    return report.fail(f"E(ws, lambda) != -E(w, lambda) for s{s}, w={module.word(ti.w)}")
    return report


def bijection_suite(module: HeckeModule) -> SuiteReport:
    """Block decomposition, two-way enumeration and closure under simple reflections"""
    report = SuiteReport('bijection')
    d = module.datum
    total, count = check_bijection(d, module.m, module.n)
    report.checked += total
    if total != count:
        return report.fail(f"blocks hold {total} members but there are {count} twisted involutions")
    if star_involutions(d, module.m, module.n) != module.indices:
        return report.fail("g g* = 1 enumeration disagrees with the direct one")
    for ti in module.items:
        for s in range(1, module.rank + 1):
            for idx in closure_images(d, ti.w, ti.lam, s):
                report.checked += 1
                if not module.contains(idx):
                    return report.fail(f"twisted involutions are not closed under s{s}")
    return report


def lv_sector_suite(module: HeckeModule) -> SuiteReport:
    """On lambda = 0 the module is the involution module of (W, id)"""
    report = SuiteReport('lv_sector')
    d = module.datum
    zero = TorusPoint.zero(module.rank)
    transport = BlockTransport(module)
    for idx in module.orbit_indices([zero]):
        block = transport.block_of(idx)
        a = ModuleVector.basis(*idx)
        for s in range(1, module.rank + 1):
            report.checked += 1
            if module.ts_act(s, a) != transport.lv_circle_act(block, d.simple_coroots[s - 1], a):
                return report.fail(f"T_s{s} differs from the involution module action on the lambda = 0 sector")
    direct = lv_sector_canonical_basis(module)
    solved = canonical_basis(module, [zero])
    report.checked += len(direct.vectors)
    if direct != solved:
        return report.fail("entrywise canonical basis of the lambda = 0 sector disagrees")
    return report


SUITE_FUNCTIONS: Dict[str, Callable[[HeckeModule], SuiteReport]] = {
    'braid': braid_suite,
    'quadratic': quadratic_suite,
    'oracle': oracle_suite,
    'bar': bar_suite,
    'canonical': canonical_suite,
    'v1': v1_suite,
    'sign': sign_suite,
    'bijection': bijection_suite,
    'lv_sector': lv_sector_suite,
}


def run_suite(name: str, module: HeckeModule) -> SuiteReport:
    """Run one suite, turning toolkit errors into a failed report"""
    log.info(f"Running suite '{name}' on {module.datum.cartan_type}, m={module.m}, N={module.n}")
    start = time.perf_counter()
    try:
        report = SUITE_FUNCTIONS[name](module)
    except HeckeError as e:
        log.error(f"Suite '{name}' raised {type(e).__name__}: {e}")
        report = SuiteReport(name).fail(f"{type(e).__name__}: {e}")
    report.elapsed = time.perf_counter() - start
    status = "passed" if report.passed else f"FAILED: {report.failure}"
    log.info(f"Suite '{name}' {status} ({report.checked} checks, {report.elapsed:.2f}s)")
    return report


def run_suites(module: HeckeModule, names: Sequence[str], threads: int = 1) -> List[SuiteReport]:
    """Run suites on a worker pool; reports come back in the requested order"""
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(lambda name: run_suite(name, module), names))

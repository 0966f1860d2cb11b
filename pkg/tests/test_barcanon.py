"""
Bar operator and canonical basis
"""
from fractions import Fraction

import pytest

from fixtures.configurations import SMOKE_CONFIGS
from hecke.barcanon import (
    BarMatrix,
    antisymmetric_solution,
    bar_act,
    bar_basis,
    bar_matrix,
    canonical_basis,
    check_triangular,
    lv_sector_bar,
    lv_sector_canonical_basis,
    verify_bar,
    verify_bar_words,
    verify_canonical,
)
from hecke.coeff import ONE, V, V_INV, V_MINUS_VINV, LaurentInt
from hecke.exceptions import InvariantViolation, TriangularityError
from hecke.heckemod import ModuleVector
from hecke.rootdata import word_to_element
from hecke.torusquot import TorusPoint, orbits
from utils.logger import log


def point(*values) -> TorusPoint:
    return TorusPoint.from_values(Fraction(v) for v in values)


@pytest.fixture
def a1_m2(build_module):
    return build_module("A1", 2, 3)


@pytest.mark.smoke
@pytest.mark.critical
class TestBarOperator:

    def test_bar_of_reflection(self, a1_m2):
        """B(a_{s,0}) = a_{s,0} - (v - v^-1) a_{1,0}"""
        d = a1_m2.datum
        s = d.simple_reflections[0]
        zero = point(0)
        expected = ModuleVector({(s, zero): ONE, (d.identity, zero): -V_MINUS_VINV})
        assert bar_basis(a1_m2, (s, zero)) == expected
        log.info("✓ B(a_{s,0}) = a_{s,0} - (v - v^-1) a_{1,0}")

    def test_bar_swaps_twisted_points(self, a1_m2):
        """B(a_{1,lambda}) = a_{1,-2 lambda}, and -2/3 = 1/3 mod 1"""
        d = a1_m2.datum
        third = point(Fraction(1, 3))
        assert bar_basis(a1_m2, (d.identity, third)) == ModuleVector.basis(d.identity, third)

    def test_bar_is_semilinear(self, a1_m2):
        d = a1_m2.datum
        a = ModuleVector.basis(d.identity, point(0))
        assert bar_act(a1_m2, a.scale(V)) == bar_act(a1_m2, a).scale(V_INV)

    @pytest.mark.parametrize("config", SMOKE_CONFIGS, ids=lambda c: c.id)
    def test_bar_identities(self, build_module, config):
        module = build_module(*config)
        report = verify_bar(module)
        assert report.passed, f"{report.failure} at {report.witness}"
        words = verify_bar_words(module)
        assert words.passed, f"{words.failure} at {words.witness}"
        log.info(f"✓ {config.id}: B^2 = 1 and B T_w^-1 = T_{{w^-1}} B ({report.checked + words.checked} checks)")

    def test_intertwining_reverses_non_involutions(self, build_module):
        """w = s1 s2 in A2: B T_w^-1 = T_{s2 s1} B on every basis element"""
        module = build_module("A2", 1, 2)
        w = word_to_element(module.datum, [1, 2])
        assert w != w.inverse
        for idx in module.indices:
            a = ModuleVector.basis(*idx)
            assert bar_act(module, module.tw_inv_act(w, a)) == module.tw_act(w.inverse, bar_basis(module, idx))
        log.info("✓ A2: B T_{s1 s2}^-1 = T_{s2 s1} B")


@pytest.mark.smoke
@pytest.mark.critical
class TestCanonicalBasis:

    def test_anchor_a1_m2(self, a1_m2):
        """hat a_{s,0} = a_{s,0} + v^-1 a_{1,0}; hat a_{1,0} = a_{1,0}"""
        d = a1_m2.datum
        s = d.simple_reflections[0]
        zero = point(0)
        table = canonical_basis(a1_m2, [zero])
        assert table.vectors[(s, zero)] == ModuleVector({(s, zero): ONE, (d.identity, zero): V_INV})
        assert table.vectors[(d.identity, zero)] == ModuleVector.basis(d.identity, zero)
        assert table.transition_entry((d.identity, zero), (s, zero)) == V_INV
        log.info("✓ hat a_{s,0} = a_{s,0} + v^-1 a_{1,0}")

    def test_block_generators_are_fixed(self, a1_m2):
        """a_{z,lambda} for u = 1 is its own canonical vector"""
        for orbit in orbits(a1_m2.datum, a1_m2.lambdas):
            table = canonical_basis(a1_m2, orbit)
            for idx, hat in table.vectors.items():
                if a1_m2.require(idx).u.is_identity():
                    assert hat == ModuleVector.basis(*idx)

    @pytest.mark.parametrize("config", SMOKE_CONFIGS, ids=lambda c: c.id)
    def test_canonical_properties(self, build_module, config):
        module = build_module(*config)
        for orbit in orbits(module.datum, module.lambdas):
            table = canonical_basis(module, orbit)
            assert verify_canonical(module, table) is None
            assert len(table.vectors) == len(module.orbit_indices(orbit))

    @pytest.mark.parametrize("cartan_type", ["A1", "A2", "B2", "A1xA1"])
    def test_lambda_zero_sector_solved_entrywise(self, build_module, cartan_type):
        module = build_module(cartan_type, 1, 1)
        zero = TorusPoint.zero(module.rank)
        bar = lv_sector_bar(module)
        for idx in bar.indices:
            assert bar.columns[idx] == bar_basis(module, idx)
        assert lv_sector_canonical_basis(module) == canonical_basis(module, [zero])
        log.info(f"✓ {cartan_type}: entrywise and residual solves agree on lambda = 0")


@pytest.mark.regression
class TestSolverGuards:

    def test_antisymmetric_solution(self):
        c = V - V_INV
        assert antisymmetric_solution(-c, "x") == V_INV
        with pytest.raises(InvariantViolation):
            antisymmetric_solution(V + V_INV, "x")
        with pytest.raises(InvariantViolation):
            antisymmetric_solution(ONE, "x")

    def test_triangularity_rejects_upper_entries(self, a1_m2):
        bar = bar_matrix(a1_m2, a1_m2.orbit_indices([point(0)]))
        reversed_key = {idx: -k for k, idx in enumerate(a1_m2.indices)}
        check_triangular(bar, lambda idx: (a1_m2.require(idx).u != a1_m2.datum.identity, 0))
        with pytest.raises(TriangularityError):
            check_triangular(bar, lambda idx: (a1_m2.require(idx).u == a1_m2.datum.identity, reversed_key[idx]))

    def test_triangularity_rejects_bad_diagonal(self, a1_m2):
        idx = a1_m2.indices[0]
        bad = BarMatrix((idx,), {idx: ModuleVector({idx: LaurentInt.const(2)})})
        with pytest.raises(TriangularityError):
            check_triangular(bad, lambda i: 0)

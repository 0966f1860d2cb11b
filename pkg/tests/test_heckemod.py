"""
The module M_m: generator action, relations and the block-transport oracle
"""
from fractions import Fraction

import numpy as np
import pytest

from fixtures.configurations import SMOKE_CONFIGS
from hecke.coeff import ONE, V2_MINUS_VM2, V2_MINUS_VM2_MINUS_1, V_MINUS_VINV, V_PLUS_VINV, LaurentInt
from hecke.exceptions import IndexOutsideModuleError, PreconditionError
from hecke.heckemod import BlockTransport, ModuleVector, decompose_tw1lambda, one_lambda, specialize_v1
from hecke.rootdata import build_root_datum, reduced_word, weyl_generate, word_to_element
from hecke.torusquot import TorusPoint, little_weyl
from utils.logger import log


def point(*values) -> TorusPoint:
    return TorusPoint.from_values(Fraction(v) for v in values)


@pytest.fixture
def a1_m2(build_module):
    return build_module("A1", 2, 3)


@pytest.mark.smoke
@pytest.mark.critical
class TestGeneratorAction:
    """T_s on A1, m = 2, N = 3, one case of the four-case formula per basis element"""

    def test_identity_at_zero(self, a1_m2):
        d = a1_m2.datum
        s = d.simple_reflections[0]
        zero = point(0)
        image = a1_m2.ts_act(1, a1_m2.basis_vector(d.identity, zero))
        assert image == ModuleVector({(d.identity, zero): ONE, (s, zero): V_PLUS_VINV})
        log.info("✓ T_s a_{1,0} = a_{1,0} + (v + v^-1) a_{s,0}")

    def test_reflection_at_zero(self, a1_m2):
        d = a1_m2.datum
        s = d.simple_reflections[0]
        zero = point(0)
        image = a1_m2.ts_act(1, a1_m2.basis_vector(s, zero))
        assert image == ModuleVector({(d.identity, zero): V_MINUS_VINV, (s, zero): V2_MINUS_VM2_MINUS_1})
        log.info("✓ T_s a_{s,0} = (v - v^-1) a_{1,0} + (v^2 - v^-2 - 1) a_{s,0}")

    def test_free_points_are_swapped(self, a1_m2):
        d = a1_m2.datum
        third, two_thirds = point(Fraction(1, 3)), point(Fraction(2, 3))
        image = a1_m2.ts_act(1, a1_m2.basis_vector(d.identity, third))
        assert image == ModuleVector.basis(d.identity, two_thirds)
        assert a1_m2.ts_act(1, image) == ModuleVector.basis(d.identity, third)

    def test_inverse(self, a1_m2):
        d = a1_m2.datum
        s = d.simple_reflections[0]
        a = a1_m2.basis_vector(s, point(0))
        assert a1_m2.ts_inv_act(1, a) == ModuleVector({(d.identity, point(0)): V_MINUS_VINV, (s, point(0)): -ONE})
        for ti in a1_m2.items:
            b = ModuleVector.basis(*ti.index)
            assert a1_m2.ts_inv_act(1, a1_m2.ts_act(1, b)) == b

    def test_quadratic_relation(self, a1_m2):
        for ti in a1_m2.items:
            a = ModuleVector.basis(*ti.index)
            ta = a1_m2.ts_act(1, a)
            delta = a1_m2.delta(1, ti.lam)
            assert a1_m2.ts_act(1, ta) == a + ta.scale(V2_MINUS_VM2 * delta)

    def test_index_outside_module(self, a1_m2):
        s = a1_m2.datum.simple_reflections[0]
        with pytest.raises(IndexOutsideModuleError):
            a1_m2.basis_vector(s, point(Fraction(1, 3)))
        with pytest.raises(IndexOutsideModuleError):
            a1_m2.ts_act(1, ModuleVector.basis(s, point(Fraction(1, 3))))

    def test_generator_label_checked(self, a1_m2):
        with pytest.raises(PreconditionError):
            a1_m2.ts_act(2, ModuleVector.basis(a1_m2.datum.identity, point(0)))

    def test_action_table_rows(self, a1_m2):
        table = a1_m2.action_table(1)
        assert len(table) == 4
        assert [idx for idx, _ in table] == a1_m2.indices


@pytest.mark.smoke
class TestModuleVector:

    def test_zero_coefficients_dropped(self):
        d = build_root_datum("A1")
        idx = (d.identity, point(0))
        xi = ModuleVector({idx: LaurentInt.const(0)})
        assert xi.is_zero() and len(xi) == 0
        assert ModuleVector({idx: 2}) == ModuleVector.basis(*idx).scale(2)

    def test_linear_operations(self):
        d = build_root_datum("A1")
        a = ModuleVector.basis(d.identity, point(0))
        b = ModuleVector.basis(d.simple_reflections[0], point(0))
        xi = a.scale(V_PLUS_VINV) + b
        assert (xi - xi).is_zero()
        assert -(-xi) == xi
        assert xi.bar_coefficients() == xi
        assert specialize_v1(xi) == {a.support()[0]: 2, b.support()[0]: 1}

    def test_projections(self):
        d = build_root_datum("A1")
        zero, third = point(0), point(Fraction(1, 3))
        xi = ModuleVector.basis(d.identity, zero) + ModuleVector.basis(d.identity, third)
        assert one_lambda(zero, xi) == ModuleVector.basis(d.identity, zero)
        assert one_lambda(third, xi) + one_lambda(zero, xi) == xi


@pytest.mark.regression
class TestWordActions:

    @pytest.mark.parametrize("config", SMOKE_CONFIGS, ids=lambda c: c.id)
    def test_v1_matrices_are_involutions(self, build_module, config):
        module = build_module(*config)
        identity = np.eye(len(module), dtype=np.int64)
        for s in range(1, module.rank + 1):
            sigma = module.generator_matrix_v1(s)
            assert np.array_equal(sigma @ sigma, identity)

    def test_length_and_word_tables_are_complete(self, build_module):
        module = build_module("B2", 1, 2)
        d = module.datum
        for w in weyl_generate(d):
            assert module.length(w) == len(module.word(w))
            assert module.word(w) == reduced_word(d, w)
        module.word(d.identity).append(1)
        assert module.word(d.identity) == []
        with pytest.raises(TypeError):
            module._lengths[d.identity] = 5

    def test_length_additive_products(self, build_module):
        module = build_module("A2", 1, 2)
        d = module.datum
        a = ModuleVector.basis(*module.indices[-1])
        w0 = word_to_element(d, [1, 2, 1])
        assert module.tw_act(w0, a) == module.word_act([2, 1, 2], a)
        assert module.tw_inv_act(w0, module.tw_act(w0, a)) == a

    def test_extended_generators(self, build_module):
        module = build_module("A2", 1, 2)
        half = TorusPoint.parse("0,1/2")
        for ti in module.items:
            a = ModuleVector.basis(*ti.index)
            image = module.extended_generator(2, half, a)
            if ti.lam != half:
                assert image.is_zero()
            else:
                assert image == module.ts_act(2, a)


@pytest.mark.oracle
class TestBlockTransport:

    def test_decompose_tw1lambda_example(self):
        """A2, lambda = (0, 1/2), w = s2 s1 gives z = s2 and u = s2 s1 s2 in W_{s2 lambda}"""
        d = build_root_datum("A2")
        lam = TorusPoint.parse("0,1/2")
        u, z = decompose_tw1lambda(d, word_to_element(d, [2, 1]), lam)
        assert reduced_word(d, z) == [2]
        assert u == word_to_element(d, [2, 1, 2])
        assert little_weyl(d, TorusPoint.parse("1/2,1/2")).contains(u)

    @pytest.mark.parametrize("config", SMOKE_CONFIGS, ids=lambda c: c.id)
    def test_transport_matches_direct_action(self, build_module, config):
        module = build_module(*config)
        transport = BlockTransport(module)
        for w in weyl_generate(module.datum):
            for lam in module.lambdas:
                for idx in module.indices:
                    a = ModuleVector.basis(*idx)
                    assert transport.tw1lambda_act(w, lam, a) == module.tw_lambda_act(w, lam, a)
        log.info(f"✓ {config.id}: transported action equals T_w 1_lambda")

    def test_lambda_zero_sector_is_the_involution_module(self, build_module):
        module = build_module("A2", 1, 1)
        transport = BlockTransport(module)
        d = module.datum
        for idx in module.indices:
            a = ModuleVector.basis(*idx)
            block = transport.block_of(idx)
            for s in (1, 2):
                assert transport.lv_circle_act(block, d.simple_coroots[s - 1], a) == module.ts_act(s, a)

    def test_block_action_needs_simple_coroot(self, build_module):
        module = build_module("A2", 1, 2)
        transport = BlockTransport(module)
        half = TorusPoint.parse("0,1/2")
        idx = (module.datum.identity, half)
        with pytest.raises(PreconditionError):
            transport.lv_circle_act(transport.block_of(idx), (0, 1), ModuleVector.basis(*idx))

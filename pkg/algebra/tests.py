import math
import random
from fractions import Fraction

from django.test import SimpleTestCase

from algebra.services.exactnum import (
    DivisionByZero, ExtScalar, ONE, SQRT3, ZERO, as_rational, ext_inv, ext_mul, ext_to_float,
)
from algebra.services.trigpoly import (
    ElemFactor, FreqDenMismatch, HALF_PI, MINUS_PI, PI, TrigPoly, UnsupportedEndpoint,
    cos_pi, sin_pi, tp_add, tp_diff, tp_eval_exact, tp_eval_float, tp_mul_elem, tp_scale,
)


def random_scalar(rng, span=20):
    return ExtScalar(
        Fraction(rng.randint(-span, span), rng.randint(1, span)),
        Fraction(rng.randint(-span, span), rng.randint(1, span)),
    )


def random_poly(rng, q, max_k=8):
    terms = {}
    for k in rng.sample(range(max_k + 1), rng.randint(1, 4)):
        terms[k] = (random_scalar(rng, 6), random_scalar(rng, 6))
    return TrigPoly(q, terms)


class ExtScalarTests(SimpleTestCase):

    def test_multiplication_examples(self):
        self.assertEqual(ext_mul(ExtScalar(1, 1), ExtScalar(1, -1)), ExtScalar(-2, 0))
        self.assertEqual(SQRT3 * SQRT3, ExtScalar(3))

    def test_inverse_rationalizes(self):
        self.assertEqual(ext_inv(ExtScalar(0, 1)), ExtScalar(0, Fraction(1, 3)))
        self.assertEqual(ext_inv(ExtScalar(2, 1)), ExtScalar(2, -1))

    def test_inverse_of_zero(self):
        with self.assertRaises(DivisionByZero):
            ZERO.inverse()
        with self.assertRaises(ZeroDivisionError):
            ONE / ZERO

    def test_field_axioms(self):
        rng = random.Random(20261019)
        for _ in range(200):
            x, y, z = (random_scalar(rng) for _ in range(3))
            self.assertEqual((x + y) + z, x + (y + z))
            self.assertEqual((x * y) * z, x * (y * z))
            self.assertEqual(x * (y + z), x * y + x * z)
            self.assertEqual(x + ZERO, x)
            self.assertEqual(x * ONE, x)
            self.assertEqual(x - x, ZERO)
            if x:
                self.assertEqual(x * x.inverse(), ONE)

    def test_float_is_additive(self):
        rng = random.Random(7)
        for _ in range(100):
            x, y = random_scalar(rng), random_scalar(rng)
            self.assertAlmostEqual(ext_to_float(x + y), float(x) + float(y), places=10)

    def test_norm_vanishes_only_at_zero(self):
        self.assertEqual(ExtScalar(2, 1).norm(), 1)
        self.assertEqual(ZERO.norm(), 0)

    def test_refuses_floats(self):
        with self.assertRaises(TypeError):
            ExtScalar(0.5)
        self.assertEqual(as_rational('3/4'), Fraction(3, 4))

    def test_dsl_text(self):
        self.assertEqual(str(ExtScalar(0, Fraction(1, 3))), '0+1/3r3')
        self.assertEqual(str(ExtScalar(Fraction(-1, 20), Fraction(-1, 20))), '-1/20-1/20r3')
        self.assertEqual(str(ExtScalar(Fraction(1, 4))), '1/4')

    def test_pair_round_trip(self):
        x = ExtScalar(Fraction(-7, 3), 5)
        self.assertEqual(x.to_pair(), ('-7/3', '5'))
        self.assertEqual(ExtScalar.from_pair(x.to_pair()), x)

    def test_immutable(self):
        with self.assertRaises(AttributeError):
            ONE.a = 2


class TrigTableTests(SimpleTestCase):

    def test_sixths(self):
        self.assertEqual(sin_pi(Fraction(1, 3)), ExtScalar(0, Fraction(1, 2)))
        self.assertEqual(cos_pi(Fraction(2, 3)), ExtScalar(Fraction(-1, 2)))
        self.assertEqual(sin_pi(Fraction(-1, 2)), ExtScalar(-1))

    def test_table_agrees_with_math(self):
        for n in range(-24, 25):
            turns = Fraction(n, 6)
            self.assertAlmostEqual(float(sin_pi(turns)), math.sin(n * math.pi / 6), places=12)
            self.assertAlmostEqual(float(cos_pi(turns)), math.cos(n * math.pi / 6), places=12)


class TrigPolyTests(SimpleTestCase):

    def test_canonical_form_drops_zero_terms(self):
        p = TrigPoly(2, {0: (5, 1), 1: (0, 0), 3: (ExtScalar(0, 2), 0)})
        self.assertEqual(p.frequencies(), [0, 3])
        self.assertEqual(p.coefficient(0), (ZERO, ONE))
        self.assertEqual(len(p), 2)

    def test_sin_of_negative_frequency_folds(self):
        self.assertEqual(TrigPoly.sin(2, -3), TrigPoly.sin(2, 3, -1))
        self.assertEqual(TrigPoly.cos(2, -3), TrigPoly.cos(2, 3))

    def test_lattice_mismatch(self):
        with self.assertRaises(FreqDenMismatch):
            TrigPoly.sin(2, 1) + TrigPoly.sin(3, 1)

    def test_addition_cancels(self):
        p = TrigPoly.sin(2, 1) + TrigPoly.cos(2, 3, Fraction(1, 2))
        self.assertTrue((tp_add(p, -p)).is_zero())
        self.assertEqual(tp_scale(p, 0), TrigPoly.zero(2))

    def test_cos_times_sin_half(self):
        # cos φ · sin(φ/2) = [sin(3φ/2) − sin(φ/2)]/2
        p = tp_mul_elem(TrigPoly.sin(2, 1), ElemFactor.COS)
        expected = TrigPoly(2, {1: (Fraction(-1, 2), 0), 3: (Fraction(1, 2), 0)})
        self.assertEqual(p, expected)

    def test_cos_squared_of_constant(self):
        p = TrigPoly.cos(3, 0).mul_elem('cos2')
        self.assertEqual(p, TrigPoly(3, {0: (0, Fraction(1, 2)), 6: (0, Fraction(1, 2))}))

    def test_sincos_of_constant(self):
        p = TrigPoly.cos(3, 0).mul_elem(ElemFactor.SINCOS)
        self.assertEqual(p, TrigPoly.sin(3, 6, Fraction(1, 2)))

    def test_products_agree_with_floats(self):
        rng = random.Random(11)
        for q in (2, 3):
            for _ in range(30):
                p = random_poly(rng, q)
                for factor in ElemFactor:
                    product = p.mul_elem(factor)
                    for phi in (-2.9, -1.3, 0.0, 0.4, 1.55, 3.0):
                        self.assertAlmostEqual(
                            product.eval_float(phi),
                            p.eval_float(phi) * factor.value_at(phi),
                            places=9,
                        )

    def test_derivative_examples(self):
        p = TrigPoly.sin(2, 3)
        self.assertEqual(tp_diff(p), TrigPoly.cos(2, 3, Fraction(3, 2)))
        self.assertEqual(p.diff(2), TrigPoly.sin(2, 3, Fraction(-9, 4)))
        self.assertTrue(TrigPoly.cos(3, 0, 7).diff().is_zero())

    def test_derivative_agrees_with_finite_differences(self):
        rng = random.Random(3)
        step = 1e-6
        for q in (2, 3):
            for _ in range(20):
                p = random_poly(rng, q, max_k=5)
                dp = p.diff()
                for phi in (-2.0, -0.5, 0.7, 2.2):
                    fd = (p.eval_float(phi + step) - p.eval_float(phi - step)) / (2 * step)
                    self.assertAlmostEqual(dp.eval_float(phi), fd, places=5)

    def test_exact_evaluation(self):
        p = TrigPoly.sin(2, 1)
        self.assertEqual(tp_eval_exact(p, PI), ONE)
        self.assertEqual(tp_eval_exact(p, MINUS_PI), -ONE)
        q = TrigPoly.cos(3, 4)
        # cos(4π/3 · 1/2) = cos(2π/3)
        self.assertEqual(q.eval_exact(HALF_PI), ExtScalar(Fraction(-1, 2)))
        self.assertEqual(q.eval_exact('1'), ExtScalar(Fraction(-1, 2)))

    def test_exact_matches_float(self):
        rng = random.Random(5)
        for q in (2, 3):
            for _ in range(20):
                p = random_poly(rng, q)
                for endpoint in (MINUS_PI, HALF_PI, PI):
                    self.assertAlmostEqual(
                        float(p.eval_exact(endpoint)),
                        tp_eval_float(p, float(endpoint) * math.pi),
                        places=9,
                    )

    def test_unsupported_endpoint(self):
        with self.assertRaises(UnsupportedEndpoint):
            TrigPoly.sin(2, 1).eval_exact(Fraction(1, 4))

    def test_json_round_trip(self):
        p = TrigPoly(3, {1: (ExtScalar(1, Fraction(-1, 3)), 0), 4: (0, ExtScalar(0, 2))})
        data = p.to_json()
        self.assertEqual(data['terms'][0], {'num': 1, 'sin': ['1', '-1/3'], 'cos': ['0', '0']})
        self.assertEqual(TrigPoly.from_json(data), p)

    def test_equal_polys_hash_equal(self):
        a = TrigPoly.sin(2, 1) + TrigPoly.sin(2, 1)
        b = TrigPoly.sin(2, 1, 2)
        self.assertEqual(hash(a), hash(b))

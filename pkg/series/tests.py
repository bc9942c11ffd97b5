import csv
import json
import tempfile
from io import StringIO
from pathlib import Path

import mpmath
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from series.forms import EvalForm, ResidualForm
from series.services.evaluator import (
    DomainError, EdgePoint, SeriesEvaluator, SeriesSpec, eval_tau, eval_terms, laplacian_fd,
    probe_points, residual_slope,
)

RHO_RANGE = ('1e-3', '1e-2')


class SeriesSpecTests(SimpleTestCase):

    def test_exponent_and_expected_slope(self):
        self.assertEqual(SeriesSpec('crack', j=1, K=4, mode=2).expected_slope, 3.5)
        self.assertAlmostEqual(SeriesSpec('vnotch90', j=1, K=3).expected_slope, 8 / 3)
        self.assertEqual(SeriesSpec('crack', j=1, K=0, kind='dual').expected_slope, -1.5)

    def test_keys_are_triangular(self):
        keys = SeriesSpec('crack', j=1, K=3).keys()
        self.assertEqual([(k.h, k.f) for k in keys], [(0, 0), (0, 1), (0, 2), (0, 3), (2, 0), (2, 1)])

    def test_invalid_parameters(self):
        with self.assertRaises(DomainError):
            SeriesSpec('crack', R='-1')
        with self.assertRaises(DomainError):
            SeriesSpec('crack', K=-1)
        with self.assertRaises(DomainError):
            SeriesSpec('crack', j=0)

    def test_infinite_radius(self):
        self.assertTrue(mpmath.isinf(SeriesSpec('crack', R='inf').R))


class EvaluatorTests(SimpleTestCase):

    def evaluate(self, rho, phi, theta=0, **spec):
        spec = SeriesSpec(**spec)
        return eval_tau(spec, spec.build_table(), EdgePoint(rho, phi, theta))

    def test_leading_term(self):
        self.assertAlmostEqual(self.evaluate('0.25', mpmath.pi, geometry='crack'), 0.5, places=12)

    def test_first_shadow(self):
        self.assertAlmostEqual(self.evaluate('0.04', mpmath.pi, geometry='crack', K=1), 0.202, places=12)

    def test_edge_value(self):
        self.assertEqual(self.evaluate(0, '1.0', geometry='vnotch90', K=2), 0.0)

    def test_axisymmetric_mode_ignores_theta(self):
        a = self.evaluate('0.05', '0.7', '0.0', geometry='vnotch90', K=4)
        b = self.evaluate('0.05', '0.7', '2.1', geometry='vnotch90', K=4)
        self.assertEqual(a, b)

    def test_mode_factor(self):
        # K=2, mode=2 at theta=pi/4: the h=2 term carries -4 cos(2 theta) = 0
        spec = SeriesSpec('crack', j=1, K=2, mode=2)
        terms = eval_terms(spec, spec.build_table(), EdgePoint('0.05', '1.0', mpmath.pi / 4))
        self.assertEqual([(t['h'], t['f']) for t in terms], [(0, 0), (0, 1), (0, 2), (2, 0)])
        self.assertAlmostEqual(terms[-1]['value'], 0.0, places=15)

    def test_planar_mode(self):
        near = self.evaluate('0.25', mpmath.pi, geometry='crack', K=3, R='inf')
        # (rho/R)^(h+f) vanishes for every shadow
        self.assertAlmostEqual(near, 0.5, places=12)

    def test_domain_errors(self):
        spec = SeriesSpec('crack', j=1, K=1, R='0.5')
        evaluator = SeriesEvaluator(spec, spec.build_table())
        for point in (EdgePoint('0.5', '0'), EdgePoint('-0.1', '0'), EdgePoint('0.1', '3.2')):
            with self.assertRaises(DomainError):
                evaluator.tau(point)
        dual = SeriesSpec('crack', j=1, kind='dual')
        with self.assertRaises(DomainError):
            eval_tau(dual, dual.build_table(), EdgePoint(0, '0'))

    def test_table_must_cover_the_series(self):
        spec = SeriesSpec('crack', j=1, K=2)
        short = SeriesSpec('crack', j=1, K=1).build_table()
        with self.assertRaises(DomainError):
            SeriesEvaluator(spec, short)


class LaplacianTests(SimpleTestCase):
    steps = ('1e-6', '1e-6', '1e-6')

    def test_planar_harmonic(self):
        def u(p):
            return mpmath.sqrt(p.rho) * mpmath.sin(p.phi / 2)
        value = laplacian_fd(u, EdgePoint('0.3', '1.0'), self.steps, geometry='crack')
        self.assertAlmostEqual(value, 0.0, places=8)

    def test_planar_radius_squared(self):
        value = laplacian_fd(lambda p: p.rho ** 2, EdgePoint('0.3', '-2.0'), self.steps, geometry='crack')
        self.assertAlmostEqual(value, 4.0, places=8)

    def test_toroidal_coordinates(self):
        # r = R + rho cos(phi) is the distance from the axis, z = rho sin(phi)
        def r_squared(p):
            return (1 + p.rho * mpmath.cos(p.phi)) ** 2

        def z(p):
            return p.rho * mpmath.sin(p.phi)

        point = EdgePoint('0.1', '0.3', '0.5')
        self.assertAlmostEqual(laplacian_fd(r_squared, point, self.steps, radius=1, geometry='crack'), 4.0, places=8)
        self.assertAlmostEqual(laplacian_fd(z, point, self.steps, radius=1, geometry='crack'), 0.0, places=8)

    def test_too_close_to_a_face(self):
        with self.assertRaises(DomainError):
            laplacian_fd(lambda p: p.rho, EdgePoint('0.1', '3.1415926535'), self.steps, geometry='crack')

    def test_face_guard_follows_the_geometry(self):
        point = EdgePoint('0.1', '1.6')
        self.assertAlmostEqual(laplacian_fd(lambda p: p.rho ** 2, point, self.steps, geometry='crack'), 4.0, places=8)
        # 1.6 lies past the notch face at pi/2
        with self.assertRaises(DomainError):
            laplacian_fd(lambda p: p.rho ** 2, point, self.steps, geometry='vnotch90')
        with self.assertRaises(DomainError):
            laplacian_fd(lambda p: p.rho ** 2, point, self.steps, bounds=('-1', '1.5'))

    def test_wedge_is_required(self):
        with self.assertRaises(TypeError):
            laplacian_fd(lambda p: p.rho, EdgePoint('0.1', '0'), self.steps)


class ResidualOrderTests(SimpleTestCase):

    def slope(self, geometry, K, mode):
        spec = SeriesSpec(geometry, j=1, K=K, mode=mode)
        return residual_slope(spec, spec.build_table(), RHO_RANGE, 16)

    def assert_orders(self, geometry, mode):
        slopes = []
        for K in range(5):
            study = self.slope(geometry, K, mode)
            self.assertAlmostEqual(study.slope, study.expected, delta=0.3, msg=f"{geometry} K={K}")
            slopes.append(study.slope)
        self.assertEqual(slopes, sorted(slopes))
        self.assertEqual(len(set(slopes)), len(slopes))
        return slopes

    def test_crack_orders(self):
        slopes = self.assert_orders('crack', 2)
        self.assertAlmostEqual(slopes[4], 3.5, delta=0.3)

    def test_notch_orders(self):
        slopes = self.assert_orders('vnotch90', 0)
        self.assertAlmostEqual(slopes[0], -1 / 3, delta=0.3)
        self.assertAlmostEqual(slopes[3], 8 / 3, delta=0.3)

    def test_probe_points_are_interior(self):
        for geometry in ('crack', 'vnotch90'):
            spec = SeriesSpec(geometry)
            lo, hi = float(spec.geometry.phi1) * 3.141592653589793, float(spec.geometry.phi2) * 3.141592653589793
            for phi, _ in probe_points(spec):
                self.assertTrue(lo < phi < hi)

    def test_sweep_preconditions(self):
        spec = SeriesSpec('crack', j=1, K=0)
        table = spec.build_table()
        with self.assertRaises(DomainError):
            residual_slope(spec, table, ('1e-3', '0.2'), 16)
        with self.assertRaises(DomainError):
            residual_slope(spec, table, RHO_RANGE, 4)
        with self.assertRaises(DomainError):
            residual_slope(spec, table, ('1e-2', '1e-3'), 16)


class FaceDerivativeTests(SimpleTestCase):
    """The summed series keeps a zero normal derivative on both wedge faces."""

    def test_normal_derivative_vanishes_on_the_faces(self):
        cases = [('crack', 'primal', 2), ('crack', 'dual', 0), ('vnotch90', 'primal', 0), ('vnotch90', 'dual', 2)]
        for geometry, kind, mode in cases:
            spec = SeriesSpec(geometry, j=1, K=4, mode=mode, kind=kind)
            evaluator = SeriesEvaluator(spec, spec.build_table())
            lo, hi = evaluator.bounds

            def tau(phi):
                return evaluator.tau(EdgePoint('0.05', phi, '0.4'), check=False)

            with mpmath.workdps(60):
                step = mpmath.mpf('1e-20')
                lower = (tau(lo + step) - tau(lo)) / step
                upper = (tau(hi) - tau(hi - step)) / step
                middle = lo + (hi - lo) * mpmath.mpf('0.3')
                inside = (tau(middle + step) - tau(middle - step)) / (2 * step)
            self.assertLess(abs(lower), 1e-15, f"{geometry} {kind} lower face")
            self.assertLess(abs(upper), 1e-15, f"{geometry} {kind} upper face")
            self.assertGreater(abs(inside), 1e-6, f"{geometry} {kind} interior")


class SeriesFormTests(SimpleTestCase):

    def test_eval_form(self):
        form = EvalForm(data={'geometry': 'crack', 'kind': 'primal', 'j': '1', 'K': '0', 'mode': '0',
                              'R': 'inf', 'rho': '0.25', 'phi': '1', 'theta': '0'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertTrue(mpmath.isinf(form.to_spec().R))

    def test_radius_rejects_garbage(self):
        form = EvalForm(data={'geometry': 'crack', 'kind': 'primal', 'j': '1', 'K': '0', 'mode': '0',
                              'R': 'wide', 'rho': '0.25', 'phi': '1', 'theta': '0'})
        self.assertFalse(form.is_valid())
        self.assertIn('R', form.errors)

    def test_residual_form_bounds(self):
        data = {'geometry': 'crack', 'kind': 'primal', 'j': '1', 'K': '0', 'mode': '0', 'R': '1',
                'rho_min': '1e-3', 'rho_max': '0.5', 'samples': '16'}
        self.assertFalse(ResidualForm(data=data).is_valid())
        data['rho_max'] = '1e-2'
        form = ResidualForm(data=data)
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(str(form.cleaned_data['tolerance']), '0.3')


class EvalCommandTests(SimpleTestCase):

    def run_eval(self, **options):
        out = StringIO()
        call_command('shadows_eval', stdout=out, **options)
        return json.loads(out.getvalue())

    def test_leading_term(self):
        result = self.run_eval(geometry='crack', j='1', K='0', rho='0.25', phi='3.14159265', theta='0',
                               mode='0', R='1')
        self.assertAlmostEqual(result['tau'], 0.5, delta=1e-9)

    def test_first_shadow_with_breakdown(self):
        result = self.run_eval(K='1', rho='0.04', phi='3.14159265', breakdown=True)
        self.assertAlmostEqual(result['tau'], 0.202, delta=1e-9)
        self.assertEqual([(t['h'], t['f']) for t in result['terms']], [(0, 0), (0, 1)])
        self.assertAlmostEqual(sum(t['value'] for t in result['terms']), result['tau'], places=12)

    def test_domain_error_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_eval(rho='1.5', phi='0')
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            self.run_eval(rho='0.1', phi='2.5', geometry='vnotch90')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_flag_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_eval(rho='abc', phi='0')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_resonant_dual_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_eval(kind='dual', j='2', K='2', rho='0.1', phi='0')
        self.assertEqual(ctx.exception.returncode, 2)


class ResidualCommandTests(SimpleTestCase):

    def run_residual(self, **options):
        out = StringIO()
        call_command('shadows_residual', stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def test_converging_series_exits_0(self):
        output = self.run_residual(geometry='crack', j='1', K='4', mode='2')
        lines = output.strip().splitlines()
        self.assertEqual(lines[0], 'rho,abs_laplacian')
        self.assertEqual(len(lines), 1 + 16 + 1)
        summary = json.loads(lines[-1])
        self.assertAlmostEqual(summary['slope'], 3.5, delta=0.3)
        self.assertEqual(summary['expected'], 3.5)

    def test_leading_term_only(self):
        summary = json.loads(self.run_residual(K='0').strip().splitlines()[-1])
        self.assertAlmostEqual(summary['slope'], -0.5, delta=0.3)

    def test_csv_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'sweep.csv'
            output = self.run_residual(K='2', mode='2', samples='10', csv=str(target))
            with target.open(newline='') as handle:
                rows = list(csv.reader(handle))
        self.assertEqual(len(rows), 11)
        self.assertLess(float(rows[1][1]), float(rows[-1][1]))
        self.assertIn('slope', json.loads(output))

    def test_unwritable_csv_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'missing' / 'sweep.csv'
            with self.assertRaises(CommandError) as ctx:
                self.run_residual(K='0', samples='8', csv=str(target))
            self.assertFalse(target.exists())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_tolerance_exceeded_exits_1(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_residual(K='2', mode='2', tolerance='0')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_rho_max_beyond_radius_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_residual(rho_max='0.2')
        self.assertEqual(ctx.exception.returncode, 2)

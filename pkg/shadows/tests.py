import json
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from django.urls import reverse

from algebra.services.exactnum import ExtScalar, ZERO
from algebra.services.trigpoly import TrigPoly
from shadows.forms import GenerateForm, parse_j_list
from shadows.models import ShadowRecord
from shadows.services.geometry import (
    CRACK, VNOTCH90, UnknownGeometry, eigenfunction, eigenvalue, get_geometry, is_neumann_eigen,
)
from shadows.services.persistence import store_table
from shadows.services.recursion import (
    Kind, Layout, MissingDependency, ResonantTerm, ShadowKey, ShadowTable, apply_neumann, build_rhs,
    build_table, family_keys, helmholtz_particular, solve_shadow,
)


def assert_solves_its_equation(test, table, key):
    g = table.geometry
    y = table[key]
    lam = key.frequency(g)
    test.assertEqual(y.scale(lam * lam) + y.diff(2), build_rhs(key, table), str(key))
    dy = y.diff()
    for endpoint in g.endpoints:
        test.assertEqual(dy.eval_exact(endpoint), ZERO, f"{key} at {endpoint}*pi")


class GeometryTests(SimpleTestCase):

    def test_eigenvalues(self):
        self.assertEqual(eigenvalue(CRACK, 3), Fraction(3, 2))
        self.assertEqual(eigenvalue(VNOTCH90, 3), Fraction(2))
        self.assertEqual(eigenvalue(VNOTCH90, 1), Fraction(2, 3))
        with self.assertRaises(ValueError):
            eigenvalue(CRACK, 0)

    def test_eigenfunction_examples(self):
        self.assertEqual(eigenfunction(CRACK, 1), TrigPoly.sin(2, 1))
        # cos(φ + π) normalized by its cosine coefficient
        self.assertEqual(eigenfunction(CRACK, 2), TrigPoly.cos(2, 2))
        self.assertEqual(
            eigenfunction(VNOTCH90, 2),
            TrigPoly(3, {4: (1, ExtScalar(0, Fraction(-1, 3)))}),
        )

    def test_eigenfunctions_satisfy_neumann_and_helmholtz(self):
        for g in (CRACK, VNOTCH90):
            for j in range(1, 21):
                y = eigenfunction(g, j)
                alpha = eigenvalue(g, j)
                self.assertTrue((y.scale(alpha * alpha) + y.diff(2)).is_zero())
                for endpoint in g.endpoints:
                    self.assertEqual(y.diff().eval_exact(endpoint), ZERO, f"{g} j={j}")

    def test_is_neumann_eigen(self):
        self.assertTrue(is_neumann_eigen(CRACK, Fraction(3, 2)))
        self.assertTrue(is_neumann_eigen(CRACK, 0))
        self.assertFalse(is_neumann_eigen(CRACK, Fraction(1, 3)))
        self.assertTrue(is_neumann_eigen(VNOTCH90, Fraction(4, 3)))
        self.assertFalse(is_neumann_eigen(VNOTCH90, Fraction(1, 2)))
        self.assertFalse(is_neumann_eigen(VNOTCH90, Fraction(-2, 3)))

    def test_unknown_geometry(self):
        with self.assertRaises(UnknownGeometry):
            get_geometry('lshape')


class ShadowKeyTests(SimpleTestCase):

    def test_validation(self):
        with self.assertRaises(ValueError):
            ShadowKey('primal', 1, 1, 0)
        with self.assertRaises(ValueError):
            ShadowKey('primal', 0, 0, 0)

    def test_frequency_and_dependencies(self):
        key = ShadowKey('dual', 2, 1, 2)
        self.assertEqual(key.frequency(CRACK), Fraction(7, 2))
        self.assertEqual(
            key.dependencies(),
            [ShadowKey('dual', 2, 1, 1), ShadowKey('dual', 2, 1, 0), ShadowKey('dual', 0, 1, 2)],
        )
        self.assertEqual(key.symbol, 'psi_{2,1,2}')
        self.assertEqual(str(ShadowKey(Kind.PRIMAL, 0, 1, 1)), 'primal j=1 h=0 f=1')

    def test_family_keys_triangular(self):
        keys = family_keys('primal', 1, 4, 4, max_order=4)
        self.assertEqual(len(keys), 5 + 3 + 1)
        self.assertTrue(all(k.h + k.f <= 4 for k in keys))


class RecursionStepTests(SimpleTestCase):

    def test_first_radial_shadow_of_crack(self):
        table = ShadowTable(CRACK)
        key = ShadowKey('primal', 0, 1, 1)
        self.assertEqual(solve_shadow(key, CRACK, table), TrigPoly.sin(2, 1, Fraction(1, 4)))

    def test_rhs_requires_neighbours(self):
        with self.assertRaises(MissingDependency):
            build_rhs(ShadowKey('primal', 0, 1, 1), ShadowTable(CRACK))

    def test_particular_solution(self):
        rhs = TrigPoly.sin(2, 3, 2)
        self.assertEqual(helmholtz_particular(Fraction(3, 2) + 1, rhs), TrigPoly.sin(2, 3, Fraction(1, 2)))
        with self.assertRaises(ResonantTerm) as ctx:
            helmholtz_particular(Fraction(3, 2), rhs)
        self.assertEqual(ctx.exception.frequency, Fraction(3, 2))

    def test_neumann_closure_adds_homogeneous_pair(self):
        particular = TrigPoly.sin(3, 1)
        closed = apply_neumann(Fraction(5, 3), particular, VNOTCH90)
        self.assertNotEqual(closed, particular)
        for endpoint in VNOTCH90.endpoints:
            self.assertEqual(closed.diff().eval_exact(endpoint), ZERO)
        self.assertEqual(closed.coefficient(1), particular.coefficient(1))

    def test_degenerate_closure_with_zero_data(self):
        closed = apply_neumann(Fraction(1, 2), TrigPoly.zero(2), CRACK)
        self.assertTrue(closed.is_zero())


class BuildTableTests(SimpleTestCase):

    def test_triangular_primal_layout(self):
        table = build_table(CRACK, 'primal', [1], 10, 10)
        self.assertEqual(len(table), 36)
        last = table[ShadowKey('primal', 0, 1, 10)]
        self.assertEqual(last.coefficient(19)[0], ExtScalar(Fraction(-46189, 268435456)))
        self.assertEqual(table.closure_violations(), [])

    def test_rectangular_layout_is_opt_in(self):
        self.assertEqual(len(family_keys('primal', 1, 10, 10)), 36)
        self.assertEqual(len(family_keys('primal', 1, 10, 10, layout='rectangular')), 66)
        self.assertEqual(len(family_keys('dual', 1, 4, 4, layout=Layout.TRIANGULAR)), 9)
        self.assertEqual(len(family_keys('primal', 1, 10, 10, max_order=4, layout='rectangular')), 9)

    def test_table_iterates_over_keys(self):
        table = build_table(CRACK, 'primal', [1], 2, 2)
        self.assertEqual(
            list(table),
            [ShadowKey('primal', 0, 1, 0), ShadowKey('primal', 0, 1, 1), ShadowKey('primal', 0, 1, 2),
             ShadowKey('primal', 2, 1, 0)],
        )
        self.assertEqual(list(table), table.keys())

    def test_anchor_entries(self):
        crack = build_table(CRACK, 'primal', [1], 2, 1, layout='rectangular')
        self.assertEqual(crack[ShadowKey('primal', 2, 1, 0)], TrigPoly.sin(2, 1, Fraction(-1, 6)))
        self.assertEqual(
            crack[ShadowKey('primal', 2, 1, 1)],
            TrigPoly(2, {1: (Fraction(-1, 8), 0), 3: (Fraction(7, 60), 0)}),
        )
        dual = build_table(CRACK, 'dual', [1], 2, 1)
        self.assertEqual(dual[ShadowKey('dual', 0, 1, 1)], TrigPoly.sin(2, 3, Fraction(-1, 4)))
        self.assertEqual(dual[ShadowKey('dual', 2, 1, 0)], TrigPoly.sin(2, 1, Fraction(-1, 2)))
        notch = build_table(VNOTCH90, 'primal', [1], 2, 0)
        self.assertEqual(
            notch[ShadowKey('primal', 2, 1, 0)],
            TrigPoly(3, {2: (Fraction(-3, 20), ExtScalar(0, Fraction(-1, 20)))}),
        )

    def test_rectangular_dual_layout(self):
        table = build_table(CRACK, 'dual', [1], 4, 4)
        self.assertEqual(len(table), 15)

    def test_empty_j_list(self):
        self.assertEqual(len(build_table(VNOTCH90, 'primal', [], 4, 4)), 0)

    def test_odd_max_h_rejected(self):
        with self.assertRaises(ValueError):
            build_table(CRACK, 'primal', [1], 3, 2)

    def test_every_entry_solves_its_equation(self):
        cases = [
            (CRACK, 'primal', [1, 2, 3]),
            (CRACK, 'dual', [1, 3]),
            (VNOTCH90, 'primal', [1, 2, 3, 4]),
            (VNOTCH90, 'dual', [1, 2]),
        ]
        for g, kind, j_list in cases:
            table = build_table(g, kind, j_list, 4, 4)
            for key, poly in table.items():
                assert_solves_its_equation(self, table, key)
                bound = eigenvalue(g, key.j) + key.h + key.f
                self.assertLessEqual(poly.max_frequency(), bound, str(key))

    def test_crack_primal_odd_j_is_a_sine_series(self):
        table = build_table(CRACK, 'primal', [1, 3], 4, 4)
        for key, poly in table.items():
            for k, trig, _ in poly.iter_terms():
                self.assertEqual(trig, 'sin', str(key))
                self.assertEqual(k % 2, 1, str(key))

    def test_integer_exponent_duals_resonate(self):
        with self.assertRaises(ResonantTerm) as ctx:
            build_table(CRACK, 'dual', [2], 0, 4)
        self.assertIsNotNone(ctx.exception.key)
        with self.assertRaises(ResonantTerm):
            build_table(VNOTCH90, 'dual', [3], 0, 4)

    def test_memo_is_shared(self):
        table = ShadowTable(VNOTCH90)
        build_table(VNOTCH90, 'primal', [1], 2, 2, table=table)
        size = len(table)
        build_table(VNOTCH90, 'primal', [1], 2, 2, table=table)
        self.assertEqual(len(table), size)


class InvariantSuiteTests(SimpleTestCase):
    """Every j=1 entry up to h, f <= 10 on the full rectangular window."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tables = {
            (g.name, kind): build_table(g, kind, [1], 10, 10, layout='rectangular')
            for g in (CRACK, VNOTCH90)
            for kind in ('primal', 'dual')
        }

    def test_window_is_complete(self):
        for table in self.tables.values():
            self.assertEqual(len(table), 66)
            self.assertEqual(table.closure_violations(), [])

    def test_equation_boundary_and_frequency_bound(self):
        for (name, kind), table in self.tables.items():
            g = table.geometry
            for key, poly in table.items():
                assert_solves_its_equation(self, table, key)
                bound = eigenvalue(g, key.j) + key.h + key.f
                self.assertLessEqual(poly.max_frequency(), bound, f"{name} {key}")

    def test_no_kernel_term_at_degenerate_levels(self):
        for (name, kind), table in self.tables.items():
            g = table.geometry
            degenerate = [key for key in table if table.solve_log[key].degenerate]
            self.assertTrue(degenerate, f"{name} {kind}")
            for key in degenerate:
                self.assertTrue(table.solve_log[key].kernel_dropped)
                k = g.to_numerator(abs(key.frequency(g)))
                self.assertEqual(table[key].coefficient(k), (ZERO, ZERO), f"{name} {key}")

    def test_degenerate_levels_follow_the_spectrum(self):
        # The eigenfunction itself is stored as is, without a closure.
        crack = self.tables[(CRACK.name, 'primal')]
        notch = self.tables[(VNOTCH90.name, 'primal')]
        for table in (crack, notch):
            self.assertFalse(table.solve_log[ShadowKey('primal', 0, 1, 0)].degenerate)
        for key in crack:
            if key.h or key.f:
                self.assertTrue(crack.solve_log[key].degenerate, str(key))
        for key in notch:
            if key.h or key.f:
                self.assertEqual(notch.solve_log[key].degenerate, (key.h + key.f) % 2 == 0, str(key))


class GenerateFormTests(SimpleTestCase):

    def test_j_lists(self):
        self.assertEqual(parse_j_list('3'), [3])
        self.assertEqual(parse_j_list('5, 1,3'), [1, 3, 5])
        self.assertEqual(parse_j_list('1-4'), [1, 2, 3, 4])

    def test_rejects_odd_max_h(self):
        form = GenerateForm(data={'geometry': 'crack', 'kind': 'primal', 'j': '1',
                                  'max_h': '3', 'max_f': '0', 'format': 'dsl'})
        self.assertFalse(form.is_valid())
        self.assertIn('max_h', form.errors)

    def test_rejects_unknown_geometry_and_j_zero(self):
        form = GenerateForm(data={'geometry': 'lshape', 'kind': 'primal', 'j': '0',
                                  'max_h': '0', 'max_f': '0', 'format': 'dsl'})
        self.assertFalse(form.is_valid())
        self.assertIn('geometry', form.errors)
        self.assertIn('j', form.errors)

    def test_layout(self):
        data = {'geometry': 'crack', 'kind': 'primal', 'j': '1', 'max_h': '10', 'max_f': '10', 'format': 'dsl'}
        form = GenerateForm(data=data)
        self.assertTrue(form.is_valid(), form.errors)
        self.assertIsNone(form.table_kwargs()['layout'])
        form = GenerateForm(data={**data, 'layout': 'rectangular'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.table_kwargs()['layout'], 'rectangular')
        self.assertFalse(GenerateForm(data={**data, 'layout': 'square'}).is_valid())


class GenerateCommandTests(SimpleTestCase):

    def generate(self, **options):
        out = StringIO()
        call_command('shadows_generate', stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def test_published_primal_layout(self):
        output = self.generate(geometry='crack', kind='primal', j='1', max_h='10', max_f='10', format='dsl')
        self.assertEqual(output.count('[crack primal'), 36)
        self.assertIn('-46189/268435456 sin 19/2', output)

    def test_rectangular_command_layout(self):
        output = self.generate(geometry='crack', j='1', max_h='2', max_f='2', layout='rectangular', format='dsl')
        self.assertEqual(output.count('[crack primal'), 6)
        with self.assertRaises(CommandError) as ctx:
            self.generate(geometry='crack', j='1', layout='round')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_single_entry(self):
        output = self.generate(geometry='crack', j='1', format='dsl')
        self.assertEqual(output, '[crack primal j=1 h=0 f=0]\n  1 sin 1/2\n')

    def test_notch_dual_eigenfunction(self):
        output = self.generate(geometry='vnotch90', kind='dual', j='2', format='dsl')
        self.assertIn('1 sin 4/3 ; 0-1/3r3 cos 4/3', output)

    def test_json_output(self):
        data = json.loads(self.generate(geometry='vnotch90', j='1-2', max_f='2', format='json'))
        self.assertEqual(len(data['entries']), 6)
        self.assertEqual(data['entries'][0]['freq_den'], 3)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'out' / 'table.tex'
            self.generate(geometry='crack', j='1', max_f='2', format='latex', output=str(target))
            self.assertIn('\\begin{align*}', target.read_text())

    def test_bad_input_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.generate(geometry='crack', j='1', max_h='3')
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            self.generate(geometry='sphere', j='1')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_unwritable_output_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            blocker = Path(tmp) / 'taken'
            blocker.write_text('')
            with self.assertRaises(CommandError) as ctx:
                self.generate(geometry='crack', j='1', format='dsl', output=str(blocker / 'table.dsl'))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_resonant_family_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.generate(geometry='crack', kind='dual', j='2', max_f='4')
        self.assertEqual(ctx.exception.returncode, 2)


class ShadowStoreTests(TestCase):

    def test_store_upserts(self):
        table = build_table(CRACK, 'primal', [1], 0, 2)
        self.assertEqual(store_table(table), 3)
        self.assertEqual(store_table(table), 3)
        self.assertEqual(ShadowRecord.objects.count(), 3)
        record = ShadowRecord.objects.get(geometry='crack', kind='primal', j=1, h=0, f=1)
        self.assertEqual(record.to_poly(), TrigPoly.sin(2, 1, Fraction(1, 4)))
        self.assertEqual(record.key, ShadowKey('primal', 0, 1, 1))
        self.assertIn('1/4 sin 1/2', record.dsl)

    def test_generate_store_flag(self):
        call_command('shadows_generate', geometry='vnotch90', j='1', max_f='1', format='dsl',
                     store=True, stdout=StringIO(), stderr=StringIO())
        self.assertEqual(ShadowRecord.objects.filter(geometry='vnotch90').count(), 2)


class ShadowViewTests(TestCase):

    def test_table_document_json(self):
        url = reverse('shadows:table_document', args=['crack', 'primal', 1])
        response = self.client.get(url, {'max_f': '2'})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(len(response.json()['entries']), 3)

    def test_table_document_text(self):
        url = reverse('shadows:table_document', args=['crack', 'primal', 1])
        response = self.client.get(url, {'format': 'dsl'})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.content.decode(), '[crack primal j=1 h=0 f=0]\n  1 sin 1/2\n')

    def test_invalid_request(self):
        url = reverse('shadows:table_document', args=['cone', 'primal', 1])
        self.assertEqual(self.client.get(url).status_code, 400)

    def test_resonant_family(self):
        url = reverse('shadows:table_document', args=['crack', 'dual', 2])
        self.assertEqual(self.client.get(url, {'max_f': '4'}).status_code, 422)

    def test_record_list(self):
        store_table(build_table(CRACK, 'primal', [1], 0, 1))
        response = self.client.get(reverse('shadows:record_list'), {'j': '1'})
        self.assertEqual(response.json()['count'], 2)
        response = self.client.get(reverse('shadows:record_list'), {'geometry': 'vnotch90'})
        self.assertEqual(response.json()['count'], 0)

    def test_record_list_rejects_bad_filters(self):
        for query in ({'j': 'abc'}, {'j': '0'}, {'geometry': 'cone'}, {'kind': 'mixed'}):
            response = self.client.get(reverse('shadows:record_list'), query)
            self.assertEqual(response.status_code, 400, query)
            self.assertIn('errors', response.json())

    def test_table_document_layout(self):
        url = reverse('shadows:table_document', args=['crack', 'primal', 1])
        triangle = self.client.get(url, {'max_h': '2', 'max_f': '2'}).json()
        rectangle = self.client.get(url, {'max_h': '2', 'max_f': '2', 'layout': 'rectangular'}).json()
        self.assertEqual((len(triangle['entries']), len(rectangle['entries'])), (4, 6))

import json
import random
import tempfile
from collections import Counter
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.conf import settings
from django.contrib import admin
from django.contrib.auth.models import User
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import RequestFactory, SimpleTestCase, TestCase
from django.urls import reverse

from algebra.services.exactnum import ExtScalar
from algebra.services.trigpoly import TrigPoly
from goldens.errata import ERRATA_BY_KEY, KNOWN_ERRATA, PROPAGATED, TYPO, erratum_for, typo_keys
from goldens.models import VerificationRun
from goldens.services.corpus import CorpusError, filter_entries, load_corpus
from goldens.services.dsl import (
    EmitFormat, GoldenEntry, ParseError, emit_document, emit_entry, entry_from_json, entry_to_json,
    latex_poly, parse_document, parse_entry,
)
from goldens.services.verifier import (
    first_differing_term, golden_table, substitution_check, substitution_failures, verify,
    verify_corpus,
)
from shadows.services.geometry import CRACK, VNOTCH90
from shadows.services.recursion import ShadowKey, build_table

CORPUS_DIR = Path(settings.SHADOW_GOLDEN_DIR)


def random_entry(rng):
    geometry = rng.choice(['crack', 'vnotch90'])
    q = 2 if geometry == 'crack' else 3
    terms = {}
    for k in rng.sample(range(0, 25), rng.randint(0, 5)):
        pair = []
        for _ in range(2):
            a = Fraction(rng.randint(-999, 999), rng.randint(1, 10 ** rng.randint(0, 9)))
            b = Fraction(rng.randint(-99, 99), rng.randint(1, 999)) if geometry == 'vnotch90' and rng.random() < 0.5 else 0
            pair.append(ExtScalar(a, b) if rng.random() < 0.7 else ExtScalar(0))
        terms[k] = tuple(pair)
    return GoldenEntry(
        geometry, rng.choice(['primal', 'dual']),
        2 * rng.randint(0, 5), rng.randint(1, 20), rng.randint(0, 10),
        TrigPoly(q, terms),
    )


class DslParseTests(SimpleTestCase):

    def test_parse_entry(self):
        entry = parse_entry('[vnotch90 primal j=1 h=0 f=0]\n  1 sin 2/3 ; 0+1/3r3 cos 2/3\n')
        self.assertEqual(entry.key, ShadowKey('primal', 0, 1, 0))
        self.assertEqual(entry.poly, TrigPoly(3, {2: (1, ExtScalar(0, Fraction(1, 3)))}))

    def test_reducible_frequency_and_duplicates(self):
        entry = parse_entry('[crack dual j=1 h=2 f=0]\n  1/2 cos 2/2 ; 1/2 cos 1 / 1 ; -1/20-1/20r3 sin 4/2')
        self.assertEqual(entry.poly.coefficient(2), (ExtScalar(0), ExtScalar(1)))
        self.assertEqual(entry.poly.coefficient(4)[0], ExtScalar(Fraction(-1, 20), Fraction(-1, 20)))

    def test_zero_entry(self):
        entries = parse_document('[crack primal j=2 h=2 f=0]\n  0\n[crack primal j=2 h=2 f=1]\n  1 cos 0/2\n')
        self.assertTrue(entries[0].poly.is_zero())
        self.assertEqual(entries[1].poly, TrigPoly.cos(2, 0))

    def test_comments_and_section_labels(self):
        text = '# header\n## crack primal j=1\n[crack primal j=1 h=0 f=0]\n  1 sin 1/2 # eigenfunction\n'
        entry = parse_document(text, source='crack_primal')[0]
        self.assertEqual(entry.source, 'crack primal j=1')
        self.assertEqual(parse_document('# nothing\n'), [])

    def test_error_location(self):
        with self.assertRaises(ParseError) as ctx:
            parse_entry('[crack primal j=1 h=0 f=0]\n  1 tan 1/2')
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 5))
        self.assertIn('sin', ctx.exception.expected)

    def test_zero_coefficient_denominator_location(self):
        with self.assertRaises(ParseError) as ctx:
            parse_entry('[crack primal j=1 h=0 f=0]\n  1+1/0r3 cos 1/2')
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 5))
        self.assertIn('zero denominator', str(ctx.exception))

    def test_rejections(self):
        bad = [
            '[crack primal j=1 h=1 f=0]\n  1 sin 1/2',
            '[crack primal j=0 h=0 f=0]\n  1 sin 1/2',
            '[sphere primal j=1 h=0 f=0]\n  1 sin 1/2',
            '[crack twin j=1 h=0 f=0]\n  1 sin 1/2',
            '[crack primal j=1 h=0 f=0]\n  1 sin 1/3',
            '[crack primal j=1 h=0 f=0]\n  1 sin 1/0',
            '[crack primal j=1 h=0 f=0]\n  1/0 sin 1/2',
            '[crack primal j=1 h=0 f=0]\n  1+1/0r3 cos 1/2',
            '[crack primal j=1 h=0 f=0]\n  -3/00 sin 1/2',
            '[crack primal j=1 h=0 f=0]\n  1 sin 1/2 ;',
            '[crack primal j=1 h=0 f=0]\n  1 sin 1/2 trailing',
            '',
        ]
        for text in bad:
            with self.assertRaises(ParseError, msg=text):
                parse_entry(text)

    def test_emit_parse_emit_is_stable(self):
        rng = random.Random(1019)
        for _ in range(1000):
            entry = random_entry(rng)
            text = emit_entry(entry, EmitFormat.DSL)
            again = parse_entry(text)
            self.assertEqual(again, entry, text)
            self.assertEqual(emit_entry(again), text)

    def test_json_entry(self):
        entry = parse_entry('[vnotch90 dual j=2 h=0 f=0]\n  1 sin 4/3 ; 0-1/3r3 cos 4/3')
        data = entry_to_json(entry)
        self.assertEqual(data['kind'], 'dual')
        self.assertEqual(data['terms'], [{'num': 4, 'sin': ['1', '0'], 'cos': ['0', '-1/3']}])
        self.assertEqual(entry_from_json(json.loads(json.dumps(data))), entry)

    def test_latex(self):
        poly = TrigPoly(2, {1: (Fraction(1, 12), 0), 3: (Fraction(-3, 32), 0)})
        self.assertEqual(
            latex_poly(poly),
            r'\frac{1}{12}\sin \frac{\varphi }{2} - \frac{3}{32}\sin \frac{3\varphi }{2}',
        )
        self.assertEqual(latex_poly(TrigPoly.cos(3, 3, ExtScalar(1, -2))), r'\left(1 - 2\sqrt{3}\right)\cos \varphi')
        self.assertEqual(latex_poly(TrigPoly.zero(3)), '0')

    def test_text_and_document_order(self):
        entries = [
            parse_entry('[crack primal j=1 h=0 f=1]\n  1/4 sin 1/2'),
            parse_entry('[crack primal j=1 h=0 f=0]\n  1 sin 1/2'),
        ]
        text = emit_document(entries, 'text')
        self.assertEqual(text, 'phi_{0,1,0} = 1*sin(1/2*phi)\nphi_{0,1,1} = 1/4*sin(1/2*phi)\n')
        self.assertEqual(emit_document(entries), emit_document(list(reversed(entries))))
        latex = emit_document(entries, EmitFormat.LATEX)
        self.assertEqual(latex.count(r'\begin{align*}'), 1)


class CorpusTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.corpus = load_corpus(CORPUS_DIR)

    def test_corpus_size(self):
        counts = Counter((e.geometry, e.kind.value) for e in self.corpus)
        self.assertEqual(counts[('crack', 'primal')], 161)
        self.assertEqual(counts[('crack', 'dual')], 45)
        self.assertEqual(counts[('vnotch90', 'primal')], 191)
        self.assertEqual(counts[('vnotch90', 'dual')], 25)
        self.assertEqual(len(self.corpus), 422)

    def test_family_extents(self):
        families = Counter((e.geometry, e.kind.value, e.j) for e in self.corpus)
        self.assertEqual(families[('crack', 'primal', 1)], 36)
        self.assertEqual(families[('crack', 'primal', 21)], 1)
        self.assertEqual(families[('crack', 'dual', 5)], 15)
        self.assertEqual(families[('vnotch90', 'primal', 4)], 28)
        self.assertEqual(families[('vnotch90', 'dual', 4)], 5)
        self.assertNotIn(('crack', 'dual', 2), families)

    def test_filter_entries(self):
        selected = filter_entries(self.corpus, 'vnotch90', 'dual', [2, 4])
        self.assertEqual(len(selected), 10)
        self.assertEqual(len(filter_entries(self.corpus, 'crack', j=1)), 36 + 15)

    def test_load_is_cached(self):
        self.assertEqual(load_corpus(CORPUS_DIR), self.corpus)

    def test_single_file(self):
        entries = load_corpus(CORPUS_DIR / 'crack_dual.dsl')
        self.assertEqual(len(entries), 45)

    def test_missing_or_empty_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CorpusError):
                load_corpus(tmp)
            with self.assertRaises(CorpusError):
                load_corpus(Path(tmp) / 'absent')

    def test_duplicate_entries(self):
        with tempfile.TemporaryDirectory() as tmp:
            for name in ('a.dsl', 'b.dsl'):
                (Path(tmp) / name).write_text('[crack primal j=1 h=0 f=0]\n  1 sin 1/2\n')
            with self.assertRaises(CorpusError):
                load_corpus(tmp)

    def test_parse_errors_name_the_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            (Path(tmp) / 'broken.dsl').write_text('[crack primal j=1 h=0 f=0]\n  1 sin\n')
            with self.assertRaisesMessage(CorpusError, 'broken.dsl'):
                load_corpus(tmp)

    def test_undecodable_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            (Path(tmp) / 'binary.dsl').write_bytes(b'\xff\xfe[crack primal j=1 h=0 f=0]\n')
            with self.assertRaisesMessage(CorpusError, 'binary.dsl'):
                load_corpus(tmp)

    def test_zero_denominator_in_a_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            (Path(tmp) / 'zero.dsl').write_text('[crack primal j=1 h=0 f=0]\n  1/0 sin 1/2\n')
            with self.assertRaisesMessage(CorpusError, 'zero.dsl'):
                load_corpus(tmp)


class ErrataTests(SimpleTestCase):

    def test_registry(self):
        self.assertEqual(len(KNOWN_ERRATA), 22)
        self.assertEqual(len(ERRATA_BY_KEY), 22)
        self.assertEqual(len(typo_keys()), 9)
        self.assertEqual(erratum_for(('crack', 'primal', 17, 2, 0)).category, TYPO)
        self.assertEqual(erratum_for(['vnotch90', 'primal', 4, 4, 3]).category, PROPAGATED)
        self.assertIsNone(erratum_for(('crack', 'primal', 1, 0, 0)))


class VerifierTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.corpus = load_corpus(CORPUS_DIR)
        cls.strict = verify_corpus(cls.corpus, strict=True)
        cls.lenient = verify_corpus(cls.corpus)

    def test_mismatches_are_exactly_the_errata(self):
        keys = {m.corpus_key for m in self.strict.mismatches}
        self.assertEqual(keys, set(ERRATA_BY_KEY))
        self.assertEqual(self.strict.total, 422)
        self.assertEqual(self.strict.matched, 400)

    def test_errata_are_excluded_by_default(self):
        self.assertTrue(self.lenient.ok)
        self.assertEqual(self.lenient.total, 400)
        self.assertEqual({m.corpus_key for m in self.lenient.excluded}, set(ERRATA_BY_KEY))
        self.assertEqual(self.lenient.unexpected_matches, [])

    def test_primal_crack_matches_exactly(self):
        crack = [e for e in self.strict.mismatches if e.entry.geometry == 'crack']
        self.assertEqual([m.corpus_key for m in crack], [('crack', 'primal', 17, 2, 0)])

    def test_substitution_failures_are_the_typos(self):
        failures = substitution_failures(self.corpus)
        self.assertEqual({r.entry.corpus_key for r in failures}, typo_keys())

    def test_every_other_entry_satisfies_neumann(self):
        bad = typo_keys()
        for entry in self.corpus:
            if entry.corpus_key in bad:
                continue
            dy = entry.poly.diff()
            g = CRACK if entry.geometry == 'crack' else VNOTCH90
            for endpoint in g.endpoints:
                self.assertFalse(dy.eval_exact(endpoint), str(entry.corpus_key))

    def test_substitution_check_reports_missing_neighbours(self):
        entry = parse_entry('[crack primal j=1 h=0 f=1]\n  1/4 sin 1/2')
        result = substitution_check(entry, golden_table('crack', [entry]))
        self.assertFalse(result.checked)
        self.assertTrue(result.ok)

    def test_injected_fault(self):
        entries = filter_entries(self.corpus, 'crack', 'primal', 1)
        table = build_table(CRACK, 'primal', [1], 10, 10, max_order=10)
        target = entries[5]
        corrupted = GoldenEntry(target.geometry, target.kind, target.h, target.j, target.f,
                                target.poly + TrigPoly.sin(2, 1, Fraction(1, 10 ** 6)))
        report = verify(table, entries[:5] + [corrupted] + entries[6:])
        self.assertEqual(report.mismatched, 1)
        self.assertEqual(report.mismatches[0].corpus_key, target.corpus_key)
        self.assertIn('sin 1/2', report.mismatches[0].first_difference)

    def test_first_differing_term(self):
        a = TrigPoly(2, {1: (1, 0), 3: (2, 0)})
        b = TrigPoly(2, {1: (1, 0), 3: (2, 1)})
        self.assertEqual(first_differing_term(a, b), 'cos 3/2: expected 0, got 1')
        self.assertIsNone(first_differing_term(a, a))
        self.assertEqual(first_differing_term(a, None), 'missing from generated table')


class VerifyCommandTests(TestCase):

    def verify(self, **options):
        out = StringIO()
        call_command('shadows_verify', stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def test_family_passes(self):
        output = self.verify(geometry='vnotch90', kind='dual')
        self.assertTrue(output.startswith('total=25 matched=25 mismatched=0 excluded=0'))

    def test_errata_listed(self):
        output = self.verify(geometry='crack', kind='primal', j='17')
        self.assertIn('ERRATUM  [crack primal j=17 h=2 f=0]', output)

    def test_strict_fails(self):
        with self.assertRaises(CommandError) as ctx:
            self.verify(geometry='crack', kind='primal', j='17', strict=True)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_oracle(self):
        output = self.verify(geometry='crack', kind='primal', oracle=True)
        self.assertIn('ORACLE-FAIL [crack primal j=17 h=2 f=0] ODE', output)
        self.assertIn('substitution check: 1 of 161 entries fail', output)

    def test_corrupted_file_exits_1(self):
        text = (CORPUS_DIR / 'crack_primal.dsl').read_text()
        corrupted = text.replace('[crack primal j=1 h=0 f=1]\n  1/4 sin 1/2', '[crack primal j=1 h=0 f=1]\n  1/5 sin 1/2', 1)
        self.assertNotEqual(text, corrupted)
        with tempfile.TemporaryDirectory() as tmp:
            (Path(tmp) / 'crack_primal.dsl').write_text(corrupted)
            out = StringIO()
            with self.assertRaises(CommandError) as ctx:
                call_command('shadows_verify', geometry='crack', kind='primal', j='1',
                             golden=tmp, stdout=out, stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)
        lines = [line for line in out.getvalue().splitlines() if line.startswith('MISMATCH')]
        self.assertEqual(len(lines), 1)
        self.assertIn('j=1 h=0 f=1', lines[0])

    def test_empty_corpus_passes(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'empty.dsl'
            path.write_text('# no entries\n')
            output = self.verify(all=True, golden=str(path))
        self.assertIn('total=0', output)

    def test_bad_input_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.verify()
        self.assertEqual(ctx.exception.returncode, 2)
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CommandError) as ctx:
                self.verify(all=True, golden=tmp)
        self.assertEqual(ctx.exception.returncode, 2)

    def test_unreadable_golden_exits_2(self):
        contents = {
            'zero.dsl': '[crack primal j=1 h=0 f=0]\n  1/0 sin 1/2\n'.encode(),
            'binary.dsl': b'\xff\xfe\x00',
        }
        for name, data in contents.items():
            with tempfile.TemporaryDirectory() as tmp:
                path = Path(tmp) / name
                path.write_bytes(data)
                with self.assertRaises(CommandError) as ctx:
                    self.verify(all=True, golden=str(path))
            self.assertEqual(ctx.exception.returncode, 2, name)

    def test_json_summary(self):
        data = json.loads(self.verify(geometry='crack', kind='dual', j='1', json=True))
        self.assertEqual(data['total'], 15)
        self.assertEqual(data['mismatch_keys'], [])

    def test_record(self):
        self.verify(geometry='crack', kind='dual', record=True)
        run = VerificationRun.objects.get()
        self.assertEqual(run.scope, 'crack dual')
        self.assertTrue(run.passed)
        self.assertEqual(run.total, 45)
        run.scope = 'edited'
        with self.assertRaises(ValueError):
            run.save()


class VerificationRunAdminTests(TestCase):

    def test_runs_are_read_only(self):
        model_admin = admin.site._registry[VerificationRun]
        request = RequestFactory().get('/admin/')
        request.user = User.objects.create_superuser('admin', 'admin@example.com', 'pw')
        run = VerificationRun.objects.create(scope='crack dual', golden_dir='corpus', total=45, matched=45, mismatched=0)
        self.assertFalse(model_admin.has_change_permission(request, run))
        self.assertFalse(model_admin.has_delete_permission(request, run))
        self.assertFalse(model_admin.has_delete_permission(request))


class CorpusViewTests(TestCase):

    def test_summary(self):
        data = self.client.get(reverse('goldens:corpus_summary')).json()
        self.assertEqual(data['total'], 422)
        self.assertEqual(data['families']['crack primal j=1'], 36)
        self.assertEqual(len(data['errata']), 22)

    def test_runs(self):
        response = self.client.get(reverse('goldens:run_list'))
        self.assertEqual(response.json(), {'runs': []})

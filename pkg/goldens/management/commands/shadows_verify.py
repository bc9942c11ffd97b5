import json

from django.core.management.base import BaseCommand, CommandError

from goldens.forms import VerifyForm
from goldens.models import VerificationRun
from goldens.services.corpus import CorpusError, default_corpus_dir, filter_entries, load_corpus
from goldens.services.verifier import substitution_failures, verify_corpus
from shadows.forms import form_errors_text
from shadows.services.recursion import SolverError


class Command(BaseCommand):
    help = 'Regenerate tables and compare them exactly with the golden corpus'

    def add_arguments(self, parser):
        parser.add_argument('--geometry', default=None)
        parser.add_argument('--kind', default=None)
        parser.add_argument('--j', default=None)
        parser.add_argument('--all', action='store_true', help='Verify the whole corpus')
        parser.add_argument('--golden', default=None, help='Corpus directory or .dsl file (default: SHADOW_GOLDEN_DIR)')
        parser.add_argument('--strict', action='store_true', help='Count registered errata as mismatches')
        parser.add_argument('--oracle', action='store_true', help='Also run the substitution check on the printed entries')
        parser.add_argument('--record', action='store_true', help='Store the outcome as a VerificationRun')
        parser.add_argument('--json', action='store_true', help='Print the summary as JSON')

    def handle(self, *args, **options):
        form = VerifyForm(data={key: options[key] for key in (
            'geometry', 'kind', 'j', 'all', 'golden', 'strict', 'oracle', 'record',
        )})
        if not form.is_valid():
            raise CommandError(form_errors_text(form), returncode=2)
        data = form.cleaned_data
        golden = data['golden'] or str(default_corpus_dir())

        try:
            corpus = load_corpus(golden)
        except CorpusError as exc:
            raise CommandError(str(exc), returncode=2)
        entries = filter_entries(corpus, data['geometry'], data['kind'], data['j'])

        try:
            report = verify_corpus(entries, strict=data['strict'])
        except SolverError as exc:
            raise CommandError(f"Solver failed at {exc.key}: {exc}", returncode=2)

        if options['json']:
            self.stdout.write(json.dumps(report.summary(), indent=2))
        else:
            self.stdout.write(report.render(), ending='')

        if data['oracle']:
            failures = substitution_failures(entries)
            for result in failures:
                geometry, kind, j, h, f = result.entry.corpus_key
                reasons = ' '.join(name for name, ok in (('ODE', result.ode_ok), ('Neumann', result.neumann_ok)) if not ok)
                self.stdout.write(f"ORACLE-FAIL [{geometry} {kind} j={j} h={h} f={f}] {reasons}")
            self.stdout.write(f"substitution check: {len(failures)} of {len(entries)} entries fail")

        if data['record']:
            VerificationRun.objects.create(
                scope=form.scope(),
                golden_dir=golden,
                strict=data['strict'],
                total=report.total,
                matched=report.matched,
                mismatched=report.mismatched,
                excluded=len(report.excluded),
                report=report.summary(),
            )

        if not report.ok:
            raise CommandError(f"{report.mismatched} of {report.total} entries differ from the golden tables", returncode=1)

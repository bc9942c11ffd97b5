from django.core.management.base import BaseCommand, CommandError

from core.utils import write_document
from goldens.services.dsl import GoldenEntry, emit_document
from shadows.forms import GenerateForm, form_errors_text
from shadows.services.persistence import store_table
from shadows.services.recursion import SolverError
from shadows.tasks import build_tables


class Command(BaseCommand):
    help = 'Generate primal or dual shadow tables as text, LaTeX, JSON or DSL'

    def add_arguments(self, parser):
        parser.add_argument('--geometry', help='crack or vnotch90')
        parser.add_argument('--kind', default='primal', help='primal or dual')
        parser.add_argument('--j', help='Index, comma list or range, e.g. 1 or 1,3,5 or 1-5')
        parser.add_argument('--max-h', default='0', help='Largest (even) theta-derivative order h')
        parser.add_argument('--max-f', default='0', help='Largest radial shadow order f')
        parser.add_argument('--max-order', default=None, help='Keep only entries with h + f <= this')
        parser.add_argument('--layout', default=None,
                            help='triangular or rectangular (default: triangular for primal, rectangular for dual)')
        parser.add_argument('--format', default='text', help='text, latex, json or dsl')
        parser.add_argument('--output', default=None, help='Write to this file instead of stdout')
        parser.add_argument('--store', action='store_true', help='Also upsert the entries as ShadowRecord rows')

    def handle(self, *args, **options):
        form = GenerateForm(data={
            'geometry': options['geometry'],
            'kind': options['kind'],
            'j': options['j'],
            'max_h': options['max_h'],
            'max_f': options['max_f'],
            'max_order': options['max_order'],
            'layout': options['layout'],
            'format': options['format'],
        })
        if not form.is_valid():
            raise CommandError(form_errors_text(form), returncode=2)

        try:
            table = build_tables.delay(**form.table_kwargs())
        except SolverError as exc:
            raise CommandError(f"Solver failed at {exc.key}: {exc}", returncode=2)

        geometry = form.cleaned_data['geometry']
        entries = [GoldenEntry.from_solution(geometry, key, poly) for key, poly in table.items()]
        document = emit_document(entries, form.cleaned_data['format'])
        try:
            path = write_document(document, options['output'], self.stdout)
        except OSError as exc:
            raise CommandError(f"cannot write {options['output']}: {exc}", returncode=2)

        if options['store']:
            count = store_table(table)
            self.stderr.write(f"Stored {count} shadow records")
        if path:
            self.stderr.write(f"Wrote {len(entries)} entries to {path}")

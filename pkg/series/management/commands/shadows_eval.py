import json

from django.core.management.base import BaseCommand, CommandError

from series.forms import EvalForm
from series.services.evaluator import DomainError, SeriesEvaluator, eval_terms
from shadows.forms import form_errors_text
from shadows.services.recursion import SolverError


class Command(BaseCommand):
    help = 'Evaluate the truncated edge expansion at one point (JSON output)'

    def add_arguments(self, parser):
        parser.add_argument('--geometry', default='crack')
        parser.add_argument('--kind', default='primal')
        parser.add_argument('--j', default='1')
        parser.add_argument('--K', default='0', help='Truncation order: all h + f <= K')
        parser.add_argument('--mode', default='0', help='Fourier mode n of A(theta) = cos(n theta)')
        parser.add_argument('--R', default='1', help='Edge radius, or "inf"')
        parser.add_argument('--rho')
        parser.add_argument('--phi')
        parser.add_argument('--theta', default='0')
        parser.add_argument('--breakdown', action='store_true', help='Include per-(h, f) terms')

    def handle(self, *args, **options):
        form = EvalForm(data={key: options[key] for key in (
            'geometry', 'kind', 'j', 'K', 'mode', 'R', 'rho', 'phi', 'theta', 'breakdown',
        )})
        if not form.is_valid():
            raise CommandError(form_errors_text(form), returncode=2)

        try:
            spec = form.to_spec()
            table = spec.build_table()
            point = form.to_point()
            result = {'tau': float(SeriesEvaluator(spec, table).tau(point))}
            if form.cleaned_data['breakdown']:
                result['terms'] = eval_terms(spec, table, point)
        except (DomainError, SolverError) as exc:
            raise CommandError(str(exc), returncode=2)
        self.stdout.write(json.dumps(result))

import csv
import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from series.forms import ResidualForm
from series.services.evaluator import DomainError, NumericFailure, residual_slope
from shadows.forms import form_errors_text
from shadows.services.recursion import SolverError


class Command(BaseCommand):
    help = 'Fit the convergence order of the Laplacian residual of the truncated expansion'

    def add_arguments(self, parser):
        parser.add_argument('--geometry', default='crack')
        parser.add_argument('--kind', default='primal')
        parser.add_argument('--j', default='1')
        parser.add_argument('--K', default='0')
        parser.add_argument('--mode', default='0')
        parser.add_argument('--R', default='1')
        parser.add_argument('--rho-min', default='1e-3')
        parser.add_argument('--rho-max', default='1e-2')
        parser.add_argument('--samples', default='16')
        parser.add_argument('--tolerance', default=None, help='Allowed |slope - expected| (default SHADOW_RESIDUAL_TOLERANCE)')
        parser.add_argument('--csv', default=None, help='Write rho,|laplacian| rows here instead of stdout')

    def handle(self, *args, **options):
        form = ResidualForm(data={key: options[key] for key in (
            'geometry', 'kind', 'j', 'K', 'mode', 'R', 'rho_min', 'rho_max', 'samples', 'tolerance',
        )})
        if not form.is_valid():
            raise CommandError(form_errors_text(form), returncode=2)
        data = form.cleaned_data

        try:
            spec = form.to_spec()
            study = residual_slope(
                spec, spec.build_table(),
                (str(data['rho_min']), str(data['rho_max'])),
                data['samples'],
            )
        except (DomainError, NumericFailure, SolverError) as exc:
            raise CommandError(str(exc), returncode=2)

        if options['csv']:
            try:
                with Path(options['csv']).open('w', newline='', encoding='utf-8') as handle:
                    self._write_rows(handle, study)
            except OSError as exc:
                raise CommandError(f"cannot write {options['csv']}: {exc}", returncode=2)
        else:
            self._write_rows(self.stdout, study)
        self.stdout.write(json.dumps(study.summary()))

        tolerance = float(data['tolerance'])
        if abs(study.slope - study.expected) > tolerance:
            raise CommandError(
                f"slope {study.slope:.3f} is more than {tolerance} away from {study.expected:.3f}",
                returncode=1,
            )

    def _write_rows(self, handle, study):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['rho', 'abs_laplacian'])
        for rho, residual in study.rows():
            writer.writerow([repr(rho), repr(residual)])

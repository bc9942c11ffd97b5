from decimal import Decimal, InvalidOperation

from django import forms
from django.conf import settings

from shadows.services.geometry import GEOMETRY_CHOICES
from shadows.services.recursion import KIND_CHOICES
from series.services.evaluator import SeriesSpec, EdgePoint


class RadiusField(forms.CharField):
    """Edge radius as a decimal string; "inf" selects the planar wedge."""

    def to_python(self, value):
        value = super().to_python(value).strip().lower()
        if value in self.empty_values:
            return value
        if value in ('inf', 'infinity'):
            return 'inf'
        try:
            number = Decimal(value)
        except InvalidOperation:
            raise forms.ValidationError('Enter a number or "inf".')
        if not number.is_finite() or number <= 0:
            raise forms.ValidationError('R must be positive.')
        return str(number)


class SeriesForm(forms.Form):
    """Truncated series parameters shared by the eval and residual commands"""
    geometry = forms.ChoiceField(choices=GEOMETRY_CHOICES)
    kind = forms.ChoiceField(choices=KIND_CHOICES, initial='primal')
    j = forms.IntegerField(min_value=1)
    K = forms.IntegerField(min_value=0)
    mode = forms.IntegerField(min_value=0, initial=0)
    R = RadiusField(initial='1')

    def to_spec(self):
        data = self.cleaned_data
        return SeriesSpec(
            geometry=data['geometry'],
            j=data['j'],
            K=data['K'],
            mode=data['mode'],
            R=data['R'],
            kind=data['kind'],
        )


class EvalForm(SeriesForm):
    rho = forms.DecimalField(min_value=0)
    phi = forms.DecimalField()
    theta = forms.DecimalField(initial=0)
    breakdown = forms.BooleanField(required=False)

    def to_point(self):
        data = self.cleaned_data
        return EdgePoint(str(data['rho']), str(data['phi']), str(data['theta']))


class ResidualForm(SeriesForm):
    rho_min = forms.DecimalField()
    rho_max = forms.DecimalField()
    samples = forms.IntegerField(min_value=8, initial=16)
    tolerance = forms.DecimalField(min_value=0, required=False)

    def clean(self):
        cleaned = super().clean()
        rho_min, rho_max, radius = cleaned.get('rho_min'), cleaned.get('rho_max'), cleaned.get('R')
        if rho_min is None or rho_max is None or radius is None:
            return cleaned
        if not 0 < rho_min < rho_max:
            raise forms.ValidationError('Need 0 < rho-min < rho-max.')
        if radius != 'inf' and rho_max > Decimal(radius) / 10:
            raise forms.ValidationError(f'rho-max must not exceed R/10 = {Decimal(radius) / 10}.')
        if cleaned.get('tolerance') is None:
            cleaned['tolerance'] = Decimal(settings.SHADOW_RESIDUAL_TOLERANCE)
        return cleaned

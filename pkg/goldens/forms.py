from django import forms

from shadows.forms import parse_j_list
from shadows.services.geometry import GEOMETRY_CHOICES
from shadows.services.recursion import KIND_CHOICES


class VerifyForm(forms.Form):
    """Scope of a verification run: one family filter or the whole corpus"""
    geometry = forms.ChoiceField(choices=GEOMETRY_CHOICES, required=False)
    kind = forms.ChoiceField(choices=KIND_CHOICES, required=False)
    j = forms.CharField(required=False)
    all = forms.BooleanField(required=False)
    golden = forms.CharField(required=False, help_text='Corpus directory or single .dsl file')
    strict = forms.BooleanField(required=False, help_text='Do not exclude registered errata')
    oracle = forms.BooleanField(required=False)
    record = forms.BooleanField(required=False)

    def clean_j(self):
        value = self.cleaned_data['j']
        return parse_j_list(value) if value else None

    def clean(self):
        cleaned = super().clean()
        if not cleaned.get('all') and not cleaned.get('geometry'):
            raise forms.ValidationError('Give --geometry (optionally --kind/--j) or --all.')
        if cleaned.get('all'):
            cleaned['geometry'] = cleaned['kind'] = cleaned['j'] = None
        return cleaned

    def scope(self):
        data = self.cleaned_data
        if data['all']:
            return 'all'
        parts = [data['geometry']]
        if data['kind']:
            parts.append(data['kind'])
        if data['j']:
            parts.append('j=' + ','.join(str(j) for j in data['j']))
        return ' '.join(parts)

import re

from django import forms

from goldens.services.dsl import FORMAT_CHOICES
from shadows.services.geometry import GEOMETRY_CHOICES
from shadows.services.recursion import KIND_CHOICES, LAYOUT_CHOICES

J_LIST_PATTERN = re.compile(r'^\s*\d+\s*(-\s*\d+\s*)?(,\s*\d+\s*(-\s*\d+\s*)?)*$')


def parse_j_list(text):
    """"3", "1,3,5" or "1-5" (inclusive) to a sorted list of distinct indices."""
    if not J_LIST_PATTERN.match(text or ''):
        raise forms.ValidationError('Use an index, a comma list or a range like "1-5".')
    values = set()
    for part in text.split(','):
        if '-' in part:
            lo, hi = (int(v) for v in part.split('-'))
            if lo > hi:
                raise forms.ValidationError(f'Empty range "{part.strip()}".')
            values.update(range(lo, hi + 1))
        else:
            values.add(int(part))
    if 0 in values:
        raise forms.ValidationError('Indices start at 1.')
    return sorted(values)


def form_errors_text(form):
    """Flatten form errors into one line per field for command output."""
    lines = []
    for name, errors in form.errors.items():
        label = '--' + name.replace('_', '-') if name != '__all__' else 'input'
        lines.append(f"{label}: {' '.join(errors)}")
    return '; '.join(lines)


class GenerateForm(forms.Form):
    """Validates a table request from the command line or the HTTP view"""
    geometry = forms.ChoiceField(choices=GEOMETRY_CHOICES)
    kind = forms.ChoiceField(choices=KIND_CHOICES, initial='primal')
    j = forms.CharField(help_text='Index, comma list or range, e.g. "1", "1,3,5", "1-5"')
    max_h = forms.IntegerField(min_value=0, initial=0)
    max_f = forms.IntegerField(min_value=0, initial=0)
    max_order = forms.IntegerField(
        min_value=0,
        required=False,
        help_text='Keep only h + f <= max_order (triangular layout)'
    )
    layout = forms.ChoiceField(
        choices=LAYOUT_CHOICES,
        required=False,
        help_text='Defaults to triangular for primal and rectangular for dual families'
    )
    format = forms.ChoiceField(choices=FORMAT_CHOICES, initial='text')

    def clean_j(self):
        return parse_j_list(self.cleaned_data['j'])

    def clean_max_h(self):
        max_h = self.cleaned_data['max_h']
        if max_h % 2:
            raise forms.ValidationError('max_h must be even.')
        return max_h

    def table_kwargs(self):
        data = self.cleaned_data
        return {
            'geometry': data['geometry'],
            'kind': data['kind'],
            'j_list': data['j'],
            'max_h': data['max_h'],
            'max_f': data['max_f'],
            'max_order': data['max_order'],
            'layout': data['layout'] or None,
        }


class RecordFilterForm(forms.Form):
    """Optional filters of the stored record listing"""
    geometry = forms.ChoiceField(choices=GEOMETRY_CHOICES, required=False)
    kind = forms.ChoiceField(choices=KIND_CHOICES, required=False)
    j = forms.IntegerField(min_value=1, required=False)

    def filters(self):
        return {name: value for name, value in self.cleaned_data.items() if value not in (None, '')}

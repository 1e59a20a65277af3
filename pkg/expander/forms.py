from django import forms

from spaces.forms import is_number
from .certificates import EXACT, SPECTRAL


class CertificateForm(forms.Form):
    h_num = forms.IntegerField(min_value=0)
    h_den = forms.IntegerField(min_value=1)
    witness = forms.JSONField()
    lambda2 = forms.FloatField()
    gap = forms.FloatField()
    method = forms.ChoiceField(choices=[(EXACT, EXACT), (SPECTRAL, SPECTRAL)])

    def clean_witness(self):
        witness = self.cleaned_data['witness']
        if not isinstance(witness, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in witness):
            raise forms.ValidationError("Witness must be a nonempty list of vertex indices.")
        return witness

    def clean_gap(self):
        gap = self.cleaned_data['gap']
        if not is_number(gap) or gap <= 0:
            raise forms.ValidationError("Spectral gap must be positive.")
        return gap

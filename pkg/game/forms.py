import math

from django import forms

from spaces.forms import is_number


class MeasureCertificateForm(forms.Form):
    threshold = forms.FloatField()
    pairs = forms.JSONField()
    mu = forms.JSONField()
    value = forms.FloatField(min_value=0)

    def clean_threshold(self):
        threshold = self.cleaned_data['threshold']
        if threshold <= 0:
            raise forms.ValidationError("Threshold must be positive.")
        return threshold

    def clean_pairs(self):
        pairs = self.cleaned_data['pairs']
        if not isinstance(pairs, list) or not all(
                isinstance(p, list) and len(p) == 2 and
                all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in p) and
                p[0] < p[1] for p in pairs):
            raise forms.ValidationError("Pairs must be a list of [u, v] index pairs with u < v.")
        return [tuple(p) for p in pairs]

    def clean_mu(self):
        mu = self.cleaned_data['mu']
        if not isinstance(mu, list) or not all(is_number(m) and m >= 0 for m in mu):
            raise forms.ValidationError("Mu must be a list of nonnegative numbers.")
        if not math.isclose(sum(mu), 1.0, abs_tol=1e-6):
            raise forms.ValidationError("Mu must add up to 1, got %s." % sum(mu))
        return mu

    def clean(self):
        cleaned_data = super().clean()
        pairs, mu = cleaned_data.get('pairs'), cleaned_data.get('mu')
        if pairs is not None and mu is not None and len(pairs) != len(mu):
            self.add_error('mu', "Mu has %d entries for %d pairs." % (len(mu), len(pairs)))
        return cleaned_data

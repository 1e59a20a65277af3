from django import forms

from spaces.forms import is_number


class EmbeddingForm(forms.Form):
    source = forms.JSONField()
    image = forms.JSONField()
    lip = forms.FloatField(min_value=0)
    colip = forms.FloatField(min_value=0, required=False)

    def clean_source(self):
        source = self.cleaned_data['source']
        if not isinstance(source, dict):
            raise forms.ValidationError("Source must be a metric space object.")
        return source

    def clean_image(self):
        image = self.cleaned_data['image']
        if not isinstance(image, dict):
            raise forms.ValidationError("Image must be a point cloud object.")
        return image

    def clean_colip(self):
        colip = self.cleaned_data['colip']
        if colip is not None and not is_number(colip):
            raise forms.ValidationError("Colip must be a number or null.")
        return colip

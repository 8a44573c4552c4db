from django import forms

from .structures import BLOCKS, INNER_CHOICES, MODEL_CHOICES, RANDOM, ROTATIONAL_QR, GenSpec
from .utils import SEED_MAX, is_prime


def parse_vertex_list(raw: str) -> tuple[int, ...]:
    """'0,1, 5' -> (0, 1, 5)"""
    items = [item.strip() for item in raw.split(",") if item.strip()]
    try:
        return tuple(int(item) for item in items)
    except ValueError:
        raise forms.ValidationError(f"Enter comma-separated vertex ids, got {raw!r}.")


class GenSpecForm(forms.Form):
    model = forms.ChoiceField(choices=MODEL_CHOICES)
    n = forms.IntegerField(min_value=1)
    seed = forms.IntegerField(min_value=0, max_value=SEED_MAX, required=False)
    split = forms.IntegerField(min_value=1, required=False)
    inner = forms.ChoiceField(choices=INNER_CHOICES, required=False)

    def clean(self):
        cleaned = super().clean()
        model = cleaned.get("model")
        n = cleaned.get("n")
        split = cleaned.get("split")

        if model == ROTATIONAL_QR and n is not None and not (is_prime(n) and n % 4 == 3):
            self.add_error("n", "rotational-qr needs a prime n with n = 3 (mod 4).")
        if split is not None:
            if model != BLOCKS:
                self.add_error("split", "Only the blocks model takes a split.")
            elif n is not None and split >= n:
                self.add_error("split", "The split must leave both blocks nonempty.")
        return cleaned

    def to_spec(self) -> GenSpec:
        data = self.cleaned_data
        return GenSpec(
            model=data["model"],
            n=data["n"],
            seed=data.get("seed") or 0,
            split=data.get("split"),
            inner=data.get("inner") or RANDOM,
        )


class TerminalsForm(forms.Form):
    sources = forms.CharField()
    sinks = forms.CharField()
    k = forms.IntegerField(min_value=1, required=False)

    def clean_sources(self):
        return parse_vertex_list(self.cleaned_data.get("sources", ""))

    def clean_sinks(self):
        return parse_vertex_list(self.cleaned_data.get("sinks", ""))

    def clean(self):
        cleaned = super().clean()
        sources, sinks, k = cleaned.get("sources"), cleaned.get("sinks"), cleaned.get("k")
        if sources is None or sinks is None:
            return cleaned
        if len(sources) != len(sinks):
            raise forms.ValidationError("Sources and sinks must have the same length.")
        if k is not None and len(sources) != k:
            raise forms.ValidationError(f"Expected {k} terminal pairs, got {len(sources)}.")
        if set(sources) & set(sinks):
            raise forms.ValidationError("Sources and sinks must be disjoint.")
        return cleaned

from django.apps import AppConfig


class AnchorConfig(AppConfig):
    name = "anchor"
    verbose_name = "Anchoring certificates"

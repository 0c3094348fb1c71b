from django.apps import AppConfig


class ThreelieConfig(AppConfig):
    name = 'threelie'
    verbose_name = 'Single 3-Lie algebras'

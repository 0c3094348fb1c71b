from django.apps import AppConfig


class CompatibleConfig(AppConfig):
    name = 'compatible'
    verbose_name = 'Compatible 3-Lie algebras'

from django.apps import AppConfig


class ShadowsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'shadows'
    verbose_name = 'Edge shadows'

from django.apps import AppConfig


class GoldensConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'goldens'
    verbose_name = 'Golden tables'

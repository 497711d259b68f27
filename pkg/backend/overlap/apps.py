from django.apps import AppConfig


class OverlapConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'overlap'

from django.apps import AppConfig


class SysidConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'sysid'

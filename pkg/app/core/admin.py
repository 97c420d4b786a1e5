"""Django admin customization
"""
from django.contrib import admin

from core import models


class TrialRecordInline(admin.TabularInline):
    """Show the trials on the experiment page"""
    model = models.TrialRecord
    fields = ['cell', 'seed', 'status', 'total_error',
              'fit_conv_mean', 'fit_pso_mean']
    readonly_fields = fields
    extra = 0
    can_delete = False


class ExperimentAdminPageConfig(admin.ModelAdmin):
    """Define the admin pages for experiments
    """
    ordering = ['-created']
    list_display = ['id', 'kind', 'study', 'seed', 'created']
    list_filter = ['kind', 'study']
    # Saved experiments are results, they should not be edited
    readonly_fields = ['kind', 'study', 'seed', 'config', 'created']
    inlines = [TrialRecordInline]


class TrialRecordAdminPageConfig(admin.ModelAdmin):
    """Define the admin pages for single trials
    """
    ordering = ['id']
    list_display = ['id', 'experiment', 'cell', 'seed', 'status',
                    'total_error', 'fit_conv_mean', 'fit_pso_mean']
    list_filter = ['status']


admin.site.register(models.Experiment, ExperimentAdminPageConfig)
admin.site.register(models.TrialRecord, TrialRecordAdminPageConfig)

"""Database models
"""
from django.db import models


class Experiment(models.Model):
    """
    One invocation of the run or study command.
    The config is stored as the validated JSON document so the
    experiment can be reproduced from the database alone.
    """
    KIND_RUN = 'run'
    KIND_STUDY = 'study'
    KIND_CHOICES = [
        (KIND_RUN, 'Single configuration'),
        (KIND_STUDY, 'Study sweep'),
    ]

    kind = models.CharField(max_length=16, choices=KIND_CHOICES)
    # Name of the swept variable, blank for plain runs
    study = models.CharField(max_length=16, blank=True)
    seed = models.BigIntegerField()
    config = models.JSONField()
    created = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created', '-id']

    # This is useful when displaying the model in the Django admin site
    def __str__(self):
        label = f'{self.kind} {self.study}'.strip()
        return f'{label} (seed {self.seed})'


class TrialRecord(models.Model):
    """
    Outcome of a single seeded trial.
    The headline numbers get their own columns so they can be listed
    and filtered; everything else lives in the report JSON.
    """
    experiment = models.ForeignKey(
        Experiment,
        related_name='trials',
        on_delete=models.CASCADE,
    )
    # Study cell the trial belongs to, e.g. "N=6, N_data=3000"
    cell = models.CharField(max_length=255, blank=True)
    seed = models.BigIntegerField()
    status = models.CharField(max_length=255)
    # Null when the trial failed
    total_error = models.FloatField(null=True)
    fit_conv_mean = models.FloatField(null=True)
    fit_pso_mean = models.FloatField(null=True)
    report = models.JSONField()

    class Meta:
        ordering = ['id']

    def __str__(self):
        return f'trial {self.seed}: {self.status}'

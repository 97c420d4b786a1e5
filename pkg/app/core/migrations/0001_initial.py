# Generated by Django 4.2.16 on 2026-10-18 09:12

from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Experiment',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('kind', models.CharField(choices=[('run', 'Single configuration'), ('study', 'Study sweep')], max_length=16)),
                ('study', models.CharField(blank=True, max_length=16)),
                ('seed', models.BigIntegerField()),
                ('config', models.JSONField()),
                ('created', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created', '-id'],
            },
        ),
        migrations.CreateModel(
            name='TrialRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('cell', models.CharField(blank=True, max_length=255)),
                ('seed', models.BigIntegerField()),
                ('status', models.CharField(max_length=255)),
                ('total_error', models.FloatField(null=True)),
                ('fit_conv_mean', models.FloatField(null=True)),
                ('fit_pso_mean', models.FloatField(null=True)),
                ('report', models.JSONField()),
                ('experiment', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='trials', to='core.experiment')),
            ],
            options={
                'ordering': ['id'],
            },
        ),
    ]

# Generated by Django 5.2.4 on 2026-10-19 10:12

import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('subcommand', models.CharField(choices=[('generate', 'Generate windows'), ('autocorr', 'Autocorrelation'), ('diffract', 'Diffraction'), ('eigenvalue', 'Dynamical eigenvalue'), ('overlap', 'Overlap distribution'), ('gibbs', 'Gibbs sampling'), ('complexity', 'Word complexity')], max_length=20)),
                ('system', models.CharField(blank=True, max_length=100)),
                ('config', models.JSONField(default=dict, help_text='Validated run configuration')),
                ('config_hash', models.CharField(blank=True, help_text='SHA-256 of the canonical config', max_length=64)),
                ('seed', models.BigIntegerField(blank=True, null=True)),
                ('output_dir', models.CharField(blank=True, max_length=500)),
                ('manifest_path', models.CharField(blank=True, max_length=500)),
                ('outputs', models.JSONField(default=list, help_text='Output files with their SHA-256 digests')),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('running', 'Running'), ('completed', 'Completed'), ('failed', 'Failed')], default='pending', max_length=20)),
                ('error_message', models.TextField(blank=True)),
                ('processing_time', models.FloatField(blank=True, help_text='Wall time in seconds', null=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
                ('completed_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'verbose_name': 'Experiment Run',
                'verbose_name_plural': 'Experiment Runs',
                'db_table': 'aperiodic_experiment_runs',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['subcommand', 'status'], name='aperiodic_run_status_idx'), models.Index(fields=['config_hash'], name='aperiodic_run_config_idx')],
            },
        ),
    ]

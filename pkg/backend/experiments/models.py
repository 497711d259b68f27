from django.db import models
import uuid


class ExperimentRun(models.Model):
    """
    Registry entry for one batch run and the files it wrote
    """
    SUBCOMMAND_CHOICES = [
        ('generate', 'Generate windows'),
        ('autocorr', 'Autocorrelation'),
        ('diffract', 'Diffraction'),
        ('eigenvalue', 'Dynamical eigenvalue'),
        ('overlap', 'Overlap distribution'),
        ('gibbs', 'Gibbs sampling'),
        ('complexity', 'Word complexity'),
    ]

    STATUS_CHOICES = [
        ('pending', 'Pending'),
        ('running', 'Running'),
        ('completed', 'Completed'),
        ('failed', 'Failed'),
    ]

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    subcommand = models.CharField(max_length=20, choices=SUBCOMMAND_CHOICES)
    system = models.CharField(max_length=100, blank=True)

    # Configuration
    config = models.JSONField(default=dict, help_text="Validated run configuration")
    config_hash = models.CharField(max_length=64, blank=True, help_text="SHA-256 of the canonical config")
    seed = models.BigIntegerField(null=True, blank=True)

    # Outputs
    output_dir = models.CharField(max_length=500, blank=True)
    manifest_path = models.CharField(max_length=500, blank=True)
    outputs = models.JSONField(default=list, help_text="Output files with their SHA-256 digests")

    # Status and Metadata
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='pending')
    error_message = models.TextField(blank=True)
    processing_time = models.FloatField(null=True, blank=True, help_text="Wall time in seconds")

    # Timestamps
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)
    completed_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        db_table = 'aperiodic_experiment_runs'
        verbose_name = 'Experiment Run'
        verbose_name_plural = 'Experiment Runs'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['subcommand', 'status'], name='aperiodic_run_status_idx'),
            models.Index(fields=['config_hash'], name='aperiodic_run_config_idx'),
        ]

    def __str__(self):
        return f"{self.subcommand} {self.system or '-'} ({self.status})"

    @property
    def is_finished(self) -> bool:
        return self.status in ('completed', 'failed')

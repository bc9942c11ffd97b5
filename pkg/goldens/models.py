"""
Verification history against the golden corpus.
Immutable once created, like any audit record.
"""
from django.db import models
import uuid


class VerificationRun(models.Model):
    """
    Outcome of one ``shadows_verify --record`` invocation.
    """
    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    created_at = models.DateTimeField(auto_now_add=True, db_index=True)

    # Scope of the run
    scope = models.CharField(max_length=255, help_text='e.g. "crack primal j=1" or "all"')
    golden_dir = models.CharField(max_length=512)
    strict = models.BooleanField(default=False)

    # Counts
    total = models.PositiveIntegerField()
    matched = models.PositiveIntegerField()
    mismatched = models.PositiveIntegerField()
    excluded = models.PositiveIntegerField(default=0)

    report = models.JSONField(default=dict, blank=True)

    class Meta:
        db_table = 'verification_runs'
        verbose_name = 'Verification Run'
        verbose_name_plural = 'Verification Runs'
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.scope} - {self.matched}/{self.total} - {self.created_at}"

    @property
    def passed(self):
        return self.mismatched == 0

    def save(self, *args, **kwargs):
        """Prevent updates to recorded runs"""
        if not self._state.adding:
            raise ValueError("Verification runs are immutable and cannot be updated")
        super().save(*args, **kwargs)

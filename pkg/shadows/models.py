"""
Stored shadow profiles.
One row per solved (geometry, kind, j, h, f); written by ``shadows_generate --store``.
"""
from django.db import models
import uuid

from algebra.services.trigpoly import TrigPoly
from shadows.services.geometry import GEOMETRY_CHOICES
from shadows.services.recursion import KIND_CHOICES, ShadowKey


class ShadowRecord(models.Model):
    """
    A solved angular profile phi_{h,j,f} / psi_{h,j,f}.
    Coefficients are kept exactly, as the JSON term encoding and as DSL text.
    """
    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)

    geometry = models.CharField(max_length=20, choices=GEOMETRY_CHOICES)
    kind = models.CharField(max_length=10, choices=KIND_CHOICES)
    j = models.PositiveIntegerField()
    h = models.PositiveIntegerField()
    f = models.PositiveIntegerField()

    freq_den = models.PositiveSmallIntegerField()
    terms = models.JSONField(default=list, help_text='[{"num": k, "sin": [a, b], "cos": [a, b]}, ...]')
    dsl = models.TextField()

    # Closure bookkeeping
    degenerate = models.BooleanField(
        default=False,
        help_text='Frequency coincided with a Neumann eigenvalue of the wedge'
    )
    kernel_dropped = models.BooleanField(default=False)

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        db_table = 'shadow_records'
        verbose_name = 'Shadow Record'
        verbose_name_plural = 'Shadow Records'
        unique_together = [['geometry', 'kind', 'j', 'h', 'f']]
        ordering = ['geometry', 'kind', 'j', 'h', 'f']
        indexes = [
            models.Index(fields=['geometry', 'kind', 'j'], name='shadow_records_family_idx'),
        ]

    def __str__(self):
        return f"{self.geometry} {self.kind} j={self.j} h={self.h} f={self.f}"

    @property
    def key(self):
        return ShadowKey(self.kind, self.h, self.j, self.f)

    def to_poly(self):
        return TrigPoly.from_json({'freq_den': self.freq_den, 'terms': self.terms})

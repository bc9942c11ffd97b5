import logging

from django.db import transaction

from shadows.models import ShadowRecord
from goldens.services.dsl import GoldenEntry, emit_entry

logger = logging.getLogger(__name__)


@transaction.atomic
def store_table(table):
    """Upsert every entry of ``table`` as a ShadowRecord. Returns the row count."""
    geometry = str(table.geometry)
    records = []
    for key, poly in table.items():
        log = table.solve_log.get(key)
        entry = GoldenEntry.from_solution(geometry, key, poly)
        records.append(ShadowRecord(
            geometry=geometry,
            kind=key.kind.value,
            j=key.j,
            h=key.h,
            f=key.f,
            freq_den=poly.freq_den,
            terms=poly.to_json()['terms'],
            dsl=emit_entry(entry),
            degenerate=bool(log and log.degenerate),
            kernel_dropped=bool(log and log.kernel_dropped),
        ))
    ShadowRecord.objects.bulk_create(
        records,
        update_conflicts=True,
        update_fields=['freq_den', 'terms', 'dsl', 'degenerate', 'kernel_dropped', 'updated_at'],
        unique_fields=['geometry', 'kind', 'j', 'h', 'f'],
    )
    logger.info(f"Stored {len(records)} shadow records for {geometry}")
    return len(records)

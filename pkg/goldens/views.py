from django.http import JsonResponse
from django.views.decorators.http import require_GET

from goldens.errata import KNOWN_ERRATA
from goldens.models import VerificationRun
from goldens.services.corpus import CorpusError, load_corpus


@require_GET
def corpus_summary(request):
    """Entry counts per family of the configured corpus, plus the errata registry"""
    try:
        entries = load_corpus()
    except CorpusError as exc:
        return JsonResponse({'error': str(exc)}, status=500)

    families = {}
    for entry in entries:
        label = f"{entry.geometry} {entry.kind.value} j={entry.j}"
        families[label] = families.get(label, 0) + 1

    data = {
        'total': len(entries),
        'families': families,
        'errata': [
            {
                'key': list(erratum.corpus_key),
                'category': erratum.category,
                'note': erratum.note,
            }
            for erratum in KNOWN_ERRATA
        ],
    }
    return JsonResponse(data)


@require_GET
def run_list(request):
    runs = VerificationRun.objects.order_by('-created_at')[:50]
    return JsonResponse({
        'runs': [
            {
                'id': str(run.id),
                'created_at': run.created_at.isoformat(),
                'scope': run.scope,
                'strict': run.strict,
                'total': run.total,
                'matched': run.matched,
                'mismatched': run.mismatched,
                'excluded': run.excluded,
                'passed': run.passed,
            }
            for run in runs
        ]
    })

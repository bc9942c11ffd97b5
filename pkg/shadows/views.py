from django.http import HttpResponse, JsonResponse
from django.views.decorators.http import require_GET

from goldens.services.dsl import EmitFormat, GoldenEntry, emit_document
from shadows.forms import GenerateForm, RecordFilterForm
from shadows.models import ShadowRecord
from shadows.services.recursion import SolverError
from shadows.tasks import build_tables


@require_GET
def table_document(request, geometry, kind, j):
    """
    Solve one family on request.
    Query string: max_h, max_f, max_order, layout, format (text, latex, json, dsl).
    """
    form = GenerateForm(data={
        'geometry': geometry,
        'kind': kind,
        'j': j,
        'max_h': request.GET.get('max_h', '0'),
        'max_f': request.GET.get('max_f', '0'),
        'max_order': request.GET.get('max_order'),
        'layout': request.GET.get('layout'),
        'format': request.GET.get('format', 'json'),
    })
    if not form.is_valid():
        return JsonResponse({'errors': form.errors.get_json_data()}, status=400)

    try:
        table = build_tables.delay(**form.table_kwargs())
    except SolverError as exc:
        return JsonResponse({'error': str(exc), 'key': str(exc.key)}, status=422)

    entries = [GoldenEntry.from_solution(geometry, key, poly) for key, poly in table.items()]
    fmt = EmitFormat(form.cleaned_data['format'])
    document = emit_document(entries, fmt)
    if fmt == EmitFormat.JSON:
        return HttpResponse(document, content_type='application/json')
    return HttpResponse(document, content_type='text/plain; charset=utf-8')


@require_GET
def record_list(request):
    """Stored records, optionally filtered by geometry, kind and j"""
    form = RecordFilterForm(data=request.GET)
    if not form.is_valid():
        return JsonResponse({'errors': form.errors.get_json_data()}, status=400)
    records = ShadowRecord.objects.filter(**form.filters())

    data = {
        'count': records.count(),
        'records': [
            {
                'geometry': record.geometry,
                'kind': record.kind,
                'j': record.j,
                'h': record.h,
                'f': record.f,
                'dsl': record.dsl,
                'degenerate': record.degenerate,
                'updated_at': record.updated_at.isoformat(),
            }
            for record in records[:500]
        ],
    }
    return JsonResponse(data)

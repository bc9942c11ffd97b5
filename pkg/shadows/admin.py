from django.contrib import admin

from .models import ShadowRecord


@admin.register(ShadowRecord)
class ShadowRecordAdmin(admin.ModelAdmin):
    list_display = ('geometry', 'kind', 'j', 'h', 'f', 'degenerate', 'updated_at')
    list_filter = ('geometry', 'kind', 'degenerate')
    search_fields = ('dsl',)

from django.contrib import admin

from .models import VerificationRun


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = ('scope', 'total', 'matched', 'mismatched', 'excluded', 'strict', 'created_at')
    list_filter = ('strict',)
    readonly_fields = [f.name for f in VerificationRun._meta.fields]

    def has_change_permission(self, request, obj=None):
        return False

    def has_delete_permission(self, request, obj=None):
        return False

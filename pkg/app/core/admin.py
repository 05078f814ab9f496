"""
Django admin customization
"""
from django.contrib import admin
from django.utils.translation import gettext_lazy as _

from core import models


class StoredMessageAdmin(admin.ModelAdmin):
    """Define the admin pages for stored messages."""
    ordering = ['-time_ms', 'native_id']
    list_display = ['native_id', 'channel_id', 'username', 'text', 'time_ms']
    list_filter = ['platform', 'channel_id']
    search_fields = ['username', 'userid', 'text']
    readonly_fields = ['platform', 'channel_id', 'native_id']
    fieldsets = (
        (_('Identity'), {
            'fields': ('platform', 'channel_id', 'native_id', 'thread_id'),
        }),
        (_('Author'), {'fields': ('userid', 'username')}),
        (
            _('Content'),
            {
                'fields': (
                    'text',
                    'time_ms',
                    'attachments',
                    'optional_fields',
                )
            }
        ),
    )


admin.site.register(models.StoredMessage, StoredMessageAdmin)

from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('admin/', admin.site.urls),

    # App URLs
    path('', include('core.urls', namespace='core')),
    path('shadows/', include('shadows.urls', namespace='shadows')),
    path('goldens/', include('goldens.urls', namespace='goldens')),
]

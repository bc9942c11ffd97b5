from django.urls import path
from . import views

app_name = 'shadows'

urlpatterns = [
    path('records/', views.record_list, name='record_list'),
    path('<str:geometry>/<str:kind>/<int:j>/', views.table_document, name='table_document'),
]

from django.urls import path
from . import views

app_name = 'goldens'

urlpatterns = [
    path('', views.corpus_summary, name='corpus_summary'),
    path('runs/', views.run_list, name='run_list'),
]

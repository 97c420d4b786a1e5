"""URL mappings for the experiment app."""
from django.urls import (
    path,
    include,
)

from rest_framework.routers import DefaultRouter

from experiment import views


router = DefaultRouter()
# Read-only endpoints for saved experiments, plus the summary action
router.register('experiments', views.ExperimentViewSet)

app_name = 'experiment'

urlpatterns = [
    path('', include(router.urls)),
]

"""Views for the saved experiments API
"""
from drf_spectacular.utils import (
    extend_schema_view,
    extend_schema,
    OpenApiParameter,
    OpenApiTypes,
)
from rest_framework import viewsets
from rest_framework.decorators import action
from rest_framework.response import Response

from core.models import Experiment
from experiment import serializers
from experiment.persistence import load_reports, output_dim
from experiment.reports import json_safe, trials_frame
from experiment.studies import summarize


@extend_schema_view(
    list=extend_schema(
        parameters=[
            OpenApiParameter(
                name='kind',
                type=OpenApiTypes.STR,
                enum=['run', 'study'],
                description='Only list experiments of this kind',
            ),
        ]
    )
)
class ExperimentViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Browse saved experiments.

    Experiments are created by the run and study commands,
    so the API only offers .list() and .retrieve().
    """
    serializer_class = serializers.ExperimentDetailSerializer
    queryset = Experiment.objects.all()

    def get_queryset(self):
        """Filter by kind when asked to"""
        kind = self.request.query_params.get('kind')
        queryset = self.queryset.prefetch_related('trials')
        if kind:
            queryset = queryset.filter(kind=kind)
        return queryset.order_by('-id')

    def get_serializer_class(self):
        """The list view leaves out the config and the trials"""
        if self.action == 'list':
            return serializers.ExperimentSerializer
        return self.serializer_class

    # detail=True means the url needs the experiment id
    @action(methods=['GET'], detail=True)
    def summary(self, request, pk=None):
        """Per-cell aggregate table of the experiment's trials"""
        experiment = self.get_object()
        reports = load_reports(experiment)
        if not reports:
            return Response([])
        frame = trials_frame(reports, output_dim(experiment))
        records = summarize(frame).to_dict(orient='records')
        return Response(json_safe(records))

"""Views for health check API"""
from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from core.models import Experiment


# Creating a simple API view endpoint for health check
@api_view(['GET'])
def health_check(request):
    """Returns a successful response if the API and database are up"""
    response_msg = {
        'msg': 'success',
        # Touching the table also checks the database is reachable
        'experiments': Experiment.objects.count(),
    }

    return Response(response_msg, status=status.HTTP_200_OK)

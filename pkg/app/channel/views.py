"""
Views serving rendered feeds.
"""
from pathlib import Path

from django.conf import settings
from django.http import Http404
from drf_spectacular.types import OpenApiTypes
from drf_spectacular.utils import extend_schema
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.views import APIView

from channel.renderers import AtomRenderer

FEED_ROOT_ENVIRON = 'dsnbench.feed_root'


def feed_root(request):
    """Directory the current server publishes."""
    return Path(request.META.get(FEED_ROOT_ENVIRON,
                                 settings.DSNBENCH_FEED_ROOT))


def read_snapshot(request, name):
    """Return the bytes of a published feed file or raise Http404."""
    if name.startswith('.') or '/' in name or '\\' in name:
        raise Http404('unknown feed')
    try:
        return (feed_root(request) / name).read_bytes()
    except OSError:
        raise Http404('unknown feed')


class FeedView(APIView):
    """Serve a bot's own feed."""
    renderer_classes = [AtomRenderer]
    authentication_classes = []
    permission_classes = [AllowAny]

    @extend_schema(responses={200: OpenApiTypes.BINARY, 404: None})
    def get(self, request, uid):
        """Return the latest snapshot of <uid>.atom."""
        return Response(read_snapshot(request, f'{uid}.atom'))


class ThreadView(APIView):
    """Serve the comment feed of one thread next to a bot's feed."""
    renderer_classes = [AtomRenderer]
    authentication_classes = []
    permission_classes = [AllowAny]

    @extend_schema(responses={200: OpenApiTypes.BINARY, 404: None})
    def get(self, request, uid, thread_id):
        """Return the comment feed for a thread."""
        return Response(
            read_snapshot(request, f'{uid}.atom.comments.{thread_id}')
        )

"""
Renderers for feed responses.
"""
from rest_framework import renderers


class AtomRenderer(renderers.BaseRenderer):
    """Pass pre-rendered Atom bytes through unchanged."""
    media_type = 'application/atom+xml'
    format = 'atom'
    charset = None
    render_style = 'binary'

    def render(self, data, accepted_media_type=None, renderer_context=None):
        if isinstance(data, bytes):
            return data
        return b''

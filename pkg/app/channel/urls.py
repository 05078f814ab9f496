"""
URL mappings for the feed server.
"""
from django.urls import path

from channel import views

app_name = 'channel'

urlpatterns = [
    path(
        '<str:uid>.atom.comments.<str:thread_id>',
        views.ThreadView.as_view(),
        name='thread',
    ),
    path('<str:uid>.atom', views.FeedView.as_view(), name='feed'),
]

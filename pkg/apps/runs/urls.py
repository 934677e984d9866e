"""
urls.py
역할: /v1/runs* URL 과 View 연결. config/urls.py 에서 "v1/" prefix 가 이미 붙는다.
"""

from django.urls import path
from .views import RunCreateView, RunStatusView, RunResultView

urlpatterns = [
    path("runs", RunCreateView.as_view(), name="run-create"),                         # POST /v1/runs
    path("runs/<int:run_id>", RunStatusView.as_view(), name="run-status"),            # GET /v1/runs/{id}
    path("runs/<int:run_id>/result", RunResultView.as_view(), name="run-result"),     # GET /v1/runs/{id}/result
]

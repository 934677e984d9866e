from django.urls import path, include

# 최상위 URL 라우팅: 각 앱의 urls.py로 위임 (include)
urlpatterns = [
    path("v1/", include("apps.runs.urls")),      # /v1/runs/* -> apps/runs/urls.py
    path("v1/ops/", include("apps.ops.urls")),   # /v1/ops/* -> apps/ops/urls.py
]

"""
views.py (ops)
역할: 시스템 운영 지표 / 헬스체크 / DLQ 조회.
      GET /v1/ops/metrics → 완료·실패 run 수, 실패율, run 소요 시간(p50/p95/p99), 큐 길이.
"""

import logging
from datetime import timedelta

import numpy as np
from django.db.models import DurationField, ExpressionWrapper, F
from django.utils import timezone
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView

from apps.runs.models import SimulationRun
from workers.redis_queue import dead_lettered, get_redis, queue_length

logger = logging.getLogger(__name__)

# 지표 집계 시간 윈도우 (분)
METRICS_WINDOW_MINUTES = 60


class MetricsView(APIView):
    """
    GET /v1/ops/metrics
    최근 METRICS_WINDOW_MINUTES 동안 생성된 run 의 처리 현황.
    """

    def get(self, request):
        since = timezone.now() - timedelta(minutes=METRICS_WINDOW_MINUTES)
        recent = SimulationRun.objects.filter(created_at__gte=since)

        total = recent.count()
        completed = recent.filter(status=SimulationRun.Status.COMPLETED).count()
        failed = recent.filter(status=SimulationRun.Status.FAILED).count()
        failure_rate = round(failed / total, 4) if total > 0 else 0.0

        # 소요 시간: created_at (제출) → updated_at (COMPLETED 저장): 큐 대기 포함
        durations = (
            recent.filter(status=SimulationRun.Status.COMPLETED)
            .annotate(
                duration=ExpressionWrapper(F("updated_at") - F("created_at"), output_field=DurationField())
            )
            .values_list("duration", flat=True)
        )
        durations_sec = [d.total_seconds() for d in durations if d is not None]

        if durations_sec:
            arr = np.array(durations_sec)
            duration = {
                "p50": round(float(np.percentile(arr, 50)), 3),
                "p95": round(float(np.percentile(arr, 95)), 3),
                "p99": round(float(np.percentile(arr, 99)), 3),
            }
        else:
            # 데이터 없을 때 null 대신 0 (클라이언트 파싱 편의)
            duration = {"p50": 0.0, "p95": 0.0, "p99": 0.0}

        try:
            depth = queue_length()
        except Exception:
            logger.exception("Redis queue length check failed")
            depth = None

        return Response({
            "window_minutes": METRICS_WINDOW_MINUTES,
            "total_runs": total,
            "completed_runs": completed,
            "failed_runs": failed,
            "failure_rate": failure_rate,
            "run_duration_seconds": duration,
            "in_progress_runs": SimulationRun.objects.filter(status=SimulationRun.Status.IN_PROGRESS).count(),
            "queue_length": depth,
        })


class HealthView(APIView):
    """
    GET /v1/ops/health
    DB + Redis 연결 상태 확인. 하나라도 응답 불가면 503.
    """

    def get(self, request):
        try:
            SimulationRun.objects.exists()
            db_ok = True
        except Exception:
            logger.exception("DB health check failed")
            db_ok = False

        try:
            get_redis().ping()
            redis_ok = True
        except Exception:
            logger.exception("Redis health check failed")
            redis_ok = False

        overall = "ok" if (db_ok and redis_ok) else "degraded"
        http_status = status.HTTP_200_OK if overall == "ok" else status.HTTP_503_SERVICE_UNAVAILABLE

        return Response(
            {
                "status": overall,
                "db": "ok" if db_ok else "error",
                "redis": "ok" if redis_ok else "error",
            },
            status=http_status,
        )


class DLQView(APIView):
    """
    GET /v1/ops/dlq
    MAX_RETRIES 재시도 후 최종 실패한 run 목록 (Redis dlq:failed_runs + DB 상세).
    """

    def get(self, request):
        run_ids = dead_lettered()
        if not run_ids:
            return Response({"count": 0, "runs": []})

        runs = SimulationRun.objects.filter(pk__in=run_ids).values(
            "id", "command", "status", "config_sha256", "error", "created_at", "updated_at"
        )
        return Response({
            "count": len(run_ids),
            "runs": list(runs),
        })

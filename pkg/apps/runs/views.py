"""
views.py
역할: 시뮬레이션 run 제출 / 상태 / 결과 조회 API.
      실제 실행은 큐 워커가 하고, 여기서는 검증·dedupe·큐 등록만 한다.
"""

import csv
import io
import logging
from itertools import islice

from django.shortcuts import get_object_or_404
from rest_framework import status
from rest_framework.response import Response
from rest_framework.throttling import AnonRateThrottle
from rest_framework.views import APIView

from engine.errors import ResultFileError
from engine.resultfile import COLUMNS, read_result, render_data_block

from .models import SimulationRun
from .serializers import RunConfigSerializer, RunCreateResponseSerializer, RunStatusSerializer
from .services import FILE_COMMANDS, submit_run

logger = logging.getLogger(__name__)

# GET /v1/runs/{id}/result 기본 / 최대 행 수
DEFAULT_RESULT_ROWS = 100
MAX_RESULT_ROWS = 10000


class RunCreateView(APIView):
    """
    POST /v1/runs
    RunConfig 를 검증해 큐에 등록. 같은 canonical config 의 run 이 있으면 그 run 을 반환.
    """

    throttle_classes = [AnonRateThrottle]

    def post(self, request):
        serializer = RunConfigSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        run, created = submit_run(serializer.canonical())
        body = RunCreateResponseSerializer(run).data
        return Response(body, status=status.HTTP_201_CREATED if created else status.HTTP_200_OK)


class RunStatusView(APIView):
    """GET /v1/runs/{id}"""

    def get(self, request, run_id):
        run = get_object_or_404(SimulationRun, pk=run_id)
        return Response(RunStatusSerializer(run).data)


class RunResultView(APIView):
    """
    GET /v1/runs/{id}/result?limit=N
    COMPLETED 일 때만. 파일을 만드는 명령은 헤더 + 앞 N 행, fit/calibrate 는 summary.
    """

    def get(self, request, run_id):
        run = get_object_or_404(SimulationRun, pk=run_id)

        if run.status != SimulationRun.Status.COMPLETED:
            return Response(
                {"error": f"Run is not completed yet. Current status: {run.status}"},
                status=status.HTTP_409_CONFLICT,
            )

        if run.command not in FILE_COMMANDS:
            return Response({"run_id": run.id, "command": run.command, **(run.summary or {})})

        try:
            limit = int(request.query_params.get("limit", DEFAULT_RESULT_ROWS))
        except ValueError:
            return Response({"error": "limit must be an integer"}, status=status.HTTP_400_BAD_REQUEST)
        limit = max(0, min(limit, MAX_RESULT_ROWS))

        try:
            result = read_result(run.output_path)
        except (OSError, ResultFileError):
            logger.exception("❌ Run %s 결과 파일 읽기 실패: %s", run.id, run.output_path)
            return Response(
                {"error": f"Result file unavailable: {run.output_path}"},
                status=status.HTTP_410_GONE,
            )

        reader = csv.DictReader(io.StringIO(render_data_block(result.series)))
        rows = list(islice(reader, limit))
        return Response(
            {
                "run_id": run.id,
                "header": result.header,
                "columns": list(COLUMNS),
                "total_rows": len(result.series),
                "rows": rows,
            }
        )

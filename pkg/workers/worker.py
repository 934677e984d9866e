"""
worker.py
역할: Redis 큐에서 run_id 를 꺼내 RunConfig 를 실행하고 결과를 DB 에 기록.

핵심 설계:
  - 시뮬레이션 run 은 분~시간 단위라 한 번에 한 건만 꺼낸다 (BRPOP 5초).
  - select_for_update(skip_locked) 로 QUEUED → IN_PROGRESS 전환을 원자적으로 선점
    → WORKER_COUNT > 1 에서도 같은 run 이 두 번 실행되지 않는다.
  - run 안의 앙상블 병렬화는 config 의 workers 값으로 workers/ensemble.py 가 맡는다.
  - 실패 run 은 Redis 재시도 카운터로 추적해 MAX_RETRIES 초과 시 FAILED + DLQ 처리.
  - SIGALRM 으로 RUN_TIMEOUT 초과 run 을 끊는다.
"""

import os
import sys
import signal
import logging

# 프로젝트 루트를 Python 경로에 추가 (독립 프로세스로 실행되므로 필요)
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Django ORM 사용을 위한 초기화: 반드시 모델 import 전에 실행해야 함
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
import django
django.setup()

from django.conf import settings
from django.db import transaction

from apps.runs.models import SimulationRun
from apps.runs.services import execute
from workers.events import log
from workers.redis_queue import bump_retry, dead_letter, dequeue, enqueue, get_redis

logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.INFO, format="[Worker %(process)d] %(message)s")


# ── 타임아웃 처리 ──────────────────────────────────────────────
class RunTimeout(Exception):
    pass


def _timeout_handler(signum, frame):
    """SIGALRM 수신 시: run 전체가 제한 시간 초과."""
    raise RunTimeout(f"run exceeded {settings.RUN_TIMEOUT}s")

signal.signal(signal.SIGALRM, _timeout_handler)


# ── run 선점 ───────────────────────────────────────────────────
def claim_run(run_id: int) -> SimulationRun | None:
    """QUEUED 인 run 을 IN_PROGRESS 로 바꾸고 반환. 다른 워커가 선점했거나 없으면 None."""
    with transaction.atomic():
        run = (
            SimulationRun.objects.select_for_update(skip_locked=True)
            .filter(pk=run_id, status=SimulationRun.Status.QUEUED)
            .first()
        )
        if run is None:
            return None
        run.status = SimulationRun.Status.IN_PROGRESS
        run.error = ""
        run.save(update_fields=["status", "error", "updated_at"])
    return run


# ── run 실행 ───────────────────────────────────────────────────
def process_run(run_id: int) -> None:
    """
    run 하나를 실행.
      1. QUEUED → IN_PROGRESS 선점
      2. services.execute(config, output_path): 앙상블 실행 + 결과 파일 atomic write
      3. 성공: summary 저장 + COMPLETED / 실패: 재시도 또는 FAILED + DLQ
    """
    run = claim_run(run_id)
    if run is None:
        logger.warning(f"⚠️ Run {run_id} DB에 없거나 이미 선점됨, 스킵")
        return

    log("run_started", run_id=run.id, command=run.command)
    signal.alarm(settings.RUN_TIMEOUT)
    try:
        summary = execute(run.config, run.output_path)
    except RunTimeout as e:
        log("run_timeout", run_id=run.id, timeout_s=settings.RUN_TIMEOUT)
        _handle_failed_run(run, str(e))
        return
    except Exception as e:
        logger.exception(f"❌ Run {run.id} 실행 실패")
        _handle_failed_run(run, f"{type(e).__name__}: {e}")
        return
    finally:
        signal.alarm(0)  # 타이머 해제

    run.summary = summary
    run.status = SimulationRun.Status.COMPLETED
    run.save(update_fields=["summary", "status", "updated_at"])
    get_redis().delete(f"retry:run:{run.id}")
    log("run_completed", run_id=run.id, command=run.command, **{k: v for k, v in summary.items() if k != "fits"})


def _handle_failed_run(run: SimulationRun, error: str) -> None:
    """
    실패한 run 의 재시도 횟수를 Redis 카운터(retry:run:{id}, TTL 1시간)로 추적.
    MAX_RETRIES 이하면 QUEUED 로 되돌려 재등록, 초과 시 FAILED + DLQ.
    """
    r = get_redis()
    attempt = bump_retry(r, run.id)
    run.error = error

    if attempt <= settings.MAX_RETRIES:
        run.status = SimulationRun.Status.QUEUED
        run.save(update_fields=["status", "error", "updated_at"])
        log("run_retry", run_id=run.id, attempt=f"{attempt}/{settings.MAX_RETRIES}", error=error)
        enqueue(run.id)
    else:
        run.status = SimulationRun.Status.FAILED
        run.save(update_fields=["status", "error", "updated_at"])
        dead_letter(r, run.id)
        log("run_failed", run_id=run.id, max_retries=settings.MAX_RETRIES, error=error)


# ── 워커 메인 루프 ─────────────────────────────────────────────
def run_worker():
    """
    Redis 큐 폴링 → run 실행 반복.
    SIGTERM 수신 시 현재 run 완료 후 종료 (Graceful Shutdown).
    """
    shutdown = False

    def handle_sigterm(signum, frame):
        nonlocal shutdown
        logger.info("⚠️ SIGTERM 수신: 현재 run 완료 후 종료")
        shutdown = True

    signal.signal(signal.SIGTERM, handle_sigterm)
    logger.info("✅ Worker 준비 완료: 큐 대기 시작")

    while not shutdown:
        # 큐가 비면 BRPOP 이 5초 대기 후 None: shutdown 여부 다시 확인
        run_id = dequeue(timeout=5)
        if run_id is None:
            continue

        logger.info(f"🔥 Run {run_id} 수신")
        process_run(run_id)

    logger.info("✅ Worker 정상 종료")


if __name__ == "__main__":
    run_worker()

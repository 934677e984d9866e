"""
main.py
역할: Worker 프로세스들을 관리하는 매니저.
      WORKER_COUNT만큼 worker.py를 별도 프로세스로 실행하고,
      크래시 발생 시 자동으로 재시작 + 주기적으로 stuck run 복구.
"""

import os
import sys
import time
import signal
import logging
import multiprocessing
from datetime import timedelta

# 프로젝트 루트 경로 추가
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Django 설정 초기화 (settings.WORKER_COUNT 읽기 위해 필요)
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
import django
django.setup()

from django.conf import settings

logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.INFO, format="[Manager] %(message)s")

# enqueue 유실로 판단하는 QUEUED 체류 시간
QUEUED_STUCK_MINUTES = 5
# stuck run 복구 주기 (초)
RECOVERY_INTERVAL = 600


def _recover_stuck_runs() -> None:
    """
    두 가지 stuck 상태를 복구:

    1. IN_PROGRESS stuck (RUN_TIMEOUT 초과):
       워커 크래시(SIGKILL, OOM 등)로 실행 중 멈춘 run.
       SIGALRM 타임아웃이 걸렸다면 이미 재시도 처리됐어야 하므로 RUN_TIMEOUT 경과 시 유실 판단.

    2. QUEUED stuck (5분 초과 + Redis 큐에 없음):
       DB 생성 후 Redis enqueue 전에 API/CLI 가 죽은 run.

    두 케이스 모두 retry:run:{id} 카운터를 공유. MAX_RETRIES 초과 시 FAILED + DLQ.
    """
    from django.utils import timezone
    from apps.runs.models import SimulationRun
    from workers.events import log
    from workers.redis_queue import QUEUE_KEY, bump_retry, dead_letter, enqueue, get_redis

    now = timezone.now()
    stuck_in_progress = list(SimulationRun.objects.filter(
        status=SimulationRun.Status.IN_PROGRESS,
        updated_at__lt=now - timedelta(seconds=settings.RUN_TIMEOUT),
    ))
    stuck_queued = list(SimulationRun.objects.filter(
        status=SimulationRun.Status.QUEUED,
        updated_at__lt=now - timedelta(minutes=QUEUED_STUCK_MINUTES),
    ))

    if not stuck_in_progress and not stuck_queued:
        return

    r = get_redis()
    # 큐에 아직 남아 있는 QUEUED run 은 앞선 run 을 기다리는 중일 뿐 유실이 아님
    stuck_queued = [run for run in stuck_queued if r.lpos(QUEUE_KEY, str(run.id)) is None]
    requeued = failed = 0
    for run in stuck_in_progress + stuck_queued:
        attempt = bump_retry(r, run.id)
        if attempt > settings.MAX_RETRIES:
            run.status = SimulationRun.Status.FAILED
            run.error = run.error or "stuck run: 재시도 횟수 소진"
            run.save(update_fields=["status", "error", "updated_at"])
            dead_letter(r, run.id)
            failed += 1
            logger.warning(f"  ❌ Run {run.id} 재시도 {settings.MAX_RETRIES}회 초과 → FAILED (DLQ)")
        else:
            # IN_PROGRESS 는 QUEUED 로 되돌리고, QUEUED 는 Redis 큐에만 재등록
            run.status = SimulationRun.Status.QUEUED
            run.save(update_fields=["status", "updated_at"])
            enqueue(run.id)
            requeued += 1
            logger.info(f"  ↩️  Run {run.id} 재큐잉 ({attempt}/{settings.MAX_RETRIES})")

    log(
        "stuck_runs_recovered",
        in_progress=len(stuck_in_progress),
        queued=len(stuck_queued),
        requeued=requeued,
        failed=failed,
    )


def start_worker_process() -> multiprocessing.Process:
    """worker.py의 run_worker()를 새 프로세스로 실행. 프로세스 간 메모리 공유 없음."""
    from workers.worker import run_worker

    # daemon=False: 워커가 run 안에서 다시 앙상블 프로세스 풀을 띄울 수 있어야 함
    p = multiprocessing.Process(target=run_worker, daemon=False)
    p.start()
    logger.info(f"✅ Worker 프로세스 시작: PID={p.pid}")
    return p


def run_manager():
    """
    매니저 메인 루프.
    1. WORKER_COUNT개 Worker 프로세스 시작
    2. 3초마다 Worker 상태 확인, 크래시된 Worker 자동 재시작
    3. RECOVERY_INTERVAL 마다 stuck run 복구
    4. SIGTERM 수신 시 모든 Worker에 종료 신호 전송 (Graceful Shutdown)
    """
    shutdown = False

    def handle_sigterm(signum, frame):
        nonlocal shutdown
        logger.info("⚠️ SIGTERM 수신: 모든 Worker 종료 시작")
        shutdown = True

    signal.signal(signal.SIGTERM, handle_sigterm)
    signal.signal(signal.SIGINT, handle_sigterm)  # Ctrl+C도 동일하게 처리

    worker_count = settings.WORKER_COUNT
    logger.info(f"🔥 매니저 시작: Worker {worker_count}개 실행")

    processes: list[multiprocessing.Process] = [
        start_worker_process() for _ in range(worker_count)
    ]

    # 시작 직후 한 번 복구 (매니저 재시작 전 유실된 run)
    _recover_stuck_runs()
    last_recovery = time.monotonic()

    while not shutdown:
        time.sleep(3)

        for i, p in enumerate(processes):
            if not p.is_alive():
                logger.warning(
                    f"❗️ Worker {i} 크래시 감지 (PID={p.pid}, exit={p.exitcode}): 재시작"
                )
                p.close()  # 죽은 프로세스 리소스 해제
                processes[i] = start_worker_process()

        if time.monotonic() - last_recovery >= RECOVERY_INTERVAL:
            _recover_stuck_runs()
            last_recovery = time.monotonic()

    logger.info("⚠️ 모든 Worker에 SIGTERM 전송 중...")
    for p in processes:
        if p.is_alive():
            p.terminate()

    # 각 Worker가 현재 run 을 정리하고 종료될 때까지 최대 30초 대기
    for p in processes:
        p.join(timeout=30)
        if p.is_alive():
            logger.warning(f"❌ Worker PID={p.pid} 30초 내 미종료: 강제 종료")
            p.kill()

    logger.info("✅ 모든 Worker 종료 완료: 매니저 종료")


if __name__ == "__main__":
    # multiprocessing spawn 방식 명시 (Docker Linux 환경 호환성)
    multiprocessing.set_start_method("spawn", force=True)
    run_manager()

"""
test_worker.py
역할: workers/worker.py 의 process_run / 재시도 로직과
      workers/main.py 의 _recover_stuck_runs() 를 Mock 객체로 단위 테스트.
      실제 앙상블 실행·Redis 없이 DB 상태 변화와 Redis 호출 인자만 검증.
"""

from datetime import timedelta
from unittest.mock import MagicMock, patch

import pytest
from django.conf import settings
from django.utils import timezone

from apps.runs.models import SimulationRun

SUMMARY = {"rows": 7, "n_realizations": 2, "elapsed_s": 0.1, "output_path": "/tmp/run-test-simulate.csv"}


def run_with(run_id, mock_redis, **execute_kwargs):
    """execute / Redis / SIGALRM 을 Mock 으로 바꾸고 process_run 실행."""
    from workers.worker import process_run

    with (
        patch("workers.worker.execute", **execute_kwargs) as execute,
        # retry 카운터 / 완료 후 정리용 Redis mock
        patch("workers.worker.get_redis", return_value=mock_redis),
        # enqueue() 내부 LPUSH 용 get_redis() mock
        patch("workers.redis_queue.get_redis", return_value=mock_redis),
        # SIGALRM 타임아웃 타이머 비활성화 (테스트 프로세스 보호)
        patch("signal.alarm"),
    ):
        process_run(run_id)
    return execute


# ── process_run() ─────────────────────────────────────────────

@pytest.mark.django_db
def test_process_run_success(simulation_run):
    """정상 경로: summary 저장 + COMPLETED + retry 카운터 삭제."""
    mock_redis = MagicMock()
    execute = run_with(simulation_run.id, mock_redis, return_value=SUMMARY)

    execute.assert_called_once_with(simulation_run.config, simulation_run.output_path)
    simulation_run.refresh_from_db()
    assert simulation_run.status == SimulationRun.Status.COMPLETED
    assert simulation_run.summary == SUMMARY
    mock_redis.delete.assert_called_once_with(f"retry:run:{simulation_run.id}")


@pytest.mark.django_db
def test_process_run_failure_requeues(simulation_run):
    """첫 실패: QUEUED 로 되돌리고 에러 메시지 기록 + 큐 재등록."""
    mock_redis = MagicMock()
    mock_redis.incr.return_value = 1  # 첫 번째 재시도 (1 <= MAX_RETRIES)
    run_with(simulation_run.id, mock_redis, side_effect=RuntimeError("boom"))

    simulation_run.refresh_from_db()
    assert simulation_run.status == SimulationRun.Status.QUEUED
    assert simulation_run.error == "RuntimeError: boom"
    mock_redis.lpush.assert_called_once_with("simulation:queue", str(simulation_run.id))


@pytest.mark.django_db
def test_process_run_failure_dead_letters(simulation_run):
    """재시도 횟수 소진: FAILED + DLQ push + retry 카운터 삭제."""
    mock_redis = MagicMock()
    mock_redis.incr.return_value = settings.MAX_RETRIES + 1
    run_with(simulation_run.id, mock_redis, side_effect=RuntimeError("boom"))

    simulation_run.refresh_from_db()
    assert simulation_run.status == SimulationRun.Status.FAILED
    mock_redis.lpush.assert_called_once_with("dlq:failed_runs", simulation_run.id)
    mock_redis.delete.assert_called_once_with(f"retry:run:{simulation_run.id}")


@pytest.mark.django_db
def test_process_run_timeout_is_retried(simulation_run):
    from workers.worker import RunTimeout

    mock_redis = MagicMock()
    mock_redis.incr.return_value = 1
    run_with(simulation_run.id, mock_redis, side_effect=RunTimeout("run exceeded 10s"))

    simulation_run.refresh_from_db()
    assert simulation_run.status == SimulationRun.Status.QUEUED
    assert simulation_run.error == "run exceeded 10s"


@pytest.mark.django_db
def test_process_run_skips_claimed_run(simulation_run):
    """다른 워커가 이미 IN_PROGRESS 로 선점한 run 은 실행하지 않는다."""
    SimulationRun.objects.filter(pk=simulation_run.id).update(status=SimulationRun.Status.IN_PROGRESS)

    execute = run_with(simulation_run.id, MagicMock(), return_value=SUMMARY)

    execute.assert_not_called()


@pytest.mark.django_db
def test_process_run_nonexistent():
    """DB 에 없는 run_id: 예외 없이 조용히 스킵."""
    execute = run_with(99999, MagicMock(), return_value=SUMMARY)
    execute.assert_not_called()


# ── _recover_stuck_runs() ─────────────────────────────────────

def make_stuck(run, status, age):
    # auto_now=True 우회: update()로 updated_at 직접 설정
    SimulationRun.objects.filter(pk=run.id).update(status=status, updated_at=timezone.now() - age)


def recover(mock_redis):
    from workers.main import _recover_stuck_runs

    with patch("workers.redis_queue.get_redis", return_value=mock_redis):
        _recover_stuck_runs()


@pytest.mark.django_db
def test_recover_stuck_in_progress(simulation_run):
    """RUN_TIMEOUT 을 넘긴 IN_PROGRESS run 은 QUEUED 로 되돌려 재등록."""
    make_stuck(simulation_run, SimulationRun.Status.IN_PROGRESS, timedelta(seconds=settings.RUN_TIMEOUT + 3600))
    mock_redis = MagicMock()
    mock_redis.incr.return_value = 1

    recover(mock_redis)

    simulation_run.refresh_from_db()
    assert simulation_run.status == SimulationRun.Status.QUEUED
    mock_redis.lpush.assert_called_with("simulation:queue", str(simulation_run.id))


@pytest.mark.django_db
def test_recover_leaves_waiting_queued_run(simulation_run):
    """Redis 큐에 아직 남아 있는 QUEUED run 은 유실이 아니므로 건드리지 않는다."""
    make_stuck(simulation_run, SimulationRun.Status.QUEUED, timedelta(minutes=10))
    mock_redis = MagicMock()
    mock_redis.lpos.return_value = 3

    recover(mock_redis)

    mock_redis.incr.assert_not_called()
    mock_redis.lpush.assert_not_called()


@pytest.mark.django_db
def test_recover_lost_queued_run(simulation_run):
    """enqueue 전에 죽어 큐에 없는 QUEUED run 은 다시 넣는다."""
    make_stuck(simulation_run, SimulationRun.Status.QUEUED, timedelta(minutes=10))
    mock_redis = MagicMock()
    mock_redis.lpos.return_value = None
    mock_redis.incr.return_value = 1

    recover(mock_redis)

    mock_redis.lpos.assert_called_once_with("simulation:queue", str(simulation_run.id))
    mock_redis.lpush.assert_called_once_with("simulation:queue", str(simulation_run.id))


@pytest.mark.django_db
def test_recover_dead_letters_after_max_retries(simulation_run):
    """stuck 복구도 retry 카운터를 공유 → 소진 시 FAILED + DLQ."""
    make_stuck(simulation_run, SimulationRun.Status.IN_PROGRESS, timedelta(seconds=settings.RUN_TIMEOUT + 3600))
    mock_redis = MagicMock()
    mock_redis.incr.return_value = settings.MAX_RETRIES + 1

    recover(mock_redis)

    simulation_run.refresh_from_db()
    assert simulation_run.status == SimulationRun.Status.FAILED
    assert simulation_run.error
    mock_redis.lpush.assert_called_with("dlq:failed_runs", simulation_run.id)
    mock_redis.delete.assert_called_once_with(f"retry:run:{simulation_run.id}")


@pytest.mark.django_db
def test_recover_ignores_fresh_runs(simulation_run):
    mock_redis = MagicMock()

    recover(mock_redis)

    mock_redis.incr.assert_not_called()

"""
conftest.py
역할: 모든 테스트에서 공유하는 fixtures와 설정 정의.

주요 역할:
  - DB를 MySQL 대신 SQLite(메모리)로 교체 → 실제 DB 없이 테스트 가능
  - 공통 fixtures 정의 (작은 회로 앙상블 결과 파일, SimulationRun 레코드 등)
"""

import pytest
from rest_framework.test import APIClient


@pytest.fixture(scope="session")
def django_db_setup(django_test_environment, django_db_blocker):
    """
    세션 전체에서 SQLite 인메모리 DB 사용.
    pytest.ini의 DJANGO_SETTINGS_MODULE = config.test_settings 으로
    DB가 이미 SQLite로 설정돼 있으므로 여기서는 migrate만 실행.
    """
    with django_db_blocker.unblock():
        from django.core.management import call_command
        call_command("migrate", verbosity=0)


@pytest.fixture
def api_client():
    """DRF APIClient: 서버 없이 HTTP 요청을 시뮬레이션."""
    return APIClient()


@pytest.fixture
def simulate_config() -> dict:
    """검증을 통과하는 최소 simulate 설정 (fffa, fffa_sweep preset)."""
    return {"command": "simulate", "layout": "fffa", "L": 8, "T": 4, "p": 0.2, "n": 2, "seed": 1}


@pytest.fixture
def fffa_result(tmp_path):
    """
    L=8, T=4 fffa 앙상블 2개를 실제로 돌려 만든 ResultFile 경로.
    fit / collapse / 결과 조회 테스트가 공유한다.
    """
    from engine.circuits import BoundaryLayout, build_preset
    from engine.resultfile import write_result
    from workers.ensemble import run_ensemble

    layout = BoundaryLayout("fffa", 8, 4, 0.2)
    _, schedule = build_preset("fffa_sweep", 8, 4)
    series = run_ensemble(layout, schedule, n_realizations=2, master_seed=1)
    path = tmp_path / "fffa.csv"
    write_result(path, series, {"command": "simulate", "layout": "fffa", "L": 8, "T": 4, "p": 0.2, "n": 2, "seed": 1})
    return path


@pytest.fixture
def simulation_run(db):
    """QUEUED 상태 SimulationRun 레코드."""
    from apps.runs.models import SimulationRun
    from apps.runs.serializers import config_sha256

    config = {"command": "simulate", "layout": "fffa", "L": 8, "T": 4, "p": 0.2, "n": 2, "seed": 1, "workers": 1}
    return SimulationRun.objects.create(
        command=SimulationRun.Command.SIMULATE,
        config=config,
        config_sha256=config_sha256(config),
        output_path="/tmp/run-test-simulate.csv",
    )

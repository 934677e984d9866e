"""
test_views.py
역할: runs API 엔드포인트의 검증·dedupe·결과 조회 로직과 에러 처리를 검증.
      Redis 는 Mock 처리: 큐 등록 여부만 확인하고 실제 실행은 하지 않는다.
"""

from unittest.mock import patch

import pytest

from apps.runs.models import SimulationRun


def post_run(api_client, payload):
    """get_cache 미스 + set_cache/enqueue Mock 상태에서 POST /v1/runs."""
    with patch("apps.runs.services.get_cache", return_value=None), \
         patch("apps.runs.services.set_cache"), \
         patch("apps.runs.services.enqueue") as enqueue:
        response = api_client.post("/v1/runs", payload, format="json")
    return response, enqueue


# ── POST /v1/runs ───────────────────────────────────────────────

@pytest.mark.django_db
def test_create_run_success(api_client, simulate_config):
    """정상 설정 제출 시 run 이 생성되고 201 + QUEUED 를 반환하는지 검증."""
    response, enqueue = post_run(api_client, simulate_config)

    assert response.status_code == 201
    assert response.data["status"] == "QUEUED"
    assert response.data["command"] == "simulate"

    run = SimulationRun.objects.get(pk=response.data["id"])
    enqueue.assert_called_once_with(run.id)
    # 서버가 채운 기본값까지 canonical config 에 들어간다
    assert run.config["workers"] == 1
    assert run.config["y_over_t"] == 0.61
    assert run.output_path.endswith(f"run-{run.id}-simulate.csv")


@pytest.mark.django_db
def test_create_run_duplicate_returns_existing(api_client, simulate_config):
    """같은 실험 재요청: 캐시가 만료돼도 DB fallback 으로 기존 run 을 200 으로 반환."""
    first, _ = post_run(api_client, simulate_config)
    second, enqueue = post_run(api_client, simulate_config)

    assert second.status_code == 200
    assert second.data["id"] == first.data["id"]
    enqueue.assert_not_called()
    assert SimulationRun.objects.count() == 1


@pytest.mark.django_db
def test_worker_count_does_not_split_dedupe(api_client, simulate_config):
    """workers 는 해시에서 빠지므로 다른 값이어도 같은 run."""
    first, _ = post_run(api_client, simulate_config)
    second, _ = post_run(api_client, {**simulate_config, "workers": 4})

    assert second.data["id"] == first.data["id"]


@pytest.mark.django_db
def test_create_run_cache_hit(api_client, simulation_run, simulate_config):
    """Redis 캐시가 가리키는 run 이 살아 있으면 그대로 반환."""
    with patch("apps.runs.services.get_cache", return_value=simulation_run.id), \
         patch("apps.runs.services.enqueue") as enqueue:
        response = api_client.post("/v1/runs", simulate_config, format="json")

    assert response.status_code == 200
    assert response.data["id"] == simulation_run.id
    enqueue.assert_not_called()


@pytest.mark.django_db
@pytest.mark.parametrize(
    "changes, field",
    [
        ({"L": 1}, "L"),
        ({"layout": "afaa", "L": 5}, "layout"),
        ({"schedule": "nope"}, "schedule"),
        ({"p": 1.5}, "p"),
    ],
)
def test_create_run_invalid_config(api_client, simulate_config, changes, field):
    """잘못된 설정은 실패한 필드 이름과 함께 400."""
    response, enqueue = post_run(api_client, {**simulate_config, **changes})

    assert response.status_code == 400
    assert field in response.data
    enqueue.assert_not_called()
    assert not SimulationRun.objects.exists()


@pytest.mark.django_db
def test_create_run_missing_fields(api_client):
    response, _ = post_run(api_client, {"command": "simulate"})

    assert response.status_code == 400
    assert {"L", "T", "p"} <= set(response.data)


# ── GET /v1/runs/{id} ──────────────────────────────────────────

@pytest.mark.django_db
def test_get_run_not_found(api_client):
    response = api_client.get("/v1/runs/99999")
    assert response.status_code == 404


@pytest.mark.django_db
def test_get_run_status(api_client, simulation_run):
    response = api_client.get(f"/v1/runs/{simulation_run.id}")

    assert response.status_code == 200
    assert response.data["status"] == "QUEUED"
    assert response.data["config"]["layout"] == "fffa"


# ── GET /v1/runs/{id}/result ───────────────────────────────────

@pytest.mark.django_db
def test_result_not_completed(api_client, simulation_run):
    """완료 전 결과 조회는 409."""
    response = api_client.get(f"/v1/runs/{simulation_run.id}/result")
    assert response.status_code == 409


@pytest.mark.django_db
def test_result_returns_rows(api_client, simulation_run, fffa_result):
    simulation_run.status = SimulationRun.Status.COMPLETED
    simulation_run.output_path = str(fffa_result)
    simulation_run.save()

    response = api_client.get(f"/v1/runs/{simulation_run.id}/result?limit=1")

    assert response.status_code == 200
    assert response.data["total_rows"] == 7
    assert len(response.data["rows"]) == 1
    assert response.data["rows"][0]["observable"] == "bipartite_entropy"
    assert response.data["header"]["config"]["layout"] == "fffa"


@pytest.mark.django_db
def test_result_file_missing(api_client, simulation_run, tmp_path):
    """COMPLETED 인데 파일이 사라졌으면 410."""
    simulation_run.status = SimulationRun.Status.COMPLETED
    simulation_run.output_path = str(tmp_path / "gone.csv")
    simulation_run.save()

    response = api_client.get(f"/v1/runs/{simulation_run.id}/result")
    assert response.status_code == 410


@pytest.mark.django_db
def test_result_bad_limit(api_client, simulation_run):
    simulation_run.status = SimulationRun.Status.COMPLETED
    simulation_run.save()

    response = api_client.get(f"/v1/runs/{simulation_run.id}/result?limit=abc")
    assert response.status_code == 400


@pytest.mark.django_db
def test_result_for_fit_returns_summary(api_client):
    run = SimulationRun.objects.create(
        command=SimulationRun.Command.FIT,
        status=SimulationRun.Status.COMPLETED,
        config={"command": "fit"},
        config_sha256="fit",
        summary={"fits": [{"kind": "log_linear", "exponent": 0.5}]},
    )

    response = api_client.get(f"/v1/runs/{run.id}/result")

    assert response.status_code == 200
    assert response.data["fits"][0]["exponent"] == 0.5

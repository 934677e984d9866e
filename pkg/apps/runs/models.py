from django.db import models


class SimulationRun(models.Model):
    """
    simulate / percolate / fit / calibrate / collapse 실행 1건을 추적하는 테이블.
    Redis 큐는 워커에게 run_id 만 전달하는 임시 채널이고,
    상태의 단일 진실 공급원(single source of truth)은 이 테이블이다.
    """

    class Command(models.TextChoices):
        SIMULATE  = "simulate"
        PERCOLATE = "percolate"
        FIT       = "fit"
        CALIBRATE = "calibrate"
        COLLAPSE  = "collapse"

    class Status(models.TextChoices):
        QUEUED      = "QUEUED"       # 큐에 등록됨, 아직 워커가 꺼내지 않은 상태
        IN_PROGRESS = "IN_PROGRESS"  # 워커가 꺼내서 실행 중
        COMPLETED   = "COMPLETED"    # 성공, output_path 에 결과 파일 / summary 에 요약
        FAILED      = "FAILED"       # MAX_RETRIES 재시도 후에도 실패, DLQ로 이동

    command = models.CharField(max_length=16, choices=Command.choices)
    status = models.CharField(
        max_length=20, choices=Status.choices, default=Status.QUEUED
    )
    # 검증을 거친 canonical RunConfig 전체 (workers/out 포함)
    config = models.JSONField()
    # workers/out 을 뺀 canonical config 의 SHA256: 같은 실험 재요청 감지 키
    config_sha256 = models.CharField(max_length=64, db_index=True)
    output_path = models.CharField(max_length=1024, blank=True, default="")
    # 행 수, realization 수, 소요 시간, fit 결과 등
    summary = models.JSONField(null=True, blank=True)
    error = models.TextField(blank=True, default="")
    created_at = models.DateTimeField(auto_now_add=True)
    # auto_now=True: save() 호출마다 자동 갱신: stuck run 감지 기준 시각
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        db_table = "simulation_runs"
        indexes = [
            # /v1/ops/metrics 의 "최근 N분간 COMPLETED run 수" 처럼
            # status + created_at 범위 필터를 동시에 쓰는 쿼리용
            models.Index(fields=["status", "created_at"], name="idx_run_status_created"),
        ]

    def __str__(self):
        return f"Run {self.id} {self.command} [{self.status}]"

"""
serializers.py
역할: RunConfig 검증과 API 응답 직렬화.
      같은 RunConfigSerializer 가 POST /v1/runs payload 와 manage.py 플래그를 모두 검증한다.
      serializer.errors 딕셔너리가 설정 오류의 "필드 포인터" 역할을 한다.
"""

import hashlib
import json

from django.conf import settings
from rest_framework import serializers

from engine.circuits import KINDS
from engine.errors import CliffordCftError, GeometryError
from engine.percolation import COLORINGS, WRAPS
from engine.resultfile import header_config

from .models import SimulationRun

FIT_CHOICES = ("log_linear", "power_law", "eta_to_one", "bell_early", "bell_late", "refQ_power", "lightcone")

# schedule 파일을 읽지 못한 검증 오류의 code (명령은 종료 코드 3 으로 바꾼다)
IO_ERROR = "io_error"

# 명령별 필수 필드
REQUIRED = {
    "simulate": ("L", "T", "p"),
    "percolate": ("L", "T", "p"),
    "fit": ("inputs", "fit_kind"),
    "calibrate": ("L", "T", "p_grid", "y_over_t_grid"),
    "collapse": ("inputs",),
}


def config_sha256(config: dict) -> str:
    """workers/out 을 뺀 canonical config 의 SHA256 (같은 실험 = 같은 해시)."""
    canonical = json.dumps(header_config(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


class RunConfigSerializer(serializers.Serializer):
    command = serializers.ChoiceField(choices=SimulationRun.Command.choices)

    # 회로 / percolation 공통
    layout = serializers.ChoiceField(choices=KINDS, required=False)
    L = serializers.IntegerField(min_value=2, required=False)
    T = serializers.IntegerField(min_value=0, required=False)
    p = serializers.FloatField(min_value=0.0, max_value=1.0, required=False)
    n = serializers.IntegerField(min_value=1, default=1)
    seed = serializers.IntegerField(min_value=0, default=0)
    workers = serializers.IntegerField(min_value=1, required=False)
    y_over_t = serializers.FloatField(required=False)
    schedule = serializers.CharField(required=False, allow_blank=False)
    ref_segment = serializers.ListField(
        child=serializers.IntegerField(min_value=0), min_length=2, max_length=2, required=False
    )
    out = serializers.CharField(required=False, allow_blank=False)

    # percolate
    coloring = serializers.ChoiceField(choices=COLORINGS, default="top_bipartition")
    wrap = serializers.ChoiceField(choices=WRAPS, default="open")
    depths = serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=1, required=False)

    # fit / collapse
    inputs = serializers.ListField(child=serializers.CharField(), min_length=1, required=False)
    fit_kind = serializers.ChoiceField(choices=FIT_CHOICES, required=False)
    pooled = serializers.BooleanField(default=True)
    min_tau = serializers.FloatField(min_value=0.0, required=False)
    min_separation = serializers.FloatField(min_value=0.0, required=False)
    ceiling = serializers.FloatField(required=False)
    floor = serializers.FloatField(required=False)
    two_term = serializers.BooleanField(required=False)
    width = serializers.FloatField(required=False)
    h = serializers.FloatField(required=False)
    upper = serializers.FloatField(required=False)
    lower = serializers.FloatField(required=False)

    # calibrate
    p_grid = serializers.ListField(
        child=serializers.FloatField(min_value=0.0, max_value=1.0), min_length=1, required=False
    )
    y_over_t_grid = serializers.ListField(child=serializers.FloatField(), min_length=1, required=False)

    def validate_y_over_t(self, value):
        if not value > 0:
            raise serializers.ValidationError("y_over_t 는 양수여야 함")
        return value

    def validate_y_over_t_grid(self, value):
        if any(not v > 0 for v in value):
            raise serializers.ValidationError("y_over_t_grid 값은 모두 양수여야 함")
        return sorted(set(value))

    def validate_p_grid(self, value):
        return sorted(set(value))

    def validate_ref_segment(self, value):
        a, b = value
        if not a < b:
            raise serializers.ValidationError("ref_segment 는 a < b")
        return value

    def validate(self, attrs):
        command = attrs["command"]
        missing = {f: ["이 명령에 필요한 필드"] for f in REQUIRED[command] if f not in attrs}
        if missing:
            raise serializers.ValidationError(missing)
        if command == "collapse" and len(attrs["inputs"]) != 1:
            raise serializers.ValidationError({"inputs": ["collapse 는 입력 파일 1개"]})

        attrs.setdefault("workers", settings.WORKER_COUNT)
        attrs.setdefault("y_over_t", settings.Y_OVER_T)

        # 실제로 layout/schedule 을 풀어 보고 실패 지점을 필드에 붙인다
        from .services import check_plan

        try:
            check_plan(attrs)
        except GeometryError as e:
            raise serializers.ValidationError({"layout": [str(e)]}) from e
        except CliffordCftError as e:
            raise serializers.ValidationError({"schedule": [str(e)]}) from e
        except OSError as e:
            raise serializers.ValidationError({"schedule": [str(e)]}, code=IO_ERROR) from e
        return attrs

    def canonical(self) -> dict:
        """검증된 config 를 JSON 직렬화 가능한 정렬된 dict 로."""
        return json.loads(json.dumps(dict(self.validated_data), sort_keys=True))


class RunCreateResponseSerializer(serializers.ModelSerializer):
    """POST /v1/runs 응답: id 와 status 만."""

    class Meta:
        model = SimulationRun
        fields = ["id", "command", "status", "created_at"]


class RunStatusSerializer(serializers.ModelSerializer):
    """GET /v1/runs/{id} 응답."""

    class Meta:
        model = SimulationRun
        fields = ["id", "command", "status", "config", "output_path", "summary", "error", "created_at", "updated_at"]

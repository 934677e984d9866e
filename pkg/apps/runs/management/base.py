"""
base.py
역할: simulate / percolate / fit / calibrate / collapse 명령의 공통 뼈대.
      CLI 플래그 → RunConfigSerializer 검증 → services.execute (또는 --queue 로 큐 제출).

종료 코드 (CommandError.returncode):
  0 성공 / 2 설정 오류 / 3 I/O 오류 / 4 fit 실패
"""

import json

from django.core.management.base import BaseCommand, CommandError

from engine.errors import CliffordCftError, FitError

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_FIT = 4


class RunCommand(BaseCommand):
    command_name = ""
    # 이 명령이 serializer 로 넘기는 옵션 (argparse dest == serializer 필드명)
    config_fields: tuple[str, ...] = ()

    # ── 공통 플래그 ──
    def add_simulation_arguments(self, parser):
        parser.add_argument("--L", dest="L", type=int, help="체인 길이 (큐비트 수)")
        parser.add_argument("--T", dest="T", type=int, help="깊이 (unitary layer 수)")
        parser.add_argument("--p", dest="p", type=float, help="layer 당 사이트별 측정 확률")
        parser.add_argument("--n", dest="n", type=int, help="realization 수")
        parser.add_argument("--seed", dest="seed", type=int, help="master seed")
        parser.add_argument("--workers", dest="workers", type=int, help="앙상블 프로세스 수 (기본: WORKER_COUNT)")
        parser.add_argument("--y-over-t", dest="y_over_t", type=float, help="비등방 상수 Y/T (기본: Y_OVER_T)")
        parser.add_argument("--schedule", dest="schedule", help="preset 이름 또는 JSON 파일 경로")

    def add_out_argument(self, parser, required: bool = False):
        parser.add_argument("--out", dest="out", required=required, help="출력 파일 경로")

    def config_from_options(self, options) -> dict:
        data = {"command": self.command_name}
        data.update({k: options[k] for k in self.config_fields if options.get(k) is not None})
        return data

    def validated_config(self, options) -> dict:
        from apps.runs.serializers import IO_ERROR, RunConfigSerializer

        serializer = RunConfigSerializer(data=self.config_from_options(options))
        if not serializer.is_valid():
            codes = serializer.errors.get("schedule", [])
            if any(getattr(detail, "code", None) == IO_ERROR for detail in codes):
                raise CommandError(f"I/O 오류: {codes[0]}", returncode=EXIT_IO)
            raise CommandError(
                f"설정 오류: {json.dumps(serializer.errors, ensure_ascii=False)}", returncode=EXIT_CONFIG
            )
        return serializer.canonical()

    def handle(self, *args, **options):
        config = self.validated_config(options)

        if options.get("queue"):
            from apps.runs.services import submit_run

            run, created = submit_run(config)
            state = "등록" if created else "기존 run 재사용"
            self.stdout.write(self.style.SUCCESS(f"📨 Run {run.id} {state} [{run.status}] → {run.output_path}"))
            return

        from apps.runs.services import execute

        try:
            summary = execute(config)
        except FitError as e:
            raise CommandError(f"fit 실패: {e}", returncode=EXIT_FIT) from e
        except CliffordCftError as e:
            raise CommandError(f"설정 오류: {e}", returncode=EXIT_CONFIG) from e
        except OSError as e:
            raise CommandError(f"I/O 오류: {e}", returncode=EXIT_IO) from e
        self.report(summary)

    def report(self, summary: dict) -> None:
        self.stdout.write(
            self.style.SUCCESS(
                f"✅ {summary['rows']}행, realization {summary['n_realizations']}개 → "
                f"{summary['output_path']} ({summary['elapsed_s']}s)"
            )
        )


class JsonReportMixin:
    """fit / calibrate: --out 이 없으면 결과 JSON 을 stdout 으로."""

    summary_key = ""

    def report(self, summary: dict) -> None:
        if "output_path" in summary:
            self.stdout.write(self.style.SUCCESS(f"✅ → {summary['output_path']}"))
            return
        self.stdout.write(json.dumps(summary[self.summary_key], ensure_ascii=False, indent=2))

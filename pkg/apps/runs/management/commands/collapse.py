"""
collapse.py
역할: 기존 ResultFile 의 τ, ξ, η 를 새 Y/T 로 다시 계산 (재시뮬레이션 없음).

실행: python manage.py collapse results/fafa.csv --y-over-t 0.58 --out results/fafa_058.csv
"""

from apps.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Recompute collapse coordinates of a result file for a new Y/T."
    command_name = "collapse"
    config_fields = ("inputs", "y_over_t", "out")

    def add_arguments(self, parser):
        parser.add_argument("input", help="ResultFile 경로")
        parser.add_argument("--y-over-t", dest="y_over_t", type=float, required=True)
        self.add_out_argument(parser, required=True)

    def config_from_options(self, options) -> dict:
        options["inputs"] = [options["input"]]
        return super().config_from_options(options)

"""
calibrate.py
역할: p 격자 위 pbc 정상상태 앙상블로 p_c, p_c 의 pbc Bell 앙상블로 Y/T 보정.

실행: python manage.py calibrate --L 64 --T 256 --p-grid 0.14 0.15 0.16 0.17 0.18 \
          --y-over-t-grid 0.5 0.55 0.6 0.65 0.7 --n 50
"""

from apps.runs.management.base import JsonReportMixin, RunCommand


class Command(JsonReportMixin, RunCommand):
    help = "Calibrate p_c and Y/T over fresh periodic-boundary ensembles."
    command_name = "calibrate"
    summary_key = "calibration"
    config_fields = ("L", "T", "n", "seed", "workers", "y_over_t", "p_grid", "y_over_t_grid", "out")

    def add_arguments(self, parser):
        parser.add_argument("--L", dest="L", type=int, required=True)
        parser.add_argument("--T", dest="T", type=int, required=True)
        parser.add_argument("--n", dest="n", type=int)
        parser.add_argument("--seed", dest="seed", type=int)
        parser.add_argument("--workers", dest="workers", type=int)
        parser.add_argument("--y-over-t", dest="y_over_t", type=float, help="정상상태 앙상블의 τ 기록용")
        parser.add_argument("--p-grid", dest="p_grid", type=float, nargs="+", required=True)
        parser.add_argument("--y-over-t-grid", dest="y_over_t_grid", type=float, nargs="+", required=True)
        self.add_out_argument(parser)
        parser.add_argument("--queue", action="store_true", help="인라인 실행 대신 큐에 등록")

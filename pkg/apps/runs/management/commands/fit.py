"""
fit.py
역할: ResultFile 들에서 스케일링 차원 fit. 파일별 결과 + (여러 파일이면) pooled fit.

실행: python manage.py fit results/fffa_*.csv --kind log_linear
"""

from apps.runs.management.base import JsonReportMixin, RunCommand
from apps.runs.serializers import FIT_CHOICES


class Command(JsonReportMixin, RunCommand):
    help = "Fit scaling exponents from one or more result files."
    command_name = "fit"
    summary_key = "fits"
    config_fields = (
        "inputs", "fit_kind", "pooled", "min_tau", "min_separation", "ceiling", "floor",
        "two_term", "width", "h", "upper", "lower", "out",
    )

    def add_arguments(self, parser):
        parser.add_argument("inputs", nargs="+", help="ResultFile 경로")
        parser.add_argument("--kind", dest="fit_kind", choices=FIT_CHOICES, required=True)
        parser.add_argument("--no-pooled", dest="pooled", action="store_false", default=None)
        parser.add_argument("--min-tau", dest="min_tau", type=float, help="τ 하한 (기본 0.03)")
        parser.add_argument("--min-separation", dest="min_separation", type=float)
        parser.add_argument("--ceiling", dest="ceiling", type=float, help="power_law: η 상한")
        parser.add_argument("--floor", dest="floor", type=float, help="power_law: η 하한")
        parser.add_argument("--two-term", dest="two_term", action="store_true", default=None)
        parser.add_argument("--width", dest="width", type=float, help="eta_to_one: 1-η 창")
        parser.add_argument("--h", dest="h", type=float, help="bell_early: 창 하한 hπ/L 의 h")
        parser.add_argument("--upper", dest="upper", type=float, help="bell_early: τ 상한 / refQ_power: T 상한 (기본 L/2)")
        parser.add_argument("--lower", dest="lower", type=float, help="bell_late: τ 하한 / refQ_power: T 하한 (기본 |A|)")
        self.add_out_argument(parser)

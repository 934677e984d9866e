"""
percolate.py
역할: brickwork 격자 최소 cut 앙상블 → 회로와 같은 형식의 ResultFile (Y/T = 1 고정).

실행: python manage.py percolate --L 64 --T 128 --p 0.5 --coloring top_vs_bottom --n 100 --out results/perc.csv
"""

from engine.percolation import COLORINGS, WRAPS

from apps.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Run a first-passage percolation min-cut ensemble and write a result file."
    command_name = "percolate"
    config_fields = ("L", "T", "p", "n", "seed", "workers", "schedule", "coloring", "wrap", "depths", "out")

    def add_arguments(self, parser):
        self.add_simulation_arguments(parser)
        parser.add_argument("--coloring", dest="coloring", choices=COLORINGS)
        parser.add_argument("--wrap", dest="wrap", choices=WRAPS)
        parser.add_argument("--depths", dest="depths", type=int, nargs="+", help="깊이 격자 (기본: period+log)")
        self.add_out_argument(parser)
        parser.add_argument("--queue", action="store_true", help="인라인 실행 대신 큐에 등록")

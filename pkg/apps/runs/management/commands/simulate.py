"""
simulate.py
역할: 회로 앙상블 실행 → ResultFile.

실행: python manage.py simulate --layout fffa --L 16 --T 16 --p 0.16 --n 4 --seed 1 --out results/fffa.csv
      python manage.py simulate --schedule fafa_bell --L 64 --T 128 --p 0.16 --n 200 --out ... --queue
"""

from engine.circuits import KINDS

from apps.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Run a hybrid Clifford circuit ensemble and write a result file."
    command_name = "simulate"
    config_fields = ("layout", "L", "T", "p", "n", "seed", "workers", "y_over_t", "schedule", "ref_segment", "out")

    def add_arguments(self, parser):
        parser.add_argument("--layout", dest="layout", choices=KINDS, help="경계 조건 종류")
        self.add_simulation_arguments(parser)
        parser.add_argument(
            "--ref-segment", dest="ref_segment", type=int, nargs=2, metavar=("A", "B"),
            help="reference_qubits 전용 구간 [A, B)",
        )
        self.add_out_argument(parser)
        parser.add_argument("--queue", action="store_true", help="인라인 실행 대신 큐에 등록")

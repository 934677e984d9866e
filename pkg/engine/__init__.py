"""
engine
역할: 하이브리드 Clifford 회로 시뮬레이션과 분석 코어.
      Django에 의존하지 않는 순수 계산 패키지: multiprocessing 자식 프로세스에서
      django.setup() 없이 그대로 import 된다.
"""

__version__ = "1.0.0"

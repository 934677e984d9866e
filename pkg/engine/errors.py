"""
errors.py
역할: engine 전체에서 공유하는 예외 계층.
      관리 명령(management command)은 이 계층을 종료 코드(2/3/4)로 변환한다.
"""


class CliffordCftError(Exception):
    """engine 예외의 최상위 클래스."""


class InvalidSizeError(CliffordCftError):
    """큐비트 수 / Bell pair 수가 0 이하."""


class QubitIndexError(CliffordCftError):
    """범위를 벗어났거나 중복된 타깃 큐비트."""


class ArgumentError(CliffordCftError):
    """인자 조합이 잘못됨 (겹치는 A/B, arity 불일치, 반교환 곱 등)."""


class ScheduleError(CliffordCftError):
    """probe가 해당 시각의 경계 좌표로 해석되지 않음."""


class GeometryError(CliffordCftError):
    """레이아웃/격자 파라미터가 기하 조건을 만족하지 않음 (예: 홀수 L)."""


class DomainError(CliffordCftError):
    """타원 파라미터, τ, 경계 좌표가 정의역 밖."""


class DegenerateProbeError(CliffordCftError):
    """collapse 좌표 계산에서 두 점이 일치."""


class FitError(CliffordCftError):
    """피팅 윈도우가 비었거나 데이터가 퇴화됨."""


class ResultFileError(CliffordCftError):
    """ResultFile 스키마 불일치 / 파싱 실패."""


class PrecisionWarning(UserWarning):
    """τ가 너무 작아 1−m 이 부동소수 정밀도 한계에 가까움."""

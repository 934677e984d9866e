"""
test_settings.py
역할: 테스트 전용 Django 설정.
      config.settings를 그대로 상속하고 DB만 SQLite 인메모리로 교체.
"""

# 운영 설정 전체를 가져온 뒤 필요한 것만 덮어씀
from config.settings import *  # noqa: F401, F403

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": ":memory:",
    }
}

# 앙상블 테스트가 프로세스 풀을 띄우지 않도록 기본 1
WORKER_COUNT = 1
Y_OVER_T = 0.61

# view.throttle_classes에 AnonRateThrottle이 직접 선언돼 있으므로 rate 를 높여 반복 호출 허용
REST_FRAMEWORK = {
    **REST_FRAMEWORK,  # noqa: F405: 운영 설정 상속
    "DEFAULT_THROTTLE_RATES": {
        "anon": "10000/min",
    },
}

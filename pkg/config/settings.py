import os
from pathlib import Path
from dotenv import load_dotenv

# ──────────────────────────────────────────────────────────────
# 환경별 .env 설정 가이드
#
# [로컬 개발: CLI 만 사용]
#   (아무것도 없어도 됨) → SQLite 파일 + redis://localhost:6379/0
#   WORKER_COUNT=8         (앙상블 프로세스 수, 기본값은 CPU 수)
#
# [서비스: Docker Compose]
#   DEBUG=False
#   SECRET_KEY=<강력한-랜덤-키>
#   MYSQL_HOST=db          (설정하면 MySQL, 없으면 SQLite)
#   MYSQL_DATABASE / MYSQL_USER / MYSQL_PASSWORD
#   REDIS_URL=redis://redis:6379/0
#   WORKER_COUNT=2         (큐 워커 수 = run 동시 실행 수)
#   RESULTS_DIR=/app/results
# ──────────────────────────────────────────────────────────────

# .env 파일을 읽어서 환경변수로 등록 (DB 비밀번호 등 민감정보를 코드 밖에서 관리)
load_dotenv()

# 프로젝트 루트 경로 (config/ 의 부모 디렉토리)
BASE_DIR = Path(__file__).resolve().parent.parent

# 로컬 CLI 사용을 위해 기본값 제공: 서비스 배포 시 반드시 .env 로 덮어쓸 것
SECRET_KEY = os.getenv("SECRET_KEY", "dev-only-insecure-key")
# True면 디버그 모드 (에러 상세 출력), 운영환경에서는 반드시 False
DEBUG = os.getenv("DEBUG", "False") == "True"
# 허용할 호스트 도메인: 쉼표 구분으로 여러 값 지정 가능
ALLOWED_HOSTS = os.getenv("ALLOWED_HOSTS", "*").split(",")

INSTALLED_APPS = [
    "django.contrib.contenttypes",  # 모델 타입 추적용 Django 내장 앱
    "django.contrib.auth",          # 인증 관련 Django 내장 앱
    "rest_framework",               # Django REST Framework (DRF)
    "apps.runs",                    # 시뮬레이션 run 관리 + manage.py 명령
    "apps.ops",                     # 운영 지표 앱
]

MIDDLEWARE = [
    "django.middleware.common.CommonMiddleware",  # URL 슬래시 정규화 등 공통 처리
]

ROOT_URLCONF = "config.urls"

# MYSQL_HOST 가 있으면 MySQL, 없으면 프로젝트 루트의 SQLite 파일
if os.getenv("MYSQL_HOST"):
    DATABASES = {
        "default": {
            "ENGINE": "django.db.backends.mysql",
            "NAME": os.environ["MYSQL_DATABASE"],
            "USER": os.environ["MYSQL_USER"],
            "PASSWORD": os.environ["MYSQL_PASSWORD"],
            "HOST": os.environ["MYSQL_HOST"],            # Docker 서비스 이름 "db"
            "PORT": os.getenv("MYSQL_PORT", "3306"),
            "OPTIONS": {"charset": "utf8mb4"},           # 이모지 포함 유니코드 지원
        }
    }
else:
    DATABASES = {
        "default": {
            "ENGINE": "django.db.backends.sqlite3",
            "NAME": BASE_DIR / "db.sqlite3",
        }
    }

# Redis 연결 URL (큐 + dedupe 캐시 + 재시도 카운터 + DLQ)
REDIS_URL = os.getenv("REDIS_URL", "redis://localhost:6379/0")

REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": ["rest_framework.renderers.JSONRenderer"],
    # POST /v1/runs 에만 view 단위로 AnonRateThrottle 적용
    "DEFAULT_THROTTLE_CLASSES": [],
    "DEFAULT_THROTTLE_RATES": {
        "anon": "60/min",
    },
}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# 로그: 구조화 이벤트(workers.events)와 emoji 상태 메시지를 콘솔로
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "[%(name)s] %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "workers": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "engine": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "apps": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
    },
}

# 시뮬레이션 관련 설정값 (.env에서 읽음)
# 앙상블 프로세스 수 기본값 + 큐 워커 매니저의 워커 수
WORKER_COUNT = int(os.getenv("WORKER_COUNT", os.cpu_count() or 1))
# 분석용 비등방 상수 기본값 (시뮬레이션 자체에는 영향 없음)
Y_OVER_T = float(os.getenv("Y_OVER_T", 0.61))
# 큐로 들어온 run 의 결과 파일 디렉터리 (--out 을 주지 않은 경우)
RESULTS_DIR = Path(os.getenv("RESULTS_DIR", BASE_DIR / "results"))
MAX_RETRIES = int(os.getenv("MAX_RETRIES", 3))           # 실패 시 최대 재시도 횟수
RUN_TIMEOUT = int(os.getenv("RUN_TIMEOUT", 6 * 3600))    # run 당 타임아웃(초)

"""
redis_queue.py
역할: Redis 큐·캐시·재시도 카운터·DLQ 조작 헬퍼.
      API 서버(enqueue/set_cache), simulate --queue, 워커(dequeue/record_failure),
      매니저(stuck run 복구) 가 공유한다.

Redis 키 구조:
  - 큐:        simulation:queue           (List, LPUSH로 넣고 BRPOP으로 꺼냄)
  - 캐시:      cache:config:{sha256}      (String, canonical RunConfig 해시 → run_id)
  - 재시도:    retry:run:{run_id}         (String 카운터, TTL 1시간)
  - DLQ:       dlq:failed_runs            (List, 최근 1000개)
"""

import os

import redis

# settings.py 와 같은 기본값: 로컬에서 .env 없이도 CLI 가 import 가능해야 함
REDIS_URL = os.getenv("REDIS_URL", "redis://localhost:6379/0")

QUEUE_KEY = "simulation:queue"

# MAX_RETRIES 회 재시도 후 최종 실패한 run 을 보관하는 Dead Letter Queue 키
DLQ_KEY = "dlq:failed_runs"
DLQ_LIMIT = 1000

# 같은 설정 재요청 감지 캐시 TTL (초). 만료 후에는 DB fallback 으로 찾는다.
CACHE_TTL = 24 * 3600

RETRY_TTL = 3600


def get_redis() -> redis.Redis:
    """Redis 연결 객체 반환. decode_responses=True로 bytes 대신 str 반환."""
    return redis.from_url(REDIS_URL, decode_responses=True)


def enqueue(run_id: int) -> None:
    """run_id 를 큐 왼쪽에 삽입 (LPUSH). 워커는 오른쪽에서 꺼냄(BRPOP) → FIFO."""
    r = get_redis()
    r.lpush(QUEUE_KEY, str(run_id))


def dequeue(timeout: int = 5) -> int | None:
    """
    run_id 하나를 블로킹으로 꺼낸다.
    시뮬레이션 run 은 수 분~수 시간 단위라 마이크로배치 없이 한 건씩 처리한다.

    Returns:
        run_id (int) or None (timeout 초 동안 큐가 비어 있음)
    """
    r = get_redis()
    result = r.brpop(QUEUE_KEY, timeout=timeout)
    if result is None:
        return None
    _, value = result
    return int(value)


def queue_length() -> int:
    return int(get_redis().llen(QUEUE_KEY))


def get_cache(config_sha256: str) -> int | None:
    """canonical 설정 해시로 캐시된 run_id 조회. 캐시 미스면 None."""
    r = get_redis()
    value = r.get(f"cache:config:{config_sha256}")
    return int(value) if value else None


def set_cache(config_sha256: str, run_id: int) -> None:
    r = get_redis()
    r.set(f"cache:config:{config_sha256}", str(run_id), ex=CACHE_TTL)


def bump_retry(r: redis.Redis, run_id: int) -> int:
    """재시도 카운터 +1 후 현재 시도 횟수 반환. 카운터 없으면 1에서 시작."""
    retry_key = f"retry:run:{run_id}"
    attempt = r.incr(retry_key)
    r.expire(retry_key, RETRY_TTL)  # 1시간 후 자동 삭제
    return int(attempt)


def dead_letter(r: redis.Redis, run_id: int) -> None:
    """재시도 카운터 정리 + DLQ 보관 (상한 DLQ_LIMIT 개)."""
    r.delete(f"retry:run:{run_id}")
    r.lpush(DLQ_KEY, run_id)
    r.ltrim(DLQ_KEY, 0, DLQ_LIMIT - 1)


def dead_lettered() -> list[int]:
    """DLQ 전체 (최근 것이 앞)."""
    r = get_redis()
    return [int(v) for v in r.lrange(DLQ_KEY, 0, -1)]

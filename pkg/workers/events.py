"""
events.py
역할: 구조화 이벤트 로그. 이벤트 이름과 컨텍스트(run_id, L, T, elapsed 등)를
      JSON 한 줄로 남겨 grep / jq 로 추적할 수 있게 한다.

engine/ 과 workers/ensemble.py 는 Django 없이 spawn 자식 프로세스에서도 돌아가므로
Django 설정에 의존하지 않는 이 모듈을 통해서만 이벤트를 남긴다.
"""

import json
import logging

logger = logging.getLogger("workers.events")


def log(event: str, level: int = logging.INFO, **kwargs) -> None:
    """구조화 로그 출력. numpy 스칼라 등은 str 로 떨어뜨린다."""
    if not logger.isEnabledFor(level):
        return
    logger.log(level, json.dumps({"event": event, **kwargs}, ensure_ascii=False, default=str))

"""HTTP client for a remote segmenter speaking the wire protocol.

Retries transport failures and 5xx responses with exponential backoff
(base 250 ms, doubling); 4xx responses are protocol violations and are not
retried. Thread-safe: a semaphore caps concurrent in-flight requests and
every call correlates its own response (no shared ordering assumptions).
"""

from __future__ import annotations

import json
import threading
import time
import urllib.error
import urllib.request

from promptseg import wire
from promptseg.errors import BackendUnavailable, ProtocolError
from promptseg.segmenter import SegmenterRequest, SegmenterResponse

BACKOFF_BASE_S = 0.25


class RemoteSegmenter:
    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        retries: int = 3,
        max_in_flight: int = 4,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self._slots = threading.BoundedSemaphore(max_in_flight)

    def segment(self, req: SegmenterRequest) -> SegmenterResponse:
        body = json.dumps(wire.build_request(req.image_id, req.image, req.prompt)).encode()
        with self._slots:
            payload = self._post_json(f"{self.endpoint}/segment", body)
        mask, score = wire.parse_response(payload, req.image.shape[:2])
        return SegmenterResponse(mask=mask, score=score)

    def health(self) -> dict:
        try:
            with urllib.request.urlopen(f"{self.endpoint}/health", timeout=self.timeout) as resp:
                return json.loads(resp.read().decode("utf-8"))
        except Exception as exc:
            raise BackendUnavailable(f"health check failed: {exc}") from exc

    def _post_json(self, url: str, body: bytes) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt > 0:
                time.sleep(BACKOFF_BASE_S * (2 ** (attempt - 1)))
            try:
                request = urllib.request.Request(
                    url, data=body, headers={"Content-Type": "application/json"}, method="POST"
                )
                with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                    raw = resp.read()
                try:
                    return json.loads(raw.decode("utf-8"))
                except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                    raise ProtocolError(f"response is not valid JSON: {exc}") from exc
            except urllib.error.HTTPError as exc:
                if 400 <= exc.code < 500:
                    raise ProtocolError(f"HTTP {exc.code}: {_error_detail(exc)}") from exc
                last_error = exc  # 5xx: retryable
            except ProtocolError:
                raise
            except Exception as exc:  # connection refused, timeouts, resets
                last_error = exc
        raise BackendUnavailable(
            f"{url} unavailable after {self.retries + 1} attempt(s): {last_error}"
        ) from last_error


def _error_detail(exc: urllib.error.HTTPError) -> str:
    try:
        payload = json.loads(exc.read().decode("utf-8"))
        return str(payload.get("error", payload))
    except Exception:
        return exc.reason

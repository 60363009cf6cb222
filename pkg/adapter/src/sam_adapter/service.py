"""The HTTP service: wire protocol endpoints over a model backend.

Threaded server; requests for distinct images run concurrently while
requests sharing an image_id serialize on the cache entry. Returns 503 until
the model finishes loading, 400 for schema violations, 422 for out-of-bounds
coordinates.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from sam_adapter import __version__, protocol
from sam_adapter.cache import EmbeddingCache
from sam_adapter.model import SAM_VARIANTS, ModelBackend

LOGGER = logging.getLogger("sam_adapter")


@dataclass
class AdapterConfig:
    model_variant: str = "vit_h"
    checkpoint_path: str = ""
    device: str = "cuda"
    port: int = 8765
    cache_capacity: int = 16
    cache_enabled: bool = True

    def validate(self) -> None:
        if self.model_variant not in SAM_VARIANTS + ("stub",):
            raise ValueError(f"unknown model variant {self.model_variant!r}")
        if self.model_variant != "stub":
            path = Path(self.checkpoint_path)
            if not path.is_file():
                raise ValueError(f"checkpoint {self.checkpoint_path!r} does not exist")


class AdapterApp:
    """Model + cache + readiness; the handler delegates everything here."""

    def __init__(self, cache_capacity: int = 16, cache_enabled: bool = True):
        self.model: ModelBackend | None = None
        self.cache = EmbeddingCache(capacity=cache_capacity, enabled=cache_enabled)
        self._ready = threading.Event()

    @property
    def ready(self) -> bool:
        return self._ready.is_set()

    def attach_model(self, model: ModelBackend) -> None:
        self.model = model
        self._ready.set()

    def health(self) -> tuple[int, dict]:
        if not self.ready:
            return 503, {"error": "model loading"}
        return 200, {"status": "ok", "model": self.model.name}

    def stats(self) -> tuple[int, dict]:
        return 200, {"version": __version__, "cache": self.cache.stats()}

    def segment(self, raw_body: bytes) -> tuple[int, dict]:
        if not self.ready:
            return 503, {"error": "model loading"}
        try:
            payload = json.loads(raw_body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            return 400, {"error": f"body is not valid JSON: {exc}"}
        try:
            request = protocol.parse_request(payload)
        except protocol.SchemaError as exc:
            return 400, {"error": str(exc)}
        try:
            protocol.check_bounds(request)
        except protocol.BoundsError as exc:
            return 422, {"error": str(exc)}

        embedding = self.cache.get_or_compute(
            request.image_id, lambda: self.model.embed(request.image)
        )
        box = protocol.box_to_inclusive_xyxy(request.box) if request.box is not None else None
        mask, score = self.model.predict(
            embedding, request.image.shape[:2], request.points, request.labels, box
        )
        return 200, {"mask_png_b64": protocol.encode_mask_b64(mask), "score": float(score)}


class _Handler(BaseHTTPRequestHandler):
    app: AdapterApp

    def log_message(self, fmt, *args):
        LOGGER.debug("%s " + fmt, self.client_address[0], *args)

    def _send(self, code: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/health":
            self._send(*self.app.health())
        elif self.path == "/stats":
            self._send(*self.app.stats())
        else:
            self._send(404, {"error": "not found"})

    def do_POST(self):
        if self.path != "/segment":
            self._send(404, {"error": "not found"})
            return
        length = int(self.headers.get("Content-Length", 0))
        body = self.rfile.read(length)
        try:
            self._send(*self.app.segment(body))
        except Exception as exc:  # defensive: never drop the connection silently
            LOGGER.exception("segment failed")
            self._send(500, {"error": str(exc)})


class AdapterServer:
    """App bound to a socket; context manager for tests, serve() for the CLI."""

    def __init__(self, app: AdapterApp, host: str = "127.0.0.1", port: int = 0):
        self.app = app
        handler = type("BoundHandler", (_Handler,), {"app": app})
        self._server = ThreadingHTTPServer((host, port), handler)
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    def start(self) -> "AdapterServer":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread:
            self._thread.join(timeout=5)

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def __enter__(self) -> "AdapterServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()


def build_app(config: AdapterConfig) -> tuple[AdapterApp, threading.Thread]:
    """App plus a background loader thread; the server answers 503 until the
    model is attached."""
    app = AdapterApp(cache_capacity=config.cache_capacity, cache_enabled=config.cache_enabled)

    def load():
        if config.model_variant == "stub":
            from sam_adapter.model import StubBoxModel

            model: ModelBackend = StubBoxModel()
        else:
            from sam_adapter.model import SamModel

            model = SamModel(config.model_variant, config.checkpoint_path, config.device)
        app.attach_model(model)
        LOGGER.info("model %s ready", model.name)

    loader = threading.Thread(target=load, daemon=True)
    return app, loader

"""HTTP service exposing classification and speech over a loaded model.

The model is loaded once at startup and shared read-only across request
threads; every pipeline function behind the endpoints is pure, so concurrent
requests need no locking.

Endpoints:
    GET  /api/health            {"status": "ok"}
    GET  /api/model             architecture and parameter count
    POST /api/classify          netpbm bytes (raw body or multipart file)
                                -> {"digit", "probabilities", "bangla_text"}
    POST /api/speak             {"digit": d} -> audio/wav
    GET  /...                   static UI assets, when configured
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import imaging, model_io, speech
from .train import predict

DEFAULT_MAX_BODY = 8 * 1024 * 1024

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
}


@dataclass
class ServiceConfig:
    model_path: str
    port: int = 8000
    host: str = "127.0.0.1"
    skin_threshold: imaging.HsvThreshold = imaging.DEFAULT_SKIN_THRESHOLD
    translator: dict = field(default_factory=lambda: {"kind": "builtin-lexicon"})
    tts: dict = field(default_factory=lambda: {"kind": "offline-tone"})
    static_dir: str | None = None
    max_body: int = DEFAULT_MAX_BODY

    def __post_init__(self):
        if not 1 <= self.port <= 65535 and self.port != 0:
            raise ValueError(f"port {self.port} outside [1, 65535]")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        raw = json.loads(Path(path).read_text())
        if "skin_threshold" in raw:
            raw["skin_threshold"] = imaging.HsvThreshold(**raw["skin_threshold"])
        return cls(**raw)

    @classmethod
    def from_env(cls) -> "ServiceConfig | None":
        path = os.environ.get("SIGNDIGIT_CONFIG")
        return cls.from_file(path) if path else None


def build_translator(conf: dict):
    kind = conf.get("kind", "builtin-lexicon")
    if kind == "builtin-lexicon":
        return speech.BuiltinTranslator()
    if kind == "external-http":
        return speech.HttpTranslator(conf["endpoint"], timeout=conf.get("timeout", 5.0))
    raise ValueError(f"unknown translator kind {kind!r}")


def build_tts(conf: dict):
    kind = conf.get("kind", "offline-tone")
    if kind == "offline-tone":
        return speech.OfflineToneTts()
    if kind == "external-http":
        return speech.HttpTts(conf["endpoint"], timeout=conf.get("timeout", 5.0))
    raise ValueError(f"unknown tts kind {kind!r}")


class ModelService:
    """The request-independent core: a loaded model plus backend clients."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.spec, self.params = model_io.load_model(config.model_path)
        self.translator = build_translator(config.translator)
        self.tts = build_tts(config.tts)

    def describe_model(self) -> dict:
        layers = []
        for layer in self.spec.layers:
            entry = {"kind": layer.kind}
            if layer.out_channels is not None:
                entry["out_channels"] = layer.out_channels
            if layer.rate is not None:
                entry["rate"] = layer.rate
            if layer.out_features is not None:
                entry["out_features"] = layer.out_features
            layers.append(entry)
        return {
            "input_shape": list(self.spec.input_shape),
            "layers": layers,
            "parameter_count": self.spec.parameter_count(),
        }

    def classify(self, image_bytes: bytes) -> dict:
        raster = imaging.decode_netpbm(image_bytes)
        gray = imaging.preprocess(raster, self.config.skin_threshold)
        digit, probs = predict(self.spec, self.params, gray)
        bangla = speech.translate(speech.digit_to_english(digit), self.translator)
        return {
            "digit": digit,
            "probabilities": [float(p) for p in probs],
            "bangla_text": bangla,
        }

    def speak(self, digit: int) -> bytes:
        bangla = speech.translate(speech.digit_to_english(digit), self.translator)
        clip = speech.synthesize(bangla, digit, self.tts)
        return speech.wav_encode(clip)


def extract_multipart_file(body: bytes, content_type: str) -> bytes:
    """Pull the first file part (or first part) out of a multipart body."""
    boundary = None
    for piece in content_type.split(";"):
        piece = piece.strip()
        if piece.startswith("boundary="):
            boundary = piece[len("boundary=") :].strip('"')
    if not boundary:
        raise ValueError("multipart body without boundary")
    delim = b"--" + boundary.encode("ascii")
    chunks = []
    for part in body.split(delim):
        part = part.strip(b"\r\n")
        if part in (b"", b"--"):
            continue
        head, sep, data = part.partition(b"\r\n\r\n")
        if not sep:
            continue
        chunks.append((b"filename=" in head, data.rstrip(b"\r\n")))
    if not chunks:
        raise ValueError("multipart body without any part")
    chunks.sort(key=lambda c: not c[0])  # prefer named file parts
    return chunks[0][1]


def _make_handler(svc: ModelService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # keep test output quiet
            pass

        def _send(self, status: int, body: bytes, content_type: str):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _json(self, status: int, payload: dict):
            self._send(status, json.dumps(payload).encode("utf-8"), "application/json")

        def _read_body(self) -> bytes | None:
            length = int(self.headers.get("Content-Length", 0))
            if length > svc.config.max_body:
                self._json(413, {"error": f"body exceeds {svc.config.max_body} bytes"})
                return None
            return self.rfile.read(length)

        def do_GET(self):
            if self.path == "/api/health":
                self._json(200, {"status": "ok"})
            elif self.path == "/api/model":
                self._json(200, svc.describe_model())
            else:
                self._static(self.path)

        def do_POST(self):
            if self.path == "/api/classify":
                body = self._read_body()
                if body is None:
                    return
                ctype = self.headers.get("Content-Type", "")
                try:
                    if ctype.startswith("multipart/form-data"):
                        body = extract_multipart_file(body, ctype)
                    response = svc.classify(body)
                except (imaging.NetpbmError, ValueError) as exc:
                    self._json(400, {"error": str(exc)})
                    return
                except speech.BackendUnreachableError as exc:
                    self._json(503, {"error": str(exc)})
                    return
                self._json(200, response)
            elif self.path == "/api/speak":
                body = self._read_body()
                if body is None:
                    return
                try:
                    payload = json.loads(body.decode("utf-8"))
                    digit = payload["digit"]
                    if not isinstance(digit, int) or isinstance(digit, bool):
                        raise speech.DigitRangeError(f"digit must be an integer, got {digit!r}")
                    wav = svc.speak(digit)
                except (speech.DigitRangeError, speech.UnknownWordError, KeyError,
                        ValueError, UnicodeDecodeError) as exc:
                    self._json(400, {"error": str(exc)})
                    return
                except speech.BackendUnreachableError as exc:
                    self._json(503, {"error": str(exc)})
                    return
                self._send(200, wav, "audio/wav")
            else:
                self._json(404, {"error": f"no such endpoint {self.path}"})

        def _static(self, path: str):
            root = svc.config.static_dir
            if root is None:
                self._json(404, {"error": "no static assets configured"})
                return
            rel = path.split("?", 1)[0].lstrip("/") or "index.html"
            full = (Path(root) / rel).resolve()
            if not str(full).startswith(str(Path(root).resolve())) or not full.is_file():
                self._json(404, {"error": f"not found: {path}"})
                return
            ctype = _CONTENT_TYPES.get(full.suffix, "application/octet-stream")
            self._send(200, full.read_bytes(), ctype)

    return Handler


def create_server(config: ServiceConfig) -> ThreadingHTTPServer:
    """Bind the service; the caller drives serve_forever / shutdown."""
    svc = ModelService(config)
    server = ThreadingHTTPServer((config.host, config.port), _make_handler(svc))
    server.service = svc  # handy for tests and callers
    return server


def serve(config: ServiceConfig) -> None:
    server = create_server(config)
    host, port = server.server_address[:2]
    print(f"signdigit service listening on http://{host}:{port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()


def run_in_thread(config: ServiceConfig) -> tuple[ThreadingHTTPServer, threading.Thread]:
    """Start the service on a daemon thread (used by tests and tooling)."""
    server = create_server(config)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread

"""HTTP/JSON adapter over the authentication server.

Every response is wrapped in the version-1 envelope ``{ok, data, error}`` and
carries an ``X-2D2FA-Version`` header; the data shapes are published as JSON
schema files next to this module.

The wire semantics live in :class:`WireGateway` — one place that parses
bodies, maps domain errors onto the closed error-code enum, and builds
envelopes. The FastAPI application is a thin HTTP binding over the gateway;
the adversary harness drives the same gateway directly for bulk traffic, so
both paths are bit-identical by construction.

The adapter never branches on password validity: right and wrong first
factors are indistinguishable on the wire until a session completes. The
device-to-server path (``/api/2fa/submit``) carries exactly username,
identifier, and pin; session tokens exist only on the client-to-server side.
"""

from __future__ import annotations

import importlib.resources
import json
import logging
import re
import time
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ValidationError

from .crypto import is_fallback_pin, pin_from_hex
from .server import (
    AuthServer,
    AuthServerError,
    DuplicateUser,
    LimitReached,
    UnknownToken,
)

WIRE_VERSION = "1"
ERROR_CODES = ("DUPLICATE_USER", "LIMIT_REACHED", "UNKNOWN_TOKEN", "REJECTED", "MALFORMED")

_PIN_HEX_RE = re.compile(r"[0-9a-f]{64}")

log = logging.getLogger("twodfa.api")

_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><title>2D-2FA</title></head>
<body><h1>2D-2FA reference server</h1>
<p>No web UI bundle is installed. The JSON API lives under <code>/api/</code>.</p>
</body></html>
"""


class RegisterBody(BaseModel):
    username: str
    password: str
    kind: str = "pattern"


class LoginBody(BaseModel):
    username: str
    password: str


class SubmitBody(BaseModel):
    username: str
    identifier: str
    pin: str


class ManualBody(BaseModel):
    session_token: str
    pin8: str


def ok_envelope(data: dict) -> dict:
    return {"ok": True, "data": data, "error": None}


def err_envelope(code: str, message: str) -> dict:
    assert code in ERROR_CODES
    return {"ok": False, "data": None, "error": {"code": code, "message": message}}


def identifier_payload(identifier) -> dict:
    return {
        "kind": identifier.kind,
        "display": identifier.display,
        "canonical": identifier.canonical,
    }


def load_schema(name: str) -> dict:
    """Published wire schema (``envelope``, ``register``, ``login``, ``submit``,
    ``status``) as a dict."""
    text = importlib.resources.files("twodfa.schemas").joinpath(f"{name}.json").read_text("utf-8")
    return json.loads(text)


class WireGateway:
    """The wire protocol, independent of transport. Every method takes the
    decoded JSON body (or None when undecodable) and returns
    ``(http_status, envelope)``."""

    def __init__(self, server: AuthServer, clock: Callable[[], float] = time.time) -> None:
        self.server = server
        self.clock = clock

    def _now(self) -> int:
        return int(self.clock())

    @staticmethod
    def _parse(model, body):
        if not isinstance(body, dict):
            return None
        try:
            return model.model_validate(body)
        except ValidationError:
            return None

    def register(self, body) -> tuple[int, dict]:
        parsed = self._parse(RegisterBody, body)
        if parsed is None:
            return 400, err_envelope("MALFORMED", "request body does not match the wire schema")
        try:
            registration = self.server.register_user(parsed.username, parsed.password, parsed.kind)
        except DuplicateUser as exc:
            return 409, err_envelope("DUPLICATE_USER", str(exc))
        except AuthServerError as exc:
            return 400, err_envelope("MALFORMED", str(exc))
        return 200, ok_envelope({"provisioning_payload": registration.provisioning_payload})

    def login(self, body) -> tuple[int, dict]:
        parsed = self._parse(LoginBody, body)
        if parsed is None:
            return 400, err_envelope("MALFORMED", "request body does not match the wire schema")
        try:
            ticket = self.server.begin_login(parsed.username, parsed.password, self._now())
        except LimitReached as exc:
            return 429, err_envelope("LIMIT_REACHED", str(exc))
        return 200, ok_envelope(
            {
                "session_token": ticket.session_token,
                "identifier": identifier_payload(ticket.identifier),
                "expires_in_s": ticket.expires_in_s,
            }
        )

    def submit(self, body) -> tuple[int, dict]:
        parsed = self._parse(SubmitBody, body)
        if parsed is None:
            return 400, err_envelope("MALFORMED", "request body does not match the wire schema")
        if not _PIN_HEX_RE.fullmatch(parsed.pin):
            return 400, err_envelope("MALFORMED", "pin must be 64 lowercase hex characters")
        accepted = self.server.submit_second_factor(
            parsed.username, parsed.identifier, pin_from_hex(parsed.pin), self._now()
        )
        return 200, ok_envelope({"result": "accepted" if accepted else "rejected"})

    def manual(self, body) -> tuple[int, dict]:
        parsed = self._parse(ManualBody, body)
        if parsed is None:
            return 400, err_envelope("MALFORMED", "request body does not match the wire schema")
        if not is_fallback_pin(parsed.pin8):
            return 400, err_envelope("MALFORMED", "pin8 must be exactly 8 digits")
        try:
            accepted = self.server.submit_fallback(parsed.session_token, parsed.pin8, self._now())
        except UnknownToken:
            return 404, err_envelope("UNKNOWN_TOKEN", "no such session")
        return 200, ok_envelope({"result": "accepted" if accepted else "rejected"})

    def status(self, token: str) -> tuple[int, dict]:
        try:
            value = self.server.session_status(token, self._now())
        except UnknownToken:
            return 404, err_envelope("UNKNOWN_TOKEN", "no such session")
        return 200, ok_envelope({"status": value})


def create_app(
    server: AuthServer,
    clock: Callable[[], float] = time.time,
    static_dir: Optional[Path] = None,
    gateway: Optional[WireGateway] = None,
) -> FastAPI:
    """Build the HTTP binding. ``clock`` supplies the protocol's notion of now
    (injected in tests and the adversary harness); ``static_dir`` optionally
    serves the web UI bundle at ``/``."""
    gw = gateway or WireGateway(server, clock)
    app = FastAPI(title="2D-2FA reference server", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def stamp_and_log(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        response.headers["X-2D2FA-Version"] = WIRE_VERSION
        # request lines only; bodies can carry pins and must never be logged
        log.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            (time.perf_counter() - started) * 1000.0,
        )
        return response

    async def body_of(request: Request):
        try:
            return await request.json()
        except Exception:
            return None

    def respond(code_and_envelope: tuple[int, dict]) -> JSONResponse:
        status_code, envelope = code_and_envelope
        return JSONResponse(envelope, status_code=status_code)

    @app.post("/api/register")
    async def register(request: Request):
        return respond(gw.register(await body_of(request)))

    @app.post("/api/login")
    async def login(request: Request):
        return respond(gw.login(await body_of(request)))

    @app.post("/api/2fa/submit")
    async def submit(request: Request):
        return respond(gw.submit(await body_of(request)))

    @app.post("/api/2fa/manual")
    async def manual(request: Request):
        return respond(gw.manual(await body_of(request)))

    @app.get("/api/session/{token}/status")
    async def status(token: str):
        return respond(gw.status(token))

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        async def placeholder():
            return _PLACEHOLDER_PAGE

    return app

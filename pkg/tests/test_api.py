"""Wire protocol tests: envelope discipline, schema conformance, error codes,
and the no-password-oracle property of the login endpoint."""

import logging
import random
import re

import jsonschema
import pytest
from fastapi.testclient import TestClient

from twodfa.api import WIRE_VERSION, create_app, load_schema
from twodfa.config import ServerConfig
from twodfa.crypto import derive_time_slice, generate_pin, pin_to_hex, truncate_pin
from twodfa.server import AuthServer

T0 = 1_700_000_000
MASTER = "cd" * 32


class Clock:
    def __init__(self, start=T0):
        self.now = float(start)

    def __call__(self):
        return self.now

    def advance(self, seconds):
        self.now += seconds


@pytest.fixture()
def wire():
    config = ServerConfig(scrypt_n=8, scrypt_r=8, scrypt_p=1, master_key_hex=MASTER)
    server = AuthServer(config, rng=random.Random(42))
    clock = Clock()
    client = TestClient(create_app(server, clock=clock))
    return server, clock, client


def register(client, username="alice", password="pw", kind="pattern"):
    resp = client.post("/api/register", json={"username": username, "password": password, "kind": kind})
    assert resp.status_code == 200, resp.text
    return resp.json()["data"]["provisioning_payload"]


def key_from_payload(payload: str) -> bytes:
    return bytes.fromhex(re.search(r"key=([0-9a-f]{32})", payload).group(1))


def device_pin_hex(key_bytes: bytes, canonical: str, now: float) -> str:
    from twodfa.crypto import TotpKey

    return pin_to_hex(generate_pin(TotpKey(key_bytes), canonical, derive_time_slice(int(now))))


def enroll_and_confirm(client, clock, username="alice", password="pw"):
    payload = register(client, username, password)
    key = key_from_payload(payload)
    login = client.post("/api/login", json={"username": username, "password": password}).json()["data"]
    pin = device_pin_hex(key, login["identifier"]["canonical"], clock())
    resp = client.post(
        "/api/2fa/submit",
        json={"username": username, "identifier": login["identifier"]["canonical"], "pin": pin},
    )
    assert resp.json()["data"]["result"] == "accepted"
    clock.advance(121)  # let the confirmation identifier cool down
    return key


def check_envelope(resp, data_schema=None):
    body = resp.json()
    jsonschema.validate(body, load_schema("envelope"))
    if data_schema is not None and body["ok"]:
        jsonschema.validate(body["data"], load_schema(data_schema))
    return body


class TestEnvelope:
    def test_version_header_on_every_response(self, wire):
        _, _, client = wire
        for resp in (
            client.post("/api/register", json={"username": "u", "password": "p", "kind": "pattern"}),
            client.post("/api/login", json={"username": "u", "password": "p"}),
            client.get("/api/session/deadbeef/status"),
            client.post("/api/2fa/submit", json={"username": "u", "identifier": "x", "pin": "zz"}),
            client.get("/"),
        ):
            assert resp.headers["X-2D2FA-Version"] == WIRE_VERSION

    def test_exactly_one_of_data_error(self, wire):
        _, _, client = wire
        ok = client.post("/api/login", json={"username": "u", "password": "p"})
        check_envelope(ok, "login")
        bad = client.get("/api/session/nope/status")
        body = check_envelope(bad)
        assert body["error"]["code"] == "UNKNOWN_TOKEN" and body["data"] is None

    def test_malformed_body_is_malformed_code(self, wire):
        _, _, client = wire
        resp = client.post("/api/login", json={"username": "u"})
        assert resp.status_code == 400
        assert check_envelope(resp)["error"]["code"] == "MALFORMED"


class TestRegisterEndpoint:
    def test_payload_format(self, wire):
        _, _, client = wire
        resp = client.post("/api/register", json={"username": "alice", "password": "pw", "kind": "pattern"})
        body = check_envelope(resp, "register")
        assert re.match(r"^2d2fa://enroll\?", body["data"]["provisioning_payload"])

    def test_duplicate(self, wire):
        _, _, client = wire
        register(client)
        resp = client.post("/api/register", json={"username": "alice", "password": "x", "kind": "qr"})
        assert resp.status_code == 409
        assert check_envelope(resp)["error"]["code"] == "DUPLICATE_USER"

    def test_unknown_kind_is_malformed(self, wire):
        _, _, client = wire
        resp = client.post("/api/register", json={"username": "bob", "password": "x", "kind": "retina"})
        assert check_envelope(resp)["error"]["code"] == "MALFORMED"


class TestLoginEndpoint:
    def test_identifier_for_any_password(self, wire):
        _, clock, client = wire
        enroll_and_confirm(client, clock)
        for password in ("pw", "not-the-password"):
            resp = client.post("/api/login", json={"username": "alice", "password": password})
            body = check_envelope(resp, "login")
            assert body["data"]["expires_in_s"] == 30
            clock.advance(200)

    def test_limit_reached_on_sixth_session(self, wire):
        _, clock, client = wire
        enroll_and_confirm(client, clock)
        for _ in range(5):
            check_envelope(client.post("/api/login", json={"username": "alice", "password": "pw"}), "login")
        resp = client.post("/api/login", json={"username": "alice", "password": "pw"})
        assert resp.status_code == 429
        assert check_envelope(resp)["error"]["code"] == "LIMIT_REACHED"

    def test_wire_shape_identical_for_all_first_factor_outcomes(self, wire):
        server, clock, client = wire
        enroll_and_confirm(client, clock)

        def shape(value):
            if isinstance(value, dict):
                return {k: shape(v) for k, v in value.items()}
            if isinstance(value, list):
                return [type(v).__name__ for v in value]
            return type(value).__name__

        cases = [("alice", "pw"), ("alice", "wrong"), ("ghost-user", "whatever")]
        bodies = []
        for username, password in cases:
            resp = client.post("/api/login", json={"username": username, "password": password})
            assert resp.status_code == 200
            bodies.append(check_envelope(resp, "login"))
            clock.advance(200)
        shapes = [shape(b) for b in bodies]
        assert shapes[0] == shapes[1] == shapes[2]
        # identifiers come from the same published dictionary in all cases
        pool = set(server.dictionary("pattern").canonicals())
        assert all(b["data"]["identifier"]["canonical"] in pool for b in bodies)


class TestSubmitEndpoint:
    def test_happy_path(self, wire):
        _, clock, client = wire
        key = enroll_and_confirm(client, clock)
        login = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        pin = device_pin_hex(key, login["identifier"]["canonical"], clock())
        resp = client.post(
            "/api/2fa/submit",
            json={"username": "alice", "identifier": login["identifier"]["canonical"], "pin": pin},
        )
        assert check_envelope(resp, "submit")["data"]["result"] == "accepted"
        status = client.get(f"/api/session/{login['session_token']}/status")
        assert check_envelope(status, "status")["data"]["status"] == "succeeded"

    def test_cross_identifier_rejected(self, wire):
        _, clock, client = wire
        key = enroll_and_confirm(client, clock)
        first = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        second = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        pin_first = device_pin_hex(key, first["identifier"]["canonical"], clock())
        resp = client.post(
            "/api/2fa/submit",
            json={"username": "alice", "identifier": second["identifier"]["canonical"], "pin": pin_first},
        )
        assert resp.json()["data"]["result"] == "rejected"

    def test_replay_rejected(self, wire):
        _, clock, client = wire
        key = enroll_and_confirm(client, clock)
        login = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        canonical = login["identifier"]["canonical"]
        pin = device_pin_hex(key, canonical, clock())
        body = {"username": "alice", "identifier": canonical, "pin": pin}
        assert client.post("/api/2fa/submit", json=body).json()["data"]["result"] == "accepted"
        clock.advance(1)
        assert client.post("/api/2fa/submit", json=body).json()["data"]["result"] == "rejected"

    def test_duplicate_delivery_does_not_double_complete(self, wire):
        server, clock, client = wire
        key = enroll_and_confirm(client, clock)
        login = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        canonical = login["identifier"]["canonical"]
        pin = device_pin_hex(key, canonical, clock())
        body = {"username": "alice", "identifier": canonical, "pin": pin}
        results = [client.post("/api/2fa/submit", json=body).json()["data"]["result"] for _ in range(3)]
        assert results == ["accepted", "rejected", "rejected"]
        assert server.session_status(login["session_token"]) == "succeeded"

    @pytest.mark.parametrize("bad_pin", ["", "zz", "AB" * 32, "ab" * 31, "ab" * 33])
    def test_bad_hex_is_malformed(self, wire, bad_pin):
        _, _, client = wire
        resp = client.post(
            "/api/2fa/submit", json={"username": "u", "identifier": "PT:1234", "pin": bad_pin}
        )
        assert resp.status_code == 400
        assert check_envelope(resp)["error"]["code"] == "MALFORMED"


class TestManualEndpoint:
    def test_fallback_accepts_truncated_pin(self, wire):
        _, clock, client = wire
        key = enroll_and_confirm(client, clock)
        login = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        from twodfa.crypto import TotpKey

        digits = truncate_pin(
            generate_pin(TotpKey(key), login["identifier"]["canonical"], derive_time_slice(int(clock())))
        )
        resp = client.post(
            "/api/2fa/manual", json={"session_token": login["session_token"], "pin8": digits}
        )
        assert check_envelope(resp, "submit")["data"]["result"] == "accepted"

    def test_wrong_digits_fail_the_session(self, wire):
        _, clock, client = wire
        enroll_and_confirm(client, clock)
        login = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        resp = client.post(
            "/api/2fa/manual", json={"session_token": login["session_token"], "pin8": "12345678"}
        )
        assert resp.json()["data"]["result"] == "rejected"
        status = client.get(f"/api/session/{login['session_token']}/status").json()["data"]["status"]
        assert status == "failed"

    def test_fallback_replay_rejected(self, wire):
        _, clock, client = wire
        key = enroll_and_confirm(client, clock)
        login = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        from twodfa.crypto import TotpKey

        digits = truncate_pin(
            generate_pin(TotpKey(key), login["identifier"]["canonical"], derive_time_slice(int(clock())))
        )
        body = {"session_token": login["session_token"], "pin8": digits}
        assert client.post("/api/2fa/manual", json=body).json()["data"]["result"] == "accepted"
        clock.advance(5)
        assert client.post("/api/2fa/manual", json=body).json()["data"]["result"] == "rejected"

    @pytest.mark.parametrize("bad", ["1234567", "123456789", "abcdefgh", ""])
    def test_malformed_digits(self, wire, bad):
        _, _, client = wire
        resp = client.post("/api/2fa/manual", json={"session_token": "x", "pin8": bad})
        assert resp.status_code == 400
        assert check_envelope(resp)["error"]["code"] == "MALFORMED"

    def test_unknown_token(self, wire):
        _, _, client = wire
        resp = client.post("/api/2fa/manual", json={"session_token": "00" * 16, "pin8": "00000000"})
        assert resp.status_code == 404
        assert check_envelope(resp)["error"]["code"] == "UNKNOWN_TOKEN"


class TestStatusEndpoint:
    def test_lifecycle(self, wire):
        _, clock, client = wire
        enroll_and_confirm(client, clock)
        login = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
        token = login["session_token"]
        assert client.get(f"/api/session/{token}/status").json()["data"]["status"] == "active"
        clock.advance(31)
        assert client.get(f"/api/session/{token}/status").json()["data"]["status"] == "timed_out"

    def test_unknown_token(self, wire):
        _, _, client = wire
        resp = client.get("/api/session/unknown/status")
        assert resp.status_code == 404


class TestHygiene:
    def test_placeholder_page_served_without_ui_bundle(self, wire):
        _, _, client = wire
        resp = client.get("/")
        assert resp.status_code == 200 and "2D-2FA" in resp.text

    def test_request_logs_never_contain_pins_or_keys(self, wire, caplog):
        _, clock, client = wire
        with caplog.at_level(logging.INFO, logger="twodfa.api"):
            key = enroll_and_confirm(client, clock)
            login = client.post("/api/login", json={"username": "alice", "password": "pw"}).json()["data"]
            pin = device_pin_hex(key, login["identifier"]["canonical"], clock())
            client.post(
                "/api/2fa/submit",
                json={"username": "alice", "identifier": login["identifier"]["canonical"], "pin": pin},
            )
        logged = "\n".join(r.getMessage() for r in caplog.records)
        assert pin not in logged
        assert key.hex() not in logged
        assert "pw" not in logged

"""Device agent: the second-factor device as a CLI.

Holds enrollments (one shared key per username@server) in a passphrase-
encrypted store, computes identifier-bound PINs, and submits them straight to
the server — the device-to-server channel needs no secrecy because the PIN is
useless for any other session. `approve --offline` prints the truncated
8-digit PIN instead for manual entry through the client.

Exit codes: 0 accepted/success, 1 rejected by the server, 2 usage or local
error (including unreachable server).
"""

from __future__ import annotations

import argparse
import getpass
import hashlib
import json
import os
import sys
import tempfile
import time
from base64 import urlsafe_b64encode
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

import httpx
from cryptography.fernet import Fernet, InvalidToken
from filelock import FileLock

from .crypto import TotpKey, derive_time_slice, generate_pin, pin_to_hex, truncate_pin
from .identifiers import KINDS, IdentifierError, parse_identifier_input

STORE_VERSION = 1
DEFAULT_STORE = "~/.twodfa/agent.store"
PASSPHRASE_ENV = "TWOD_AGENT_PASSPHRASE"
STORE_ENV = "TWOD_AGENT_STORE"

EXIT_ACCEPTED = 0
EXIT_REJECTED = 1
EXIT_ERROR = 2

_KDF_N = 2**14
_KDF_R = 8
_KDF_P = 1


class AgentError(Exception):
    pass


@dataclass(frozen=True)
class Enrollment:
    server_name: str
    username: str
    key: TotpKey
    identifier_kind: str
    server_url: str

    @property
    def account(self) -> str:
        return f"{self.username}@{self.server_name}"


def parse_provisioning_payload(payload: str) -> dict:
    """Split a ``2d2fa://enroll?...`` payload into its fields, strictly."""
    parts = urlsplit(payload)
    if parts.scheme != "2d2fa" or parts.netloc != "enroll":
        raise AgentError("not a 2d2fa enrollment payload")
    query = parse_qs(parts.query, keep_blank_values=True)
    fields = {}
    for name in ("sn", "un", "key", "kind"):
        values = query.get(name, [])
        if len(values) != 1 or not values[0]:
            raise AgentError(f"enrollment payload is missing '{name}'")
        fields[name] = values[0]
    if fields["kind"] not in KINDS:
        raise AgentError(f"unknown identifier kind {fields['kind']!r}")
    try:
        fields["key"] = TotpKey.from_hex(fields["key"])
    except ValueError as exc:
        raise AgentError(f"bad key in enrollment payload: {exc}") from None
    return fields


class AgentStore:
    """Encrypted enrollment file. The Fernet key is derived from the local
    passphrase with scrypt; salt and parameters live in the cleartext header
    so the file stays readable if the defaults ever change. A lock file
    serializes concurrent agent invocations."""

    def __init__(self, path, passphrase: str) -> None:
        self.path = Path(path).expanduser()
        self._passphrase = passphrase
        self._lock = FileLock(str(self.path) + ".lock")

    def _fernet(self, kdf: dict) -> Fernet:
        digest = hashlib.scrypt(
            self._passphrase.encode("utf-8"),
            salt=bytes.fromhex(kdf["salt"]),
            n=kdf["n"],
            r=kdf["r"],
            p=kdf["p"],
            dklen=32,
        )
        return Fernet(urlsafe_b64encode(digest))

    def _read(self) -> tuple[dict, dict]:
        if not self.path.exists():
            kdf = {"salt": os.urandom(16).hex(), "n": _KDF_N, "r": _KDF_R, "p": _KDF_P}
            return {}, kdf
        try:
            header = json.loads(self.path.read_text(encoding="utf-8"))
            if header.get("version") != STORE_VERSION:
                raise AgentError(f"unsupported store version in {self.path}")
            kdf = header["kdf"]
            blob = header["entries"].encode("ascii")
        except AgentError:
            raise
        except Exception as exc:
            raise AgentError(f"corrupt agent store {self.path}: {exc}") from exc
        try:
            entries = json.loads(self._fernet(kdf).decrypt(blob))
        except InvalidToken:
            raise AgentError("wrong passphrase or corrupted agent store") from None
        return entries, kdf

    def _write(self, entries: dict, kdf: dict) -> None:
        blob = self._fernet(kdf).encrypt(json.dumps(entries).encode("utf-8"))
        header = {"version": STORE_VERSION, "kdf": kdf, "entries": blob.decode("ascii")}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(header, fh)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def entries(self) -> dict:
        with self._lock:
            entries, _ = self._read()
            return entries

    def add(self, enrollment: Enrollment) -> None:
        with self._lock:
            entries, kdf = self._read()
            if enrollment.account in entries:
                raise AgentError(f"{enrollment.account} is already enrolled")
            entries[enrollment.account] = {
                "server_name": enrollment.server_name,
                "username": enrollment.username,
                "key": enrollment.key.hex,
                "kind": enrollment.identifier_kind,
                "server_url": enrollment.server_url,
            }
            self._write(entries, kdf)

    def remove(self, account: str) -> None:
        with self._lock:
            entries, kdf = self._read()
            if account not in entries:
                raise AgentError(f"no enrollment for {account}")
            del entries[account]
            self._write(entries, kdf)

    def lookup(self, account: str) -> Enrollment:
        record = self.entries().get(account)
        if record is None:
            raise AgentError(f"no enrollment for {account}")
        return Enrollment(
            server_name=record["server_name"],
            username=record["username"],
            key=TotpKey.from_hex(record["key"]),
            identifier_kind=record["kind"],
            server_url=record["server_url"],
        )


def enroll(store: AgentStore, payload: str, server_url: str) -> Enrollment:
    """Parse and store a provisioning payload. Does not contact the server;
    the confirmation round is driven by the user's first login."""
    fields = parse_provisioning_payload(payload)
    enrollment = Enrollment(
        server_name=fields["sn"],
        username=fields["un"],
        key=fields["key"],
        identifier_kind=fields["kind"],
        server_url=server_url.rstrip("/"),
    )
    store.add(enrollment)
    return enrollment


def compute_pin(enrollment: Enrollment, identifier_text: str, now: int) -> tuple[str, bytes]:
    """Validate the typed identifier locally and compute the full PIN for it.
    Returns (canonical identifier, pin bytes)."""
    identifier = parse_identifier_input(enrollment.identifier_kind, identifier_text)
    pin = generate_pin(enrollment.key, identifier.canonical, derive_time_slice(now))
    return identifier.canonical, pin


def approve(
    store: AgentStore,
    account: str,
    identifier_text: str,
    now: int | None = None,
    offline: bool = False,
    client: httpx.Client | None = None,
    out=sys.stdout,
) -> int:
    """The main verb: look up the account, compute the PIN for the typed
    identifier, and either submit it or (offline) print the fallback form."""
    enrollment = store.lookup(account)
    try:
        canonical, pin = compute_pin(enrollment, identifier_text, int(now or time.time()))
    except IdentifierError as exc:
        raise AgentError(f"invalid identifier for kind {enrollment.identifier_kind!r}: {exc}") from None

    if offline:
        print(f"identifier: {canonical}", file=out)
        print(f"fallback pin: {truncate_pin(pin)}", file=out)
        return EXIT_ACCEPTED

    own_client = client is None
    if client is None:
        client = httpx.Client(base_url=enrollment.server_url, timeout=10.0)
    try:
        response = client.post(
            "/api/2fa/submit",
            json={"username": enrollment.username, "identifier": canonical, "pin": pin_to_hex(pin)},
        )
        envelope = response.json()
    except httpx.TransportError as exc:
        raise AgentError(
            f"cannot reach {enrollment.server_url} ({exc}); retry with --offline for a manual pin"
        ) from None
    finally:
        if own_client:
            client.close()

    if not envelope.get("ok"):
        error = envelope.get("error") or {}
        raise AgentError(f"server refused the submission: {error.get('code')} {error.get('message')}")
    result = envelope["data"]["result"]
    print(result, file=out)
    return EXIT_ACCEPTED if result == "accepted" else EXIT_REJECTED


def _resolve_store(args, env) -> AgentStore:
    path = args.store or env.get(STORE_ENV) or DEFAULT_STORE
    passphrase = env.get(PASSPHRASE_ENV)
    if passphrase is None:
        passphrase = getpass.getpass("agent store passphrase: ")
    return AgentStore(path, passphrase)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twodfa-agent",
        description="2D-2FA device agent: enroll accounts and approve login sessions",
    )
    parser.add_argument("--store", help=f"enrollment store path (default {DEFAULT_STORE} or ${STORE_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    p_enroll = sub.add_parser("enroll", help="store a provisioning payload")
    p_enroll.add_argument("payload", help="2d2fa://enroll?... string shown at registration")
    p_enroll.add_argument("--server-url", required=True, help="base URL of the authentication server")

    p_approve = sub.add_parser("approve", help="input an identifier and submit the pin")
    p_approve.add_argument("account", help="enrollment to use, as username@server")
    p_approve.add_argument("identifier", help="pattern digits, QR token, or numeric code")
    p_approve.add_argument("--offline", action="store_true", help="print the 8-digit fallback pin instead")
    p_approve.add_argument("--now", type=int, default=None, help="unix time override (testing)")

    sub.add_parser("list", help="list enrolled accounts")

    p_remove = sub.add_parser("remove", help="forget an enrollment")
    p_remove.add_argument("account")
    return parser


def main(argv=None, client_factory=None, env=None, out=sys.stdout) -> int:
    env = os.environ if env is None else env
    args = build_parser().parse_args(argv)
    try:
        store = _resolve_store(args, env)
        if args.command == "enroll":
            enrollment = enroll(store, args.payload, args.server_url)
            print(
                f"enrolled {enrollment.account} ({enrollment.identifier_kind}) -> {enrollment.server_url}",
                file=out,
            )
            return EXIT_ACCEPTED
        if args.command == "approve":
            client = None
            if client_factory is not None and not args.offline:
                client = client_factory(store.lookup(args.account).server_url)
            return approve(
                store,
                args.account,
                args.identifier,
                now=args.now,
                offline=args.offline,
                client=client,
                out=out,
            )
        if args.command == "list":
            for account, record in sorted(store.entries().items()):
                print(f"{account}  {record['kind']}  {record['server_url']}", file=out)
            return EXIT_ACCEPTED
        if args.command == "remove":
            store.remove(args.account)
            print(f"removed {args.account}", file=out)
            return EXIT_ACCEPTED
        raise AgentError(f"unknown command {args.command!r}")
    except AgentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

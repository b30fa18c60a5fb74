"""Authentication server core.

One logical state machine holding the user registry, per-user identifier
pools, and the authentication session table. Every operation takes the
current unix time as a parameter; timers are realized as lazy sweeps run
before any decision that depends on them, which makes the whole machine
deterministic under an injected clock.

Session lifecycle: active -> succeeded | failed | timed_out (terminal states
never change). When a session terminates its identifier enters a cooldown and
only returns to the user's pool once the cooldown outlives the PIN drift
window, which is what kills replays of captured (identifier, pin) pairs.

Login intentionally leaks nothing about the first factor: wrong passwords and
unknown usernames receive a session and an identifier just like correct ones,
and the outcome is only acted on at second-factor time.
"""

from __future__ import annotations

import hashlib
import hmac as hmac_mod
import json
import os
import secrets
import tempfile
import threading
from base64 import urlsafe_b64encode
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional
from urllib.parse import urlencode

from cryptography.fernet import Fernet, InvalidToken

from .config import ConfigError, ServerConfig
from .crypto import (
    TotpKey,
    derive_time_slice,
    verify_pin,
    verify_truncated_pin,
)
from .identifiers import (
    Identifier,
    IdentifierDictionary,
    build_pattern_dictionary,
    build_token_dictionary,
    parse_identifier,
)

ACTIVE = "active"
SUCCEEDED = "succeeded"
FAILED = "failed"
TIMED_OUT = "timed_out"
STATUSES = (ACTIVE, SUCCEEDED, FAILED, TIMED_OUT)

SNAPSHOT_VERSION = 1
PROVISIONING_SCHEME = "2d2fa"


class AuthServerError(Exception):
    pass


class DuplicateUser(AuthServerError):
    pass


class UnknownUser(AuthServerError):
    pass


class AlreadyEnrolled(AuthServerError):
    pass


class LimitReached(AuthServerError):
    """Concurrency cap hit for this username."""


class PoolExhausted(LimitReached):
    """No identifier available; on the wire this refusal is indistinguishable
    from the concurrency cap so it leaks nothing extra."""


class UnknownToken(AuthServerError):
    pass


class SnapshotError(AuthServerError):
    pass


@dataclass
class UserRecord:
    username: str
    password: dict  # scrypt salt/params/digest, all hex-encoded
    identifier_kind: str
    totp_key: Optional[TotpKey]
    enrolled: bool = False
    decoy: bool = False


@dataclass
class AuthSession:
    token: str
    username: str
    identifier: Identifier
    issued_at: int
    password_ok: bool
    status: str = ACTIVE
    completed_at: Optional[int] = None
    pin_verified: bool = False


@dataclass(frozen=True)
class Registration:
    totp_key: TotpKey
    provisioning_payload: str


@dataclass(frozen=True)
class LoginTicket:
    session_token: str
    identifier: Identifier
    expires_in_s: int


class AuthServer:
    """Serializable protocol state machine. All public operations take the
    lock, so callers may invoke them from any number of request handlers."""

    def __init__(
        self,
        config: Optional[ServerConfig] = None,
        rng=None,
        dictionaries: Optional[dict[str, IdentifierDictionary]] = None,
        validate_config: bool = True,
    ) -> None:
        self.config = config or ServerConfig()
        if validate_config:
            self.config.check()
        self._rng = rng if rng is not None else secrets.SystemRandom()
        self._lock = threading.RLock()
        self._users: dict[str, UserRecord] = {}
        self._decoys: dict[str, UserRecord] = {}
        self._sessions: dict[str, AuthSession] = {}
        # username -> {identifier canonical -> session token}, active sessions only
        self._active: dict[str, dict[str, str]] = {}
        # username -> {identifier canonical -> completion time}
        self._cooling: dict[str, dict[str, int]] = {}
        self._now = 0
        self._dictionaries = dict(dictionaries or {})
        cfg = self.config
        if "pattern" not in self._dictionaries:
            self._dictionaries["pattern"] = build_pattern_dictionary(
                cfg.pattern_length, cfg.pattern_start_dot, cfg.pattern_min_distance, cfg.dictionary_size
            )
        if "qr" not in self._dictionaries:
            self._dictionaries["qr"] = build_token_dictionary("qr", cfg.dictionary_size, self._rng)
        if "numeric" not in self._dictionaries:
            self._dictionaries["numeric"] = build_token_dictionary("numeric", cfg.dictionary_size, self._rng)

    # ------------------------------------------------------------------ clock

    def _touch(self, now) -> int:
        # the machine never moves backwards, whatever a caller passes
        self._now = max(self._now, int(now))
        return self._now

    def _sweep(self, now: int) -> None:
        self._expire_locked(now)
        self._release_locked(now)

    # ----------------------------------------------------------- registration

    def register_user(self, username: str, password: str, identifier_kind: str = "pattern") -> Registration:
        if not username or not isinstance(username, str) or len(username) > 64:
            raise AuthServerError("username must be a non-empty string of at most 64 characters")
        if identifier_kind not in self._dictionaries:
            raise AuthServerError(f"unknown identifier kind {identifier_kind!r}")
        with self._lock:
            existing = self._users.get(username)
            # an account whose enrollment round was declined may repeat the
            # process; a live or pending enrollment blocks the name
            if existing is not None and (existing.enrolled or existing.totp_key is not None):
                raise DuplicateUser(f"username {username!r} is taken")
            key = TotpKey.generate(self._rng)
            self._users[username] = UserRecord(
                username=username,
                password=self._hash_password(password),
                identifier_kind=identifier_kind,
                totp_key=key,
                enrolled=False,
            )
            payload = f"{PROVISIONING_SCHEME}://enroll?" + urlencode(
                {"sn": self.config.server_name, "un": username, "key": key.hex, "kind": identifier_kind}
            )
            return Registration(totp_key=key, provisioning_payload=payload)

    def confirm_registration(
        self,
        username: str,
        password: str,
        device: Callable[[Identifier, int], bytes],
        now: int,
    ) -> bool:
        """Drive the one confirmation round: log in, hand the identifier to the
        caller-supplied device function, submit the pin it returns. On success
        the account is enrolled; on failure the pending key is discarded and
        registration must be repeated."""
        with self._lock:
            user = self._users.get(username)
            if user is None or user.decoy:
                raise UnknownUser(username)
            if user.enrolled:
                raise AlreadyEnrolled(username)
            ticket = self.begin_login(username, password, now)
            pin = device(ticket.identifier, now)
            return self.submit_second_factor(username, ticket.identifier.canonical, pin, now)

    def is_enrolled(self, username: str) -> bool:
        with self._lock:
            user = self._users.get(username)
            return bool(user and user.enrolled)

    # ----------------------------------------------------------------- logins

    def begin_login(self, username: str, password: str, now) -> LoginTicket:
        with self._lock:
            now = self._touch(now)
            self._sweep(now)
            user = self._users.get(username)
            if user is None:
                user = self._decoys.get(username)
                if user is None:
                    user = self._make_decoy(username)
            if len(self._active.get(username, ())) >= self.config.max_concurrent_sessions_per_user:
                raise LimitReached(f"too many concurrent sessions for {username!r}")
            password_ok = self._verify_password(user, password) and not user.decoy
            pool = self._available_identifiers(username, user.identifier_kind)
            if not pool:
                raise PoolExhausted(f"no identifier available for {username!r}")
            identifier = self._rng.choice(pool)
            token = self._rng.randbytes(16).hex()
            self._sessions[token] = AuthSession(
                token=token,
                username=username,
                identifier=identifier,
                issued_at=now,
                password_ok=password_ok,
            )
            self._active.setdefault(username, {})[identifier.canonical] = token
            return LoginTicket(
                session_token=token,
                identifier=identifier,
                expires_in_s=self.config.session_timeout_s,
            )

    def submit_second_factor(self, username: str, identifier_canonical: str, pin: bytes, now) -> bool:
        """Device-to-server path. True iff the session bound to this identifier
        is accepted; any failure terminates that session."""
        with self._lock:
            now = self._touch(now)
            self._sweep(now)
            session = self._find_active(username, identifier_canonical)
            if session is None:
                return False
            user = self._users.get(username) or self._decoys.get(username)
            pin_ok = bool(
                user is not None
                and user.totp_key is not None
                and verify_pin(
                    user.totp_key,
                    identifier_canonical,
                    pin,
                    derive_time_slice(now),
                    self.config.slice_window,
                )
            )
            accepted = pin_ok and session.password_ok
            self._complete(session, SUCCEEDED if accepted else FAILED, now, pin_verified=pin_ok)
            return accepted

    def submit_fallback(self, session_token: str, pin_digits: str, now) -> bool:
        """Manual-entry path: the 8-digit truncated pin typed through the
        client, addressed by session token. Same state transitions as the
        direct path."""
        with self._lock:
            now = self._touch(now)
            self._sweep(now)
            session = self._sessions.get(session_token)
            if session is None:
                raise UnknownToken(session_token)
            if session.status != ACTIVE:
                return False
            user = self._users.get(session.username) or self._decoys.get(session.username)
            pin_ok = bool(
                user is not None
                and user.totp_key is not None
                and verify_truncated_pin(
                    user.totp_key,
                    session.identifier.canonical,
                    pin_digits,
                    derive_time_slice(now),
                    self.config.slice_window,
                )
            )
            accepted = pin_ok and session.password_ok
            self._complete(session, SUCCEEDED if accepted else FAILED, now, pin_verified=pin_ok)
            return accepted

    # ----------------------------------------------------------------- timers

    def expire_sessions(self, now) -> int:
        with self._lock:
            return self._expire_locked(self._touch(now))

    def release_identifiers(self, now) -> int:
        with self._lock:
            return self._release_locked(self._touch(now))

    def _expire_locked(self, now: int) -> int:
        timeout = self.config.session_timeout_s
        expired = [
            self._sessions[token]
            for held in self._active.values()
            for token in held.values()
            if self._sessions[token].issued_at + timeout <= now
        ]
        for session in expired:
            # completion is backdated to the actual expiry moment so a late
            # sweep behaves exactly like a per-session timer would have
            self._complete(session, TIMED_OUT, session.issued_at + timeout, pin_verified=False)
        return len(expired)

    def _release_locked(self, now: int) -> int:
        cooldown = self.config.identifier_cooldown_s
        released = 0
        for username in list(self._cooling):
            entries = self._cooling[username]
            for canonical in [c for c, t in entries.items() if t + cooldown <= now]:
                del entries[canonical]
                released += 1
            if not entries:
                del self._cooling[username]
        return released

    # ----------------------------------------------------------------- status

    def session_status(self, session_token: str, now=None) -> str:
        with self._lock:
            if now is not None:
                self._touch(now)
            self._sweep(self._now)
            session = self._sessions.get(session_token)
            if session is None:
                raise UnknownToken(session_token)
            return session.status

    def dictionary(self, kind: str) -> IdentifierDictionary:
        return self._dictionaries[kind]

    # ------------------------------------------------------------- invariants

    def check_invariants(self) -> list[str]:
        """Return human-readable violations of the protocol invariants
        (empty when healthy). The adversary harness re-runs this after every
        scenario, including on restored snapshots."""
        problems: list[str] = []
        with self._lock:
            held: dict[str, list[str]] = {}
            for s in self._sessions.values():
                if s.status not in STATUSES:
                    problems.append(f"session {s.token}: unknown status {s.status!r}")
                if s.status == ACTIVE and s.completed_at is not None:
                    problems.append(f"session {s.token}: active but completed")
                if s.status != ACTIVE and s.completed_at is None:
                    problems.append(f"session {s.token}: terminal without completion time")
                if s.status == SUCCEEDED and not (s.password_ok and s.pin_verified):
                    problems.append(f"session {s.token}: succeeded without both factors")
                if s.status == ACTIVE:
                    held.setdefault(s.username, []).append(s.identifier.canonical)
            for username, canonicals in held.items():
                if len(set(canonicals)) != len(canonicals):
                    problems.append(f"user {username!r}: identifier shared by active sessions")
                cooling = set(self._cooling.get(username, ()))
                clash = set(canonicals) & cooling
                if clash:
                    problems.append(f"user {username!r}: active identifiers {sorted(clash)} still cooling")
            indexed = {
                (u, c) for u, m in self._active.items() for c in m
            }
            actual = {(u, c) for u, cs in held.items() for c in cs}
            if indexed != actual:
                problems.append("active-session index out of sync with the session table")
        return problems

    # ------------------------------------------------------------ persistence

    def persist(self, path) -> None:
        """Atomic, versioned snapshot; 2FA keys are encrypted with the
        configured master key before touching disk."""
        with self._lock:
            fernet = self._fernet()
            snapshot = {
                "version": SNAPSHOT_VERSION,
                "now": self._now,
                "users": [self._dump_user(u, fernet) for u in self._users.values()],
                "decoys": [self._dump_user(u, fernet) for u in self._decoys.values()],
                "sessions": [self._dump_session(s) for s in self._sessions.values()],
                "cooling": {u: dict(m) for u, m in self._cooling.items()},
                "dictionaries": {
                    k: {"entries": d.canonicals(), "min_pairwise_distance": d.min_pairwise_distance}
                    for k, d in self._dictionaries.items()
                },
            }
            payload = json.dumps(snapshot, separators=(",", ":")).encode("utf-8")
            target = Path(path)
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name, suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(payload)
                os.replace(tmp, target)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    @classmethod
    def restore(
        cls,
        path,
        config: ServerConfig,
        rng=None,
        validate_config: bool = True,
    ) -> "AuthServer":
        """Rebuild a server from a snapshot; any corruption refuses to start."""
        try:
            snapshot = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError, UnicodeDecodeError) as exc:
            raise SnapshotError(f"cannot read snapshot {path}: {exc}") from exc
        if not isinstance(snapshot, dict) or snapshot.get("version") != SNAPSHOT_VERSION:
            raise SnapshotError("unsupported or corrupt snapshot")
        try:
            dictionaries = {
                kind: IdentifierDictionary(
                    kind=kind,
                    entries=tuple(parse_identifier(c) for c in record["entries"]),
                    min_pairwise_distance=int(record["min_pairwise_distance"]),
                )
                for kind, record in snapshot["dictionaries"].items()
            }
            server = cls(config, rng=rng, dictionaries=dictionaries, validate_config=validate_config)
            fernet = server._fernet()
            for record in snapshot["users"]:
                user = cls._load_user(record, fernet)
                server._users[user.username] = user
            for record in snapshot["decoys"]:
                user = cls._load_user(record, fernet)
                user.decoy = True
                server._decoys[user.username] = user
            for record in snapshot["sessions"]:
                session = cls._load_session(record)
                server._sessions[session.token] = session
                if session.status == ACTIVE:
                    server._active.setdefault(session.username, {})[
                        session.identifier.canonical
                    ] = session.token
            server._cooling = {
                u: {c: int(t) for c, t in m.items()} for u, m in snapshot["cooling"].items()
            }
            server._now = int(snapshot["now"])
        except SnapshotError:
            raise
        except (KeyError, TypeError, ValueError, InvalidToken) as exc:
            raise SnapshotError(f"corrupt snapshot {path}: {exc}") from exc
        return server

    # ---------------------------------------------------------------- helpers

    def _make_decoy(self, username: str) -> UserRecord:
        # unknown usernames get a session like anyone else; the record hashes
        # an unguessable password so verification runs the same code path
        decoy = UserRecord(
            username=username,
            password=self._hash_password(self._rng.randbytes(32).hex()),
            identifier_kind=self.config.default_kind,
            totp_key=None,
            enrolled=False,
            decoy=True,
        )
        self._decoys[username] = decoy
        return decoy

    def _hash_password(self, password: str) -> dict:
        cfg = self.config
        salt = self._rng.randbytes(16)
        digest = hashlib.scrypt(
            password.encode("utf-8"),
            salt=salt,
            n=cfg.scrypt_n,
            r=cfg.scrypt_r,
            p=cfg.scrypt_p,
            dklen=32,
        )
        return {
            "salt": salt.hex(),
            "n": cfg.scrypt_n,
            "r": cfg.scrypt_r,
            "p": cfg.scrypt_p,
            "digest": digest.hex(),
        }

    def _verify_password(self, user: UserRecord, password: str) -> bool:
        stored = user.password
        digest = hashlib.scrypt(
            password.encode("utf-8"),
            salt=bytes.fromhex(stored["salt"]),
            n=stored["n"],
            r=stored["r"],
            p=stored["p"],
            dklen=32,
        )
        return hmac_mod.compare_digest(digest.hex(), stored["digest"])

    def _available_identifiers(self, username: str, kind: str) -> list[Identifier]:
        blocked = set(self._active.get(username, ())) | set(self._cooling.get(username, ()))
        return [e for e in self._dictionaries[kind].entries if e.canonical not in blocked]

    def _find_active(self, username: str, identifier_canonical: str) -> Optional[AuthSession]:
        token = self._active.get(username, {}).get(identifier_canonical)
        return self._sessions[token] if token is not None else None

    def _complete(self, session: AuthSession, status: str, now: int, pin_verified: bool) -> None:
        if session.status != ACTIVE:
            raise AuthServerError("terminal sessions are immutable")
        session.status = status
        session.completed_at = now
        session.pin_verified = pin_verified
        held = self._active.get(session.username)
        if held is not None:
            held.pop(session.identifier.canonical, None)
            if not held:
                del self._active[session.username]
        cooling = self._cooling.setdefault(session.username, {})
        cooling[session.identifier.canonical] = max(
            cooling.get(session.identifier.canonical, 0), now
        )
        # a round for a provisioned-but-unconfirmed account is the
        # confirmation round: success enrolls, anything else declines
        user = self._users.get(session.username)
        if user is not None and not user.enrolled and user.totp_key is not None:
            if status == SUCCEEDED:
                user.enrolled = True
            else:
                user.totp_key = None

    def _fernet(self) -> Fernet:
        if not self.config.master_key_hex:
            raise ConfigError("persistence requires master_key_hex in the server config")
        return Fernet(urlsafe_b64encode(bytes.fromhex(self.config.master_key_hex)))

    @staticmethod
    def _dump_user(user: UserRecord, fernet: Fernet) -> dict:
        return {
            "username": user.username,
            "password": user.password,
            "kind": user.identifier_kind,
            "key": fernet.encrypt(user.totp_key.data).decode("ascii") if user.totp_key else None,
            "enrolled": user.enrolled,
        }

    @staticmethod
    def _load_user(record: dict, fernet: Fernet) -> UserRecord:
        key = record["key"]
        return UserRecord(
            username=record["username"],
            password=record["password"],
            identifier_kind=record["kind"],
            totp_key=TotpKey(fernet.decrypt(key.encode("ascii"))) if key else None,
            enrolled=bool(record["enrolled"]),
        )

    @staticmethod
    def _dump_session(session: AuthSession) -> dict:
        return {
            "token": session.token,
            "username": session.username,
            "identifier": session.identifier.canonical,
            "issued_at": session.issued_at,
            "status": session.status,
            "password_ok": session.password_ok,
            "completed_at": session.completed_at,
            "pin_verified": session.pin_verified,
        }

    @staticmethod
    def _load_session(record: dict) -> AuthSession:
        if record["status"] not in STATUSES:
            raise ValueError(f"unknown session status {record['status']!r}")
        return AuthSession(
            token=record["token"],
            username=record["username"],
            identifier=parse_identifier(record["identifier"]),
            issued_at=int(record["issued_at"]),
            password_ok=bool(record["password_ok"]),
            status=record["status"],
            completed_at=None if record["completed_at"] is None else int(record["completed_at"]),
            pin_verified=bool(record["pin_verified"]),
        )

"""Server configuration: timers, limits, dictionary shape, and hashing
parameters. The safety-critical relation is between the identifier cooldown
and the PIN drift window; `check()` refuses any combination under which a
completed session's PIN could still verify once its identifier is reissued.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .crypto import SLICE_SECONDS
from .identifiers import KINDS


class ConfigError(ValueError):
    pass


@dataclass
class ServerConfig:
    server_name: str = "demo"
    slice_window: int = 2
    session_timeout_s: int = 30
    identifier_cooldown_s: int = 120
    max_concurrent_sessions_per_user: int = 5
    default_kind: str = "pattern"
    dictionary_size: int = 10
    pattern_length: int = 4
    pattern_start_dot: int = 1
    pattern_min_distance: int = 2
    scrypt_n: int = 2**14
    scrypt_r: int = 8
    scrypt_p: int = 1
    master_key_hex: str | None = None

    def check(self) -> None:
        """Raise ConfigError unless the configuration is internally safe."""
        if self.slice_window < 0:
            raise ConfigError("slice_window must be non-negative")
        if self.session_timeout_s <= 0:
            raise ConfigError("session_timeout_s must be positive")
        if self.identifier_cooldown_s < 2 * self.slice_window * SLICE_SECONDS:
            raise ConfigError(
                "identifier_cooldown_s must cover the drift window "
                f"(>= {2 * self.slice_window * SLICE_SECONDS}s for slice_window={self.slice_window})"
            )
        # a pin from slice s verifies until (s + window + 1) slices; the cooldown
        # must outlive that horizon even when the window is zero
        if self.identifier_cooldown_s < (self.slice_window + 1) * SLICE_SECONDS:
            raise ConfigError("identifier_cooldown_s must exceed the pin acceptance horizon")
        if self.max_concurrent_sessions_per_user < 1:
            raise ConfigError("max_concurrent_sessions_per_user must be at least 1")
        if self.dictionary_size < 2 * self.max_concurrent_sessions_per_user:
            raise ConfigError(
                "dictionary_size must be at least twice max_concurrent_sessions_per_user"
            )
        if self.default_kind not in KINDS:
            raise ConfigError(f"default_kind must be one of {KINDS}")
        if self.pattern_start_dot not in range(1, 10):
            raise ConfigError("pattern_start_dot must be in 1..9")
        if not 2 <= self.pattern_length <= 9:
            raise ConfigError("pattern_length must be in 2..9")
        if self.pattern_min_distance < 1:
            raise ConfigError("pattern_min_distance must be at least 1")
        for name in ("scrypt_n", "scrypt_r", "scrypt_p"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.scrypt_n & (self.scrypt_n - 1):
            raise ConfigError("scrypt_n must be a power of two")
        if self.master_key_hex is not None:
            try:
                raw = bytes.fromhex(self.master_key_hex)
            except ValueError:
                raise ConfigError("master_key_hex must be hex") from None
            if len(raw) != 32:
                raise ConfigError("master_key_hex must encode exactly 32 bytes")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ServerConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ServerConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

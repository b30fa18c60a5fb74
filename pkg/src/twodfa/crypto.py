"""Deterministic PIN core: shared keys, 30-second time slices, identifier-bound
HMAC-SHA256 PINs, and windowed verification.

Everything here is a pure function over value types. There is no I/O and no
ambient clock; callers always pass time in explicitly, which is what makes the
protocol layers above testable against an injected clock.

The PIN message is ``utf8(identifier) || '|' || decimal(slice_index)``. The
separator byte is banned from identifier canonical strings, so the encoding is
injective: no two (identifier, slice) pairs produce the same MAC input.
"""

from __future__ import annotations

import hashlib
import hmac
import re
import secrets
from dataclasses import dataclass

KEY_BYTES = 16
PIN_BYTES = 32
SLICE_SECONDS = 30
DEFAULT_WINDOW = 2
FALLBACK_DIGITS = 8

_PIN_HEX_RE = re.compile(r"[0-9a-f]{64}")
_FALLBACK_RE = re.compile(r"[0-9]{8}")


class MalformedIdentifier(ValueError):
    """Identifier string is unusable as PIN-message material."""


@dataclass(frozen=True, repr=False)
class TotpKey:
    """128-bit secret shared between a device and the server.

    The raw bytes never appear in ``repr``/``str``, so the key cannot leak
    through logs or exception messages. Use :attr:`hex` deliberately when the
    key must travel (it does so only inside the one-time provisioning payload).
    """

    data: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.data, bytes) or len(self.data) != KEY_BYTES:
            raise ValueError(f"2FA key must be exactly {KEY_BYTES} bytes")

    @classmethod
    def generate(cls, rng=None) -> "TotpKey":
        """Draw a fresh key. ``rng`` may be any ``random.Random``-alike with
        ``randbytes`` (the default is the OS CSPRNG)."""
        data = secrets.token_bytes(KEY_BYTES) if rng is None else rng.randbytes(KEY_BYTES)
        return cls(data)

    @classmethod
    def from_hex(cls, text: str) -> "TotpKey":
        try:
            raw = bytes.fromhex(text)
        except ValueError as exc:
            raise ValueError("2FA key must be 32 hex characters") from exc
        return cls(raw)

    @property
    def hex(self) -> str:
        return self.data.hex()

    def __repr__(self) -> str:  # pragma: no cover - trivial
        return "TotpKey(<redacted>)"

    __str__ = __repr__


def derive_time_slice(unix_seconds: int) -> int:
    """Map unix seconds to the 30-second slice index: floor(seconds / 30)."""
    seconds = int(unix_seconds)
    if seconds < 0:
        raise ValueError("unix_seconds must be non-negative")
    return seconds // SLICE_SECONDS


def pin_message(identifier_canonical: str, slice_index: int) -> bytes:
    """Byte encoding fed to the MAC. Rejects identifiers that would make the
    encoding ambiguous (empty, or containing the separator byte)."""
    if not identifier_canonical:
        raise MalformedIdentifier("identifier must be non-empty")
    if "|" in identifier_canonical:
        raise MalformedIdentifier("identifier must not contain '|'")
    if slice_index < 0:
        raise ValueError("slice index must be non-negative")
    return identifier_canonical.encode("utf-8") + b"|" + str(int(slice_index)).encode("ascii")


def generate_pin(key: TotpKey, identifier_canonical: str, slice_index: int) -> bytes:
    """Full 256-bit PIN: HMAC-SHA256 over the identifier-bound message."""
    return hmac.new(key.data, pin_message(identifier_canonical, slice_index), hashlib.sha256).digest()


def truncate_pin(pin: bytes) -> str:
    """8-digit fallback form via dynamic truncation (offset from the low
    nibble of the last byte, 31-bit word, mod 10^8, zero-padded)."""
    if len(pin) != PIN_BYTES:
        raise ValueError(f"pin must be {PIN_BYTES} bytes")
    offset = pin[-1] & 0x0F
    word = int.from_bytes(pin[offset:offset + 4], "big") & 0x7FFFFFFF
    return format(word % 10**FALLBACK_DIGITS, f"0{FALLBACK_DIGITS}d")


def verify_pin(
    key: TotpKey,
    identifier_canonical: str,
    candidate: bytes,
    now_slice: int,
    window: int = DEFAULT_WINDOW,
) -> bool:
    """True iff ``candidate`` is the PIN for some slice within ``window`` of
    ``now_slice`` (clamped at zero). Constant-time comparison; every slice in
    the window is checked even after a match. Malformed input verifies false
    rather than raising.
    """
    if window < 0:
        raise ValueError("window must be non-negative")
    if now_slice < 0:
        return False
    try:
        messages = [
            pin_message(identifier_canonical, s)
            for s in range(max(0, now_slice - window), now_slice + window + 1)
        ]
    except MalformedIdentifier:
        return False
    matched = False
    for message in messages:
        expected = hmac.new(key.data, message, hashlib.sha256).digest()
        matched |= hmac.compare_digest(expected, candidate)
    return matched


def verify_truncated_pin(
    key: TotpKey,
    identifier_canonical: str,
    candidate_digits: str,
    now_slice: int,
    window: int = DEFAULT_WINDOW,
) -> bool:
    """Windowed check for the 8-digit fallback form (manual-entry path)."""
    if not is_fallback_pin(candidate_digits):
        return False
    if window < 0:
        raise ValueError("window must be non-negative")
    if now_slice < 0:
        return False
    matched = False
    for s in range(max(0, now_slice - window), now_slice + window + 1):
        try:
            expected = truncate_pin(generate_pin(key, identifier_canonical, s))
        except MalformedIdentifier:
            return False
        matched |= hmac.compare_digest(expected.encode("ascii"), candidate_digits.encode("ascii"))
    return matched


def pin_to_hex(pin: bytes) -> str:
    """Canonical wire form: 64 lowercase hex characters."""
    if len(pin) != PIN_BYTES:
        raise ValueError(f"pin must be {PIN_BYTES} bytes")
    return pin.hex()


def pin_from_hex(text: str) -> bytes:
    """Strict inverse of :func:`pin_to_hex`; uppercase or wrong length is rejected."""
    if not isinstance(text, str) or not _PIN_HEX_RE.fullmatch(text):
        raise ValueError("pin must be exactly 64 lowercase hex characters")
    return bytes.fromhex(text)


def is_fallback_pin(text: str) -> bool:
    return isinstance(text, str) and _FALLBACK_RE.fullmatch(text) is not None

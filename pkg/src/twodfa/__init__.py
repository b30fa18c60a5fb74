"""Identifier-bound two-factor authentication.

A login session gets a short non-secret identifier (unlock pattern, QR token,
or digits); the user's device computes HMAC-SHA256 over that identifier and
the current 30-second time slice under a shared 128-bit key and sends the
result straight to the server. The server accepts the session only when both
the password and the identifier-bound pin check out, which makes captured
pins worthless for any other session.
"""

from .config import ConfigError, ServerConfig
from .crypto import (
    TotpKey,
    derive_time_slice,
    generate_pin,
    truncate_pin,
    verify_pin,
    verify_truncated_pin,
)
from .identifiers import (
    Identifier,
    IdentifierDictionary,
    build_pattern_dictionary,
    build_token_dictionary,
    export_dictionary,
    generate_token_identifier,
    load_dictionary,
    parse_identifier,
)
from .patterns import (
    enumerate_patterns,
    is_valid_pattern,
    similarity_distance,
    slip_variants,
)
from .server import AuthServer, AuthServerError

__all__ = [
    "AuthServer",
    "AuthServerError",
    "ConfigError",
    "Identifier",
    "IdentifierDictionary",
    "ServerConfig",
    "TotpKey",
    "build_pattern_dictionary",
    "build_token_dictionary",
    "derive_time_slice",
    "enumerate_patterns",
    "export_dictionary",
    "generate_pin",
    "generate_token_identifier",
    "is_valid_pattern",
    "load_dictionary",
    "parse_identifier",
    "similarity_distance",
    "slip_variants",
    "truncate_pin",
    "verify_pin",
    "verify_truncated_pin",
]

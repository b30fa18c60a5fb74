"""Session identifier kinds and their canonical string forms.

An identifier is the short, non-secret value displayed on the login terminal
and entered on the device. Three kinds exist: grid patterns (drawn or typed as
digits), QR tokens (scanned), and plain 4-digit numeric codes. The canonical
string is what both sides feed into PIN computation, so it must round-trip
exactly and never contain the PIN-message separator ``|``.
"""

from __future__ import annotations

import re
import secrets
from dataclasses import dataclass, field
from typing import Tuple, Union

from . import patterns
from .patterns import Pattern, is_valid_pattern, pattern_digits, pattern_from_digits

PATTERN_KIND = "pattern"
QR_KIND = "qr"
NUMERIC_KIND = "numeric"
KINDS = (PATTERN_KIND, QR_KIND, NUMERIC_KIND)

QR_TOKEN_LENGTH = 12
NUMERIC_DIGITS = 4

_TOKEN_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789"
_QR_RE = re.compile(r"[A-Za-z0-9]{12}")
_NUM_RE = re.compile(r"[0-9]{4}")
_PREFIXES = {"PT": PATTERN_KIND, "QR": QR_KIND, "NUM": NUMERIC_KIND}


class IdentifierError(ValueError):
    """Payload does not satisfy the invariants of its kind."""


@dataclass(frozen=True)
class Identifier:
    kind: str
    payload: Union[Pattern, str]

    def __post_init__(self) -> None:
        if self.kind == PATTERN_KIND:
            seq = tuple(self.payload)  # type: ignore[arg-type]
            if not is_valid_pattern(seq):
                raise IdentifierError(f"invalid pattern payload: {self.payload!r}")
            object.__setattr__(self, "payload", seq)
        elif self.kind == QR_KIND:
            if not isinstance(self.payload, str) or not _QR_RE.fullmatch(self.payload):
                raise IdentifierError("qr token must be 12 alphanumeric characters")
        elif self.kind == NUMERIC_KIND:
            if not isinstance(self.payload, str) or not _NUM_RE.fullmatch(self.payload):
                raise IdentifierError("numeric identifier must be 4 digits")
        else:
            raise IdentifierError(f"unknown identifier kind: {self.kind!r}")

    @property
    def canonical(self) -> str:
        """Exact string fed into the PIN message, e.g. ``PT:1236``."""
        if self.kind == PATTERN_KIND:
            return f"PT:{pattern_digits(self.payload)}"
        if self.kind == QR_KIND:
            return f"QR:{self.payload}"
        return f"NUM:{self.payload}"

    @property
    def display(self) -> Union[list, str]:
        """Render data for a client: dot list for patterns, text otherwise."""
        if self.kind == PATTERN_KIND:
            return list(self.payload)
        return self.payload


def pattern_identifier(dots) -> Identifier:
    return Identifier(PATTERN_KIND, tuple(dots))


def qr_identifier(token: str) -> Identifier:
    return Identifier(QR_KIND, token)


def numeric_identifier(digits: str) -> Identifier:
    return Identifier(NUMERIC_KIND, digits)


def parse_identifier(canonical: str) -> Identifier:
    """Inverse of :attr:`Identifier.canonical`."""
    if not isinstance(canonical, str) or ":" not in canonical:
        raise IdentifierError(f"not a canonical identifier: {canonical!r}")
    prefix, _, rest = canonical.partition(":")
    kind = _PREFIXES.get(prefix)
    if kind is None:
        raise IdentifierError(f"unknown identifier prefix: {prefix!r}")
    if kind == PATTERN_KIND:
        return pattern_identifier(pattern_from_digits(rest))
    return Identifier(kind, rest)


def parse_identifier_input(kind: str, text: str) -> Identifier:
    """Parse what a user types on the device: bare pattern digits, a QR token,
    or a numeric code. Raises :class:`IdentifierError` before anything is sent."""
    text = text.strip()
    if kind == PATTERN_KIND:
        try:
            return pattern_identifier(pattern_from_digits(text))
        except ValueError as exc:
            raise IdentifierError(str(exc)) from None
    return Identifier(kind, text)


def generate_token_identifier(kind: str, rng=None) -> Identifier:
    """Draw a random QR or numeric identifier. ``rng`` defaults to the OS
    CSPRNG; uniqueness across live sessions is the pool allocator's job."""
    rng = rng or secrets.SystemRandom()
    if kind == QR_KIND:
        token = "".join(rng.choice(_TOKEN_ALPHABET) for _ in range(QR_TOKEN_LENGTH))
        return qr_identifier(token)
    if kind == NUMERIC_KIND:
        return numeric_identifier("".join(rng.choice("0123456789") for _ in range(NUMERIC_DIGITS)))
    raise IdentifierError(f"no token form for kind {kind!r}")


@dataclass(frozen=True)
class IdentifierDictionary:
    """Fixed pool of identifiers a server hands out for one kind.

    Pattern dictionaries additionally guarantee a minimum pairwise similarity
    distance, which is what makes a single drawing slip unable to land on
    another in-use identifier.
    """

    kind: str
    entries: Tuple[Identifier, ...]
    min_pairwise_distance: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise IdentifierError(f"unknown identifier kind: {self.kind!r}")
        if not self.entries:
            raise IdentifierError("dictionary must not be empty")
        if any(e.kind != self.kind for e in self.entries):
            raise IdentifierError("dictionary entries must all share the dictionary kind")
        canonicals = [e.canonical for e in self.entries]
        if len(set(canonicals)) != len(canonicals):
            raise IdentifierError("dictionary entries must be pairwise distinct")
        if self.kind == PATTERN_KIND and self.min_pairwise_distance > 1:
            for i in range(len(self.entries)):
                for j in range(i + 1, len(self.entries)):
                    d = patterns.similarity_distance(self.entries[i].payload, self.entries[j].payload)
                    if d < self.min_pairwise_distance:
                        raise IdentifierError(
                            f"entries {canonicals[i]} and {canonicals[j]} are at distance {d}"
                            f" < {self.min_pairwise_distance}"
                        )

    def __len__(self) -> int:
        return len(self.entries)

    def canonicals(self) -> list[str]:
        return [e.canonical for e in self.entries]


def build_pattern_dictionary(
    length: int = patterns.DICTIONARY_LENGTH,
    start_dot: int = 1,
    min_distance: int = 2,
    max_size: int = 10,
) -> IdentifierDictionary:
    """Deterministic greedy pattern dictionary (see
    :func:`twodfa.patterns.select_distant_patterns`)."""
    selected = patterns.select_distant_patterns(length, start_dot, min_distance, max_size)
    return IdentifierDictionary(
        kind=PATTERN_KIND,
        entries=tuple(pattern_identifier(p) for p in selected),
        min_pairwise_distance=min_distance,
    )


def build_token_dictionary(kind: str, size: int, rng=None) -> IdentifierDictionary:
    """Pool of ``size`` distinct random QR or numeric identifiers."""
    if size < 1:
        raise IdentifierError("dictionary size must be at least 1")
    rng = rng or secrets.SystemRandom()
    seen: dict[str, Identifier] = {}
    while len(seen) < size:
        ident = generate_token_identifier(kind, rng)
        seen.setdefault(ident.canonical, ident)
    return IdentifierDictionary(kind=kind, entries=tuple(seen.values()))


def export_dictionary(dictionary: IdentifierDictionary) -> str:
    """One canonical string per line, LF-terminated (the golden-file format)."""
    return "".join(c + "\n" for c in dictionary.canonicals())


def load_dictionary(text: str, min_pairwise_distance: int = 0) -> IdentifierDictionary:
    """Parse the export format back into a dictionary (kind inferred)."""
    entries = tuple(parse_identifier(line) for line in text.splitlines() if line.strip())
    if not entries:
        raise IdentifierError("dictionary file is empty")
    return IdentifierDictionary(
        kind=entries[0].kind,
        entries=entries,
        min_pairwise_distance=min_pairwise_distance,
    )

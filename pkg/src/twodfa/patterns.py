"""Unlock-pattern math on the 3x3 grid.

Dots are labeled 1..9 row-major (1 upper-left, 9 lower-right). A pattern is an
ordered tuple of distinct dots obeying the Android reachability rule: a stroke
may only skip over a grid dot that was already visited. The similarity between
two patterns is the edit distance between their stroke (segment) sequences,
which is what a single drawing slip perturbs.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence, Tuple

Pattern = Tuple[int, ...]
Segment = Tuple[int, int]

MIN_LENGTH = 2
MAX_LENGTH = 9
DICTIONARY_LENGTH = 4

# Midpoint of each collinear dot triple, keyed by the unordered endpoint pair.
# These are the only straight strokes that pass over a third dot.
_MIDPOINT = {}
for _a, _m, _b in ((1, 2, 3), (4, 5, 6), (7, 8, 9), (1, 4, 7), (2, 5, 8), (3, 6, 9), (1, 5, 9), (3, 5, 7)):
    _MIDPOINT[frozenset((_a, _b))] = _m


def is_valid_pattern(dots: Sequence[int]) -> bool:
    """Distinct dots in 1..9, length 2..9, and no stroke over an unvisited dot."""
    seq = tuple(dots)
    if not MIN_LENGTH <= len(seq) <= MAX_LENGTH:
        return False
    if len(set(seq)) != len(seq):
        return False
    if any(not isinstance(d, int) or isinstance(d, bool) or not 1 <= d <= 9 for d in seq):
        return False
    visited = set()
    prev = None
    for dot in seq:
        if prev is not None:
            mid = _MIDPOINT.get(frozenset((prev, dot)))
            if mid is not None and mid not in visited:
                return False
        visited.add(dot)
        prev = dot
    return True


@lru_cache(maxsize=None)
def _enumerate(length: int) -> Tuple[Pattern, ...]:
    out: list[Pattern] = []

    def extend(prefix: Tuple[int, ...], visited: frozenset) -> None:
        if len(prefix) == length:
            out.append(prefix)
            return
        for dot in range(1, 10):
            if dot in visited:
                continue
            if prefix:
                mid = _MIDPOINT.get(frozenset((prefix[-1], dot)))
                if mid is not None and mid not in visited:
                    continue
            extend(prefix + (dot,), visited | {dot})

    extend((), frozenset())
    return tuple(out)


def enumerate_patterns(length: int) -> list[Pattern]:
    """All valid patterns of exactly ``length`` dots, in lexicographic order."""
    if not MIN_LENGTH <= length <= MAX_LENGTH:
        raise ValueError(f"pattern length must be in {MIN_LENGTH}..{MAX_LENGTH}")
    return list(_enumerate(length))


def segments(pattern: Sequence[int]) -> Tuple[Segment, ...]:
    """The directed strokes of a pattern, in drawing order."""
    seq = tuple(pattern)
    return tuple(zip(seq, seq[1:]))


def similarity_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Edit distance (insert/delete/replace, unit cost) between the two
    patterns' segment sequences. Symmetric; zero iff the patterns are equal."""
    sa, sb = segments(a), segments(b)
    if sa == sb:
        return 0
    # two-row Levenshtein over segment tuples
    prev = list(range(len(sb) + 1))
    for i, seg_a in enumerate(sa, start=1):
        cur = [i]
        for j, seg_b in enumerate(sb, start=1):
            cur.append(min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (seg_a != seg_b),
            ))
        prev = cur
    return prev[-1]


def select_distant_patterns(
    length: int = DICTIONARY_LENGTH,
    start_dot: int = 1,
    min_distance: int = 2,
    max_size: int = 10,
) -> list[Pattern]:
    """Greedy dictionary selection: walk the lexicographic enumeration
    restricted to ``start_dot``, admit a pattern iff it sits at least
    ``min_distance`` from everything admitted so far, stop at ``max_size`` or
    exhaustion. Deterministic and therefore reproducible byte-for-byte."""
    if min_distance < 1:
        raise ValueError("min_distance must be at least 1")
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if not 1 <= start_dot <= 9:
        raise ValueError("start_dot must be in 1..9")
    selected: list[Pattern] = []
    for candidate in _enumerate(length):
        if candidate[0] != start_dot:
            continue
        if all(similarity_distance(candidate, kept) >= min_distance for kept in selected):
            selected.append(candidate)
            if len(selected) == max_size:
                break
    if not selected:
        raise ValueError("no admissible pattern for the given constraints")
    return selected


@lru_cache(maxsize=4096)
def _slip_variants(pattern: Pattern) -> Tuple[Pattern, ...]:
    return tuple(
        q for q in _enumerate(len(pattern))
        if q != pattern and similarity_distance(pattern, q) == 1
    )


def slip_variants(pattern: Sequence[int]) -> list[Pattern]:
    """All valid same-length patterns one segment replacement away from
    ``pattern`` (the outcomes of a single drawing slip). Never contains the
    pattern itself."""
    seq = tuple(pattern)
    if not is_valid_pattern(seq):
        raise ValueError("slip variants are defined for valid patterns only")
    return list(_slip_variants(seq))


def pattern_digits(pattern: Sequence[int]) -> str:
    """Numeric representation, e.g. (1, 2, 3, 6) -> '1236'."""
    return "".join(str(d) for d in pattern)


def pattern_from_digits(text: str) -> Pattern:
    """Inverse of :func:`pattern_digits`; validates the result."""
    if not text or not text.isdigit() or "0" in text:
        raise ValueError("pattern digits must be a string of digits 1..9")
    seq = tuple(int(ch) for ch in text)
    if not is_valid_pattern(seq):
        raise ValueError(f"'{text}' is not a valid pattern")
    return seq


def all_pairwise_distances(patterns: Iterable[Sequence[int]]) -> list[int]:
    """Distances for every unordered pair; used by dictionary soundness checks."""
    pats = [tuple(p) for p in patterns]
    return [
        similarity_distance(pats[i], pats[j])
        for i in range(len(pats))
        for j in range(i + 1, len(pats))
    ]

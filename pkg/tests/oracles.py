"""Independent reference implementations used as test oracles.

Nothing here imports the code under test. The HMAC is built from the raw
ipad/opad construction, pattern enumeration filters itertools.permutations,
and the edit distance is the memoized recursion straight off the definition.
"""

from itertools import permutations

import hashlib
from functools import lru_cache

_BLOCK = 64

_MIDPOINTS = {}
for _a, _m, _b in ((1, 2, 3), (4, 5, 6), (7, 8, 9), (1, 4, 7), (2, 5, 8), (3, 6, 9), (1, 5, 9), (3, 5, 7)):
    _MIDPOINTS[frozenset((_a, _b))] = _m


def reference_hmac_sha256(key: bytes, message: bytes) -> bytes:
    if len(key) > _BLOCK:
        key = hashlib.sha256(key).digest()
    key = key.ljust(_BLOCK, b"\x00")
    ipad = bytes(b ^ 0x36 for b in key)
    opad = bytes(b ^ 0x5C for b in key)
    return hashlib.sha256(opad + hashlib.sha256(ipad + message).digest()).digest()


def reference_truncate(mac: bytes) -> str:
    offset = mac[-1] & 0x0F
    word = int.from_bytes(mac[offset:offset + 4], "big") & 0x7FFFFFFF
    return f"{word % 10**8:08d}"


def reference_pattern_valid(seq) -> bool:
    seq = tuple(seq)
    if not 2 <= len(seq) <= 9 or len(set(seq)) != len(seq):
        return False
    if any(d < 1 or d > 9 for d in seq):
        return False
    visited = set()
    prev = None
    for dot in seq:
        if prev is not None:
            mid = _MIDPOINTS.get(frozenset((prev, dot)))
            if mid is not None and mid not in visited:
                return False
        visited.add(dot)
        prev = dot
    return True


def reference_enumerate(length: int):
    return sorted(p for p in permutations(range(1, 10), length) if reference_pattern_valid(p))


def reference_distance(a, b) -> int:
    sa = tuple(zip(a, a[1:]))
    sb = tuple(zip(b, b[1:]))

    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
            d(i - 1, j - 1) + (sa[i - 1] != sb[j - 1]),
        )

    return d(len(sa), len(sb))


# RFC 4231 HMAC-SHA256 test vectors (test case 5 is truncated to 128 bits).
RFC4231_VECTORS = [
    (
        bytes.fromhex("0b" * 20),
        b"Hi There",
        "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7",
    ),
    (
        b"Jefe",
        b"what do ya want for nothing?",
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843",
    ),
    (
        bytes.fromhex("aa" * 20),
        bytes.fromhex("dd" * 50),
        "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe",
    ),
    (
        bytes.fromhex("0102030405060708090a0b0c0d0e0f10111213141516171819"),
        bytes.fromhex("cd" * 50),
        "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b",
    ),
    (
        bytes.fromhex("0c" * 20),
        b"Test With Truncation",
        "a3b6167473100ee06e0c796c2955552b",
    ),
    (
        bytes.fromhex("aa" * 131),
        b"Test Using Larger Than Block-Size Key - Hash Key First",
        "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54",
    ),
    (
        bytes.fromhex("aa" * 131),
        b"This is a test using a larger than block-size key and a larger than block-size data. "
        b"The key needs to be hashed before being used by the HMAC algorithm.",
        "9b09ffa71b942fcb27635fbcd5b0e944bfdc63644f0713938a7f51535c3a35e2",
    ),
]

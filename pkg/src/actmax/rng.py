"""Counter-based random streams shared by all stochastic components.

Every coin flip in the package is a pure function of (run seed, domain,
stream index, object id).  A "stream" corresponds to one simulation /
sample index; within a stream, per-edge and per-node coins are keyed by
the edge or node id.  This makes realizations replayable byte-for-byte,
keeps the two reverse traversals of an edge-rooted sample consistent
without memoization, and gives common random numbers across candidate
strategies scored in the same run.

The mixer is the splitmix64 finalizer.  `_kernels.py` carries an
identical uint64 implementation for use inside numba; the test suite
asserts the two produce the same outputs.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Domain tags: one per independent consumer of randomness.
DOMAIN_REALIZATION = 0xA1
DOMAIN_SEEDSET = 0xA2
DOMAIN_SCORE = 0xA3
DOMAIN_RE_GROW = 0xB1
DOMAIN_RE_FINAL = 0xB2
DOMAIN_RN_GROW = 0xB3
DOMAIN_RN_FINAL = 0xB4
DOMAIN_IM_GROW = 0xB5
DOMAIN_IM_FINAL = 0xB6
DOMAIN_LB = 0xC1
DOMAIN_UB = 0xC2
DOMAIN_BASELINE_RANDOM = 0xC3

# Salts separating coin families within one stream.
SALT_EDGE = 0x1D872B41
SALT_NODE = 0x2E9A67F3
SALT_SEED = 0x3C6EF372
SALT_PICK = 0x4A29CD9B


def as_u64(x: int):
    """Mask to 64 bits and convert for the numba kernel boundary."""
    import numpy as np

    return np.uint64(x & _MASK)


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z = (z + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def key2(a: int, b: int) -> int:
    """Combine two 64-bit keys into one."""
    return mix64((a & _MASK) ^ mix64(b & _MASK))


def stream_key(seed: int, domain: int, index: int) -> int:
    """Key of stream `index` within `domain` for a run seed."""
    return key2(key2(seed, domain), index)


def u01(h: int) -> float:
    """Map a 64-bit hash to a uniform float in [0, 1)."""
    return (h >> 11) * (1.0 / 9007199254740992.0)


def edge_coin(skey: int, edge_id: int) -> float:
    return u01(key2(skey ^ SALT_EDGE, edge_id))


def node_coin(skey: int, node_id: int) -> float:
    return u01(key2(skey ^ SALT_NODE, node_id))


def seed_coin(skey: int, node_id: int) -> float:
    return u01(key2(skey ^ SALT_SEED, node_id))


def pick_coin(skey: int) -> float:
    return u01(key2(skey ^ SALT_PICK, 0))

"""Counter-based deterministic sampling of coefficient vectors.

Reproducibility contract: the coefficients drawn for sample number `index`
under seed `seed` depend on (seed, index) and nothing else — not on how the
index range was split into shards, not on which machine ran which shard,
not on how many samples came before.  Shard workers simply own disjoint
index ranges; the merged result is bit-for-bit the unsharded one.

The generator is the 64-bit split-and-mix construction: a fixed odd
increment walks the state, and a finalizer with two xor-shift-multiply
rounds whitens it.  Random access (word j of stream s) costs one finalize,
which is what makes counter addressing free.
"""

from __future__ import annotations

from typing import Tuple

from .gf import GF

_MASK = (1 << 64) - 1
_INCREMENT = 0x9E3779B97F4A7C15  # odd; the 64-bit golden-ratio constant
_STREAM_SALT = 0xD1B54A32D192ED03  # distinct odd constant for sub-stream keys


def mix64(z: int) -> int:
    """The split-and-mix finalizer: a bijection on 64-bit words."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_word(stream: int, j: int) -> int:
    """Word j of the 64-bit stream keyed by `stream`."""
    return mix64((stream + (j + 1) * _INCREMENT) & _MASK)


def sample_stream(seed: int, index: int) -> int:
    """Sub-stream key for sample number `index` under `seed`.

    Both coordinates pass through the finalizer so that nearby seeds and
    nearby indices give unrelated streams.
    """
    return mix64((mix64(seed) + (index & _MASK) * _STREAM_SALT) & _MASK)


class _BitSource:
    """LSB-first bit supply drawn lazily from a keyed word stream."""

    def __init__(self, stream: int):
        self._stream = stream
        self._word_index = 0
        self._buf = 0
        self._nbits = 0

    def take(self, k: int) -> int:
        while self._nbits < k:
            self._buf |= stream_word(self._stream, self._word_index) << self._nbits
            self._word_index += 1
            self._nbits += 64
        out = self._buf & ((1 << k) - 1)
        self._buf >>= k
        self._nbits -= k
        return out


def sample_digits(field: GF, seed: int, index: int, n: int) -> Tuple[int, ...]:
    """n i.i.d. uniform elements of the field for sample number `index`.

    Digits are produced by rejection on fixed-width bit chunks: chunks wide
    enough to cover q are drawn and values >= q discarded, so each digit is
    exactly uniform.  When q is a power of two no chunk is ever rejected.
    """
    q = field.q
    bits = (q - 1).bit_length() if q > 1 else 1
    src = _BitSource(sample_stream(seed, index))
    out = []
    for _ in range(n):
        while True:
            v = src.take(bits)
            if v < q:
                out.append(v)
                break
    return tuple(out)


def sample_form_index(field: GF, n_monomials: int, seed: int, index: int) -> int:
    """Uniform candidate index in [0, q^n_monomials) for sample `index`.

    Digit j of the returned base-q integer is the coefficient of monomial j,
    matching the odometer convention of the form constructors.
    """
    digits = sample_digits(field, seed, index, n_monomials)
    n = 0
    for d in reversed(digits):
        n = n * field.q + d
    return n

"""Exact arithmetic in braid groups B_n.

A braid is carried around as a :class:`BraidWord`: a declared strand count
together with a sequence of nonzero letters, letter ``i`` encoding the Artin
generator sigma_i and ``-i`` its inverse.  Words multiply by concatenation
(with eager free reduction) and are compared through their left-greedy
Garside normal form ``Delta^k p_1 ... p_l``, a canonical factorization into
left-weighted permutation braids.  Dehornoy handle reduction is kept alongside
as an independent equality oracle: a word represents the trivial braid iff
handle reduction empties it.

The infinite-strand group is handled by truncation: :func:`shift` raises every
generator index, growing the declared strand count, and callers size their
ambient B_n up front.  On pure braids, :func:`remove_strands` erases the last
d strands and :func:`pure_braid_endo` composes that with a d-fold shift,
giving the strand-removal endomorphism of P_n.
"""

from __future__ import annotations

import functools
import random
import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "BraidWord",
    "Permutation",
    "GarsideNormalForm",
    "concat",
    "concat_all",
    "freely_reduced",
    "invert",
    "shift",
    "with_strands",
    "permutation_of",
    "is_pure",
    "normal_form",
    "braids_equal",
    "handle_reduce",
    "handle_trivial",
    "delta_word",
    "tau",
    "remove_strands",
    "pure_braid_endo",
    "random_braid",
    "random_pure_braid",
    "canonical_word",
    "word_letter_count",
    "encode_braid",
    "decode_braid",
    "encode_normal_form",
    "perm_identity",
    "perm_compose",
    "perm_inverse",
]


@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators of B_n.

    ``letters`` are nonzero integers with ``1 <= |e| <= strands - 1``; the
    empty word is the identity.  Dataclass equality is letter-wise equality of
    words, not equality of the braids they represent; use :func:`braids_equal`
    or compare normal forms for the latter.
    """

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError(f"strand count must be positive, got {self.strands}")
        for e in self.letters:
            if e == 0 or abs(e) > self.strands - 1:
                raise ValueError(
                    f"letter {e} out of range for {self.strands} strands"
                )

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n} given by its image sequence (1-based)."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.images))


def perm_identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def perm_compose(a: Permutation, b: Permutation) -> Permutation:
    """Apply ``a`` first, then ``b`` (matches braid word concatenation)."""
    if a.degree != b.degree:
        raise ValueError("degree mismatch")
    return Permutation(tuple(b.images[v - 1] for v in a.images))


def perm_inverse(a: Permutation) -> Permutation:
    inv = [0] * a.degree
    for i, v in enumerate(a.images):
        inv[v - 1] = i + 1
    return Permutation(tuple(inv))


@dataclass(frozen=True)
class GarsideNormalForm:
    """Canonical form Delta^infimum . factors, deciding braid equality.

    No factor is the identity or the half-twist permutation, and adjacent
    factors are left-weighted.  Two braid words on the same strand count
    represent the same element iff their forms compare equal.
    """

    strands: int
    infimum: int
    factors: tuple[Permutation, ...]

    def is_identity(self) -> bool:
        return self.infimum == 0 and not self.factors

    def canonical_length(self) -> int:
        return len(self.factors)


def _as_array(w: BraidWord) -> np.ndarray:
    return np.array(w.letters, dtype=np.int64)


def _from_array(arr: np.ndarray, strands: int) -> BraidWord:
    return BraidWord(strands, tuple(int(e) for e in arr))


def concat(w1: BraidWord, w2: BraidWord) -> BraidWord:
    """Product of two braid words, freely reduced; strand counts may differ."""
    n = max(w1.strands, w2.strands)
    merged = np.array(w1.letters + w2.letters, dtype=np.int64)
    return _from_array(_kernels.free_reduce(merged), n)


def concat_all(*words: BraidWord) -> BraidWord:
    out = BraidWord(1)
    for w in words:
        out = concat(out, w)
    return out


def invert(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands, tuple(-e for e in reversed(w.letters)))


def shift(w: BraidWord, p: int) -> BraidWord:
    """The shift endomorphism: every index grows by p, strands by p."""
    if p < 0:
        raise ValueError("shift amount must be nonnegative")
    if p == 0:
        return w
    return BraidWord(
        w.strands + p,
        tuple(e + p if e > 0 else e - p for e in w.letters),
    )


def with_strands(w: BraidWord, n: int) -> BraidWord:
    """Re-declare ``w`` on n strands (n must cover every letter)."""
    if n == w.strands:
        return w
    return BraidWord(n, w.letters)


def permutation_of(w: BraidWord) -> Permutation:
    """Image of the word under the projection B_n -> S_n."""
    perm = _kernels.perm_of_word(_as_array(w), w.strands)
    return Permutation(tuple(int(v) + 1 for v in perm))


def is_pure(w: BraidWord) -> bool:
    return permutation_of(w).is_identity()


@functools.lru_cache(maxsize=8192)
def normal_form(w: BraidWord) -> GarsideNormalForm:
    """Left-greedy Garside normal form of the word in its declared B_n."""
    if w.strands == 1:
        return GarsideNormalForm(1, 0, ())
    inf, facs = _kernels.word_to_nf(_as_array(w), w.strands)
    factors = tuple(
        Permutation(tuple(int(v) + 1 for v in facs[i])) for i in range(facs.shape[0])
    )
    return GarsideNormalForm(w.strands, int(inf), factors)


def braids_equal(w1: BraidWord, w2: BraidWord) -> bool:
    """Group equality, after lifting both words to a common strand count."""
    n = max(w1.strands, w2.strands)
    return normal_form(with_strands(w1, n)) == normal_form(with_strands(w2, n))


def handle_reduce(w: BraidWord) -> BraidWord:
    """Handle-free word equal to ``w`` in B_n; empty iff ``w`` is trivial."""
    return _from_array(_kernels.handle_reduce_word(_as_array(w)), w.strands)


def handle_trivial(w: BraidWord) -> bool:
    return len(handle_reduce(w)) == 0


def delta_word(n: int) -> BraidWord:
    """The descending word sigma_{n-1} ... sigma_2 sigma_1 on n strands."""
    if n < 2:
        raise ValueError("delta_word requires n >= 2")
    return BraidWord(n, tuple(range(n - 1, 0, -1)))


def tau(p: int, q: int) -> BraidWord:
    """The braid delta_{p+1} shift(delta_{p+1}) ... shift^{q-1}(delta_{p+1}).

    Lives on p + q strands; tau(p, p) satisfies the braid-like relation
    a shift^p(a) a = shift^p(a) a shift^p(a) and parameterizes the shifted
    conjugacy operations.
    """
    if p < 1 or q < 1:
        raise ValueError("tau requires p >= 1 and q >= 1")
    block = delta_word(p + 1)
    word = BraidWord(p + q)
    for j in range(q):
        word = concat(word, shift(block, j))
    return with_strands(word, p + q)


def remove_strands(w: BraidWord, d: int) -> BraidWord:
    """Erase the last d strands of a pure braid, landing in B_{n-d}.

    Computed by position tracking on the given representative; the result is
    representative-independent up to normal form.
    """
    if not 0 < d < w.strands:
        raise ValueError(f"need 0 < d < {w.strands}, got {d}")
    if not is_pure(w):
        raise ValueError("remove_strands requires a pure braid")
    reduced = _kernels.remove_strands_word(_as_array(w), w.strands, d)
    return _from_array(reduced, w.strands - d)


def pure_braid_endo(w: BraidWord, d: int) -> BraidWord:
    """Strand-removal endomorphism of P_n: erase the last d strands, then
    shift indices by d.  Multiplicative on pure braids; preserves purity and
    the strand count."""
    return with_strands(shift(remove_strands(w, d), d), w.strands)


def random_braid(n: int, length: int, rng: random.Random) -> BraidWord:
    """Freely reduced word of at most ``length`` uniform letters in B_n."""
    if n < 2:
        raise ValueError("random_braid requires n >= 2")
    if length < 0:
        raise ValueError("length must be nonnegative")
    letters = np.empty(length, dtype=np.int64)
    for i in range(length):
        e = rng.randrange(1, n)
        letters[i] = e if rng.random() < 0.5 else -e
    return _from_array(_kernels.free_reduce(letters), n)


def random_pure_braid(n: int, rng: random.Random, conj_len: int = 4, blocks: int = 2) -> BraidWord:
    """Random pure braid: a product of conjugated squared generators."""
    out = BraidWord(n)
    for _ in range(blocks):
        u = random_braid(n, conj_len, rng)
        i = rng.randrange(1, n)
        square = BraidWord(n, (i, i) if rng.random() < 0.5 else (-i, -i))
        out = concat(out, concat_all(u, square, invert(u)))
    return out


def freely_reduced(w: BraidWord) -> BraidWord:
    return _from_array(_kernels.free_reduce(_as_array(w)), w.strands)


def _delta_letters(n: int) -> tuple[int, ...]:
    word = _kernels.nf_factor_word(np.arange(n - 1, -1, -1, dtype=np.int64))
    return tuple(int(e) for e in word)


def canonical_word(w: BraidWord) -> BraidWord:
    """The word read off the Garside normal form: a canonical representative.

    Used wherever a braid leaves the process (wire messages, transcripts,
    key extraction) so that equal braids serialize identically and published
    elements are disguised by renormalization.
    """
    nf = normal_form(w)
    n = nf.strands
    letters: list[int] = []
    if nf.infimum != 0 and n >= 2:
        block = _delta_letters(n)
        if nf.infimum < 0:
            block = tuple(-e for e in reversed(block))
        letters.extend(block * abs(nf.infimum))
    for factor in nf.factors:
        images = np.array([v - 1 for v in factor.images], dtype=np.int64)
        letters.extend(int(e) for e in _kernels.nf_factor_word(images))
    return BraidWord(n, tuple(letters))


def word_letter_count(w: BraidWord) -> int:
    """Length of the freely reduced word."""
    return int(_kernels.free_reduce(_as_array(w)).shape[0])


# -- canonical byte serialization -------------------------------------------
#
# u16 strand count, u32 letter count, then each letter as i16, big-endian.


def encode_braid(w: BraidWord) -> bytes:
    out = bytearray(struct.pack(">HI", w.strands, len(w.letters)))
    for e in w.letters:
        out += struct.pack(">h", e)
    return bytes(out)


def decode_braid(data: bytes, offset: int = 0) -> tuple[BraidWord, int]:
    """Decode one braid word; returns (word, next offset)."""
    strands, count = struct.unpack_from(">HI", data, offset)
    offset += 6
    letters = struct.unpack_from(f">{count}h", data, offset)
    offset += 2 * count
    return BraidWord(strands, tuple(letters)), offset


def encode_normal_form(nf: GarsideNormalForm) -> bytes:
    """Deterministic encoding of a normal form (key-extraction input)."""
    out = bytearray(struct.pack(">HiI", nf.strands, nf.infimum, len(nf.factors)))
    for factor in nf.factors:
        for v in factor.images:
            out += struct.pack(">H", v)
    return bytes(out)

"""Uniform group-platform abstraction.

Every protocol and LD-operation in this package is generic over a carrier
group.  Three platforms are provided: braid groups B_n (elements are
:class:`~nakex.braid.BraidWord`, equality via Garside normal form), symmetric
groups S_n (elements are :class:`~nakex.braid.Permutation`), and the
multiplicative group mod a prime p (elements are residues 1..p-1).

Endomorphisms are restricted to a closed catalog: identity, inner
automorphisms, the pure-braid strand-removal map, and (for finite platforms)
explicit point maps that are verified homomorphic at construction.
"""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from . import braid
from .braid import BraidWord, Permutation

__all__ = [
    "Platform",
    "BraidPlatform",
    "SymmetricPlatform",
    "MultModPlatform",
    "Element",
    "Endomorphism",
    "IdentityEndo",
    "InnerEndo",
    "PowerShiftEndo",
    "PointMapEndo",
    "PlatformMismatch",
    "g_mul",
    "g_inv",
    "g_id",
    "g_eq",
    "endo_apply",
    "centralizer",
    "encode_element",
    "decode_element",
]

Element = Union[BraidWord, Permutation, int]


class PlatformMismatch(ValueError):
    """An element does not belong to the platform it was used with."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class BraidPlatform:
    """B_n with canonical-form equality.

    Elements may carry a smaller declared strand count (words produced by
    sub-expressions); they are lifted to the platform's n for equality and
    serialization.  Words needing more than n strands are rejected: protocol
    specs size n up front.
    """

    strands: int

    tag = 0x01
    finite = False

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("strand count must be positive")

    def check(self, x: Element) -> BraidWord:
        if not isinstance(x, BraidWord):
            raise PlatformMismatch(f"expected BraidWord, got {type(x).__name__}")
        if x.strands > self.strands:
            for e in x.letters:
                if abs(e) > self.strands - 1:
                    raise PlatformMismatch(
                        f"word needs {x.strands} strands, platform has {self.strands}"
                    )
        return braid.with_strands(x, self.strands)

    def mul(self, x: Element, y: Element) -> Element:
        return braid.concat(self.check(x), self.check(y))

    def inv(self, x: Element) -> Element:
        return braid.invert(self.check(x))

    def identity(self) -> Element:
        return BraidWord(self.strands)

    def eq(self, x: Element, y: Element) -> bool:
        return braid.normal_form(self.check(x)) == braid.normal_form(self.check(y))

    def canon(self, x: Element):
        return braid.normal_form(self.check(x))

    def canonical(self, x: Element) -> BraidWord:
        return braid.canonical_word(self.check(x))

    def random_element(self, rng, length: int = 8) -> Element:
        return braid.random_braid(self.strands, length, rng)

    def encode(self, x: Element) -> bytes:
        return braid.encode_braid(braid.canonical_word(self.check(x)))

    def decode(self, data: bytes, offset: int) -> tuple[Element, int]:
        word, offset = braid.decode_braid(data, offset)
        return self.check(word), offset


@dataclass(frozen=True)
class SymmetricPlatform:
    """S_n under composition (apply left factor first)."""

    degree: int

    tag = 0x02
    finite = True

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")

    def check(self, x: Element) -> Permutation:
        if not isinstance(x, Permutation) or x.degree != self.degree:
            raise PlatformMismatch(f"expected Permutation of degree {self.degree}")
        return x

    def mul(self, x: Element, y: Element) -> Element:
        return braid.perm_compose(self.check(x), self.check(y))

    def inv(self, x: Element) -> Element:
        return braid.perm_inverse(self.check(x))

    def identity(self) -> Element:
        return braid.perm_identity(self.degree)

    def eq(self, x: Element, y: Element) -> bool:
        return self.check(x) == self.check(y)

    def canon(self, x: Element):
        return self.check(x)

    def elements(self) -> Iterator[Permutation]:
        for images in itertools.permutations(range(1, self.degree + 1)):
            yield Permutation(images)

    def order(self) -> int:
        out = 1
        for k in range(2, self.degree + 1):
            out *= k
        return out

    def random_element(self, rng) -> Element:
        images = list(range(1, self.degree + 1))
        rng.shuffle(images)
        return Permutation(tuple(images))

    def encode(self, x: Element) -> bytes:
        perm = self.check(x)
        return b"".join(struct.pack(">H", v) for v in perm.images)

    def decode(self, data: bytes, offset: int) -> tuple[Element, int]:
        images = struct.unpack_from(f">{self.degree}H", data, offset)
        return Permutation(tuple(images)), offset + 2 * self.degree


@dataclass(frozen=True)
class MultModPlatform:
    """The multiplicative group of residues mod a prime p."""

    modulus: int

    tag = 0x03
    finite = True

    def __post_init__(self):
        if not _is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")

    def check(self, x: Element) -> int:
        if not isinstance(x, int) or isinstance(x, bool):
            raise PlatformMismatch(f"expected residue, got {type(x).__name__}")
        if not 1 <= x < self.modulus:
            raise PlatformMismatch(f"residue {x} out of range mod {self.modulus}")
        return x

    def mul(self, x: Element, y: Element) -> Element:
        return (self.check(x) * self.check(y)) % self.modulus

    def inv(self, x: Element) -> Element:
        return pow(self.check(x), self.modulus - 2, self.modulus)

    def identity(self) -> Element:
        return 1

    def eq(self, x: Element, y: Element) -> bool:
        return self.check(x) == self.check(y)

    def canon(self, x: Element):
        return self.check(x)

    def elements(self) -> Iterator[int]:
        return iter(range(1, self.modulus))

    def order(self) -> int:
        return self.modulus - 1

    def random_element(self, rng) -> Element:
        return rng.randrange(1, self.modulus)

    def encode(self, x: Element) -> bytes:
        return struct.pack(">Q", self.check(x))

    def decode(self, data: bytes, offset: int) -> tuple[Element, int]:
        (value,) = struct.unpack_from(">Q", data, offset)
        return self.check(int(value)), offset + 8


Platform = Union[BraidPlatform, SymmetricPlatform, MultModPlatform]


def g_mul(p: Platform, x: Element, y: Element) -> Element:
    return p.mul(x, y)


def g_inv(p: Platform, x: Element) -> Element:
    return p.inv(x)


def g_id(p: Platform) -> Element:
    return p.identity()


def g_eq(p: Platform, x: Element, y: Element) -> bool:
    return p.eq(x, y)


def g_pow(p: Platform, x: Element, k: int) -> Element:
    """Square-and-multiply power; negative exponents via inversion."""
    if k < 0:
        return g_pow(p, p.inv(x), -k)
    acc = p.identity()
    base = x
    while k:
        if k & 1:
            acc = p.mul(acc, base)
        base = p.mul(base, base)
        k >>= 1
    return acc


def g_conj(p: Platform, x: Element, y: Element) -> Element:
    """x^-1 y x."""
    return p.mul(p.mul(p.inv(x), y), x)


def g_commutator(p: Platform, x: Element, y: Element) -> Element:
    """x^-1 y^-1 x y."""
    return p.mul(p.mul(p.inv(x), p.inv(y)), p.mul(x, y))


# -- endomorphisms -----------------------------------------------------------


@dataclass(frozen=True)
class IdentityEndo:
    platform: Platform

    kind = "identity"

    def apply(self, x: Element) -> Element:
        return self.platform.check(x)


@dataclass(frozen=True)
class InnerEndo:
    """Conjugation x -> c^-1 x c."""

    platform: Platform
    conjugator: Element

    kind = "inner"

    def __post_init__(self):
        self.platform.check(self.conjugator)

    def apply(self, x: Element) -> Element:
        return g_conj(self.platform, self.conjugator, x)


@dataclass(frozen=True)
class PowerShiftEndo:
    """The pure-braid endomorphism: erase the last d strands, shift by d.

    Only defined on pure braids of the platform's B_n.
    """

    platform: BraidPlatform
    d: int

    kind = "power_shift"

    def __post_init__(self):
        if not isinstance(self.platform, BraidPlatform):
            raise PlatformMismatch("power_shift endomorphisms need a braid platform")
        if not 0 < self.d < self.platform.strands:
            raise ValueError("need 0 < d < strand count")

    def apply(self, x: Element) -> Element:
        word = self.platform.check(x)
        if not braid.is_pure(word):
            raise ValueError("power_shift endomorphism applied to a non-pure braid")
        return braid.pure_braid_endo(word, self.d)


@dataclass(frozen=True)
class PointMapEndo:
    """An explicit map given by its full value table (finite platforms only).

    Construction verifies f(xy) = f(x)f(y) on all pairs.
    """

    platform: Platform
    pairs: tuple[tuple[Element, Element], ...]
    _table: dict = field(init=False, repr=False, compare=False, hash=False)

    kind = "point_map"

    def __post_init__(self):
        if not self.platform.finite:
            raise PlatformMismatch("point maps require a finite platform")
        table = {k: v for k, v in self.pairs}
        elements = list(self.platform.elements())
        if set(table) != set(elements):
            raise ValueError("point map table must cover the whole platform")
        for x in elements:
            for y in elements:
                lhs = table[self.platform.mul(x, y)]
                rhs = self.platform.mul(table[x], table[y])
                if not self.platform.eq(lhs, rhs):
                    raise ValueError(
                        f"table is not a homomorphism: f({x}*{y}) != f({x})f({y})"
                    )
        object.__setattr__(self, "_table", table)

    @classmethod
    def from_callable(cls, platform: Platform, fn) -> "PointMapEndo":
        return cls(platform, tuple((x, fn(x)) for x in platform.elements()))

    def apply(self, x: Element) -> Element:
        return self._table[self.platform.check(x)]


Endomorphism = Union[IdentityEndo, InnerEndo, PowerShiftEndo, PointMapEndo]


def endo_apply(f: Endomorphism, x: Element) -> Element:
    return f.apply(x)


def endo_is_idempotent(f: Endomorphism) -> bool:
    """f(f(x)) == f(x) for all x; decidable on finite platforms, by catalog
    kind on braid platforms (identity only)."""
    if f.kind == "identity":
        return True
    platform = f.platform
    if platform.finite:
        return all(
            platform.eq(f.apply(f.apply(x)), f.apply(x)) for x in platform.elements()
        )
    return False


def centralizer(platform: Platform, elements: Iterable[Element]) -> list[Element]:
    """Exhaustive centralizer of a set on a finite platform."""
    if not platform.finite:
        raise PlatformMismatch("centralizer enumeration needs a finite platform")
    targets = [platform.check(x) for x in elements]
    out = []
    for c in platform.elements():
        if all(platform.eq(platform.mul(c, x), platform.mul(x, c)) for x in targets):
            out.append(c)
    return out


# -- serialization -----------------------------------------------------------
#
# 1-byte platform tag, then the platform payload: canonical braid word /
# permutation images as u16 / residue as u64.


def encode_element(platform: Platform, x: Element) -> bytes:
    return bytes([platform.tag]) + platform.encode(x)


def decode_element(platform: Platform, data: bytes, offset: int = 0) -> tuple[Element, int]:
    if data[offset] != platform.tag:
        raise ValueError(f"platform tag mismatch: {data[offset]:#x} vs {platform.tag:#x}")
    return platform.decode(data, offset + 1)

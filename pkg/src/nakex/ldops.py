"""The catalog of binary operations and their law verifiers.

Conjugacy x*y = x^-1 y x is the classical left-selfdistributive (LD) operation
on a group.  This module collects its generalizations (f-conjugacy, symmetric
conjugacy, twisted conjugacy, shifted conjugacy on braid groups with its
generalized and split parameter families, the x^k y x^l decomposition ops) and
the Laver tables, all behind one :class:`OpDescriptor` value, together with
randomized and exhaustive verifiers for the LD / multi-LD / distributivity
laws and for the algebraic parameter conditions that are equivalent to them.

Descriptors are deliberately permissive: an op with invalid parameters (say a
shifted conjugacy whose braid parameter breaks the required relation) can
still be built and applied, so that the law verifiers can hunt the resulting
counterexamples.  The ``make_*`` constructors are the validating entry points.
"""

from __future__ import annotations

import functools
import random
import struct
from dataclasses import dataclass
from typing import Optional, Sequence

from . import braid
from .braid import BraidWord
from .platforms import (
    BraidPlatform,
    Element,
    Endomorphism,
    Platform,
    endo_apply,
    endo_is_idempotent,
    g_pow,
)

__all__ = [
    "OpDescriptor",
    "LaverTable",
    "LawVerdict",
    "ConditionViolation",
    "apply_op",
    "op_eq",
    "op_sample",
    "conj_op",
    "f_conj_op",
    "f_conj_rev_op",
    "twisted_conj_op",
    "sym_conj_op",
    "f_sym_conj_op",
    "f_sym_conj_rev_op",
    "bullet_op",
    "beta_kl_op",
    "shifted_op",
    "shifted_bar_op",
    "shifted_rev_op",
    "fgh_conj_op",
    "fgh_sym_op",
    "laver_op",
    "laver_table",
    "verify_ld",
    "verify_ld_exhaustive",
    "verify_multi_ld",
    "verify_near_ld",
    "check_fconj_conditions",
    "check_symconj_conditions",
    "check_shifted_conditions",
    "check_distributivity",
    "make_generalized_shifted",
    "make_generalized_shifted_family",
    "make_generalized_shifted_bi",
    "make_split_shifted",
    "encode_op",
]

_GROUP_KINDS = {
    "conj",
    "f_conj",
    "f_conj_rev",
    "twisted_conj",
    "sym_conj",
    "f_sym_conj",
    "f_sym_conj_rev",
    "bullet",
    "beta_kl",
    "fgh_conj",
    "fgh_sym",
}
_SHIFTED_KINDS = {"shifted", "shifted_bar", "shifted_rev"}


class ConditionViolation(ValueError):
    """A validated constructor's algebraic precondition failed."""


@dataclass(frozen=True)
class LaverTable:
    """The unique LD operation on {1..2^n} with p*1 = p+1 cyclically."""

    n: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return 1 << self.n

    def value(self, p: int, q: int) -> int:
        return self.rows[p - 1][q - 1]


@functools.lru_cache(maxsize=None)
def laver_table(n: int) -> LaverTable:
    """Compute A_n by the downward recursion.

    p*1 = p+1 (with 2^n * 1 = 1) and p*(q+1) = (p*q)*(p+1); rows are filled
    for p descending since p*q > p for p < 2^n.
    """
    if not 0 <= n <= 5:
        raise ValueError("Laver tables supported for 0 <= n <= 5")
    size = 1 << n
    rows: list[list[int]] = [[0] * size for _ in range(size)]
    for q in range(size):
        rows[size - 1][q] = q + 1  # 2^n acts as left identity
    for p in range(size - 1, 0, -1):
        row = rows[p - 1]
        row[0] = p + 1
        for q in range(1, size):
            step = rows[row[q - 1] - 1]
            row[q] = step[p]  # (p*q)*(p+1)
            assert row[q] > p or p == size
    return LaverTable(n, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class OpDescriptor:
    """A parameterized binary operation over a platform.

    ``kind`` selects the formula; ``platform`` is None only for Laver tables,
    whose carrier is {1..2^n}.  Endomorphism parameters live in ``f`` (and
    ``g``, ``h`` for the general Ansatz forms), braid parameters in ``a`` and
    ``p``, exponents in ``k`` and ``l``, the Laver level in ``level``.
    """

    kind: str
    platform: Optional[Platform] = None
    f: Optional[Endomorphism] = None
    g: Optional[Endomorphism] = None
    h: Optional[Endomorphism] = None
    a: Optional[BraidWord] = None
    p: int = 1
    k: int = 1
    l: int = 1
    level: int = 0

    def __post_init__(self):
        if self.kind in _SHIFTED_KINDS:
            if self.platform is not None and not isinstance(self.platform, BraidPlatform):
                raise ValueError(f"{self.kind} requires a braid platform")
            if self.a is None or self.p < 1:
                raise ValueError(f"{self.kind} requires a braid parameter and p >= 1")
        elif self.kind == "laver":
            laver_table(self.level)
        elif self.kind in _GROUP_KINDS:
            if self.platform is None:
                raise ValueError(f"{self.kind} requires a platform")
            if self.kind in ("f_sym_conj", "f_sym_conj_rev") and not endo_is_idempotent(self.f):
                raise ValueError(f"{self.kind} requires an idempotent endomorphism")
        else:
            raise ValueError(f"unknown op kind {self.kind!r}")


def apply_op(op: OpDescriptor, x: Element, y: Element) -> Element:
    """Apply the operation's defining formula."""
    kind = op.kind
    if kind == "laver":
        return laver_table(op.level).value(x, y)
    if kind in _SHIFTED_KINDS:
        xw, yw, a = x, y, op.a
        if kind == "shifted_rev":
            # x shift^p(y) a shift^p(x^-1)
            return braid.concat_all(xw, braid.shift(yw, op.p), a, braid.shift(braid.invert(xw), op.p))
        # shift^p(x^-1) a shift^p(y) x
        return braid.concat_all(braid.shift(braid.invert(xw), op.p), a, braid.shift(yw, op.p), xw)

    g = op.platform
    inv = g.inv
    mul = g.mul
    if kind == "conj":
        return mul(mul(inv(x), y), x)
    if kind == "f_conj":
        return mul(endo_apply(op.f, mul(inv(x), y)), x)
    if kind == "f_conj_rev":
        return mul(x, endo_apply(op.f, mul(y, inv(x))))
    if kind == "twisted_conj":
        return mul(mul(endo_apply(op.f, inv(x)), y), x)
    if kind in ("sym_conj", "bullet"):
        return mul(mul(x, inv(y)), x)
    if kind == "f_sym_conj":
        return mul(endo_apply(op.f, mul(x, inv(y))), x)
    if kind == "f_sym_conj_rev":
        return mul(x, endo_apply(op.f, mul(inv(y), x)))
    if kind == "beta_kl":
        return mul(mul(g_pow(g, x, op.k), y), g_pow(g, x, op.l))
    if kind == "fgh_conj":
        return mul(
            mul(endo_apply(op.f, inv(x)), endo_apply(op.g, y)), endo_apply(op.h, x)
        )
    if kind == "fgh_sym":
        return mul(
            mul(endo_apply(op.f, x), endo_apply(op.g, inv(y))), endo_apply(op.h, x)
        )
    raise AssertionError(kind)


def op_eq(op: OpDescriptor, x: Element, y: Element) -> bool:
    if op.kind == "laver":
        return x == y
    if isinstance(op.platform, BraidPlatform):
        # Shifted ops outgrow the base strand count; compare at a common one.
        return braid.braids_equal(x, y)
    return op.platform.eq(x, y)


def op_sample(op: OpDescriptor, rng: random.Random, braid_len: int = 5) -> Element:
    if op.kind == "laver":
        return rng.randrange(1, laver_table(op.level).size + 1)
    platform = op.platform
    if isinstance(platform, BraidPlatform):
        needs_pure = any(
            e is not None and e.kind == "power_shift" for e in (op.f, op.g, op.h)
        )
        if needs_pure:
            return braid.random_pure_braid(platform.strands, rng, braid_len)
        return braid.random_braid(platform.strands, braid_len, rng)
    return platform.random_element(rng)


def op_domain(op: OpDescriptor):
    if op.kind == "laver":
        return range(1, laver_table(op.level).size + 1)
    if not op.platform.finite:
        raise ValueError("exhaustive domain needs a finite platform or Laver table")
    return op.platform.elements()


# -- descriptor constructors -------------------------------------------------


def conj_op(platform: Platform) -> OpDescriptor:
    return OpDescriptor("conj", platform)


def f_conj_op(f: Endomorphism) -> OpDescriptor:
    """x*y = f(x^-1 y) x; left-selfdistributive for every endomorphism f."""
    return OpDescriptor("f_conj", f.platform, f=f)


def f_conj_rev_op(f: Endomorphism) -> OpDescriptor:
    return OpDescriptor("f_conj_rev", f.platform, f=f)


def twisted_conj_op(f: Endomorphism) -> OpDescriptor:
    """x*y = f(x^-1) y x; not LD, satisfies the near-LD law instead."""
    return OpDescriptor("twisted_conj", f.platform, f=f)


def sym_conj_op(platform: Platform) -> OpDescriptor:
    """x*y = x y^-1 x."""
    return OpDescriptor("sym_conj", platform)


def bullet_op(platform: Platform) -> OpDescriptor:
    """Same formula as sym_conj; separate tag for the decomposition schemes."""
    return OpDescriptor("bullet", platform)


def f_sym_conj_op(f: Endomorphism) -> OpDescriptor:
    """x*y = f(x y^-1) x for an idempotent f."""
    return OpDescriptor("f_sym_conj", f.platform, f=f)


def f_sym_conj_rev_op(f: Endomorphism) -> OpDescriptor:
    return OpDescriptor("f_sym_conj_rev", f.platform, f=f)


def beta_kl_op(platform: Platform, k: int, l: int) -> OpDescriptor:
    """x*y = x^k y x^l."""
    return OpDescriptor("beta_kl", platform, k=k, l=l)


def fgh_conj_op(f: Endomorphism, g: Endomorphism, h: Endomorphism) -> OpDescriptor:
    """The Ansatz x*y = f(x^-1) g(y) h(x); LD iff the four relation groups
    of :func:`check_fconj_conditions` hold."""
    return OpDescriptor("fgh_conj", f.platform, f=f, g=g, h=h)


def fgh_sym_op(f: Endomorphism, g: Endomorphism, h: Endomorphism) -> OpDescriptor:
    """The Ansatz x*y = f(x) g(y^-1) h(x)."""
    return OpDescriptor("fgh_sym", f.platform, f=f, g=g, h=h)


def shifted_op(p: int = 1, a: BraidWord | None = None, platform: BraidPlatform | None = None) -> OpDescriptor:
    """x*y = shift^p(x^-1) a shift^p(y) x; the p=1, a=sigma_1 default is the
    original shifted conjugacy."""
    if a is None:
        a = braid.tau(p, p)
    return OpDescriptor("shifted", platform or BraidPlatform(max(2 * p, 2)), a=a, p=p)


def shifted_bar_op(p: int = 1, a: BraidWord | None = None, platform: BraidPlatform | None = None) -> OpDescriptor:
    """The companion operation of the bi-LD pair; default a = sigma_1^-1."""
    if a is None:
        a = braid.invert(braid.tau(p, p))
    return OpDescriptor("shifted_bar", platform or BraidPlatform(max(2 * p, 2)), a=a, p=p)


def shifted_rev_op(p: int = 1, a: BraidWord | None = None, platform: BraidPlatform | None = None) -> OpDescriptor:
    """x*y = x shift^p(y) a shift^p(x^-1), the reverse of the shifted op."""
    if a is None:
        a = braid.tau(p, p)
    return OpDescriptor("shifted_rev", platform or BraidPlatform(max(2 * p, 2)), a=a, p=p)


def laver_op(n: int) -> OpDescriptor:
    return OpDescriptor("laver", level=n)


# -- law verifiers -----------------------------------------------------------


@dataclass(frozen=True)
class LawVerdict:
    """Outcome of a randomized or exhaustive law check."""

    passed: bool
    checked: int
    counterexample: Optional[tuple] = None
    law: str = "ld"

    def __bool__(self) -> bool:
        return self.passed


def verify_ld(
    op: OpDescriptor,
    samples: int,
    rng: random.Random,
    braid_len: int = 5,
) -> LawVerdict:
    """Check x*(y*z) = (x*y)*(x*z) on random triples.

    Returns the first violating triple if one is found.
    """
    for i in range(samples):
        x = op_sample(op, rng, braid_len)
        y = op_sample(op, rng, braid_len)
        z = op_sample(op, rng, braid_len)
        lhs = apply_op(op, x, apply_op(op, y, z))
        rhs = apply_op(op, apply_op(op, x, y), apply_op(op, x, z))
        if not op_eq(op, lhs, rhs):
            return LawVerdict(False, i + 1, (x, y, z))
    return LawVerdict(True, samples)


def verify_ld_exhaustive(op: OpDescriptor) -> LawVerdict:
    """Exhaustive LD check over a finite carrier."""
    elements = list(op_domain(op))
    checked = 0
    for x in elements:
        for y in elements:
            for z in elements:
                checked += 1
                lhs = apply_op(op, x, apply_op(op, y, z))
                rhs = apply_op(op, apply_op(op, x, y), apply_op(op, x, z))
                if not op_eq(op, lhs, rhs):
                    return LawVerdict(False, checked, (x, y, z))
    return LawVerdict(True, checked)


def verify_multi_ld(
    family: Sequence[OpDescriptor],
    samples: int,
    rng: random.Random,
    braid_len: int = 5,
) -> LawVerdict:
    """Check x*_i(y*_j z) = (x*_i y)*_j (x*_i z) for every ordered pair (i, j)."""
    checked = 0
    for i, opi in enumerate(family):
        for j, opj in enumerate(family):
            for _ in range(samples):
                checked += 1
                x = op_sample(opi, rng, braid_len)
                y = op_sample(opi, rng, braid_len)
                z = op_sample(opi, rng, braid_len)
                lhs = apply_op(opi, x, apply_op(opj, y, z))
                rhs = apply_op(opj, apply_op(opi, x, y), apply_op(opi, x, z))
                if not op_eq(opi, lhs, rhs):
                    return LawVerdict(False, checked, (i, j, x, y, z), law="multi_ld")
    return LawVerdict(True, checked, law="multi_ld")


def verify_near_ld(
    op: OpDescriptor,
    f: Endomorphism,
    samples: int,
    rng: random.Random,
    braid_len: int = 5,
) -> LawVerdict:
    """The near-LD law of twisted conjugacy: x*(y*z) = (x*y)*(f(x)*z)."""
    for i in range(samples):
        x = op_sample(op, rng, braid_len)
        y = op_sample(op, rng, braid_len)
        z = op_sample(op, rng, braid_len)
        lhs = apply_op(op, x, apply_op(op, y, z))
        rhs = apply_op(op, apply_op(op, x, y), apply_op(op, endo_apply(f, x), z))
        if not op_eq(op, lhs, rhs):
            return LawVerdict(False, i + 1, (x, y, z), law="near_ld")
    return LawVerdict(True, samples, law="near_ld")


def check_distributivity(
    op1: OpDescriptor,
    op2: OpDescriptor,
    samples: int,
    rng: random.Random,
    braid_len: int = 5,
) -> LawVerdict:
    """Check op1 distributes over op2: x *1 (y *2 z) = (x *1 y) *2 (x *1 z)."""
    for i in range(samples):
        x = op_sample(op1, rng, braid_len)
        y = op_sample(op1, rng, braid_len)
        z = op_sample(op1, rng, braid_len)
        lhs = apply_op(op1, x, apply_op(op2, y, z))
        rhs = apply_op(op2, apply_op(op1, x, y), apply_op(op1, x, z))
        if not op_eq(op1, lhs, rhs):
            return LawVerdict(False, i + 1, (x, y, z), law="distributivity")
    return LawVerdict(True, samples, law="distributivity")


# -- parameter condition checkers -------------------------------------------


def _pointwise_equal(platform: Platform, fn1, fn2) -> bool:
    return all(platform.eq(fn1(x), fn2(x)) for x in platform.elements())


def check_fconj_conditions(
    f: Endomorphism, g: Endomorphism, h: Endomorphism, platform: Platform
) -> bool:
    """Conditions equivalent to x*y = f(x^-1) g(y) h(x) being LD:

    fh = f,  gh = hg = hf,  fg = gf = f^2,  h^2 = h   (composition f∘h etc.),
    checked pointwise on a finite platform.
    """
    if not platform.finite:
        raise ValueError("exhaustive composition check needs a finite platform")
    F, G, H = f.apply, g.apply, h.apply
    return (
        _pointwise_equal(platform, lambda x: F(H(x)), F)
        and _pointwise_equal(platform, lambda x: G(H(x)), lambda x: H(G(x)))
        and _pointwise_equal(platform, lambda x: G(H(x)), lambda x: H(F(x)))
        and _pointwise_equal(platform, lambda x: F(G(x)), lambda x: G(F(x)))
        and _pointwise_equal(platform, lambda x: F(G(x)), lambda x: F(F(x)))
        and _pointwise_equal(platform, lambda x: H(H(x)), H)
    )


def check_symconj_conditions(
    f: Endomorphism, g: Endomorphism, h: Endomorphism, platform: Platform
) -> bool:
    """Conditions equivalent to x*y = f(x) g(y^-1) h(x) being LD:

    f^2 = f,  fh = gh = fg,  hg = gf = hf,  h^2 = h.
    """
    if not platform.finite:
        raise ValueError("exhaustive composition check needs a finite platform")
    F, G, H = f.apply, g.apply, h.apply
    return (
        _pointwise_equal(platform, lambda x: F(F(x)), F)
        and _pointwise_equal(platform, lambda x: F(H(x)), lambda x: G(H(x)))
        and _pointwise_equal(platform, lambda x: F(H(x)), lambda x: F(G(x)))
        and _pointwise_equal(platform, lambda x: H(G(x)), lambda x: G(F(x)))
        and _pointwise_equal(platform, lambda x: H(G(x)), lambda x: H(F(x)))
        and _pointwise_equal(platform, lambda x: H(H(x)), H)
    )


def _in_b(word: BraidWord, n: int) -> bool:
    """Does the freely reduced word use only generators of B_n?"""
    reduced = braid.freely_reduced(word)
    return all(abs(e) <= n - 1 for e in reduced.letters)


def check_shifted_conditions(p: int, a: BraidWord) -> bool:
    """Sufficient conditions for shift^p(x^-1) a shift^p(y) x to be LD:

    a in B_{2p} (so a commutes with shift^{2p} of everything in the
    truncation) and a shift^p(a) a = shift^p(a) a shift^p(a) as normal forms.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if not _in_b(a, 2 * p):
        return False
    da = braid.shift(a, p)
    return braid.braids_equal(braid.concat_all(a, da, a), braid.concat_all(da, a, da))


def _commute(x: BraidWord, y: BraidWord) -> bool:
    return braid.braids_equal(braid.concat(x, y), braid.concat(y, x))


def make_generalized_shifted(p: int, a1: BraidWord, a2: BraidWord) -> OpDescriptor:
    """Shifted op with parameter a = a1 tau(p,p) a2 for a1, a2 in B_p.

    Valid (and LD) exactly when [a1, a2] = 1; rejected otherwise with the
    failing commutator.
    """
    for name, w in (("a1", a1), ("a2", a2)):
        if not _in_b(w, p):
            raise ConditionViolation(f"{name} must lie in B_{p}")
    if not _commute(a1, a2):
        raise ConditionViolation(f"[a1, a2] != 1 for a1={a1.letters}, a2={a2.letters}")
    a = braid.concat_all(a1, braid.tau(p, p), a2)
    return shifted_op(p, a)


def make_generalized_shifted_family(
    p: int, pairs: Sequence[tuple[BraidWord, BraidWord]]
) -> tuple[OpDescriptor, ...]:
    """Multi-LD family with a_i = a_i' tau(p,p) a_i''.

    Requires [a_i', a_j'] = [a_i', a_j''] = 1 for all i, j (the a_i'' need not
    commute with each other).
    """
    for idx, (a1, a2) in enumerate(pairs):
        if not (_in_b(a1, p) and _in_b(a2, p)):
            raise ConditionViolation(f"family member {idx} not in B_{p}")
    for i, (ai1, _) in enumerate(pairs):
        for j, (aj1, aj2) in enumerate(pairs):
            if not _commute(ai1, aj1):
                raise ConditionViolation(f"[a{i}', a{j}'] != 1")
            if not _commute(ai1, aj2):
                raise ConditionViolation(f"[a{i}', a{j}''] != 1")
    return tuple(
        shifted_op(p, braid.concat_all(a1, braid.tau(p, p), a2)) for a1, a2 in pairs
    )


def make_generalized_shifted_bi(
    p: int,
    a1: tuple[BraidWord, BraidWord],
    a2: tuple[BraidWord, BraidWord],
) -> tuple[OpDescriptor, OpDescriptor]:
    """Bi-LD pair with a_1 = a1' tau(p,p) a1'' and a_2 = a2' tau(p,p)^-1 a2''.

    Requires [a1',a1''] = [a2',a2''] = [a1',a2''] = [a2',a1''] = [a1',a2'] = 1.
    """
    (x1, x2), (y1, y2) = a1, a2
    for name, w in (("a1'", x1), ("a1''", x2), ("a2'", y1), ("a2''", y2)):
        if not _in_b(w, p):
            raise ConditionViolation(f"{name} must lie in B_{p}")
    for name, u, v in (
        ("[a1',a1'']", x1, x2),
        ("[a2',a2'']", y1, y2),
        ("[a1',a2'']", x1, y2),
        ("[a2',a1'']", y1, x2),
        ("[a1',a2']", x1, y1),
    ):
        if not _commute(u, v):
            raise ConditionViolation(f"{name} != 1")
    t = braid.tau(p, p)
    op1 = shifted_op(p, braid.concat_all(x1, t, x2))
    op2 = shifted_bar_op(p, braid.concat_all(y1, braid.invert(t), y2))
    return op1, op2


def make_split_shifted(
    p1: int,
    p2: int,
    a1p: BraidWord,
    a1pp: BraidWord,
    a2p: BraidWord,
    a2pp: BraidWord,
) -> OpDescriptor:
    """Shifted op for p = p1 + p2 with the split parameter

    a = a1' shift^{p1}(a2') shift^{p1}(tau(p2,p)) tau(p,p1)^-1 a1'' shift^{p1}(a2'')

    for a1', a1'' in B_{p1} and a2', a2'' in B_{p2}; requires
    [a1', a1''] = [a2', a2''] = 1.
    """
    p = p1 + p2
    for name, w, bound in (
        ("a1'", a1p, p1),
        ("a1''", a1pp, p1),
        ("a2'", a2p, p2),
        ("a2''", a2pp, p2),
    ):
        if not _in_b(w, bound):
            raise ConditionViolation(f"{name} must lie in B_{bound}")
    if not _commute(a1p, a1pp):
        raise ConditionViolation("[a1', a1''] != 1")
    if not _commute(a2p, a2pp):
        raise ConditionViolation("[a2', a2''] != 1")
    a = braid.concat_all(
        a1p,
        braid.shift(a2p, p1),
        braid.shift(braid.tau(p2, p), p1),
        braid.invert(braid.tau(p, p1)),
        a1pp,
        braid.shift(a2pp, p1),
    )
    return shifted_op(p, a)


# -- serialization -----------------------------------------------------------

_KIND_TAGS = {
    "conj": 0x01,
    "f_conj": 0x02,
    "f_conj_rev": 0x03,
    "twisted_conj": 0x04,
    "sym_conj": 0x05,
    "f_sym_conj": 0x06,
    "f_sym_conj_rev": 0x07,
    "bullet": 0x08,
    "beta_kl": 0x09,
    "shifted": 0x0A,
    "shifted_bar": 0x0B,
    "shifted_rev": 0x0C,
    "laver": 0x0D,
    "fgh_conj": 0x0E,
    "fgh_sym": 0x0F,
}

_ENDO_TAGS = {"identity": 0x00, "inner": 0x01, "power_shift": 0x02, "point_map": 0x03}


def _encode_endo(e: Optional[Endomorphism]) -> bytes:
    from .platforms import encode_element

    if e is None:
        return b"\xff"
    out = bytearray([_ENDO_TAGS[e.kind]])
    if e.kind == "inner":
        out += encode_element(e.platform, e.conjugator)
    elif e.kind == "power_shift":
        out += struct.pack(">H", e.d)
    elif e.kind == "point_map":
        out += struct.pack(">I", len(e.pairs))
        for key, value in sorted(e.pairs, key=lambda kv: str(kv[0])):
            out += encode_element(e.platform, key)
            out += encode_element(e.platform, value)
    return bytes(out)


def encode_op(op: OpDescriptor) -> bytes:
    """1-byte kind tag + parameter payload; feeds spec digests."""
    out = bytearray([_KIND_TAGS[op.kind]])
    out += struct.pack(">HhhB", op.p, op.k, op.l, op.level)
    out += _encode_endo(op.f)
    out += _encode_endo(op.g)
    out += _encode_endo(op.h)
    if op.a is not None:
        out += braid.encode_braid(op.a)
    return bytes(out)

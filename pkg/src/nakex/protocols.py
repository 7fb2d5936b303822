"""The generic two-party key-establishment engine and its instantiations.

One protocol shape is run throughout: Alice and Bob publish generator lists
s_1..s_m and t_1..t_b, each party derives a secret from its own list, applies
its one-sided operation beta to the *other* party's generators and publishes
the images, then reconstructs beta(peer secret, own secret) through the
tree-word push-through (or a termwise/power reconstruction where the
instantiation calls for it) and finishes with its gamma map.  Condition (3) of
the scheme makes both gamma outputs the same element K, from which a byte key
is extracted via canonical serialization and SHA-256.

Instantiation tags:

==================  ========================================================
classic_dh          x^k / x^l in the multiplicative group mod p
group_dh            a1 x a2 with pairwise commuting subgroups; K=a1 b1 x a2 b2
ko_lee              the a1 = a2^-1 special case (conjugation form)
str_kep             a^-1 x^k a hybrid; K = a^-1 b^-1 x^{kl} b a
aag_commutator      conjugation; K is the commutator [a, b]
simdcp              beta = a_l y a_r over x*y = x y^-1 x trees
simdcp_alt          same scheme, secrets as alternating words
symdp               beta_1 = x^k y x, beta_2 = x y x^l; K = a^k b a b^l
f_commutator        f-conjugacy trees; K = [a,b]_f = a^-1 f(b^-1) f(a) b
shifted_commutator  shifted conjugacy on braids; K = [a,b]_sh (or the
                    reverse-operation variant with K = [a, b^-1]_sh)
==================  ========================================================

A :class:`Transcript` is a deterministic function of (spec, seed) and
round-trips through JSON byte-identically.
"""

from __future__ import annotations

import hashlib
import json
import random
import warnings
from dataclasses import dataclass, field
from typing import Optional

from . import braid, ldops, magma
from .braid import BraidWord
from .ldops import OpDescriptor, apply_op
from .magma import Leaf, Node, TreeWord
from .platforms import (
    BraidPlatform,
    Element,
    Endomorphism,
    IdentityEndo,
    InnerEndo,
    MultModPlatform,
    Platform,
    PointMapEndo,
    PowerShiftEndo,
    SymmetricPlatform,
    decode_element,
    encode_element,
    g_pow,
)

__all__ = [
    "KeyPolicy",
    "ProtocolSpec",
    "SecretKey",
    "Transcript",
    "KeyMismatch",
    "PolicyViolation",
    "CommutationViolation",
    "WeakKeyWarning",
    "PROTOCOL_TAGS",
    "run",
    "generate_secrets",
    "work_platform",
    "key_extract",
    "spec_digest",
    "spec_to_json",
    "spec_from_json",
    "transcript_to_json",
    "transcript_from_json",
    "make_classic_dh",
    "make_group_dh",
    "make_ko_lee",
    "make_str_kep",
    "make_aag_commutator",
    "make_simdcp",
    "make_simdcp_alt",
    "make_symdp",
    "make_f_commutator",
    "make_shifted_commutator",
    "random_spec",
]

PROTOCOL_TAGS = (
    "classic_dh",
    "group_dh",
    "ko_lee",
    "str_kep",
    "aag_commutator",
    "simdcp",
    "simdcp_alt",
    "symdp",
    "f_commutator",
    "shifted_commutator",
)


class KeyMismatch(AssertionError):
    """K_A != K_B: an engine bug or a spec that slipped validation."""


class PolicyViolation(ValueError):
    """The key policy cannot be satisfied."""


class CommutationViolation(ValueError):
    """Subgroup generator sets required to commute do not."""


class WeakKeyWarning(UserWarning):
    """A generated secret is degenerate (identity element)."""


@dataclass(frozen=True)
class KeyPolicy:
    """Limits for random secret generation.

    Braid platforms keep trees shallow and comb-biased because word length is
    exponential in the distance from a left comb; finite platforms can afford
    more leaves.
    """

    max_leaves: int = 5
    max_depth: int = 4
    comb_bias: float = 0.75
    gen_length: int = 8
    max_word_letters: int = 60000
    exponent_min: int = 2
    exponent_max: int = 64

    def __post_init__(self):
        if self.max_leaves < 1 or self.max_depth < 0:
            raise PolicyViolation("max_leaves must be >= 1 and max_depth >= 0")
        if self.max_leaves > self.max_depth + 1:
            # a tree with k leaves has depth at most k-1, so this bound makes
            # the depth cap satisfiable by every drawn shape
            raise PolicyViolation("need max_leaves <= max_depth + 1")
        if not 0.0 <= self.comb_bias <= 1.0:
            raise PolicyViolation("comb_bias must lie in [0, 1]")


FINITE_POLICY = KeyPolicy(max_leaves=8, max_depth=7, comb_bias=0.5)


@dataclass(frozen=True)
class ProtocolSpec:
    """Everything needed to (re)run one protocol instance deterministically.

    ``alice_gens`` are the s_i (the generators Alice's secret is built from,
    whose images Bob publishes), ``bob_gens`` the t_j.  Which optional fields
    apply depends on ``tag``; the ``make_*`` constructors validate them.
    """

    tag: str
    platform: Platform
    alice_gens: tuple[Element, ...] = ()
    bob_gens: tuple[Element, ...] = ()
    policy: KeyPolicy = field(default_factory=KeyPolicy)
    seed: int = 0
    base: Optional[Element] = None
    a1_gens: tuple[Element, ...] = ()
    a2_gens: tuple[Element, ...] = ()
    b1_gens: tuple[Element, ...] = ()
    b2_gens: tuple[Element, ...] = ()
    endo: Optional[Endomorphism] = None
    shift_p: int = 1
    shift_a: Optional[BraidWord] = None
    variant: str = ""
    k: Optional[int] = None
    l: Optional[int] = None
    secret_exponents: bool = False

    def __post_init__(self):
        if self.tag not in PROTOCOL_TAGS:
            raise ValueError(f"unknown protocol tag {self.tag!r}")


@dataclass(frozen=True)
class SecretKey:
    """One party's secret: tree words plus auxiliary elements and exponents.

    - tree secrets (aag, simdcp a_r / b_l, symdp, f/shifted commutator) live
      in ``trees``; the realized element in ``elements[0]``.
    - free auxiliary elements (simdcp a_l / b_r, group_dh pairs) follow in
      ``elements``.
    - exponents (classic_dh, str_kep, symdp) in ``exponents``.
    - alternating-word index sequences (simdcp_alt) in ``indices``.
    """

    trees: tuple[TreeWord, ...] = ()
    elements: tuple[Element, ...] = ()
    exponents: tuple[int, ...] = ()
    indices: tuple[int, ...] = ()


@dataclass(frozen=True)
class Transcript:
    """Full record of one protocol run; a pure function of (spec, seed)."""

    spec: ProtocolSpec
    alice_messages: tuple[Element, ...]
    bob_messages: tuple[Element, ...]
    alice_step3: Element
    bob_step3: Element
    key_a: Element
    key_b: Element
    extracted_key: bytes

    @property
    def seed(self) -> int:
        return self.spec.seed

    @property
    def digest(self) -> str:
        return spec_digest(self.spec)


# -- platform sizing ---------------------------------------------------------


def _max_index(w: BraidWord) -> int:
    reduced = braid.freely_reduced(w)
    return max((abs(e) for e in reduced.letters), default=0)


def work_platform(spec: ProtocolSpec) -> Platform:
    """The platform all computation and serialization happens on.

    For shifted-conjugacy instantiations the ambient B_n is sized up front:
    every operation application wraps its operands in shift^p.  The published
    messages stack one application on a secret of tree depth <= max_depth, and
    the step-3 push-through stacks the other party's tree on top of those
    message words, so letter indices grow by at most p * (2 max_depth + 1)
    past the generators and the braid parameter.
    """
    if spec.tag != "shifted_commutator":
        return spec.platform
    levels = 2 * spec.policy.max_depth + 1
    base_idx = max(
        [_max_index(g) for g in spec.alice_gens + spec.bob_gens]
        + [spec.platform.strands - 1]
    )
    a_idx = _max_index(spec.shift_a) if spec.shift_a is not None else 2 * spec.shift_p - 1
    idx = base_idx
    for _ in range(levels):
        idx = max(idx + spec.shift_p, a_idx)
    return BraidPlatform(max(idx + 1, spec.platform.strands))


# -- key extraction ----------------------------------------------------------


def key_extract(platform: Platform, x: Element) -> bytes:
    """SHA-256 of the canonical serialization of the platform canonical form.

    On braid platforms the canonical form is the Garside normal form, so equal
    braids extract identical 32-byte keys.
    """
    if isinstance(platform, BraidPlatform):
        payload = braid.encode_normal_form(braid.normal_form(platform.check(x)))
    else:
        payload = encode_element(platform, x)
    return hashlib.sha256(payload).digest()


# -- secret generation -------------------------------------------------------


def _comb_over(indices: list[int], op: int = 0) -> TreeWord:
    tree: TreeWord = Leaf(indices[-1])
    for i in reversed(indices[:-1]):
        tree = Node(op, Leaf(i), tree)
    return tree


def _tree_ops(spec: ProtocolSpec, platform: Platform) -> tuple[OpDescriptor, ...]:
    """The node-op family trees are built over, per instantiation."""
    tag = spec.tag
    if tag in ("simdcp", "simdcp_alt", "symdp"):
        return (ldops.bullet_op(platform),)
    if tag == "f_commutator":
        return (ldops.f_conj_op(spec.endo),)
    if tag == "shifted_commutator":
        star = ldops.shifted_op(spec.shift_p, spec.shift_a, platform)
        if spec.variant == "rev":
            rev = ldops.shifted_rev_op(spec.shift_p, spec.shift_a, platform)
            return (star, rev)
        bar = ldops.shifted_bar_op(
            spec.shift_p, braid.invert(spec.shift_a), platform
        )
        return (star, bar)
    raise AssertionError(tag)


def _random_policy_tree(m: int, q: int, policy: KeyPolicy, rng: random.Random) -> TreeWord:
    k = rng.randint(1, policy.max_leaves)
    tree = magma.random_tree(k, m, q, policy.comb_bias, rng)
    # guaranteed by max_leaves <= max_depth + 1
    assert magma.tree_depth(tree) <= policy.max_depth
    return tree


def _check_weak(platform: Platform, value: Element, what: str) -> None:
    if platform.eq(value, platform.identity()):
        warnings.warn(f"degenerate {what}: identity element", WeakKeyWarning)


def _word_secret(
    platform: Platform, gens: tuple[Element, ...], policy: KeyPolicy, rng: random.Random
) -> tuple[TreeWord, Element]:
    """Random subgroup word over gens and their inverses, as a product comb."""
    ext = list(gens) + [platform.inv(g) for g in gens]
    length = rng.randint(1, policy.max_leaves)
    indices = [rng.randrange(len(ext)) for _ in range(length)]
    tree = _comb_over(indices)
    value = ext[indices[0]]
    for i in indices[1:]:
        value = platform.mul(value, ext[i])
    return tree, value


def _eval_guarded(tree, gens, ops, policy: KeyPolicy) -> Element:
    value = magma.eval_tree(tree, gens, [lambda x, y, _o=o: apply_op(_o, x, y) for o in ops])
    if isinstance(value, BraidWord) and len(value.letters) > policy.max_word_letters:
        raise PolicyViolation(
            f"evaluated secret has {len(value.letters)} letters, cap is {policy.max_word_letters}"
        )
    return value


def _random_free_element(platform: Platform, policy: KeyPolicy, rng: random.Random) -> Element:
    if isinstance(platform, BraidPlatform):
        return braid.random_braid(platform.strands, policy.gen_length, rng)
    return platform.random_element(rng)


def generate_secrets(spec: ProtocolSpec) -> tuple[SecretKey, SecretKey]:
    """Deterministically derive both parties' secrets from the spec seed.

    Alice's draw always precedes Bob's, so a networked session and an
    in-process run agree.
    """
    rng = random.Random(spec.seed)
    platform = work_platform(spec)
    tag = spec.tag
    policy = spec.policy

    if tag == "classic_dh":
        hi = min(policy.exponent_max, spec.platform.modulus - 2)
        lo = min(policy.exponent_min, hi)
        ka = spec.k if spec.k is not None else rng.randint(lo, hi)
        lb = spec.l if spec.l is not None else rng.randint(lo, hi)
        return SecretKey(exponents=(ka,)), SecretKey(exponents=(lb,))

    if tag in ("group_dh", "ko_lee"):
        if tag == "ko_lee":
            _, a = _word_secret(platform, spec.a1_gens, policy, rng)
            _, b = _word_secret(platform, spec.b1_gens, policy, rng)
            ska = SecretKey(elements=(platform.inv(a), a))
            skb = SecretKey(elements=(platform.inv(b), b))
        else:
            _, a1 = _word_secret(platform, spec.a1_gens, policy, rng)
            _, a2 = _word_secret(platform, spec.a2_gens, policy, rng)
            _, b1 = _word_secret(platform, spec.b1_gens, policy, rng)
            _, b2 = _word_secret(platform, spec.b2_gens, policy, rng)
            ska = SecretKey(elements=(a1, a2))
            skb = SecretKey(elements=(b1, b2))
        _check_weak(platform, ska.elements[1], "secret (Alice)")
        _check_weak(platform, skb.elements[1], "secret (Bob)")
        return ska, skb

    if tag == "str_kep":
        hi, lo = policy.exponent_max, policy.exponent_min
        ka = rng.randint(lo, hi)
        _, a = _word_secret(platform, spec.a1_gens, policy, rng)
        lb = rng.randint(lo, hi)
        _, b = _word_secret(platform, spec.b1_gens, policy, rng)
        return SecretKey(elements=(a,), exponents=(ka,)), SecretKey(
            elements=(b,), exponents=(lb,)
        )

    if tag == "aag_commutator":
        tree_a, a = _word_secret(platform, spec.alice_gens, policy, rng)
        tree_b, b = _word_secret(platform, spec.bob_gens, policy, rng)
        _check_weak(platform, a, "secret (Alice)")
        _check_weak(platform, b, "secret (Bob)")
        return SecretKey(trees=(tree_a,), elements=(a,)), SecretKey(
            trees=(tree_b,), elements=(b,)
        )

    if tag in ("simdcp", "symdp", "f_commutator", "shifted_commutator"):
        ops = _tree_ops(spec, platform)
        gens_a = [platform.check(g) for g in spec.alice_gens]
        gens_b = [platform.check(g) for g in spec.bob_gens]
        if tag == "shifted_commutator" and spec.variant == "rev":
            ops_a, ops_b = (ops[0],), (ops[1],)
        else:
            ops_a = ops_b = ops
        tree_a = _random_policy_tree(len(gens_a), len(ops_a), policy, rng)
        a = _eval_guarded(tree_a, gens_a, ops_a, policy)
        tree_b = _random_policy_tree(len(gens_b), len(ops_b), policy, rng)
        b = _eval_guarded(tree_b, gens_b, ops_b, policy)

        if tag == "simdcp":
            a_l = _random_free_element(platform, policy, rng)
            b_r = _random_free_element(platform, policy, rng)
            return SecretKey(trees=(tree_a,), elements=(a, a_l)), SecretKey(
                trees=(tree_b,), elements=(b, b_r)
            )
        if tag == "symdp":
            ka = spec.k if spec.k is not None else 1
            lb = spec.l if spec.l is not None else 1
            if spec.secret_exponents:
                # one of the two stays 1 so that both betas keep the
                # one-sided-power form
                if rng.random() < 0.5:
                    ka, lb = rng.randint(policy.exponent_min, policy.exponent_max), 1
                else:
                    ka, lb = 1, rng.randint(policy.exponent_min, policy.exponent_max)
            return SecretKey(trees=(tree_a,), elements=(a,), exponents=(ka,)), SecretKey(
                trees=(tree_b,), elements=(b,), exponents=(lb,)
            )
        _check_weak(platform, a, "secret (Alice)")
        _check_weak(platform, b, "secret (Bob)")
        return SecretKey(trees=(tree_a,), elements=(a,)), SecretKey(
            trees=(tree_b,), elements=(b,)
        )

    if tag == "simdcp_alt":
        def alt_secret(gens):
            pairs = rng.randint(0, (policy.max_leaves - 1) // 2)
            return tuple(rng.randrange(len(gens)) for _ in range(2 * pairs + 1))

        def alt_value(indices, gens):
            value = gens[indices[0]]
            for pos, i in enumerate(indices[1:], start=1):
                term = gens[i] if pos % 2 == 0 else platform.inv(gens[i])
                value = platform.mul(value, term)
            return value

        idx_a = alt_secret(spec.alice_gens)
        a_r = alt_value(idx_a, spec.alice_gens)
        a_l = _random_free_element(platform, policy, rng)
        idx_b = alt_secret(spec.bob_gens)
        b_l = alt_value(idx_b, spec.bob_gens)
        b_r = _random_free_element(platform, policy, rng)
        return SecretKey(elements=(a_r, a_l), indices=idx_a), SecretKey(
            elements=(b_l, b_r), indices=idx_b
        )

    raise AssertionError(tag)


# -- the protocol engine -----------------------------------------------------


def _push(tree: TreeWord, images, ops) -> Element:
    return magma.push_through(
        tree, images, [lambda x, y, _o=o: apply_op(_o, x, y) for o in ops]
    )


def _alt_reconstruct(platform: Platform, indices, messages) -> Element:
    value = messages[indices[0]]
    for pos, i in enumerate(indices[1:], start=1):
        term = messages[i] if pos % 2 == 0 else platform.inv(messages[i])
        value = platform.mul(value, term)
    return value


def run(spec: ProtocolSpec) -> Transcript:
    """Execute steps 1-4 and assert K_A = K_B under platform equality."""
    platform = work_platform(spec)
    ska, skb = generate_secrets(spec)
    tag = spec.tag
    mul, inv = platform.mul, platform.inv

    if tag == "classic_dh":
        g = spec.base
        ka, lb = ska.exponents[0], skb.exponents[0]
        msg_a = (g_pow(platform, g, ka),)
        msg_b = (g_pow(platform, g, lb),)
        step3_a = g_pow(platform, msg_b[0], ka)
        step3_b = g_pow(platform, msg_a[0], lb)
        key_a, key_b = step3_a, step3_b

    elif tag in ("group_dh", "ko_lee"):
        a1, a2 = ska.elements
        b1, b2 = skb.elements
        x = platform.check(spec.base)
        msg_a = (mul(mul(a1, x), a2),)
        msg_b = (mul(mul(b1, x), b2),)
        step3_a, step3_b = msg_b[0], msg_a[0]  # pi is constant: step 3 is trivial
        key_a = mul(mul(a1, step3_a), a2)
        key_b = mul(mul(b1, step3_b), b2)

    elif tag == "str_kep":
        (a,), (ka,) = ska.elements, ska.exponents
        (b,), (lb,) = skb.elements, skb.exponents
        x = platform.check(spec.base)
        msg_a = (mul(mul(inv(a), g_pow(platform, x, ka)), a),)
        msg_b = (mul(mul(inv(b), g_pow(platform, x, lb)), b),)
        step3_a = g_pow(platform, msg_b[0], ka)
        step3_b = g_pow(platform, msg_a[0], lb)
        key_a = mul(mul(inv(a), step3_a), a)
        key_b = mul(mul(inv(b), step3_b), b)

    elif tag == "aag_commutator":
        a, b = ska.elements[0], skb.elements[0]
        msg_a = tuple(mul(mul(inv(a), t), a) for t in spec.bob_gens)
        msg_b = tuple(mul(mul(inv(b), s), b) for s in spec.alice_gens)
        ext_b = list(msg_b) + [inv(w) for w in msg_b]
        ext_a = list(msg_a) + [inv(w) for w in msg_a]
        step3_a = magma.push_through(ska.trees[0], ext_b, [mul])   # b^-1 a b
        step3_b = magma.push_through(skb.trees[0], ext_a, [mul])   # a^-1 b a
        key_a = mul(inv(a), step3_a)
        key_b = mul(inv(step3_b), b)

    elif tag in ("simdcp", "simdcp_alt"):
        a_r, a_l = ska.elements[0], ska.elements[1]
        b_l, b_r = skb.elements[0], skb.elements[1]
        msg_a = tuple(mul(mul(a_l, t), a_r) for t in spec.bob_gens)
        msg_b = tuple(mul(mul(b_l, s), b_r) for s in spec.alice_gens)
        if tag == "simdcp":
            ops = _tree_ops(spec, platform)
            step3_a = _push(ska.trees[0], msg_b, ops)       # b_l a_r b_r
            step3_b = _push(skb.trees[0], msg_a, ops)       # a_l b_l a_r
        else:
            step3_a = _alt_reconstruct(platform, ska.indices, msg_b)
            step3_b = _alt_reconstruct(platform, skb.indices, msg_a)
        key_a = mul(a_l, step3_a)
        key_b = mul(step3_b, b_r)

    elif tag == "symdp":
        a, ka = ska.elements[0], ska.exponents[0]
        b, lb = skb.elements[0], skb.exponents[0]
        msg_a = tuple(mul(mul(g_pow(platform, a, ka), t), a) for t in spec.bob_gens)
        msg_b = tuple(mul(mul(b, s), g_pow(platform, b, lb)) for s in spec.alice_gens)
        ops = _tree_ops(spec, platform)
        step3_a = _push(ska.trees[0], msg_b, ops)           # b a b^l
        step3_b = _push(skb.trees[0], msg_a, ops)           # a^k b a
        key_a = mul(g_pow(platform, a, ka), step3_a)
        key_b = mul(step3_b, g_pow(platform, b, lb))

    elif tag == "f_commutator":
        a, b = ska.elements[0], skb.elements[0]
        op = _tree_ops(spec, platform)[0]
        msg_a = tuple(apply_op(op, a, t) for t in spec.bob_gens)
        msg_b = tuple(apply_op(op, b, s) for s in spec.alice_gens)
        step3_a = _push(ska.trees[0], msg_b, (op,))         # b * a
        step3_b = _push(skb.trees[0], msg_a, (op,))         # a * b
        key_a = mul(inv(a), step3_a)
        key_b = mul(inv(step3_b), b)

    elif tag == "shifted_commutator":
        a, b = ska.elements[0], skb.elements[0]
        star, other = _tree_ops(spec, platform)
        if spec.variant == "rev":
            rev = other
            msg_a = tuple(apply_op(rev, inv(a), t) for t in spec.bob_gens)
            msg_b = tuple(apply_op(star, inv(b), s) for s in spec.alice_gens)
            step3_a = _push(ska.trees[0], msg_b, (star,))   # b^-1 * a
            step3_b = _push(skb.trees[0], msg_a, (rev,))    # a^-1 *rev b
            key_a = mul(inv(a), step3_a)
            key_b = mul(step3_b, inv(b))
        else:
            bar = other
            msg_a = tuple(apply_op(bar, a, t) for t in spec.bob_gens)
            msg_b = tuple(apply_op(star, b, s) for s in spec.alice_gens)
            step3_a = _push(ska.trees[0], msg_b, (star, bar))  # b * a
            step3_b = _push(skb.trees[0], msg_a, (star, bar))  # a bar* b
            key_a = mul(inv(a), step3_a)
            key_b = mul(inv(step3_b), b)

    else:  # pragma: no cover
        raise AssertionError(tag)

    if not platform.eq(key_a, key_b):
        raise KeyMismatch(f"derived keys differ for tag {tag!r}, seed {spec.seed}")
    extracted = key_extract(platform, key_a)
    if key_extract(platform, key_b) != extracted:
        raise KeyMismatch("extracted keys differ despite equal elements")

    return Transcript(
        spec=spec,
        alice_messages=msg_a,
        bob_messages=msg_b,
        alice_step3=step3_a,
        bob_step3=step3_b,
        key_a=key_a,
        key_b=key_b,
        extracted_key=extracted,
    )


# -- validating constructors -------------------------------------------------


def _check_commuting(platform: Platform, left: tuple, right: tuple, what: str) -> None:
    for u in left:
        for v in right:
            if not platform.eq(platform.mul(u, v), platform.mul(v, u)):
                raise CommutationViolation(f"{what}: generators do not commute")


def make_classic_dh(
    p: int, g: int, k: int | None = None, l: int | None = None,
    policy: KeyPolicy | None = None, seed: int = 0,
) -> ProtocolSpec:
    platform = MultModPlatform(p)
    platform.check(g)
    return ProtocolSpec(
        tag="classic_dh", platform=platform, base=g, k=k, l=l,
        policy=policy or FINITE_POLICY, seed=seed,
    )


def make_group_dh(
    platform: Platform,
    a1_gens, a2_gens, b1_gens, b2_gens,
    x: Element,
    policy: KeyPolicy | None = None,
    seed: int = 0,
) -> ProtocolSpec:
    a1, a2 = tuple(a1_gens), tuple(a2_gens)
    b1, b2 = tuple(b1_gens), tuple(b2_gens)
    _check_commuting(platform, a1, b1, "[A1, B1]")
    _check_commuting(platform, a2, b2, "[A2, B2]")
    return ProtocolSpec(
        tag="group_dh", platform=platform, base=platform.check(x),
        a1_gens=a1, a2_gens=a2, b1_gens=b1, b2_gens=b2,
        policy=policy or _default_policy(platform), seed=seed,
    )


def make_ko_lee(
    platform: Platform, a_gens, b_gens, x: Element,
    policy: KeyPolicy | None = None, seed: int = 0,
) -> ProtocolSpec:
    a, b = tuple(a_gens), tuple(b_gens)
    _check_commuting(platform, a, b, "[A, B]")
    return ProtocolSpec(
        tag="ko_lee", platform=platform, base=platform.check(x),
        a1_gens=a, b1_gens=b,
        policy=policy or _default_policy(platform), seed=seed,
    )


def make_str_kep(
    platform: Platform, a_gens, b_gens, x: Element,
    policy: KeyPolicy | None = None, seed: int = 0,
) -> ProtocolSpec:
    a, b = tuple(a_gens), tuple(b_gens)
    _check_commuting(platform, a, b, "[A, B]")
    return ProtocolSpec(
        tag="str_kep", platform=platform, base=platform.check(x),
        a1_gens=a, b1_gens=b,
        policy=policy or _default_policy(platform), seed=seed,
    )


def make_aag_commutator(
    platform: Platform, s_gens, t_gens,
    policy: KeyPolicy | None = None, seed: int = 0,
) -> ProtocolSpec:
    s, t = tuple(s_gens), tuple(t_gens)
    if not s or not t:
        raise ValueError("generator lists must be nonempty")
    return ProtocolSpec(
        tag="aag_commutator", platform=platform, alice_gens=s, bob_gens=t,
        policy=policy or _default_policy(platform), seed=seed,
    )


def make_simdcp(
    platform: Platform, s_gens, t_gens,
    policy: KeyPolicy | None = None, seed: int = 0, alternating: bool = False,
) -> ProtocolSpec:
    s, t = tuple(s_gens), tuple(t_gens)
    if not s or not t:
        raise ValueError("generator lists must be nonempty")
    return ProtocolSpec(
        tag="simdcp_alt" if alternating else "simdcp",
        platform=platform, alice_gens=s, bob_gens=t,
        policy=policy or _default_policy(platform), seed=seed,
    )


def make_simdcp_alt(platform, s_gens, t_gens, policy=None, seed: int = 0) -> ProtocolSpec:
    return make_simdcp(platform, s_gens, t_gens, policy, seed, alternating=True)


def make_symdp(
    platform: Platform, s_gens, t_gens, k: int = 1, l: int = 1,
    secret_exponents: bool = False,
    policy: KeyPolicy | None = None, seed: int = 0,
) -> ProtocolSpec:
    if k != 1 and l != 1:
        raise ValueError("symdp needs k = 1 or l = 1")
    s, t = tuple(s_gens), tuple(t_gens)
    return ProtocolSpec(
        tag="symdp", platform=platform, alice_gens=s, bob_gens=t,
        k=k, l=l, secret_exponents=secret_exponents,
        policy=policy or _default_policy(platform), seed=seed,
    )


def make_f_commutator(
    f: Endomorphism, s_gens, t_gens,
    policy: KeyPolicy | None = None, seed: int = 0,
) -> ProtocolSpec:
    platform = f.platform
    s, t = tuple(s_gens), tuple(t_gens)
    if isinstance(f, PowerShiftEndo):
        for g in s + t:
            if not braid.is_pure(platform.check(g)):
                raise ValueError("pure-braid f-commutator needs pure generators")
    return ProtocolSpec(
        tag="f_commutator", platform=platform, alice_gens=s, bob_gens=t, endo=f,
        policy=policy or _default_policy(platform), seed=seed,
    )


def make_shifted_commutator(
    s_gens, t_gens,
    variant: str = "bi_ld",
    p: int = 1,
    a: BraidWord | None = None,
    base_strands: int | None = None,
    policy: KeyPolicy | None = None,
    seed: int = 0,
) -> ProtocolSpec:
    """Shifted-commutator KEP over (B_inf, *, bar*) or the (*, *rev) variant.

    The braid parameter must satisfy the shifted-conjugacy conditions; the
    default a = tau(p,p) specializes to Dehornoy's sigma_1 for p = 1.
    """
    if variant not in ("bi_ld", "rev"):
        raise ValueError("variant must be 'bi_ld' or 'rev'")
    if a is None:
        a = braid.tau(p, p)
    if not ldops.check_shifted_conditions(p, a):
        raise ldops.ConditionViolation(
            "braid parameter fails the shifted-conjugacy conditions"
        )
    s, t = tuple(s_gens), tuple(t_gens)
    if not s or not t:
        raise ValueError("generator lists must be nonempty")
    strands = base_strands or max(
        [2, 2 * p] + [w.strands for w in s + t if isinstance(w, BraidWord)]
    )
    return ProtocolSpec(
        tag="shifted_commutator", platform=BraidPlatform(strands),
        alice_gens=s, bob_gens=t, shift_p=p, shift_a=a, variant=variant,
        policy=policy or KeyPolicy(), seed=seed,
    )


def _default_policy(platform: Platform) -> KeyPolicy:
    # Exponent secrets multiply braid word lengths, so keep them small there.
    if isinstance(platform, BraidPlatform):
        return KeyPolicy(exponent_max=8)
    return FINITE_POLICY


# -- JSON codecs -------------------------------------------------------------


def _platform_obj(p: Platform) -> dict:
    if isinstance(p, BraidPlatform):
        return {"kind": "braid", "strands": p.strands}
    if isinstance(p, SymmetricPlatform):
        return {"kind": "symmetric", "degree": p.degree}
    return {"kind": "mult_mod", "modulus": p.modulus}


def _platform_from_obj(obj: dict) -> Platform:
    kind = obj["kind"]
    if kind == "braid":
        return BraidPlatform(obj["strands"])
    if kind == "symmetric":
        return SymmetricPlatform(obj["degree"])
    if kind == "mult_mod":
        return MultModPlatform(obj["modulus"])
    raise ValueError(f"unknown platform kind {kind!r}")


def _elem_hex(platform: Platform, x: Element) -> str:
    return encode_element(platform, x).hex()


def _elem_from_hex(platform: Platform, s: str) -> Element:
    value, _ = decode_element(platform, bytes.fromhex(s))
    return value


def _endo_obj(platform: Platform, e: Optional[Endomorphism]) -> Optional[dict]:
    if e is None:
        return None
    if isinstance(e, IdentityEndo):
        return {"kind": "identity"}
    if isinstance(e, InnerEndo):
        return {"kind": "inner", "c": _elem_hex(platform, e.conjugator)}
    if isinstance(e, PowerShiftEndo):
        return {"kind": "power_shift", "d": e.d}
    return {
        "kind": "point_map",
        "pairs": sorted(
            [_elem_hex(platform, k), _elem_hex(platform, v)] for k, v in e.pairs
        ),
    }


def _endo_from_obj(platform: Platform, obj: Optional[dict]) -> Optional[Endomorphism]:
    if obj is None:
        return None
    kind = obj["kind"]
    if kind == "identity":
        return IdentityEndo(platform)
    if kind == "inner":
        return InnerEndo(platform, _elem_from_hex(platform, obj["c"]))
    if kind == "power_shift":
        return PowerShiftEndo(platform, obj["d"])
    if kind == "point_map":
        pairs = tuple(
            (_elem_from_hex(platform, k), _elem_from_hex(platform, v))
            for k, v in obj["pairs"]
        )
        return PointMapEndo(platform, pairs)
    raise ValueError(f"unknown endomorphism kind {kind!r}")


def _policy_obj(policy: KeyPolicy) -> dict:
    return {
        "max_leaves": policy.max_leaves,
        "max_depth": policy.max_depth,
        "comb_bias": policy.comb_bias,
        "gen_length": policy.gen_length,
        "max_word_letters": policy.max_word_letters,
        "exponent_min": policy.exponent_min,
        "exponent_max": policy.exponent_max,
    }


def spec_to_obj(spec: ProtocolSpec) -> dict:
    platform = spec.platform
    obj = {
        "tag": spec.tag,
        "platform": _platform_obj(platform),
        "policy": _policy_obj(spec.policy),
        "seed": spec.seed,
        "alice_gens": [_elem_hex(platform, g) for g in spec.alice_gens],
        "bob_gens": [_elem_hex(platform, g) for g in spec.bob_gens],
        "a1_gens": [_elem_hex(platform, g) for g in spec.a1_gens],
        "a2_gens": [_elem_hex(platform, g) for g in spec.a2_gens],
        "b1_gens": [_elem_hex(platform, g) for g in spec.b1_gens],
        "b2_gens": [_elem_hex(platform, g) for g in spec.b2_gens],
        "base": None if spec.base is None else _elem_hex(platform, spec.base),
        "endo": _endo_obj(platform, spec.endo),
        "shift_p": spec.shift_p,
        "shift_a": None if spec.shift_a is None else braid.encode_braid(spec.shift_a).hex(),
        "variant": spec.variant,
        "k": spec.k,
        "l": spec.l,
        "secret_exponents": spec.secret_exponents,
    }
    return obj


def spec_from_obj(obj: dict) -> ProtocolSpec:
    platform = _platform_from_obj(obj["platform"])
    policy = KeyPolicy(**obj["policy"])
    shift_a = None
    if obj.get("shift_a"):
        shift_a, _ = braid.decode_braid(bytes.fromhex(obj["shift_a"]))
    return ProtocolSpec(
        tag=obj["tag"],
        platform=platform,
        alice_gens=tuple(_elem_from_hex(platform, s) for s in obj["alice_gens"]),
        bob_gens=tuple(_elem_from_hex(platform, s) for s in obj["bob_gens"]),
        policy=policy,
        seed=obj["seed"],
        base=None if obj["base"] is None else _elem_from_hex(platform, obj["base"]),
        a1_gens=tuple(_elem_from_hex(platform, s) for s in obj["a1_gens"]),
        a2_gens=tuple(_elem_from_hex(platform, s) for s in obj["a2_gens"]),
        b1_gens=tuple(_elem_from_hex(platform, s) for s in obj["b1_gens"]),
        b2_gens=tuple(_elem_from_hex(platform, s) for s in obj["b2_gens"]),
        endo=_endo_from_obj(platform, obj["endo"]),
        shift_p=obj["shift_p"],
        shift_a=shift_a,
        variant=obj["variant"],
        k=obj["k"],
        l=obj["l"],
        secret_exponents=obj["secret_exponents"],
    )


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def spec_to_json(spec: ProtocolSpec) -> str:
    return _canonical_json(spec_to_obj(spec))


def spec_from_json(text: str) -> ProtocolSpec:
    return spec_from_obj(json.loads(text))


def spec_digest(spec: ProtocolSpec) -> str:
    return hashlib.sha256(spec_to_json(spec).encode()).hexdigest()


def transcript_to_json(t: Transcript) -> str:
    platform = work_platform(t.spec)
    obj = {
        "spec": spec_to_obj(t.spec),
        "digest": spec_digest(t.spec),
        "seed": t.spec.seed,
        "alice_messages": [_elem_hex(platform, x) for x in t.alice_messages],
        "bob_messages": [_elem_hex(platform, x) for x in t.bob_messages],
        "alice_step3": _elem_hex(platform, t.alice_step3),
        "bob_step3": _elem_hex(platform, t.bob_step3),
        "kA": _elem_hex(platform, t.key_a),
        "kB": _elem_hex(platform, t.key_b),
        "extracted_key": t.extracted_key.hex(),
    }
    return _canonical_json(obj)


def transcript_from_json(text: str) -> Transcript:
    obj = json.loads(text)
    spec = spec_from_obj(obj["spec"])
    platform = work_platform(spec)
    return Transcript(
        spec=spec,
        alice_messages=tuple(_elem_from_hex(platform, s) for s in obj["alice_messages"]),
        bob_messages=tuple(_elem_from_hex(platform, s) for s in obj["bob_messages"]),
        alice_step3=_elem_from_hex(platform, obj["alice_step3"]),
        bob_step3=_elem_from_hex(platform, obj["bob_step3"]),
        key_a=_elem_from_hex(platform, obj["kA"]),
        key_b=_elem_from_hex(platform, obj["kB"]),
        extracted_key=bytes.fromhex(obj["extracted_key"]),
    )


# -- random desk-scale spec generation (keygen / acceptance sweeps) ----------


def random_spec(tag: str, seed: int, scale: str = "small") -> ProtocolSpec:
    """A seeded random desk-scale spec for the given instantiation."""
    rng = random.Random(("spec", tag, seed, scale).__repr__())
    run_seed = rng.randrange(2**32)

    if tag == "classic_dh":
        p = rng.choice([23, 101, 1009, 10007])
        g = rng.randrange(2, p - 1)
        return make_classic_dh(p, g, seed=run_seed)

    finite: Platform = SymmetricPlatform(rng.choice([4, 5]))

    if tag in ("group_dh", "ko_lee", "str_kep"):
        # commuting subgroups of a braid group: generators with distant indices
        n = 7
        platform = BraidPlatform(n)
        left = [BraidWord(n, (1,)), BraidWord(n, (2,))]
        right = [BraidWord(n, (4,)), BraidWord(n, (5,))]
        x = braid.random_braid(n, 8, rng)
        if tag == "group_dh":
            return make_group_dh(platform, left, left, right, right, x, seed=run_seed)
        if tag == "ko_lee":
            return make_ko_lee(platform, left, right, x, seed=run_seed)
        return make_str_kep(platform, left, right, x, seed=run_seed)

    if tag in ("aag_commutator", "simdcp", "simdcp_alt", "symdp"):
        m = rng.randint(2, 3)
        n = rng.randint(2, 3)
        s = tuple(finite.random_element(rng) for _ in range(m))
        t = tuple(finite.random_element(rng) for _ in range(n))
        if tag == "aag_commutator":
            return make_aag_commutator(finite, s, t, seed=run_seed)
        if tag == "simdcp":
            return make_simdcp(finite, s, t, seed=run_seed)
        if tag == "simdcp_alt":
            return make_simdcp_alt(finite, s, t, seed=run_seed)
        k, l = (rng.randint(2, 5), 1) if rng.random() < 0.5 else (1, rng.randint(2, 5))
        return make_symdp(finite, s, t, k=k, l=l, seed=run_seed)

    if tag == "f_commutator":
        if rng.random() < 0.5:
            f: Endomorphism = InnerEndo(finite, finite.random_element(rng))
            s = tuple(finite.random_element(rng) for _ in range(2))
            t = tuple(finite.random_element(rng) for _ in range(2))
            return make_f_commutator(f, s, t, seed=run_seed)
        n = 4
        platform = BraidPlatform(n)
        f = PowerShiftEndo(platform, 1)
        # one conjugated square per generator keeps lengths <= 8
        s = tuple(braid.random_pure_braid(n, rng, conj_len=3, blocks=1) for _ in range(2))
        t = tuple(braid.random_pure_braid(n, rng, conj_len=3, blocks=1) for _ in range(2))
        policy = KeyPolicy(max_leaves=4, max_depth=3)
        return make_f_commutator(f, s, t, policy=policy, seed=run_seed)

    if tag == "shifted_commutator":
        n = rng.randint(3, 5)
        m = rng.randint(1, 2)
        s = tuple(braid.random_braid(n, 6, rng) for _ in range(m))
        t = tuple(braid.random_braid(n, 6, rng) for _ in range(m))
        variant = rng.choice(["bi_ld", "rev"])
        policy = KeyPolicy(max_leaves=4, max_depth=3)
        return make_shifted_commutator(s, t, variant=variant, policy=policy, seed=run_seed)

    raise ValueError(f"unknown protocol tag {tag!r}")

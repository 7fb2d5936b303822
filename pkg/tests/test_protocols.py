import random
import warnings
from dataclasses import replace

import pytest

from nakex import braid as B
from nakex import ldops as L
from nakex import protocols as P
from nakex.braid import BraidWord
from nakex.platforms import (
    BraidPlatform,
    IdentityEndo,
    MultModPlatform,
    SymmetricPlatform,
    g_commutator,
)

S4 = SymmetricPlatform(4)
S5 = SymmetricPlatform(5)


def run_quiet(spec):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", P.WeakKeyWarning)
        return P.run(spec)


# -- classic DH -----------------------------------------------------------------


def test_classic_dh_vector():
    # independent oracle: modular exponentiation
    p, g, k, l = 23, 5, 6, 15
    assert pow(g, k, p) == 8 and pow(g, l, p) == 19 and pow(pow(g, l, p), k, p) == 2
    spec = P.make_classic_dh(p, g, k=k, l=l, seed=7)
    t = P.run(spec)
    assert t.alice_messages == (8,)
    assert t.bob_messages == (19,)
    assert t.key_a == 2 and t.key_b == 2


def test_classic_dh_random_matches_pow():
    for seed in range(20):
        spec = P.random_spec("classic_dh", seed)
        t = P.run(spec)
        ska, skb = P.generate_secrets(spec)
        p = spec.platform.modulus
        assert t.key_a == pow(spec.base, ska.exponents[0] * skb.exponents[0], p)


# -- commutator schemes ------------------------------------------------------------


def test_aag_commutator_on_abelian_platform_is_trivial():
    platform = MultModPlatform(23)
    spec = P.make_aag_commutator(platform, (5, 7), (2, 11), seed=3)
    t = run_quiet(spec)
    assert t.key_a == 1


def test_aag_commutator_matches_direct_computation():
    for seed in range(20):
        spec = P.random_spec("aag_commutator", seed)
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        a, b = ska.elements[0], skb.elements[0]
        platform = spec.platform
        assert platform.eq(t.key_a, g_commutator(platform, a, b))


def test_f_commutator_identity_f_gives_plain_commutator():
    f = IdentityEndo(S4)
    rng = random.Random(50)
    gens_s = tuple(S4.random_element(rng) for _ in range(2))
    gens_t = tuple(S4.random_element(rng) for _ in range(2))
    spec = P.make_f_commutator(f, gens_s, gens_t, seed=11)
    t = run_quiet(spec)
    ska, skb = P.generate_secrets(spec)
    assert S4.eq(t.key_a, g_commutator(S4, ska.elements[0], skb.elements[0]))


def test_f_commutator_identity_generators_give_identity_key():
    # trees over identity generators evaluate to identity secrets, and
    # [e, e]_f = e
    f = IdentityEndo(S4)
    e = S4.identity()
    spec = P.make_f_commutator(f, (e,), (e,), seed=5)
    t = run_quiet(spec)
    assert S4.eq(t.key_a, e)


def test_f_commutator_formula():
    # K = a^-1 f(b^-1) f(a) b
    for seed in range(10):
        spec = P.random_spec("f_commutator", seed)
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        a, b = ska.elements[0], skb.elements[0]
        platform = spec.platform
        f = spec.endo
        expected = platform.mul(
            platform.mul(platform.inv(a), f.apply(platform.inv(b))),
            platform.mul(f.apply(a), b),
        )
        assert platform.eq(t.key_a, expected)


def test_shifted_commutator_degenerate_key_is_sigma1():
    # both secrets evaluate to the empty braid when the single generator is
    # trivial and trees are leaves: K = [1,1]_sh = sigma_1
    gens = (BraidWord(2),)
    policy = P.KeyPolicy(max_leaves=1, max_depth=0)
    spec = P.make_shifted_commutator(gens, gens, policy=policy, seed=1)
    t = run_quiet(spec)
    platform = P.work_platform(spec)
    assert platform.eq(t.key_a, BraidWord(2, (1,)))


def test_shifted_commutator_formula_bi_ld():
    # K = a^-1 shift(b^-1) sigma1 shift(a) b
    for seed in range(6):
        spec = P.random_spec("shifted_commutator", seed)
        if spec.variant != "bi_ld":
            continue
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        a, b = ska.elements[0], skb.elements[0]
        expected = B.concat_all(
            B.invert(a), B.shift(B.invert(b), spec.shift_p), spec.shift_a,
            B.shift(a, spec.shift_p), b,
        )
        assert B.braids_equal(t.key_a, expected)


def test_shifted_commutator_formula_rev():
    # K = [a, b^-1]_sh = a^-1 shift(b) sigma1 shift(a) b^-1
    for seed in range(12):
        spec = P.random_spec("shifted_commutator", seed)
        if spec.variant != "rev":
            continue
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        a, b = ska.elements[0], skb.elements[0]
        expected = B.concat_all(
            B.invert(a), B.shift(b, spec.shift_p), spec.shift_a,
            B.shift(a, spec.shift_p), B.invert(b),
        )
        assert B.braids_equal(t.key_a, expected)


def test_shifted_commutator_single_generator_runs():
    # the non-simultaneity regime: m = n = 1
    gens = (BraidWord(3, (1, 2)),)
    spec = P.make_shifted_commutator(gens, gens, seed=9, policy=P.KeyPolicy(max_leaves=4, max_depth=3))
    t = run_quiet(spec)
    assert t.extracted_key == P.key_extract(P.work_platform(spec), t.key_b)


@pytest.mark.parametrize("variant", ["bi_ld", "rev"])
def test_shifted_commutator_generalized_p2(variant):
    # the engine handles higher shift powers and tau-family parameters
    rng = random.Random(53)
    gens = tuple(B.random_braid(4, 5, rng) for _ in range(2))
    policy = P.KeyPolicy(max_leaves=3, max_depth=2)
    spec = P.make_shifted_commutator(gens, gens, variant=variant, p=2, policy=policy, seed=5)
    t = run_quiet(spec)
    assert t.extracted_key == P.key_extract(P.work_platform(spec), t.key_b)

    a = B.concat_all(BraidWord(2, (1,)), B.tau(2, 2), BraidWord(2, (1,)))
    spec2 = P.make_shifted_commutator(gens, gens, variant=variant, p=2, a=a, policy=policy, seed=6)
    t2 = run_quiet(spec2)
    assert t2.extracted_key != t.extracted_key  # different operation, different key
    j = P.transcript_to_json(t2)
    assert P.transcript_to_json(P.transcript_from_json(j)) == j


def test_shifted_commutator_rejects_bad_parameter():
    with pytest.raises(L.ConditionViolation):
        P.make_shifted_commutator(
            (BraidWord(3, (1,)),), (BraidWord(3, (1,)),), p=1, a=BraidWord(3, (1, 2))
        )


# -- decomposition schemes -----------------------------------------------------------


def test_simdcp_key_formula():
    for seed in range(15):
        spec = P.random_spec("simdcp", seed)
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        a_r, a_l = ska.elements[0], ska.elements[1]
        b_l, b_r = skb.elements[0], skb.elements[1]
        platform = spec.platform
        expected = platform.mul(platform.mul(a_l, b_l), platform.mul(a_r, b_r))
        assert platform.eq(t.key_a, expected)


def test_simdcp_alt_key_formula_and_alternating_shape():
    for seed in range(15):
        spec = P.random_spec("simdcp_alt", seed)
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        assert len(ska.indices) % 2 == 1
        a_r, a_l = ska.elements[0], ska.elements[1]
        b_l, b_r = skb.elements[0], skb.elements[1]
        platform = spec.platform
        expected = platform.mul(platform.mul(a_l, b_l), platform.mul(a_r, b_r))
        assert platform.eq(t.key_a, expected)


def test_simdcp_alt_single_term_message_identity():
    # a length-1 alternating word makes the step-3 reconstruction one of the
    # peer's messages verbatim
    platform = S4
    rng = random.Random(51)
    s = tuple(platform.random_element(rng) for _ in range(2))
    t_gens = tuple(platform.random_element(rng) for _ in range(2))
    policy = replace(P.FINITE_POLICY, max_leaves=1, max_depth=0)
    spec = P.make_simdcp_alt(platform, s, t_gens, policy=policy, seed=13)
    transcript = run_quiet(spec)
    ska, skb = P.generate_secrets(spec)
    assert len(ska.indices) == 1 and len(skb.indices) == 1
    assert any(platform.eq(transcript.alice_step3, m) for m in transcript.bob_messages)
    assert any(platform.eq(transcript.bob_step3, m) for m in transcript.alice_messages)


def test_symdp_key_formula_and_validation():
    for seed in range(15):
        spec = P.random_spec("symdp", seed)
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        a, ka = ska.elements[0], ska.exponents[0]
        b, lb = skb.elements[0], skb.exponents[0]
        platform = spec.platform
        from nakex.platforms import g_pow

        expected = platform.mul(
            platform.mul(g_pow(platform, a, ka), b),
            platform.mul(a, g_pow(platform, b, lb)),
        )
        assert platform.eq(t.key_a, expected)
    with pytest.raises(ValueError):
        P.make_symdp(S4, (S4.identity(),), (S4.identity(),), k=2, l=3)


def test_symdp_secret_exponents():
    rng = random.Random(52)
    s = tuple(S4.random_element(rng) for _ in range(2))
    t_gens = tuple(S4.random_element(rng) for _ in range(2))
    spec = P.make_symdp(S4, s, t_gens, secret_exponents=True, seed=14)
    ska, skb = P.generate_secrets(spec)
    assert ska.exponents[0] == 1 or skb.exponents[0] == 1
    run_quiet(spec)


# -- group DH family ------------------------------------------------------------------


def test_group_dh_trivial_subgroups_give_base():
    platform = BraidPlatform(4)
    e = (BraidWord(4),)
    x = BraidWord(4, (1, 2, 3))
    spec = P.make_group_dh(platform, e, e, e, e, x, seed=2)
    t = run_quiet(spec)
    assert B.braids_equal(t.key_a, x)


def test_group_dh_and_ko_lee_agree_with_direct():
    for tag in ("group_dh", "ko_lee"):
        for seed in range(10):
            spec = P.random_spec(tag, seed)
            t = run_quiet(spec)
            ska, skb = P.generate_secrets(spec)
            platform = spec.platform
            a1, a2 = ska.elements
            b1, b2 = skb.elements
            expected = platform.mul(
                platform.mul(a1, platform.mul(b1, spec.base)),
                platform.mul(b2, a2),
            )
            assert platform.eq(t.key_a, expected)


def test_ko_lee_is_conjugation_shaped():
    spec = P.random_spec("ko_lee", 3)
    ska, _ = P.generate_secrets(spec)
    platform = spec.platform
    assert platform.eq(platform.mul(ska.elements[0], ska.elements[1]), platform.identity())


def test_str_kep_key_formula():
    for seed in range(10):
        spec = P.random_spec("str_kep", seed)
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        platform = spec.platform
        from nakex.platforms import g_pow

        (a,), (k,) = ska.elements, ska.exponents
        (b,), (l,) = skb.elements, skb.exponents
        expected = platform.mul(
            platform.mul(platform.inv(a), platform.inv(b)),
            platform.mul(g_pow(platform, spec.base, k * l), platform.mul(b, a)),
        )
        assert platform.eq(t.key_a, expected)


def test_commutation_violation_detected():
    platform = BraidPlatform(4)
    with pytest.raises(P.CommutationViolation):
        P.make_group_dh(
            platform,
            (BraidWord(4, (1,)),), (BraidWord(4, (1,)),),
            (BraidWord(4, (2,)),), (BraidWord(4, (2,)),),
            BraidWord(4, (3,)),
        )
    with pytest.raises(P.CommutationViolation):
        P.make_ko_lee(platform, (BraidWord(4, (1,)),), (BraidWord(4, (2,)),), BraidWord(4, (3,)))


# -- engine-level properties ------------------------------------------------------------


@pytest.mark.parametrize("tag", P.PROTOCOL_TAGS)
def test_transcripts_deterministic_and_roundtrip(tag):
    for seed in (0, 1):
        spec = P.random_spec(tag, seed)
        t1 = run_quiet(spec)
        t2 = run_quiet(spec)
        j1 = P.transcript_to_json(t1)
        assert j1 == P.transcript_to_json(t2)
        assert P.transcript_to_json(P.transcript_from_json(j1)) == j1
        assert t1.extracted_key == t2.extracted_key


@pytest.mark.parametrize("tag", P.PROTOCOL_TAGS)
def test_spec_json_roundtrip(tag):
    spec = P.random_spec(tag, 5)
    text = P.spec_to_json(spec)
    again = P.spec_from_json(text)
    assert P.spec_to_json(again) == text
    assert P.spec_digest(again) == P.spec_digest(spec)


def test_step3_matches_whitebox_beta():
    # the push-through value equals beta(peer secret, own secret) recomputed
    # with both secrets visible
    spec = P.random_spec("f_commutator", 2)
    t = run_quiet(spec)
    ska, skb = P.generate_secrets(spec)
    a, b = ska.elements[0], skb.elements[0]
    op = L.f_conj_op(spec.endo)
    platform = spec.platform
    assert platform.eq(t.alice_step3, L.apply_op(op, b, a))
    assert platform.eq(t.bob_step3, L.apply_op(op, a, b))

    spec = P.random_spec("simdcp", 3)
    t = run_quiet(spec)
    ska, skb = P.generate_secrets(spec)
    platform = spec.platform
    a_r, a_l = ska.elements[0], ska.elements[1]
    b_l, b_r = skb.elements[0], skb.elements[1]
    assert platform.eq(t.alice_step3, platform.mul(platform.mul(b_l, a_r), b_r))
    assert platform.eq(t.bob_step3, platform.mul(platform.mul(a_l, b_l), a_r))


def test_step3_whitebox_shifted():
    for seed in range(4):
        spec = P.random_spec("shifted_commutator", seed)
        t = run_quiet(spec)
        ska, skb = P.generate_secrets(spec)
        a, b = ska.elements[0], skb.elements[0]
        star = L.shifted_op(spec.shift_p, spec.shift_a)
        if spec.variant == "rev":
            rev = L.shifted_rev_op(spec.shift_p, spec.shift_a)
            assert B.braids_equal(t.alice_step3, L.apply_op(star, B.invert(b), a))
            assert B.braids_equal(t.bob_step3, L.apply_op(rev, B.invert(a), b))
        else:
            bar = L.shifted_bar_op(spec.shift_p, B.invert(spec.shift_a))
            assert B.braids_equal(t.alice_step3, L.apply_op(star, b, a))
            assert B.braids_equal(t.bob_step3, L.apply_op(bar, a, b))


def test_key_extract_canonical():
    platform = BraidPlatform(3)
    k1 = P.key_extract(platform, BraidWord(3, (1, 2, 1)))
    k2 = P.key_extract(platform, BraidWord(3, (2, 1, 2)))
    assert k1 == k2 and len(k1) == 32
    assert P.key_extract(platform, BraidWord(3)) == P.key_extract(platform, BraidWord(3, (1, -1)))
    assert k1 != P.key_extract(platform, BraidWord(3))


def test_weak_key_warning():
    platform = S4
    e = platform.identity()
    spec = P.make_aag_commutator(platform, (e,), (e,), seed=4)
    with pytest.warns(P.WeakKeyWarning):
        P.run(spec)


def test_policy_validation():
    with pytest.raises(P.PolicyViolation):
        P.KeyPolicy(max_leaves=0)
    with pytest.raises(P.PolicyViolation):
        P.KeyPolicy(max_leaves=8, max_depth=2)
    with pytest.raises(P.PolicyViolation):
        P.KeyPolicy(comb_bias=1.5)


def test_work_platform_covers_all_letters():
    for seed in range(8):
        spec = P.random_spec("shifted_commutator", seed)
        platform = P.work_platform(spec)
        t = run_quiet(spec)
        for element in t.alice_messages + t.bob_messages + (t.key_a, t.key_b, t.alice_step3, t.bob_step3):
            platform.check(element)  # raises if any index exceeds the sizing

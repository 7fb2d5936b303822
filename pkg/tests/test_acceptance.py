"""Acceptance suite: every criterion prints one pass/fail line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
complete; each criterion is a separate test at its stated sample counts and
tolerances (all equalities are exact platform equalities).
"""

import itertools
import random
import socket
import threading
import time
import warnings

import pytest

from endo_utils import inner_point_map, sign_endo
from nakex import attacks as A
from nakex import braid as B
from nakex import ldops as L
from nakex import magma as M
from nakex import protocols as P
from nakex import session as S
from nakex.braid import BraidWord, Permutation
from nakex.platforms import (
    BraidPlatform,
    IdentityEndo,
    InnerEndo,
    PowerShiftEndo,
    SymmetricPlatform,
    g_commutator,
    g_conj,
)

S3 = SymmetricPlatform(3)
S4 = SymmetricPlatform(4)


def _report(num: int, description: str, ok: bool, extra: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({extra})" if extra else ""
    print(f"ACCEPTANCE {num:02d} {status}: {description}{suffix}")
    assert ok, f"criterion {num} failed: {description}"


def test_criterion_01_protocol_correctness_100_runs_each():
    start = time.perf_counter()
    runs = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", P.WeakKeyWarning)
        for tag in P.PROTOCOL_TAGS:
            for seed in range(100):
                spec = P.random_spec(tag, seed)
                transcript = P.run(spec)  # raises KeyMismatch on K_A != K_B
                platform = P.work_platform(spec)
                assert platform.eq(transcript.key_a, transcript.key_b)
                assert transcript.extracted_key == P.key_extract(platform, transcript.key_b)
                runs += 1
    elapsed = time.perf_counter() - start
    _report(
        1,
        "100 seeded runs per instantiation agree on keys",
        runs == 100 * len(P.PROTOCOL_TAGS) and elapsed < 300.0,
        f"{runs} runs in {elapsed:.1f}s",
    )


def test_criterion_02_dh_vector():
    spec = P.make_classic_dh(23, 5, k=6, l=15, seed=0)
    t = P.run(spec)
    ok = t.alice_messages == (8,) and t.bob_messages == (19,) and t.key_a == 2 and t.key_b == 2
    _report(2, "DH vector p=23 g=5 k=6 l=15 -> yA=8 yB=19 K=2", ok)


def test_criterion_03_ld_law_suites():
    rng = random.Random(1003)
    inner = InnerEndo(S4, Permutation((2, 3, 1, 4)))
    pure_shift = PowerShiftEndo(BraidPlatform(4), 1)
    idem = sign_endo(S4, Permutation((2, 1, 3, 4)))
    finite_ops = [
        ("conj", L.conj_op(S4), 1000),
        ("f_conj id", L.f_conj_op(IdentityEndo(S4)), 1000),
        ("f_conj inner", L.f_conj_op(inner), 1000),
        ("sym_conj", L.sym_conj_op(S4), 1000),
        ("f_sym_conj idem", L.f_sym_conj_op(idem), 1000),
    ]
    braid_ops = [
        ("f_conj pure_braid_endo", L.f_conj_op(pure_shift), 200),
        ("shifted(1, s1)", L.shifted_op(1, BraidWord(2, (1,))), 200),
        ("generalized shifted p=2", L.make_generalized_shifted(2, BraidWord(2, (1,)), BraidWord(2, (1,))), 200),
        ("split shifted p1=p2=1", L.make_split_shifted(1, 1, BraidWord(1), BraidWord(1), BraidWord(1), BraidWord(1)), 200),
    ]
    ok = True
    for name, op, samples in finite_ops:
        verdict = L.verify_ld(op, samples, rng)
        ok = ok and verdict.passed
    for name, op, samples in braid_ops:
        verdict = L.verify_ld(op, samples, rng, braid_len=4)
        ok = ok and verdict.passed
    # deliberately invalid parameters: non-commuting a', a'' (needs p >= 3)
    bad_a = B.concat_all(BraidWord(3, (1,)), B.tau(3, 3), BraidWord(3, (2,)))
    bad = L.shifted_op(3, bad_a)
    bad_verdict = L.verify_ld(bad, 1000, rng, braid_len=3)
    ok = ok and not bad_verdict.passed and bad_verdict.checked <= 1000
    _report(3, "LD law suites pass; invalid parameters yield a counterexample", ok)


def test_criterion_04_bi_and_multi_ld():
    rng = random.Random(1004)
    star = L.shifted_op(1, BraidWord(2, (1,)))
    bar = L.shifted_bar_op(1, BraidWord(2, (-1,)))
    bi = L.verify_multi_ld([star, bar], 200, rng, braid_len=3)
    family = L.make_generalized_shifted_family(
        2,
        [
            (BraidWord(2, (1,)), BraidWord(2, (1,))),
            (BraidWord(2, (1, 1)), BraidWord(1)),
        ],
    )
    multi = L.verify_multi_ld(family, 200, rng, braid_len=3)
    ok = bi.passed and multi.passed and bi.checked == 800 and multi.checked == 800
    _report(4, "bi-LD {*, bar*} and the commuting tau-parameter family pass the mixed laws", ok)


def test_criterion_05_condition_checkers_match_laws():
    triples = 0
    ok = True
    catalog3 = [inner_point_map(S3, p) for p in S3.elements()]
    for f, g, h in itertools.product(catalog3, repeat=3):
        cond = L.check_fconj_conditions(f, g, h, S3)
        ld = L.verify_ld_exhaustive(L.fgh_conj_op(f, g, h)).passed
        cond2 = L.check_symconj_conditions(f, g, h, S3)
        ld2 = L.verify_ld_exhaustive(L.fgh_sym_op(f, g, h)).passed
        ok = ok and (cond == ld) and (cond2 == ld2)
        triples += 1
    reps4 = [Permutation((1, 2, 3, 4)), Permutation((2, 1, 3, 4)), Permutation((2, 3, 1, 4))]
    catalog4 = [inner_point_map(S4, p) for p in reps4]
    for f, g, h in itertools.product(catalog4, repeat=3):
        cond = L.check_fconj_conditions(f, g, h, S4)
        ld = L.verify_ld_exhaustive(L.fgh_conj_op(f, g, h)).passed
        ok = ok and cond == ld
        triples += 1
    _report(5, "endomorphism condition checkers match exhaustive LD behavior", ok and triples >= 20,
            f"{triples} endomorphism triples")


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_criterion_06_tau_relation(p):
    a = B.tau(p, p)
    da = B.shift(a, p)
    ok = B.normal_form(
        B.with_strands(B.concat_all(a, da, a), 3 * p)
    ) == B.normal_form(B.with_strands(B.concat_all(da, a, da), 3 * p))
    _report(6, f"tau({p},{p}) satisfies a d^p(a) a = d^p(a) a d^p(a)", ok)


def test_criterion_07_normal_form_vs_handle_oracle():
    rng = random.Random(1007)
    agree = 0
    for trial in range(500):
        w1 = B.random_braid(6, rng.randrange(0, 41), rng)
        if trial % 2:
            u = B.random_braid(6, rng.randrange(0, 10), rng)
            w2 = B.concat_all(u, w1, B.invert(u), B.invert(w1), w1)
        else:
            w2 = B.random_braid(6, rng.randrange(0, 41), rng)
        garside = B.normal_form(w1) == B.normal_form(w2)
        handle = B.handle_trivial(B.concat(w1, B.invert(w2)))
        agree += garside == handle
    _report(7, "Garside equality agrees with handle-reduction triviality", agree == 500,
            f"{agree}/500")


def test_criterion_08_comb_length_bounds():
    rng = random.Random(1008)
    l0 = 6
    conj = lambda x, y: B.concat_all(B.invert(x), y, x)
    sets_checked = 0
    ok = True
    for k in range(1, 11):
        for _ in range(5):
            gens = [B.random_braid(6, l0, rng) for _ in range(k)]
            lc = M.eval_tree(M.left_comb(k), gens, [conj])
            rc = M.eval_tree(M.right_comb(k), gens, [conj])
            ok = ok and len(lc.letters) <= (2 * k - 1) * l0
            ok = ok and len(rc.letters) <= (2**k - 1) * l0
            sets_checked += 1
    _report(8, "left/right comb word-length bounds hold", ok and sets_checked == 50,
            f"{sets_checked} generator sets")


def test_criterion_09_reductions_reproduce_planted_keys():
    rng = random.Random(1009)
    a_gens = (Permutation((2, 1, 3, 4)),)
    b_gens = (Permutation((1, 2, 4, 3)),)
    a_closure = A.subgroup_closure(S4, a_gens)
    b_closure = A.subgroup_closure(S4, b_gens)

    klp_hits = 0
    for _ in range(50):
        x, y = rng.choice(a_closure), rng.choice(b_closure)
        s = S4.random_element(rng)
        inst = A.KLPInstance(s, g_conj(S4, x, s), g_conj(S4, y, s), a_gens, b_gens)
        key = A.reduce_cdp_to_klp(lambda i: A.bf_solve(i, S4), inst, S4)
        klp_hits += S4.eq(key, g_conj(S4, y, g_conj(S4, x, s)))

    aagp_hits = 0
    for _ in range(50):
        x, y = rng.choice(a_closure), rng.choice(b_closure)
        inst = A.AAGPInstance(
            a_gens, tuple(g_conj(S4, y, g) for g in a_gens),
            b_gens, tuple(g_conj(S4, x, g) for g in b_gens),
            planted=(x, y),
        )
        result = A.reduce_sscsp_to_aagp(lambda i: A.bf_solve(i, S4), inst, S4)
        aagp_hits += S4.eq(result.key, g_commutator(S4, x, y))

    simdp_hits = 0
    for _ in range(50):
        al, ar = S4.random_element(rng), S4.random_element(rng)
        ts = [S4.random_element(rng) for _ in range(3)]
        ndp = A.NSimDPInstance(tuple((t, S4.mul(S4.mul(al, t), ar)) for t in ts))
        left, right = A.reduce_simdp_to_sscsp(ndp, S4)
        simdp_hits += A.verify_witness(S4, left, al) and A.verify_witness(S4, right, ar)

    fcsp_hits = 0
    for _ in range(50):
        f = InnerEndo(S4, S4.random_element(rng))
        op = L.f_conj_op(f)
        b = S4.random_element(rng)
        ss = [S4.random_element(rng) for _ in range(3)]
        derived = A.reduce_simfcsp_to_simcsp(
            A.FCSPInstance(f, tuple((s, L.apply_op(op, b, s)) for s in ss)), S4
        )
        fcsp_hits += A.verify_witness(S4, derived, b)

    shcsp_hits = 0
    star = L.shifted_op(1, BraidWord(2, (1,)))
    for _ in range(50):
        b = B.random_braid(4, 5, rng)
        ss = [B.random_braid(4, 5, rng) for _ in range(3)]
        derived = A.reduce_simshcsp_to_simcsp(
            A.ShCSPInstance(1, star.a, tuple((s, L.apply_op(star, b, s)) for s in ss))
        )
        shcsp_hits += all(
            B.braids_equal(B.concat_all(B.invert(b), base, b), image)
            for base, image in derived.pairs
        )

    ok = klp_hits == aagp_hits == simdp_hits == fcsp_hits == shcsp_hits == 50
    _report(9, "oracle reductions and instance transforms, 50/50 planted each", ok,
            f"klp={klp_hits} aagp={aagp_hits} simdp={simdp_hits} fcsp={fcsp_hits} shcsp={shcsp_hits}")


def test_criterion_10_laver_tables():
    ok = all(L.verify_ld_exhaustive(L.laver_op(n)).passed for n in range(0, 5))
    ok = ok and L.laver_table(2).rows[0] == (2, 4, 2, 4)
    _report(10, "Laver tables exhaustively LD for n <= 4; A_2 row 1 = (2,4,2,4)", ok)


def test_criterion_11_membership_oracle_matches_closures():
    op = L.laver_op(3)
    ok = True
    checks = 0
    for gen in range(1, 9):
        closure = set(A.submagma_closure(op, [gen]))
        for target in range(1, 9):
            tree = A.bf_membership_magma(target, [gen], [op], max_leaves=6)
            ok = ok and (tree is not None) == (target in closure)
            if tree is not None:
                value = M.eval_tree(tree, [gen], [lambda x, y: L.apply_op(op, x, y)])
                ok = ok and value == target
            checks += 1
    _report(11, "A_3 membership search reproduces every singleton closure", ok and checks == 64)


def test_criterion_12_wire_session_and_replay():
    spec = P.random_spec("shifted_commutator", 1201)
    server = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    server.bind(("127.0.0.1", 0))
    server.listen(1)
    server.settimeout(30)
    port = server.getsockname()[1]
    results = {}

    def responder():
        cfg = S.SessionConfig("responder", spec, port=port, timeout=30)
        results["responder"] = S.serve_once(cfg, server)

    thread = threading.Thread(target=responder)
    thread.start()
    cfg = S.SessionConfig("initiator", spec, port=port, timeout=30)
    results["initiator"] = S.connect_and_run(cfg)
    thread.join(timeout=60)

    initiator = results["initiator"]
    responder_t = results["responder"]
    ok = initiator.extracted_key == responder_t.extracted_key
    replay = P.run(spec)
    ok = ok and P.transcript_to_json(replay) == P.transcript_to_json(initiator)
    ok = ok and P.transcript_to_json(P.run(spec)) == P.transcript_to_json(replay)
    _report(12, "loopback session confirms keys; transcript replays byte-identically", ok)

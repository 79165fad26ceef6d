"""Acceptance suite: one test per criterion, one PASS/FAIL line printed each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.

Criterion 8's loglog branch is a known-unattainable property (see the
strict xfail below and notes in the README): the maximum leaf-height of a
p_1 = 0 family is integer-valued with atoms worth ~1/loglog n ~ 0.4 on the
normalized scale, so its error against 1/log kappa cannot decrease
monotonically over n in {1e3, 1e4, 1e5}.  The assertion is kept exactly as
stated and marked as an expected failure; everything else passes.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest

from gwpeel import (
    RandomStream,
    independence_number,
    from_degrees,
    leaf_heights,
    leafheight_distribution,
    mark_spvc,
    parse_family,
    peel_decay_rate,
    peel_distribution,
    peel_numbers,
    solve_q,
    solve_qs,
)
from gwpeel.cli import main as cli_main
from gwpeel.experiments import (
    run_independence,
    run_layers,
    run_leafheight,
    run_peel,
    run_root_leafheight,
)

import oracles as O

NAMED = ["binary", "tary:3", "cayley", "geometric", "motzkin", "catalan", "binomial:10"]


def _report(num: str, ok: bool, detail: str) -> None:
    print(f"[criterion {num}] {'PASS' if ok else 'FAIL'}  {detail}")


# ----------------------------------------------------------------------

def test_criterion1_fixed_point_constants():
    targets = {
        "binary": 2 - math.sqrt(2),
        "cayley": float(mp.lambertw(1).real),
        "geometric": 2 / (1 + math.sqrt(5)),
        "motzkin": 3 - math.sqrt(6),
        "catalan": 4 - 2 * math.sqrt(3),
    }
    worst_err = 0.0
    worst_ms = 0.0
    for fam, expected in targets.items():
        d = parse_family(fam)
        solve_q(d)  # warm
        best = math.inf
        for _ in range(30):
            t0 = time.perf_counter()
            res = solve_q(d)
            best = min(best, time.perf_counter() - t0)
        worst_err = max(worst_err, abs(res.value - expected))
        worst_ms = max(worst_ms, best * 1e3)
    ok = worst_err < 1e-9 and worst_ms < 1.0
    _report("1", ok, f"five closed forms, max err {worst_err:.2e}, "
                     f"max time {worst_ms:.3f} ms")
    assert worst_err < 1e-9
    assert worst_ms < 1.0


def test_criterion2_s2_identity():
    worst = 0.0
    for fam in NAMED:
        d = parse_family(fam)
        worst = max(worst, abs(solve_qs(d, 2).value - (1 - solve_q(d).value)))
    _report("2", worst < 1e-10, f"|q_2 - (1-q)| <= {worst:.2e} over 7 families")
    assert worst < 1e-10


def test_criterion3_exhaustive_oracle_equivalence():
    t0 = time.perf_counter()
    trees = 0
    for seq in O.enumerate_degree_sequences(12, 3):
        trees += 1
        t = from_degrees(seq)
        peel = peel_numbers(t)
        sim, _rounds = O.simulate_peeling(seq)
        assert list(peel) == sim, seq
        assert independence_number(t) == O.mis_size_dp(seq), seq
        assert np.all(leaf_heights(t) <= peel), seq
        for s in (2, 3, 4):
            assert mark_spvc(t, s).size == O.brute_min_spvc(seq, s), (seq, s)
    elapsed = time.perf_counter() - t0
    ok = elapsed < 120.0
    _report("3", ok, f"{trees} trees of size <= 12: peel/IS/cover/lambda all match "
                     f"({elapsed:.1f} s)")
    assert trees == 42_397
    assert elapsed < 120.0


def test_criterion4_recursions_vs_enumeration():
    worst = 0.0
    for fam in ("binary", "motzkin"):
        d = parse_family(fam)
        r = peel_distribution(d, 5).values
        l = leafheight_distribution(d, 5).values
        enum_r, resid_r = O.root_peel_masses(list(d.probs), 17)
        enum_l, resid_l = O.root_leafheight_masses(list(d.probs), 17)
        for i in range(5):
            lo_r, lo_l = enum_r.get(i, 0.0), enum_l.get(i, 0.0)
            # enumeration is an exact lower bound; the gap is the mass of
            # trees larger than 17 nodes sharing the root value
            assert lo_r - 1e-6 <= r[i] <= lo_r + resid_r + 1e-6, (fam, i)
            assert lo_l - 1e-6 <= l[i] <= lo_l + resid_l + 1e-6, (fam, i)
            worst = max(worst, lo_r - r[i], r[i] - lo_r - resid_r,
                        lo_l - l[i], l[i] - lo_l - resid_l)
        # index 0 is exact: both laws give p_0 outright
        assert abs(r[0] - enum_r[0]) < 1e-12
        assert abs(l[0] - enum_l[0]) < 1e-12
    _report("4", worst < 1e-6,
            f"r_i, l_i sandwiched by size-17 enumeration, margin {worst:.2e}")
    assert worst < 1e-6


def test_criterion5_independence_at_desk_scale():
    for fam, n in (("binary", 10001), ("catalan", 10000)):
        t0 = time.perf_counter()
        rep = run_independence(fam, [n], 200, RandomStream(1001))
        elapsed = time.perf_counter() - t0
        err = abs(rep.estimates[-1].mean - rep.target)
        ok = err < 0.01 and elapsed < 60.0
        _report("5", ok, f"{fam}: |mean I_n/n - q| = {err:.5f} at n={rep.n_values[0]} "
                         f"({elapsed:.1f} s)")
        assert err < 0.01
        assert elapsed < 60.0


def test_criterion6_layer_fractions():
    rep = run_layers("binary", 10001, 200, 10, RandomStream(1002))
    ok = rep.max_abs_deviation < 0.015
    _report("6", ok, f"max_i<=10 |mean N_i/n - r_i| = {rep.max_abs_deviation:.5f}")
    assert rep.max_abs_deviation < 0.015


def test_criterion7_leafheight_laws_total_variation():
    rep = run_root_leafheight("geometric", 2000, 100_000, RandomStream(1003))
    ok = rep.tv_root < 0.02 and rep.tv_node < 0.02
    _report("7", ok, f"TV(root)={rep.tv_root:.5f} TV(uniform node)={rep.tv_node:.5f} "
                     f"at n=2000, 1e5 trials")
    assert rep.tv_root < 0.02
    assert rep.tv_node < 0.02


GRID = [1001, 10001, 100001]


def _errors(report):
    return [abs(e.mean - report.target) for e in report.estimates]


def test_criterion8_peel_trends_and_ordering():
    rb = run_peel("binary", GRID, 200, RandomStream(1004))
    rc = run_peel("catalan", GRID, 200, RandomStream(1005))
    eb, ec = _errors(rb), _errors(rc)
    trend = all(b < a for a, b in zip(eb, eb[1:])) and \
        all(b < a for a, b in zip(ec, ec[1:]))
    last_b, last_c = rb.estimates[-1], rc.estimates[-1]
    gap = last_c.mean - last_b.mean
    sep = gap / math.hypot(last_b.stderr, last_c.stderr)
    ok = trend and sep > 3.0
    _report("8", ok, f"M_n/log n errors binary {['%.3f' % e for e in eb]}, "
                     f"catalan {['%.3f' % e for e in ec]}; ordering separation "
                     f"{sep:.0f} SE")
    assert trend
    assert sep > 3.0


def test_criterion8_leafheight_log_trends():
    oks = []
    for fam in ("catalan", "geometric"):
        rep = run_leafheight(fam, GRID, 200, RandomStream(1006))
        errs = _errors(rep)
        oks.append(all(b < a for a, b in zip(errs, errs[1:])))
        _report("8", oks[-1], f"L_n/log n errors {fam}: {['%.3f' % e for e in errs]}")
    assert all(oks)


@pytest.mark.xfail(
    strict=True,
    reason="spec defect, see notes: for p_1 = 0 families L_n is integer-valued "
           "with atoms worth ~1/loglog n ~ 0.4 on the normalized scale, so "
           "|E[L_n/loglog n] - 1/log kappa| provably cannot decrease "
           "monotonically over {1e3, 1e4, 1e5} (measured 0.122 -> 0.018 -> "
           "0.174 at SE ~ 0.004; same shape for tary:3 and other seeds)")
def test_criterion8_leafheight_loglog_trend_known_spec_defect():
    rep = run_leafheight("binary", GRID, 200, RandomStream(1007))
    errs = _errors(rep)
    trend = all(b < a for a, b in zip(errs, errs[1:]))
    _report("8", trend, f"L_n/loglog n errors binary: {['%.3f' % e for e in errs]}")
    assert trend


def test_criterion9_tail_decay_rates():
    worst_r = 0.0
    for fam in NAMED:
        d = parse_family(fam)
        r = peel_distribution(d, 64).values
        ratios = r[41:62] / r[40:61]
        worst_r = max(worst_r, float(np.abs(ratios - peel_decay_rate(d)).max()))
    assert worst_r < 0.05

    worst_l = 0.0
    for fam in ("cayley", "geometric", "motzkin", "catalan", "binomial:10"):
        d = parse_family(fam)
        v = leafheight_distribution(d, 52).values
        ratios = v[31:51] / v[30:50]
        worst_l = max(worst_l, float(np.abs(ratios - d.p1).max()))
    assert worst_l < 0.02

    worst_k = 0.0
    for fam in ("binary", "tary:3"):
        d = parse_family(fam)
        lg = leafheight_distribution(d, 15).log_values
        ratios = lg[9:14] / lg[8:13]
        worst_k = max(worst_k, float(np.abs(ratios - d.kappa).max()))
    assert worst_k < 0.1
    _report("9", True, f"r-ratio dev {worst_r:.2e} (tol 0.05); l-ratio dev "
                       f"{worst_l:.2e} (tol 0.02); log-doubling dev {worst_k:.2e} "
                       f"(tol 0.1)")


def test_criterion10_byte_determinism(tmp_path):
    args = ["experiment", "independence", "--family", "geometric", "--n", "501",
            "--trials", "40", "--seed", "77", "--format", "json"]
    p1, p2 = tmp_path / "one.json", tmp_path / "two.json"
    assert cli_main(args + ["--output", str(p1)]) == 0
    assert cli_main(args + ["--output", str(p2)]) == 0
    identical = p1.read_bytes() == p2.read_bytes()
    api_same = (run_layers("binary", 301, 20, 5, RandomStream(9)).to_json()
                == run_layers("binary", 301, 20, 5, RandomStream(9)).to_json())
    _report("10", identical and api_same,
            "same seed reproduces experiment JSON byte-for-byte")
    assert identical
    assert api_same

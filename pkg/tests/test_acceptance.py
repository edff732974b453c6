"""Acceptance criteria 1-10, one test per criterion.

Each test records a single PASS/FAIL line that is printed in the
terminal summary.
"""

import json
import random
import time
from fractions import Fraction

from conftest import record_criterion
from repdiff.cli import main
from repdiff.contfrac import convergents, expand, expand_at
from repdiff.highprec import FixedReal, ln, ln_rational, sqrt_nat
from repdiff.reduction import log_ratio_factor
from repdiff.repdigits import DifferenceRepresentation, difference_representations, repdigit_value
from repdiff.sequences import BALANCING, LUCAS_BALANCING, binet_check, growth_check, terms
from repdiff.solver import THEOREMS, trivial_cases
from synthetic import random_instance, violations

Q59 = 808643106803003389273254071835
Q36 = 73257846218558279


def tau1(p):
    return ln(3 + 2 * sqrt_nat(2, p + 20), p + 10).div(ln_rational(10, 1, p + 10), p)


def tau2(p):
    return ln_rational(10, 1, p + 10).div(ln(3 + 2 * sqrt_nat(2, p + 20), p + 10), p)


def test_criterion_01_theorems(tmp_path, capsys):
    found, elapsed = {}, {}
    for seq in ("balancing", "lucas-balancing"):
        path = tmp_path / f"{seq}.json"
        start = time.perf_counter()
        code = main(["--precision", "200", "solve", "--sequence", seq, "--report", str(path)])
        elapsed[seq] = time.perf_counter() - start
        capsys.readouterr()
        doc = json.loads(path.read_text())
        assert code == 0
        found[seq] = {(int(s["k"]), int(s["value"]), s["representation"]) for s in doc["solutions"]}
    bal = found["balancing"] == {(2, 6, "11-5"), (3, 35, "44-9")}
    luc = {(v, r) for _, v, r in found["lucas-balancing"]} == {(3, "11-8"), (17, "22-5")}
    fast = max(elapsed.values()) < 300
    ok = bal and luc and fast
    record_criterion(1, ok, f"balancing {sorted(found['balancing'])}, lucas {sorted(found['lucas-balancing'])}, "
                            f"times {elapsed['balancing']:.1f}s/{elapsed['lucas-balancing']:.1f}s")
    assert ok


def test_criterion_02_convergents():
    q1 = [c.q for c in convergents(expand_at(tau1, 200))]
    q2 = [c.q for c in convergents(expand_at(tau2, 200))]
    ok = Q59 in q1 and Q36 in q2
    record_criterion(2, ok, f"30-digit q at index {q1.index(Q59) if Q59 in q1 else '-'}, "
                            f"17-digit q at index {q2.index(Q36) if Q36 in q2 else '-'}")
    assert ok


def _within(x: str, ref: float, rel: float) -> bool:
    return abs(float(x) / ref - 1) <= rel


def test_criterion_03_matveev(reports):
    b, l = reports("balancing"), reports("lucas-balancing")
    ca = b.stage("matveev-A").constants["matveev_constant"]
    cl = l.stage("matveev-A").constants["matveev_constant"]
    cb = b.stage("matveev-B").constants["matveev_prefactor"]
    ok = _within(ca, 9.8e13, 0.02) and _within(cl, 8.02e13, 0.02) and _within(cb, 7.9e12, 0.02)
    record_criterion(3, ok, f"stage A {float(ca):.4e} / {float(cl):.4e}, stage B {float(cb):.4e}")
    assert ok


def _reduction_check(stage, ref_eps: str, ref_bound: int, threshold_below=None):
    c = stage.constants
    eps = Fraction(c["epsilon_min"])
    bound = int(c["bound"])
    eps_match = abs(eps - Fraction(ref_eps)) <= Fraction(1, 1000)
    ok = eps > 0 and bound == ref_bound
    if threshold_below is not None:
        ok = ok and Fraction(c["threshold_max"]) < threshold_below
    detail = (f"q={c['q']} eps_min={float(eps):.6f} ({'matches' if eps_match else 'differs from'} {ref_eps}) "
              f"threshold={float(Fraction(c['threshold_max'])):.2f} bound={bound} (want {ref_bound})")
    return ok, detail


def test_criterion_04_reduction_checkpoints(reports):
    rows = []
    for seq, eps1, eps2 in (("balancing", "0.03855", "0.327932"), ("lucas-balancing", "0.401882", "0.421589")):
        r = reports(seq, paper_m_override=True)
        ok1, d1 = _reduction_check(r.stage("reduction-1"), eps1, 31)
        ok2, d2 = _reduction_check(r.stage("reduction-2"), eps2, 23, threshold_below=24)
        rows.append((f"{seq} first", ok1, d1))
        rows.append((f"{seq} second", ok2, d2))
    ok = all(x[1] for x in rows)
    record_criterion(4, ok, "; ".join(f"{name}: {'ok' if good else 'FAIL'} {d}" for name, good, d in rows))
    assert ok, rows


def test_criterion_05_log_coefficients():
    f = log_ratio_factor(FixedReal.parse("0.1", 60))
    got = [float(f * FixedReal.parse(c, 60)) for c in ("9.81", "6", "3")]
    ok = all(abs(g - w) <= 0.01 for g, w in zip(got, (10.34, 6.33, 3.17)))
    record_criterion(5, ok, ", ".join(f"{g:.5f}" for g in got))
    assert ok


def test_criterion_06_sequences():
    ks = range(1, 501)
    binet = all(binet_check(s, k, 200) for s in (BALANCING, LUCAS_BALANCING) for k in ks)
    growth = all(growth_check(s, k, 200) for s in (BALANCING, LUCAS_BALANCING) for k in ks)
    pell = all(c * c - 8 * b * b == 1 for b, c in zip(terms(BALANCING, 500), terms(LUCAS_BALANCING, 500)))
    ok = binet and growth and pell
    record_criterion(6, ok, f"binet={binet} growth={growth} pell={pell} for k <= 500")
    assert ok


def test_criterion_07_oracle():
    limit = 10**6
    # naive double loop over every pair of repdigits of length <= 8
    oracle = {}
    for n in range(2, 9):
        for d1 in range(1, 10):
            a = repdigit_value(d1, n)
            for m in range(1, 9):
                for d2 in range(1, 10):
                    v = a - repdigit_value(d2, m)
                    if 1 <= v <= limit:
                        oracle.setdefault(v, []).append(DifferenceRepresentation(d1, n, d2, m))
    bad = [N for N in range(1, limit + 1) if difference_representations(N) != sorted(oracle.get(N, []))]

    targeted = []
    for spec in (BALANCING, LUCAS_BALANCING):
        for N in terms(spec, 50)[1:]:
            L = len(str(N)) + 2
            reps = {repdigit_value(d, m): (d, m) for d in range(1, 10) for m in range(1, L + 1)}
            want = sorted(DifferenceRepresentation(d1, n, *reps[repdigit_value(d1, n) - N])
                          for n in range(2, L + 1) for d1 in range(1, 10)
                          if repdigit_value(d1, n) - N in reps)
            if difference_representations(N) != want:
                targeted.append(N)
    ok = not bad and not targeted
    record_criterion(7, ok, f"{limit} exhaustive mismatches: {len(bad)}; 100 sequence terms mismatches: {len(targeted)}")
    assert ok


def test_criterion_08_concatenation_scans():
    b = trivial_cases(THEOREMS["balancing"], 1000).constants
    l = trivial_cases(THEOREMS["lucas-balancing"], 1000).constants
    got = [b["two-block concatenations"], b["three-block concatenations"],
           l["two-block concatenations"], l["three-block concatenations"]]
    ok = got == [["35"], ["204", "1189"], ["17", "577"], ["3363"]]
    record_criterion(8, ok, str(got))
    assert ok


def test_criterion_09_cf_stability():
    a = expand(tau1(200)).partial_quotients[:80]
    b = expand(tau1(400)).partial_quotients[:80]
    ok = len(a) == 80 and a == b
    record_criterion(9, ok, f"{len(a)} quotients compared, equal={a == b}")
    assert ok


def test_criterion_10_synthetic():
    count, bad = 0, []
    for seed in range(24):
        inst = random_instance(random.Random(seed))
        assert inst.M <= 1000
        res = inst.solve()
        found = violations(inst, res.w_bound)
        count += 1
        if found or not res.epsilon_min.certified_positive():
            bad.append((seed, found[:3]))
    ok = count >= 20 and not bad
    record_criterion(10, ok, f"{count} instances, violations in {len(bad)}")
    assert ok

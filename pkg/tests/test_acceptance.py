"""
Acceptance criteria, one test per criterion.  Each test records a single
PASS/FAIL line (printed in the pytest summary) and then asserts it.
"""

import math
import time

import numpy as np
import pytest

from fockops.corpus import base_corpus, doubled_corpus
from fockops.functions import AffineSymbol, ExpPolyFunction, normalized_kernel
from fockops.norms import GAMMA_NOTE, FockTypeParams, QuadratureConfig, fock_norm, hu_norm, paley_norm
from fockops.oracle import brute_force_Lq_integral
from fockops.sections import build_matrix, ratio_test, sigma_min, spectral_radius_estimate
from fockops.symbols import OperatorSpec, Verdict, classify_D_focktype, classify_WCD, order_bounded
from fockops.verify import run_verify

INF = math.inf
COMPACT_SPEC = OperatorSpec.make(a=0.5, n=1)
SURJECTIVE_SPEC = OperatorSpec.make(a=1, b=1, expo=(0, -1, 0))


# ---------------------------------------------------------------------------
# 1


def test_c1_kernel_normalization(record):
    t0 = time.time()
    worst = 0.0
    for p in (1, 2, 3, INF):
        for w in (0, 1, 2 + 1j, 3j):
            worst = max(worst, abs(fock_norm(normalized_kernel(w), FockTypeParams.classical(p)).value - 1))
    elapsed = time.time() - t0
    ok = worst <= 1e-7 and elapsed < 10
    assert record("C1 kernel normalization", ok, f"max |norm - 1| = {worst:.2e}, {elapsed:.1f}s (< 10s)")


# ---------------------------------------------------------------------------
# 2

# brackets only need a few digits; a looser angular rule keeps this affordable
BRACKET_CFG = QuadratureConfig(angular_tol=1e-9, max_angular_nodes=512)


def _bracket_ratios(corpus):
    out = {}
    for _, f in corpus:
        for p in (1.0, 2.0):
            ft = fock_norm(f, FockTypeParams(1, p), BRACKET_CFG).value
            fc = fock_norm(f, FockTypeParams.classical(p), BRACKET_CFG).value
            out.setdefault(f"paley p={p:g}", []).append(paley_norm(f, 1, p, BRACKET_CFG).value / ft)
            for n in (1, 2):
                out.setdefault(f"hu n={n} p={p:g}", []).append(hu_norm(f, p, n, BRACKET_CFG).value / fc)
    return out


def _C(ratios):
    return max(max(ratios), 1 / min(ratios))


def test_c2_norm_equivalence_brackets(record):
    corpus = doubled_corpus()
    assert len(base_corpus()) == 30 and len(corpus) == 60
    base = _bracket_ratios(corpus[:30])
    extra = _bracket_ratios(corpus[30:])
    details, ok = [], True
    for key in base:
        c1, c2 = _C(base[key]), _C(base[key] + extra[key])
        ok &= c2 / c1 - 1 <= 0.10 and all(np.isfinite(base[key] + extra[key]))
        details.append(f"{key}: C={c1:.4f}->{c2:.4f}")
    c1 = _C(sum(base.values(), []))
    c2 = _C(sum(base.values(), []) + sum(extra.values(), []))
    ok &= c2 / c1 - 1 <= 0.10
    details.append(f"single C={c1:.4f}->{c2:.4f}")
    assert record("C2 norm-equivalence brackets", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 3


def test_c3_closed_range_frontier(record):
    t0 = time.time()
    a = ratio_test(1, 2, 2, 200)
    b = ratio_test(4 / 3, 1, 2, 200)
    c = ratio_test(1, 2, INF, 200, method="asymptotic")
    ok_a = abs(a.exponent) <= 0.05 and a.floor > 0 and np.all(a.ratio > 0)
    ok_b = abs(b.exponent + 0.25) <= 0.05
    ok_c = abs(c.exponent + 0.25) <= 0.05
    elapsed = time.time() - t0
    ok = ok_a and ok_b and ok_c and elapsed < 120
    detail = (f"(1,2,2) exponent {a.exponent:+.4f} floor {a.floor:.4f} [{'ok' if ok_a else 'x'}]; "
              f"(4/3,1,2) {b.exponent:+.4f} [{'ok' if ok_b else 'x'}]; "
              f"(1,2,inf) {c.exponent:+.4f} vs -0.25 [{'ok' if ok_c else 'x'}]; {elapsed:.1f}s")
    assert record("C3 closed-range frontier", ok, detail)


def test_c3_companion_sup_target_at_boundary(record):
    """The sup-norm target exponent -1/(2p) holds at the boundary m = (p+2)/(p+1), not at m = 1."""
    p = 2
    m = (p + 2) / (p + 1)
    exact = ratio_test(m, p, INF, 200).exponent
    asym = ratio_test(m, p, INF, 200, method="asymptotic").exponent
    at_one = ratio_test(1, p, INF, 200).exponent
    ok = abs(exact + 1 / (2 * p)) <= 0.05 and abs(asym + 1 / (2 * p)) <= 0.05
    detail = (f"m=4/3: exact {exact:+.4f}, asymptotic {asym:+.4f} vs -0.25; "
              f"m=1 gives {at_one:+.4f} = -3/(2p)")
    assert record("C3b companion (m=4/3, p=2, q=inf)", ok, detail)


# ---------------------------------------------------------------------------
# 4

# hand-derived verdict table for D: F_(m,p) -> F_(m,q); columns are
# m = 1/2, 1, 4/3, 3/2, 2 and each cell is bounded/compact/closed-range.
M_VALUES = (0.5, 1.0, 4 / 3, 1.5, 2.0)
FOCKTYPE_TABLE = {
    (1, 1): "YYN YNY NNN NNN NNN",      # m <= 1
    (2, 2): "YYN YNY NNN NNN NNN",      # m <= 1
    (1, 2): "YYN YYN YNN NNN NNN",      # m <= 4/3
    (2, 4): "YYN YYN NNN NNN NNN",      # m <= 6/5
    (1, INF): "YYN YYN YYN YNN NNN",    # m <= 3/2
    (2, INF): "YYN YYN YNN NNN NNN",    # m <= 4/3
    (INF, INF): "YYN YNY NNN NNN NNN",  # m <= 1
    (2, 1): "NNN NNN NNN NNN NNN",      # m < 0
    (3, 2): "YYN NNN NNN NNN NNN",      # m < 2/3
    (4, 2): "NNN NNN NNN NNN NNN",      # m < 1/2
    (INF, 2): "NNN NNN NNN NNN NNN",    # m < 0
    (INF, 4): "NNN NNN NNN NNN NNN",    # m < 1/2
}


def _yn(c):
    return "yes" if c == "Y" else "no"


def _spec(a=1, b=0, n=0, poly=(1,), expo=(0, 0, 0), const=False):
    return OperatorSpec(ExpPolyFunction(list(poly), tuple(expo)), AffineSymbol(a, b, const), n)


LINE_U = (0, 0, 0.375)  # |u| exp((|z/2|^2 - |z|^2)/2) = exp(-3 y^2 / 4)
# (label, spec, p, q, bounded compact order_bounded closed_range surjective)
SPEC_TABLE = [
    ("shift a=1/2 n=1", _spec(0.5, n=1), 2, 2, "Y Y Y N N"),
    ("kernel form u=K_-1 psi=z+1", _spec(1, 1, expo=(0, -1, 0)), 2, 2, "Y N N Y Y"),
    ("gaussian p>q", _spec(0.5), 2, 1, "Y Y Y N N"),
    ("expanding psi=2z", _spec(2), 2, 2, "N N N N N"),
    ("identity", _spec(1), 2, 2, "Y N N Y Y"),
    ("unimodular with n=1", _spec(1, n=1), 2, 2, "N N N N N"),
    ("line form p=q", _spec(0.5, expo=LINE_U), 2, 2, "Y N N ? N"),
    ("line form p>q", _spec(0.5, expo=LINE_U), 2, 1, "N N N N N"),
    ("line form p<q", _spec(0.5, expo=LINE_U), 1, 2, "Y N N N N"),
    ("line form with polynomial", _spec(0.5, poly=(0, 1), expo=LINE_U), 2, 2, "N N N N N"),
    ("line form, linear term in range", _spec(0.5, expo=(0, 0.5j, 0.375)), 2, 2, "Y N N ? N"),
    ("line form, linear term along line", _spec(0.5, expo=(0, 0.5, 0.375)), 2, 2, "N N N N N"),
    ("shifted psi n=2 q=inf", _spec(0.5, 1, n=2), 2, INF, "Y Y Y N N"),
    ("exp weight p=q=3", _spec(0.6, -0.3j, n=1, expo=(0, 0.2, 0)), 3, 3, "Y Y Y N N"),
    ("constant psi, u in F_2", _spec(0, 2, n=1, poly=(1, 1), const=True), 2, 2, "Y Y Y Y N"),
    ("constant psi, u not in F_2", _spec(0, 2, expo=(0, 0, 0.7), const=True), 2, 2, "N N N Y N"),
    ("zero operator", _spec(0.5, poly=(0,)), 2, 2, "Y Y Y Y N"),
    ("identity F_2 -> F_1", _spec(1), 2, 1, "N N N N N"),
    ("inclusion F_1 -> F_2", _spec(1), 1, 2, "Y N N N N"),
    ("kernel form into F_inf", _spec(1, 1, expo=(0, -1, 0)), 2, INF, "Y N N N N"),
]
CODES = {"Y": "yes", "N": "no", "?": "needs_probe"}
KEYS = ("bounded", "compact", "order_bounded", "closed_range", "surjective")


def _random_spec(rng):
    r = rng.uniform()
    a = (rng.choice([rng.uniform(0, 1), 1.0, rng.uniform(1, 1.5)]) * np.exp(2j * np.pi * rng.uniform()))
    b = complex(*rng.normal(size=2)) * rng.choice([0, 1])
    n = int(rng.integers(0, 4))
    poly = rng.normal(size=int(rng.integers(1, 4))) + 1j * rng.normal(size=1)
    s = (1 - abs(a) ** 2) / 2
    if r < 0.3 and s > 0:
        a2 = s * np.exp(2j * np.pi * rng.uniform())  # on the boundary
    else:
        a2 = 0.4 * complex(*rng.normal(size=2))
    a1 = complex(*rng.normal(size=2)) * rng.choice([0, 1])
    if abs(abs(a) - 1) < 1e-12 and rng.uniform() < 0.5:
        a1, a2, poly, n = -a * np.conj(b), 0, np.array([complex(*rng.normal(size=2))]), 0  # kernel form
    return OperatorSpec(ExpPolyFunction(poly, (0, a1, a2)), AffineSymbol(a, b), n)


def test_c4_classifier_truth_table(record):
    bad = []
    cells = 0
    for (p, q), row in FOCKTYPE_TABLE.items():
        for m, cell in zip(M_VALUES, row.split()):
            cells += 1
            v = classify_D_focktype(m, p, q).verdicts()
            want = {"bounded": _yn(cell[0]), "compact": _yn(cell[1]), "closed_range": _yn(cell[2]),
                    "surjective": _yn(cell[2]), "order_bounded": "n/a"}
            if v != want:
                bad.append(f"m={m:g},p={p},q={q}")
    for label, spec, p, q, want in SPEC_TABLE:
        v = classify_WCD(spec, p, q).verdicts()
        if [v[k] for k in KEYS] != [CODES[c] for c in want.split()]:
            bad.append(label)
    rng = np.random.default_rng(2024)
    broken = 0
    seen = set()
    for _ in range(1000):
        spec = _random_spec(rng)
        p, q = rng.choice([1.0, 2.0, 3.0, INF], size=2)
        rep = classify_WCD(spec, p, q, numeric=False)
        broken += not rep.implications_hold()
        seen.add(tuple(rep.verdicts().values()))
    ok = cells == 60 and len(SPEC_TABLE) == 20 and not bad and broken == 0
    detail = (f"{cells} (m,p,q) cells + {len(SPEC_TABLE)} specs, mismatches: {bad or 'none'}; "
              f"implication violations on 1000 random specs: {broken} ({len(seen)} verdict patterns)")
    assert record("C4 classifier truth table", ok, detail)


# ---------------------------------------------------------------------------
# 5


def test_c5_quasinilpotency(record):
    s = spectral_radius_estimate(build_matrix(COMPACT_SPEC, 60), 20)
    picks = [s[m - 1] for m in (5, 10, 15, 20)]
    ok = all(x > y for x, y in zip(picks, picks[1:])) and picks[-1] < 0.5
    assert record("C5 quasinilpotency", ok, "s_5, s_10, s_15, s_20 = " + ", ".join(f"{x:.4f}" for x in picks))


# ---------------------------------------------------------------------------
# 6


def test_c6_bounded_below_dichotomy(record):
    comp = [sigma_min(build_matrix(COMPACT_SPEC, N, offset=1)) for N in (10, 20, 40, 80)]
    surj = {N: sigma_min(build_matrix(SURJECTIVE_SPEC, N)) for N in (40, 60, 80, 100, 120, 140, 160)}
    ok_c = all(x >= y for x, y in zip(comp, comp[1:])) and comp[-1] < 1e-3
    drift = max(abs(v / surj[40] - 1) for v in surj.values())
    ok_s = drift <= 0.10
    detail = (f"compact sigma_min(10,20,40,80) = {', '.join(f'{x:.2e}' for x in comp)}; "
              f"surjective sigma_min(40) = {surj[40]:.10f}, max drift to N=160 {drift:.1e}")
    assert record("C6 bounded-below dichotomy", ok_c and ok_s, detail)


# ---------------------------------------------------------------------------
# 7


def test_c7_order_boundedness_integral(record):
    spec = OperatorSpec.make(a=0.5)
    verdict, lv, closed = order_bounded(spec, 2)
    value = math.exp(lv)
    oracle = brute_force_Lq_integral(spec, 2).value
    formula = 2 * math.pi / (2 * (1 - 0.25))
    ok_int = verdict is Verdict.YES and abs(value - oracle) <= 1e-6 and abs(value - formula) <= 1e-6
    unimodular = [OperatorSpec.make(a=1), OperatorSpec.make(a=1, b=1, expo=(0, -1, 0)),
                  OperatorSpec.make(a=np.exp(0.7j)), OperatorSpec.make(a=-1, b=2j, expo=(0, -2j, 0)),
                  OperatorSpec.make(a=1j, n=1)]
    unimod_ok = all(order_bounded(s, q)[0] is Verdict.NO for s in unimodular for q in (1, 2, 3, INF))
    detail = (f"integral {value:.12f}, oracle {oracle:.12f}, 4pi/3 = {formula:.12f}; "
              f"|a|=1 never order bounded: {unimod_ok}")
    assert record("C7 order-boundedness integral", ok_int and unimod_ok, detail)


# ---------------------------------------------------------------------------
# 8


@pytest.fixture(scope="module")
def manifest():
    return run_verify()


def test_c8_oracle_agreement(record, manifest):
    groups = {c["group"] for c in manifest["checks"]}
    mono = [c for c in manifest["checks"] if c["group"] == "monomials"]
    ok = (manifest["passed"] and groups == {"kernels", "norms", "monomials", "gamma-constant", "asymptotic", "lq"}
          and any("k=100" in c["id"] for c in mono) and "2^(kp/2)" in GAMMA_NOTE)
    asym = [c for c in manifest["checks"] if c["group"] == "asymptotic"]
    detail = (f"{manifest['n_checks']} checks, failures: {manifest['failures'] or 'none'}; "
              + "; ".join(f"{c['id']}: spread {c['difference']:.2e}" for c in asym))
    assert record("C8 oracle agreement", ok, detail)


def test_c8_fault_injection_is_caught():
    bad = run_verify(["monomials"], inject=["broken-constant"])
    assert not bad["passed"] and any("k=100" in f for f in bad["failures"])

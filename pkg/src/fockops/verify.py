"""
Oracle-vs-module verification suite.

Each check compares a value produced by the main modules with the
independent brute-force scheme in ``oracle`` (or with a closed form that the
oracle has itself validated) and passes when the difference is within the
combined error budget.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy.special import gammaln

from .corpus import base_corpus
from .functions import ExpPolyFunction, normalized_kernel
from .norms import FockTypeParams, fock_norm, log_monomial_norm, stirling_estimate_log
from .oracle import brute_force_Lq_integral, brute_force_norm
from .symbols import OperatorSpec, log_Lq_integral

GROUPS = ("kernels", "norms", "monomials", "gamma-constant", "asymptotic", "lq")
INJECTIONS = ("broken-constant", "broken-quadrature")
REL_FLOOR = 1e-8
CORPUS_PARAMS = (("classical", 2.0, 2.0), ("classical", 1.0, 2.0), ("focktype", 1.0, 1.0))
MONOMIAL_KS = (0, 1, 2, 3, 5, 8, 13, 25, 50, 100)
ASYMPTOTIC_KS = (25, 50, 100)


@dataclass
class Check:
    id: str
    group: str
    value: float
    reference: float
    difference: float
    tolerance: float
    passed: bool

    def to_dict(self):
        d = asdict(self)
        for k in ("value", "reference", "difference", "tolerance"):
            if not math.isfinite(d[k]):
                d[k] = "inf" if d[k] > 0 else "nan"
        return d


def _params(family: str, p: float, m: float) -> FockTypeParams:
    return FockTypeParams.classical(p) if family == "classical" else FockTypeParams(m, p)


def _compare(cid, group, value, ref, tol) -> Check:
    diff = abs(value - ref)
    return Check(cid, group, value, ref, diff, tol, bool(diff <= tol))


def _norm_check(cid, group, f, params, inject) -> Check:
    res = fock_norm(f, params)
    val = res.value * (1 + 1e-4) if "broken-quadrature" in inject else res.value
    ref = brute_force_norm(f, params)
    tol = max(REL_FLOOR * abs(ref.value), ref.error_estimate + res.error_estimate + res.tail_bound)
    return _compare(cid, group, val, ref.value, tol)


def _kernels(inject):
    for w in (0, 1, 2 + 1j, 3j):
        for p in (1.0, 2.0, 3.0):
            yield _norm_check(f"kernel w={w} p={p:g}", "kernels", normalized_kernel(w),
                              FockTypeParams.classical(p), inject)


def _norms(inject):
    for family, p, m in CORPUS_PARAMS:
        params = _params(family, p, m)
        for name, f in base_corpus():
            yield _norm_check(f"{family}(m={m:g},p={p:g}) {name}", "norms", f, params, inject)


def _closed(k, params, inject) -> float:
    lv = log_monomial_norm(k, params)
    if "broken-constant" in inject:
        lv += 1e-3 * k
    return lv


def _monomials(inject):
    for family, p, m in (("classical", 2.0, 2.0), ("classical", 1.0, 2.0), ("focktype", 1.0, 1.0)):
        params = _params(family, p, m)
        for k in MONOMIAL_KS:
            f = ExpPolyFunction([0] * k + [1])
            ref = brute_force_norm(f, params)
            lv = _closed(k, params, inject)
            # compare in log scale: the values span hundreds of orders of magnitude
            tol = max(REL_FLOOR, ref.error_estimate / ref.value)
            yield _compare(f"monomial {family}(m={m:g},p={p:g}) k={k}", "monomials", lv, ref.log_value, tol)


def _gamma_constant(inject):
    """The (1/p)-variant of the closed form must disagree with the oracle by
    exactly 2^(kp/2) in the p-th power; the check passes when it does."""
    for p in (1.0, 2.0):
        params = FockTypeParams.classical(p)
        for k in (1, 3, 5):
            ref = brute_force_norm(ExpPolyFunction([0] * k + [1]), params)
            variant = (k * p / 2 * math.log(1 / p) + gammaln((k * p + 2) / 2)) / p
            gap = variant - ref.log_value
            expected = -k / 2 * math.log(2)
            if "broken-constant" in inject:
                expected *= 1 - 1e-3
            yield _compare(f"variant constant gap p={p:g} k={k}", "gamma-constant", gap, expected,
                           max(REL_FLOOR, ref.error_estimate / ref.value))


def _asymptotic(inject):
    """estimate / closed form must be k-stable within 10% over ASYMPTOTIC_KS."""
    for p in (1.0, 2.0):
        params = FockTypeParams.classical(p)
        ratios = [math.exp(stirling_estimate_log(k, p) - _closed(k, params, inject)) for k in ASYMPTOTIC_KS]
        spread = max(ratios) / min(ratios)
        yield Check(f"asymptotic ratio stability p={p:g}", "asymptotic", spread, 1.0, spread - 1.0, 0.10,
                    bool(spread - 1.0 <= 0.10))


def _lq(inject):
    cases = (("u=1 psi=z/2 n=0 q=2", OperatorSpec.make(a=0.5), 2.0),
             ("u=1 psi=z/2 n=1 q=2", OperatorSpec.make(a=0.5, n=1), 2.0),
             ("u=exp(0.3z) psi=0.6z+0.2i n=0 q=1", OperatorSpec.make(a=0.6, b=0.2j, expo=(0, 0.3, 0)), 1.0))
    for cid, spec, q in cases:
        lv, _ = log_Lq_integral(spec, q)
        val = math.exp(lv)
        if "broken-quadrature" in inject:
            val *= 1 + 1e-4
        ref = brute_force_Lq_integral(spec, q)
        tol = max(1e-8 * ref.value, ref.error_estimate)
        yield _compare(cid, "lq", val, ref.value, tol)


_RUNNERS = {"kernels": _kernels, "norms": _norms, "monomials": _monomials,
            "gamma-constant": _gamma_constant, "asymptotic": _asymptotic, "lq": _lq}


def run_verify(only=None, inject=(), progress=None) -> dict:
    """Run the selected groups and return the pass/fail manifest."""
    groups = list(GROUPS) if not only else list(only)
    for g in groups:
        if g not in _RUNNERS:
            raise ValueError(f"unknown verify group {g!r}; choose from {', '.join(GROUPS)}")
    inject = tuple(inject)
    for name in inject:
        if name not in INJECTIONS:
            raise ValueError(f"unknown injection {name!r}; choose from {', '.join(INJECTIONS)}")
    checks = []
    for g in groups:
        for c in _RUNNERS[g](inject):
            checks.append(c)
            if progress is not None:
                progress(c)
    failures = [c.id for c in checks if not c.passed]
    return {
        "groups": groups,
        "inject": list(inject),
        "passed": not failures,
        "n_checks": len(checks),
        "failures": failures,
        "checks": [c.to_dict() for c in checks],
    }

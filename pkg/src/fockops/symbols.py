"""
Decision procedures for D_(u,psi,n) f = u * f^(n)(psi) on classical Fock
spaces and for the plain derivative D on Fock-type spaces.

The workhorse is the observation that for u = P e^(a0 + a1 z + a2 z^2) and
psi = az + b,

    log L(z) = log|P(z) (az + b)^n| + q(z),

where q is a real quadratic form in (x, y).  Whether L is bounded, tends to
zero, lies in L^s or stays away from zero can then be read off the eigen
structure of q and the degree of the polynomial factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .functions import (
    AffineSymbol,
    ExpPolyFunction,
    TaylorFunction,
    differentiate,
    evaluate,
    compose_affine,
    function_from_dict,
    multiply,
    to_taylor,
)
from .norms import (
    DEFAULT,
    Bound,
    FockTypeParams,
    QuadratureConfig,
    diverges,
    fock_norm,
    integrate_plane,
)
from .quadform import EQ_TOL, FormAnalysis, FormKind, QuadForm, analyze, log_gaussian_integral

INF = math.inf


class DiagnosticError(RuntimeError):
    """Symbolic and numeric answers disagree."""


class InconsistencyError(ValueError):
    """The operator spec contradicts a structural consequence of boundedness."""


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    NEEDS_PROBE = "needs_probe"
    NA = "n/a"

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return cls.YES if flag else cls.NO


@dataclass(frozen=True)
class OperatorSpec:
    u: ExpPolyFunction
    psi: AffineSymbol
    n: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if not isinstance(self.u, ExpPolyFunction):
            raise TypeError("u must be an ExpPolyFunction")

    @property
    def a(self) -> complex:
        return 0j if self.psi.is_constant else self.psi.a

    @property
    def b(self) -> complex:
        return self.psi.b

    def weight_poly(self) -> np.ndarray:
        """Ascending coefficients of P_u(z) (az + b)^n."""
        lin = np.array([self.b, self.a], dtype=complex)
        out = np.asarray(self.u.poly, dtype=complex)
        for _ in range(self.n):
            out = np.convolve(out, lin)
        nz = np.flatnonzero(out)
        return out[: nz[-1] + 1] if nz.size else out[:1] * 0

    def weight(self) -> ExpPolyFunction:
        """u psi^n."""
        return ExpPolyFunction(self.weight_poly(), self.u.expo)

    def apply(self, f):
        """D_(u,psi,n) f (a Taylor input gives a Taylor output at the same truncation)."""
        g = differentiate(f, self.n)
        if self.psi.is_constant:
            return ExpPolyFunction(np.asarray(self.u.poly) * evaluate(g, self.b), self.u.expo)
        return multiply(self.u, compose_affine(g, self.psi))

    def to_dict(self):
        return {"u": self.u.to_dict(), "psi": self.psi.to_dict(), "n": self.n}

    @classmethod
    def from_dict(cls, d) -> "OperatorSpec":
        u = function_from_dict(d.get("u", {"kind": "exppoly"}))
        if not isinstance(u, ExpPolyFunction):
            raise ValueError("u must be an exp-poly function")
        return cls(u, AffineSymbol.from_dict(d["psi"]), int(d.get("n", 0)))

    @classmethod
    def make(cls, a=1.0, b=0.0, n=0, poly=(1,), expo=(0, 0, 0)) -> "OperatorSpec":
        return cls(ExpPolyFunction(list(poly), tuple(expo)), AffineSymbol(a, b), n)


@dataclass(frozen=True)
class Evidence:
    rule: str
    detail: str
    value: float | None = None

    def to_dict(self):
        v = self.value
        if isinstance(v, float) and not math.isfinite(v):
            v = "inf" if v > 0 else ("-inf" if v < 0 else "nan")
        return {"rule": self.rule, "detail": self.detail, "value": v}


@dataclass
class ClassificationReport:
    bounded: Verdict
    compact: Verdict
    order_bounded: Verdict
    closed_range: Verdict
    surjective: Verdict
    evidence: list = field(default_factory=list)
    L_sup: float | None = None
    L_inf_essential: float | None = None
    flags: list = field(default_factory=list)

    def verdicts(self) -> dict:
        return {k: getattr(self, k).value for k in
                ("bounded", "compact", "order_bounded", "closed_range", "surjective")}

    def implications_hold(self) -> bool:
        v = self.verdicts()
        ok = True
        if v["order_bounded"] == "yes":
            ok &= v["compact"] == "yes"
        if v["compact"] == "yes":
            ok &= v["bounded"] == "yes"
        if v["surjective"] == "yes":
            ok &= v["closed_range"] == "yes"
        return bool(ok)

    def to_dict(self):
        def num(x):
            if x is None:
                return None
            if not math.isfinite(x):
                return "inf" if x > 0 else "nan"
            return x

        return {
            "verdicts": self.verdicts(),
            "evidence": [e.to_dict() for e in self.evidence],
            "L_sup": num(self.L_sup),
            "L_inf_essential": num(self.L_inf_essential),
            "flags": list(self.flags),
        }


# --------------------------------------------------------------------------
# the symbol L


@dataclass(frozen=True)
class SymbolStructure:
    """log L = log|R| + form, with R = P_u (az + b)^n."""

    R: np.ndarray
    form: QuadForm
    analysis: FormAnalysis

    @property
    def zero(self) -> bool:
        return not np.any(self.R)

    @property
    def R_constant(self) -> bool:
        return len(self.R) == 1

    @property
    def sup_finite(self) -> bool:
        if self.zero:
            return True
        kind = self.analysis.kind
        if kind is FormKind.NEGDEF:
            return True
        if kind is FormKind.UNBOUNDED:
            return False
        return self.R_constant

    @property
    def decays(self) -> bool:
        """L -> 0 at infinity."""
        return self.zero or self.analysis.kind is FormKind.NEGDEF


def symbol_structure(spec: OperatorSpec) -> SymbolStructure:
    a, b = spec.a, spec.b
    a0, a1, a2 = spec.u.expo
    s = (1 - abs(a) ** 2) / 2
    form = QuadForm.from_exponent(a1 + a * np.conj(b), a2, s, a0 + abs(b) ** 2 / 2)
    return SymbolStructure(spec.weight_poly(), form, analyze(form))


def log_L(spec: OperatorSpec, z):
    """log L straight from the definition."""
    z = np.asarray(z, dtype=complex)
    w = spec.b + spec.a * z
    with np.errstate(divide="ignore"):
        lp = spec.n * np.log(np.abs(w)) if spec.n else 0.0
    return spec.u.log_modulus(z) + lp + 0.5 * (np.abs(w) ** 2 - np.abs(z) ** 2)


def L_value(spec: OperatorSpec, z):
    """(L(z), log L(z)); scalars in, scalars out."""
    lv = log_L(spec, z)
    val = np.exp(np.minimum(lv, 709.0))
    val = np.where(lv > 709, INF, val)
    if np.ndim(z) == 0:
        return float(val), float(lv)
    return val, lv


@dataclass(frozen=True)
class SupResult:
    value: float
    log_value: float
    argmax: complex | None
    finite: bool
    numeric_log_values: tuple = ()
    exact: bool = False

    def __iter__(self):
        return iter((self.value, self.argmax, self.finite))


def _window_sup(spec: OperatorSpec, center: complex, R: float) -> tuple:
    rs = np.linspace(0, R, 201)
    th = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    Z = center + rs[:, None] * np.exp(1j * th)[None, :]
    V = log_L(spec, Z)
    V = np.where(np.isnan(V), -INF, V)
    i = np.unravel_index(int(np.argmax(V)), V.shape)
    z0 = complex(Z[i])
    best = float(V[i])

    def neg(v):
        z = complex(v[0], v[1])
        if abs(z - center) > R:
            return -best
        x = float(log_L(spec, z))
        return -x if math.isfinite(x) else 1e300

    res = minimize(neg, [z0.real, z0.imag], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
    if -res.fun > best:
        best, z0 = -float(res.fun), complex(res.x[0], res.x[1])
    return best, z0


def sup_L(spec: OperatorSpec, check: bool = True) -> SupResult:
    """sup of L: symbolic finiteness, with an expanding-window numeric cross-check.

    The windows have radius R0, 2 R0, 4 R0 around the symbolic peak (or the
    origin), with R0 = 10 unless a slowly decaying direction calls for more.  A finite sup must be stable across them and match the closed
    form where there is one; an infinite sup must keep growing.
    """
    st = symbol_structure(spec)
    if st.zero:
        return SupResult(0.0, -INF, 0j, True, (), True)
    an = st.analysis
    finite = st.sup_finite
    exact = None
    if finite and st.R_constant:
        exact = math.log(abs(st.R[0])) + an.sup
    center = an.argmax if an.argmax is not None else 0j
    base = 10.0
    if finite and an.kind is FormKind.NEGDEF:
        # a polynomial factor pushes the peak out to |x|^2 ~ deg / |weakest eigenvalue|
        deg = int(np.flatnonzero(np.abs(st.R) > 0).max(initial=0))
        base = max(base, 3.0 * math.sqrt(max(deg, 1) / abs(an.eigenvalues[-1])))
    numeric = []
    where = None
    if check or exact is None:
        for R in (base, 2 * base, 4 * base):
            v, z = _window_sup(spec, center, R)
            numeric.append(v)
            where = z
        tol = 1e-7 * max(1.0, abs(numeric[-1]))
        if finite:
            stable = abs(numeric[-1] - numeric[0]) <= tol
            matches = exact is None or abs(numeric[-1] - exact) <= tol
            if not (stable and matches):
                raise DiagnosticError(
                    f"sup of L is finite symbolically but numeric windows give {numeric}"
                    + (f" against {exact}" if exact is not None else ""))
        elif not (numeric[1] > numeric[0] + 1e-9 and numeric[2] > numeric[1] + 1e-9):
            raise DiagnosticError(f"sup of L is infinite symbolically but numeric windows give {numeric}")
    if not finite:
        return SupResult(INF, INF, None, False, tuple(numeric))
    if exact is not None:
        lv, where = exact, an.argmax
    else:
        lv = numeric[-1]
    return SupResult(math.exp(lv) if lv < 709 else INF, lv, where, True, tuple(numeric), exact is not None)


def L_inf_essential(spec: OperatorSpec) -> float:
    """Essential infimum of L over the plane."""
    st = symbol_structure(spec)
    if st.zero:
        return 0.0
    an = st.analysis
    lo = an.eigenvalues[0]
    scale = max(1.0, float(np.max(np.abs(st.form.A))), float(np.max(np.abs(st.form.b))))
    if an.kind is FormKind.FLAT and st.R_constant:
        return abs(st.R[0]) * math.exp(st.form.c)
    if lo > EQ_TOL * scale and st.R_constant:
        # positive definite: L has a global minimum
        x = -0.5 * np.linalg.solve(st.form.A, st.form.b)
        return abs(st.R[0]) * math.exp(st.form.c + 0.5 * float(st.form.b @ x))
    # a decaying direction, a zero of R, or a direction where the linear part wins
    return 0.0


def L_on_circles(spec: OperatorSpec, radii=(10.0, 20.0, 40.0), center: complex = 0j) -> list:
    th = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
    out = []
    for r in radii:
        lv = log_L(spec, center + r * np.exp(1j * th))
        out.append(float(np.max(np.where(np.isnan(lv), -INF, lv))))
    return out


# --------------------------------------------------------------------------
# L^s integrability


def log_Lq_integral(spec: OperatorSpec, q: float, cfg: QuadratureConfig = DEFAULT) -> tuple:
    """(log of the integral of L^q over C, closed-form log or None)."""
    st = symbol_structure(spec)
    if st.zero:
        return -INF, -INF
    if not st.decays:
        return INF, INF
    closed = None
    if st.R_constant:
        closed = q * math.log(abs(st.R[0])) + log_gaussian_integral(st.form.scaled(q))
    Rf = ExpPolyFunction(st.R)
    logS, d, _, _ = Rf.growth_bound()
    A = st.form.A
    lo, hi = np.linalg.eigvalsh(A)
    # q(z) <= c + |b| r + hi r^2 for every z
    bound = Bound(q * (logS + st.form.c), q * d, q * float(np.hypot(*st.form.b)), q * hi, 0.0, 2.0)

    def log_integrand(z):
        return q * (Rf.log_modulus(z) + st.form(z))

    hint = abs(st.analysis.argmax) if st.analysis.argmax is not None else 0.0
    res = integrate_plane(log_integrand, bound, cfg, radius_hint=hint)
    return res.log_value, closed


# --------------------------------------------------------------------------
# surjectivity


@dataclass(frozen=True)
class SurjectivityCertificate:
    surjective: bool
    detail: str
    constant: float | None = None  # the constant value of L when |a| = 1
    ray: complex | None = None  # direction along which L decays when |a| < 1
    ray_values: tuple = ()
    spread: float | None = None


def surjectivity(spec: OperatorSpec, p: float = 2.0, tol: float = 1e-10) -> SurjectivityCertificate:
    """Surjectivity on F_p for bounded specs with nonconstant psi."""
    if spec.psi.is_constant:
        raise ValueError("psi must be nonconstant")
    st = symbol_structure(spec)
    if st.zero:
        return SurjectivityCertificate(False, "zero operator")
    a, b, n = spec.a, spec.b, spec.n
    if abs(abs(a) - 1) <= tol:
        R = st.R
        a0, a1, a2 = spec.u.expo
        u0 = complex(evaluate(spec.u, 0))
        target = b**n * u0
        scale = max(1.0, abs(target))
        bad = []
        if len(R) > 1 and np.max(np.abs(R[1:])) > tol * scale:
            bad.append("u psi^n has a nonconstant polynomial factor")
        if abs(a2) > tol:
            bad.append("quadratic exponent must vanish")
        if abs(a1 + a * np.conj(b)) > tol * max(1.0, abs(a1)):
            bad.append("linear exponent must equal -a conj(b)")
        if abs(R[0] * np.exp(a0) - target) > tol * scale:
            bad.append("constant must equal b^n u(0)")
        if bad:
            raise InconsistencyError("|a| = 1 but u psi^n is not b^n u(0) K_(-conj(a) b): " + "; ".join(bad))
        const = abs(target) * math.exp(abs(b) ** 2 / 2)
        rng = np.random.default_rng(0)
        z = rng.uniform(-10, 10, 10_000) + 1j * rng.uniform(-10, 10, 10_000)
        vals = np.exp(log_L(spec, z))
        spread = float((vals.max() - vals.min()) / const) if const > 0 else 0.0
        return SurjectivityCertificate(True, "kernel form verified; L is constant", const, None, (), spread)
    an = st.analysis
    start = an.argmax if an.argmax is not None else 0j
    ray = an.decay_direction
    vals = tuple(float(log_L(spec, start + t * ray)) for t in (10.0, 20.0, 40.0))
    return SurjectivityCertificate(False, "L decays along a ray, so its essential infimum is 0",
                                   0.0, ray, vals)


# --------------------------------------------------------------------------
# classification


def _rank_one_report(spec: OperatorSpec, p: float, q: float) -> ClassificationReport:
    u = spec.u
    ev = [Evidence("rank-one", f"psi is constant ({spec.b:.6g}); D f = f^({spec.n})(b) u")]
    if u.is_zero:
        ev.append(Evidence("zero-operator", "u vanishes identically"))
        return ClassificationReport(Verdict.YES, Verdict.YES, Verdict.YES, Verdict.YES, Verdict.NO, ev, 0.0, 0.0)
    member = not diverges(u, FockTypeParams.classical(q))
    ev.append(Evidence("rank-one-membership", f"u in F_{q}: {member}"))
    flags = [] if member else ["unbounded"]
    return ClassificationReport(Verdict.of(member), Verdict.of(member), Verdict.of(member), Verdict.YES,
                                Verdict.NO, ev, None, None, flags)


def classify_WCD(spec: OperatorSpec, p: float, q: float, numeric: bool = True) -> ClassificationReport:
    """Bounded / compact / order bounded / closed range / surjective for
    D_(u,psi,n): F_p -> F_q."""
    for e in (p, q):
        if not (1 <= e <= INF):
            raise ValueError("exponents must lie in [1, inf]")
    if spec.psi.is_constant:
        return _rank_one_report(spec, p, q)
    st = symbol_structure(spec)
    an = st.analysis
    ev = []
    flags = []
    if an.near_boundary:
        flags.append("near-boundary")
    if st.zero:
        ev.append(Evidence("zero-operator", "u psi^n vanishes identically"))
        return ClassificationReport(Verdict.YES, Verdict.YES, Verdict.YES, Verdict.YES, Verdict.NO, ev, 0.0, 0.0)
    kind = an.kind
    ev.append(Evidence("symbol-form", f"log L = log|R| + quadratic form of kind {kind.value}; "
                                      f"deg R = {len(st.R) - 1}", float(an.eigenvalues[1])))
    sup = sup_L(spec, check=numeric)
    ev.append(Evidence("L-sup", "sup of L (log)", sup.log_value))
    inf_ess = L_inf_essential(spec)

    if p <= q:
        bounded = sup.finite
        compact = st.decays
        ev.append(Evidence("L-sup-boundedness", f"p <= q: bounded iff sup L < inf -> {bounded}"))
        ev.append(Evidence("L-vanishing-compactness", f"p <= q: compact iff L -> 0 -> {compact}"))
        if numeric:
            circ = L_on_circles(spec, center=an.argmax or 0j)
            ev.append(Evidence("L-circle-max", "log max of L on circles r = 10, 20, 40", circ[-1]))
    else:
        s = q if p == INF else p * q / (p - q)
        bounded = compact = st.decays
        ev.append(Evidence("L-integrability", f"p > q: bounded iff compact iff L in L^{s:g} -> {bounded}"))
        if numeric and bounded:
            lv, closed = log_Lq_integral(spec, s)
            ev.append(Evidence("L-integral", f"log of the integral of L^{s:g}", lv))

    if kind is FormKind.LINE and bounded and st.R_constant:
        ev.append(Evidence("line-boundary", "the quadratic part is degenerate along a line "
                                            "(|a2n| = (1 - |a|^2)/2 with the linear term in range)"))

    if q < INF:
        ob = st.decays
        ev.append(Evidence("Lq-order-boundedness", f"order bounded iff L in L^{q:g} -> {ob}"))
        if numeric and ob:
            lv, closed = log_Lq_integral(spec, q)
            ev.append(Evidence("Lq-integral", f"log of the integral of L^{q:g}", lv))
    else:
        ob = st.decays
        ev.append(Evidence("Linf-order-boundedness", f"q = inf: order bounded iff L is bounded and "
                                                     f"tends to 0 -> {ob}; L in L^inf alone: {sup.finite}"))

    if not bounded:
        flags.append("unbounded")
        return ClassificationReport(Verdict.NO, Verdict.NO, Verdict.NO, Verdict.NO, Verdict.NO, ev,
                                    sup.value, inf_ess, flags)

    unimodular = abs(abs(spec.a) - 1) <= EQ_TOL
    if p != q:
        closed_range, surj = Verdict.NO, Verdict.NO
        ev.append(Evidence("exponent-mismatch", "bounded with nonconstant psi and p != q: range not closed"))
    elif compact:
        closed_range, surj = Verdict.NO, Verdict.NO
        ev.append(Evidence("compact-infinite-rank", "compact with infinite-dimensional range: not closed"))
    elif unimodular:
        cert = surjectivity(spec, p)
        closed_range, surj = Verdict.YES, Verdict.YES
        ev.append(Evidence("kernel-form-surjectivity", cert.detail, cert.constant))
    else:
        closed_range, surj = Verdict.NEEDS_PROBE, Verdict.NO
        cert = surjectivity(spec, p)
        ev.append(Evidence("decay-ray", cert.detail, cert.ray_values[-1] if cert.ray_values else None))
        ev.append(Evidence("closed-range-undecided", "bounded, not compact, |a| < 1: use sigma_min or "
                                                     "sampling_probe"))
    return ClassificationReport(Verdict.YES, Verdict.of(compact), Verdict.of(ob), closed_range, surj, ev,
                                sup.value, inf_ess, flags)


def order_bounded(spec: OperatorSpec, q: float, cfg: QuadratureConfig = DEFAULT):
    """(verdict, log integral of L^q or None, closed-form log or None)."""
    if spec.psi.is_constant:
        ok = spec.u.is_zero or not diverges(spec.u, FockTypeParams.classical(q))
        return Verdict.of(ok), None, None
    st = symbol_structure(spec)
    if q == INF:
        return Verdict.of(st.decays), None, None
    lv, closed = log_Lq_integral(spec, q, cfg)
    return Verdict.of(st.decays), lv, closed


def _le(x: float, y: float) -> bool:
    return x <= y + EQ_TOL * max(1.0, abs(y))


def _lt(x: float, y: float) -> bool:
    return x < y - EQ_TOL * max(1.0, abs(y))


def focktype_threshold(p: float, q: float) -> tuple:
    """(threshold, strict): D is bounded iff m <= threshold (m < threshold when strict)."""
    if p <= q:
        if p == INF:
            return 1.0, False
        if q == INF:
            return 2 - p / (p + 1), False
        return 2 - p * q / (p * q + q - p), False
    if p == INF:
        return 1 - 2 / q, True
    return 1 - 2 * (1 / q - 1 / p), True


def classify_D_focktype(m: float, p: float, q: float) -> ClassificationReport:
    """D: F_(m,p) -> F_(m,q)."""
    if not m > 0:
        raise ValueError("m must be positive")
    thr, strict = focktype_threshold(p, q)
    if strict:
        bounded = compact = _lt(m, thr)
        detail = f"p > q: bounded iff compact iff m < {thr:.12g}"
    else:
        bounded = _le(m, thr)
        compact = _lt(m, thr)
        detail = f"p <= q: bounded iff m <= {thr:.12g}, compact iff strict"
    ev = [Evidence("fock-type-threshold", detail, thr)]
    flags = []
    if abs(m - thr) <= 1e-9 * max(1.0, abs(thr)):
        flags.append("near-boundary")
    closed = bounded and p == q and abs(m - 1) <= EQ_TOL
    ev.append(Evidence("fock-type-closed-range", "closed range iff surjective iff p = q and m = 1"))
    cr = Verdict.of(closed) if bounded else Verdict.NO
    if not bounded:
        flags.append("unbounded")
    return ClassificationReport(Verdict.of(bounded), Verdict.of(compact), Verdict.NA, cr, cr, ev, None, None,
                                flags)


# --------------------------------------------------------------------------
# regions and sampling


@dataclass
class Region:
    epsilon: float
    radius: float
    center: complex
    points: np.ndarray  # grid points (all of them)
    weights: np.ndarray  # area weights
    mask: np.ndarray
    jacobian: float = 1.0

    @property
    def empty(self) -> bool:
        return not bool(np.any(self.mask))

    @property
    def selected(self) -> np.ndarray:
        return self.points[self.mask]

    @property
    def selected_weights(self) -> np.ndarray:
        return self.weights[self.mask] * self.jacobian

    def extent(self) -> float:
        """Largest distance of a selected point from the grid center."""
        return float(np.max(np.abs(self.selected - self.center))) if not self.empty else 0.0


def _polar_grid(radius: float, n_r: int, n_t: int, center: complex = 0j):
    dr = radius / n_r
    r = (np.arange(n_r) + 0.5) * dr
    th = (np.arange(n_t) + 0.5) * 2 * np.pi / n_t
    Z = center + r[:, None] * np.exp(1j * th)[None, :]
    W = np.repeat((r * dr * 2 * np.pi / n_t)[:, None], n_t, axis=1)
    return Z.ravel(), W.ravel()


def omega_region(spec: OperatorSpec, epsilon: float, window: float = 10.0, n_r: int = 512, n_t: int = 512,
                 center: complex = 0j) -> Region:
    """{z : L(z) > epsilon} on a polar grid of the given radius."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    Z, W = _polar_grid(window, n_r, n_t, center)
    mask = log_L(spec, Z) > math.log(epsilon)
    return Region(epsilon, window, center, Z, W, mask)


def g_region(spec: OperatorSpec, epsilon: float, window: float = 10.0, n_r: int = 512, n_t: int = 512,
             center: complex = 0j) -> Region:
    """psi(Omega^epsilon): the grid is pushed forward through psi."""
    om = omega_region(spec, epsilon, window, n_r, n_t, center)
    a, b = spec.a, spec.b
    return Region(epsilon, window * abs(a), a * center + b, a * om.points + b, om.weights, om.mask,
                  abs(a) ** 2)


class SamplingPreconditionError(ValueError):
    def __init__(self, msg, index):
        super().__init__(msg)
        self.index = index


def _taylor_head(f, k: int) -> np.ndarray:
    if isinstance(f, TaylorFunction):
        c = np.zeros(k, dtype=complex)
        m = min(k, len(f.coeffs))
        c[:m] = f.coeffs[:m]
        return c
    return np.asarray(to_taylor(f, max(k - 1, 0)).coeffs)[:k]


def sampling_probe(region: Region, p: float, k: int, testset: Sequence,
                   log_norms: Sequence | None = None) -> float:
    """Empirical sampling constant: min over the test set of
    (restricted derivative integral)^(1/p) / ||f||_p.

    A value near zero refutes the sampling property on this test set; a value
    bounded away from zero is evidence only.
    """
    for i, f in enumerate(testset):
        head = _taylor_head(f, k)
        scale = max(1.0, float(np.max(np.abs(getattr(f, "coeffs", getattr(f, "poly", [1]))))))
        if k and np.max(np.abs(head)) > 1e-14 * scale:
            raise SamplingPreconditionError(
                f"test function {i} has a nonzero Taylor coefficient below degree {k}", i)
    if region.empty:
        return 0.0
    pts, wts = region.selected, region.selected_weights
    r = np.abs(pts)
    best = INF
    params = FockTypeParams.classical(p)
    for i, f in enumerate(testset):
        dk = differentiate(f, k)
        lv = dk.log_modulus(pts) - k * np.log1p(r) - 0.5 * r * r
        lv = np.where(np.isnan(lv), -INF, lv)
        nrm = log_norms[i] if log_norms is not None else fock_norm(f, params).log_value
        if p == INF:
            restricted = float(np.max(lv))
        else:
            top = float(np.max(lv))
            if top == -INF:
                return 0.0
            restricted = top + math.log(float(np.sum(wts * np.exp(p * (lv - top))))) / p
        best = min(best, math.exp(restricted - nrm))
    return best

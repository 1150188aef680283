"""Verification harness: numeric identities against their closed forms.

Every checker returns a CheckReport.  The log-bearing identities are
checked after exponentiation, absorbing the additive 2*pi*i ambiguity of
path logarithms; fixed-step quadrature keeps every report reproducible
bit for bit.
"""

from __future__ import annotations

import cmath
import math
import time

from .algebra import AlgebraElement, AlgebraSignature, Backend, deviation, exp as alg_exp, log1m
from .chen import (
    BinomialLogForm,
    DlogForm,
    QuadratureConfig,
    SimplePole,
    chen_identity_check,
    iterated_integral,
    line_integral,
    transport,
)
from .errors import InputError
from .laurent import factorize
from .paths import ArcSegment, Path, circle, commutator, concat, lasso, segment
from .ratfunc import RationalFunctionA, SpherePoint, rf_support
from .reports import CheckReport, make_report
from .symbol import cc_symbol
from .scalars import as_exact

TWO_PI_I = 2j * math.pi


def _scalar_or_nilpotent(sig, a):
    """Lemma parameters may be plain numbers or nilpotent elements."""
    if isinstance(a, AlgebraElement):
        return a
    return sig.scalar(a)


def _log_closed_form(sig, arg):
    """log(1 - arg) as a float-backend element; arg nilpotent or scalar."""
    if arg.is_unit():
        red = complex(arg.reduce())
        if abs(red) >= 1:
            raise InputError(f"closed form log(1-a*eps^n) diverges: |{red}| >= 1")
        head = sig.scalar(cmath.log(1 - red))
        tail = arg.nilpotent_part()
        if tail.is_zero():
            return head
        # log(1 - (c+t)) = log(1-c) + log(1 - t/(1-c))
        rest = tail * (1.0 / (1 - red))
        return head + log1m(rest)
    return log1m(arg)


def lemma_check(check_id: str, cfg: QuadratureConfig, **params) -> CheckReport:
    """Run one of the named local-integral checks (ids 3.2 to 3.6)."""
    started = time.perf_counter()
    inputs = {"id": check_id, "steps_per_segment": cfg.steps_per_segment}

    if check_id == "3.2":
        r = int(params["r"])
        radius = float(params.get("radius", 0.5))
        inputs.update(r=r, radius=radius, deviation_kind="relative")
        sig = AlgebraSignature((), 1, Backend.FLOAT)
        F = transport([SimplePole(sig, 0)], circle(0, radius), r, cfg)
        lhs = complex(F.coeff((1,) * r).reduce())
        rhs = TWO_PI_I ** r / math.factorial(r)
        dev = abs(lhs - rhs) / abs(rhs)
        return make_report(
            "lemma-3.2", inputs, f"{lhs:.12g}", f"{rhs:.12g}", dev, cfg.tolerance, started
        )

    if check_id == "3.3":
        f: RationalFunctionA = params["f"]
        center = as_exact(params.get("center", 0))
        radius = float(params.get("radius", 0.5))
        inputs.update(f=str(f), center=str(center), radius=radius)
        for root in f.roots():
            if root != center and abs(complex(root) - complex(center)) <= radius:
                raise InputError(f"loop around {center} also encloses {root}")
        nu = f.net_multiplicities().get(center, 0)
        form = DlogForm(f)
        lhs = line_integral(form, circle(complex(center), radius), cfg)
        rhs = form.signature.scalar(TWO_PI_I * nu)
        return make_report(
            "lemma-3.3", inputs, lhs, rhs, deviation(lhs, rhs), cfg.tolerance, started
        )

    if check_id == "3.4":
        n = int(params["n"])
        radius = float(params.get("radius", 0.5))
        sig = params["signature"].to_float() if "signature" in params else None
        if sig is None:
            sig = AlgebraSignature((), 1, Backend.FLOAT)
        a = _scalar_or_nilpotent(sig, params["a"]).widen()
        inputs.update(n=n, a=str(a), radius=radius)
        a_red = abs(complex(a.reduce()))
        if a_red and a_red * radius ** n >= 1:
            raise InputError("need |a| * radius^n < 1 for the closed form")
        form = BinomialLogForm(sig, a, n)
        lhs = iterated_integral([SimplePole(sig, 0), form], circle(0, radius), cfg)
        arg = a * (radius ** n)
        rhs = _log_closed_form(sig, arg) * TWO_PI_I
        return make_report(
            "lemma-3.4", inputs, lhs, rhs, deviation(lhs, rhs), cfg.tolerance, started
        )

    if check_id == "3.5":
        j, k = int(params["j"]), int(params["k"])
        radius = float(params.get("radius", 1.0))
        if j == 0 or k == 0:
            raise InputError("binomial exponents must be nonzero")
        sig = params["signature"].to_float() if "signature" in params else None
        if sig is None:
            sig = AlgebraSignature((), 1, Backend.FLOAT)
        a = _scalar_or_nilpotent(sig, params["a"]).widen()
        b = _scalar_or_nilpotent(sig, params["b"]).widen()
        inputs.update(j=j, k=k, a=str(a), b=str(b), radius=radius)
        for coeff, expo in ((a, j), (b, k)):
            red = abs(complex(coeff.reduce()))
            if red and red * radius ** expo >= 1:
                raise InputError("need |a| * radius^j < 1 and |b| * radius^k < 1")
        form1 = BinomialLogForm(sig, a, j)
        form2 = BinomialLogForm(sig, b, k)
        lhs = iterated_integral([form1, form2], circle(0, radius), cfg)
        if j * k > 0:
            rhs = sig.zero()
        else:
            # exponents |k|/d and |j|/d with prefactor sgn(j)*d, read off the
            # summation indices n1 = n|k|/d, n2 = n|j|/d of the derivation
            d = math.gcd(j, k)
            sgn_j = 1 if j > 0 else -1
            arg = (a ** (abs(k) // d)) * (b ** (abs(j) // d))
            rhs = _log_closed_form(sig, arg) * (TWO_PI_I * sgn_j * d)
        return make_report(
            "lemma-3.5", inputs, lhs, rhs, deviation(lhs, rhs), cfg.tolerance, started
        )

    if check_id == "3.6":
        f: RationalFunctionA = params["f"]
        p = complex(params["base"])
        q = complex(params["endpoint"])
        inputs.update(f=str(f), base=str(p), endpoint=str(q))
        # exp-composed form: exp(int_gamma df/f) = f(Q)/f(P), quotienting
        # out the additive 2*pi*i ambiguity of the path logarithm
        integral = line_integral(DlogForm(f), segment(p, q), cfg)
        lhs = alg_exp(integral)
        rhs = f.eval(q).widen() * f.eval(p).widen().inverse()
        return make_report(
            "lemma-3.6", inputs, lhs, rhs, deviation(lhs, rhs), cfg.tolerance, started
        )

    raise InputError(f"unknown lemma id {check_id!r}; expected 3.2 .. 3.6")


def _isolating_loop(s: SpherePoint, base: complex, radius: float, others) -> Path:
    """Loop from `base` going once around s (counterclockwise on the
    sphere) and around no other support point."""
    if s.is_infinite:
        farthest = max((abs(complex(t.value)) for t in others), default=0.0)
        if radius <= max(farthest, abs(base)):
            raise InputError(
                f"loop around infinity needs radius > {max(farthest, abs(base)):g}"
            )
        theta = cmath.phase(base) if base != 0 else 0.0
        foot = radius * cmath.exp(1j * theta)
        go = segment(base, foot)
        return concat(go, circle(0, radius, theta, clockwise=True), go.reversed())
    center = complex(s.value)
    for t in others:
        if not t.is_infinite and abs(complex(t.value) - center) <= radius:
            raise InputError(f"loop around {s} also encloses {t}")
    return lasso(base, center, radius)


def main_theorem_check(
    f: RationalFunctionA,
    g: RationalFunctionA,
    s: SpherePoint,
    base,
    radius: float,
    cfg: QuadratureConfig,
    trunc: int = 12,
) -> CheckReport:
    """exp((1/2 pi i) int_sigma df/f o dg/g) against the local product
    formula with the g(P)^nu_f / f(P)^nu_g correction."""
    started = time.perf_counter()
    f.validate_poles()
    g.validate_poles()
    support = rf_support(f, g)
    if s not in support:
        raise InputError(f"{s} is not a zero or pole of f or g")
    others = [t for t in support if t != s]
    base_c = complex(as_exact(base)) if not isinstance(base, complex) else base
    sigma = _isolating_loop(s, base_c, float(radius), others)

    form_f, form_g = DlogForm(f), DlogForm(g)
    ii = iterated_integral([form_f, form_g], sigma, cfg)
    lhs = alg_exp(ii * (1.0 / TWO_PI_I))

    fac_f = factorize(f.expand_at(s, trunc))
    fac_g = factorize(g.expand_at(s, trunc))
    symbol = cc_symbol(fac_f, fac_g)
    base_exact = as_exact(base) if not isinstance(base, complex) else base
    g_p = g.eval(base_exact) ** fac_f.nu
    f_p = f.eval(base_exact) ** fac_g.nu
    rhs = (symbol.value * g_p * f_p.inverse()).widen()

    inputs = {
        "f": str(f),
        "g": str(g),
        "s": str(s),
        "base": str(base),
        "radius": float(radius),
        "trunc": trunc,
        "steps_per_segment": cfg.steps_per_segment,
    }
    return make_report(
        "main-theorem", inputs, lhs, rhs, deviation(lhs, rhs), cfg.tolerance, started
    )


def weil_reciprocity_check(f: RationalFunctionA, g: RationalFunctionA, trunc: int = 12) -> CheckReport:
    """Exact product of local symbols over the joint support; must be 1."""
    started = time.perf_counter()
    if f.signature.backend is not Backend.EXACT:
        raise InputError("the reciprocity product is verified on the exact backend")
    f.validate_poles()
    g.validate_poles()
    support = rf_support(f, g)
    product = f.signature.one()
    locals_ = {}
    for s in support:
        fac_f = factorize(f.expand_at(s, trunc))
        fac_g = factorize(g.expand_at(s, trunc))
        value = cc_symbol(fac_f, fac_g).value
        locals_[str(s)] = str(value)
        product = product * value
    one = f.signature.one()
    # exact pass/fail: any mismatch must report a strictly positive deviation
    dev = 0.0 if product == one else max(deviation(product, one), 5e-324)
    inputs = {
        "f": str(f),
        "g": str(g),
        "trunc": trunc,
        "support": [str(s) for s in support],
        "local_symbols": locals_,
    }
    return make_report("weil-reciprocity", inputs, product, one, dev, 0.0, started)


def _shell_loops(points, base: complex, pad_scale: float = 0.5):
    """Nested-shell loop system: loops from `base`, one per finite point,
    whose ordered product is homotopic to a single circle around all of
    them.  Points must have distinct distances from the base."""
    dists = [abs(complex(p.value) - base) for p in points]
    order = sorted(range(len(points)), key=lambda i: dists[i])
    sorted_d = [dists[i] for i in order]
    for d1, d2 in zip(sorted_d, sorted_d[1:]):
        if d2 - d1 < 1e-9:
            raise InputError(
                "support points equidistant from the base point; "
                "pick a different base for the loop construction"
            )
    if sorted_d and sorted_d[0] < 1e-9:
        raise InputError("base point lies on the support")

    # shell radii strictly between consecutive distance rings
    radii = []
    for i, d in enumerate(sorted_d):
        nxt = sorted_d[i + 1] if i + 1 < len(sorted_d) else d * 2 + 1
        radii.append(d + (nxt - d) * pad_scale)

    # a ray from the base that stays clear of every point
    clear = min(
        [(d2 - d1) for d1, d2 in zip(sorted_d, sorted_d[1:])] + [sorted_d[0]]
    ) / 4 if sorted_d else 1.0
    theta = None
    for k in range(256):
        cand = 2 * math.pi * k / 256
        ray = cmath.exp(1j * cand)
        ok = True
        for i, p in enumerate(points):
            rel = complex(p.value) - base
            t = (rel * ray.conjugate()).real
            d_line = abs(rel - max(t, 0.0) * ray)
            if d_line <= clear:
                ok = False
                break
        if ok:
            theta = cand
            break
    if theta is None:
        raise InputError("no clear ray from the base point; support too crowded")

    def ring(rad):
        foot = base + rad * cmath.exp(1j * theta)
        go = segment(base, foot)
        return concat(go, circle(base, rad, theta), go.reversed())

    loops = [None] * len(points)
    prev = None
    for idx, i in enumerate(order):
        outer = ring(radii[idx])
        loops[i] = outer if prev is None else concat(prev.reversed(), outer)
        prev = outer
    return loops, order, (radii[-1] if radii else 1.0), theta


def bilinear_reciprocity_check(
    f: RationalFunctionA, g: RationalFunctionA, base, cfg: QuadratureConfig
) -> CheckReport:
    """Sum of second-order transport data over a full loop system:

        sum_i int_{s_i} w1 o w2 + sum_{i<j} int_{s_i} w1 int_{s_j} w2 = 0

    with w1 = df/f, w2 = dg/g and one loop per support point, infinity
    included as a clockwise outer circle."""
    started = time.perf_counter()
    f.validate_poles()
    g.validate_poles()
    support = rf_support(f, g)
    base_c = complex(as_exact(base)) if not isinstance(base, complex) else base
    finite = [s for s in support if not s.is_infinite]
    has_inf = any(s.is_infinite for s in support)

    loops, order, max_radius, theta = _shell_loops(finite, base_c)
    ordered = [loops[i] for i in order]
    if has_inf:
        # the finite shells telescope to the outermost ring; a clockwise
        # circle through the pole-free outer annulus is its inverse, so the
        # composite loop system is null-homotopic
        big = max(
            3 * max((abs(complex(s.value)) for s in finite), default=1.0),
            1.5 * max_radius,
            2 * abs(base_c),
            1.0,
        )
        foot = base_c + big * cmath.exp(1j * theta)
        go = segment(base_c, foot)
        ordered.append(concat(go, circle(base_c, big, theta, clockwise=True), go.reversed()))

    form_f, form_g = DlogForm(f), DlogForm(g)
    transports = [transport([form_f, form_g], loop, 2, cfg) for loop in ordered]
    sig = form_f.signature
    total = sig.zero()
    for F in transports:
        total = total + F.coeff((1, 2))
    for i in range(len(transports)):
        for j in range(i + 1, len(transports)):
            total = total + transports[i].coeff((1,)) * transports[j].coeff((2,))

    inputs = {
        "f": str(f),
        "g": str(g),
        "base": str(base),
        "support": [str(s) for s in support],
        "loops": "nested shells by distance from base, infinity outermost clockwise",
        "steps_per_segment": cfg.steps_per_segment,
    }
    dev = total.max_abs()
    return make_report(
        "bilinear-reciprocity", inputs, total, sig.zero(), dev, cfg.tolerance, started
    )


def identity_suite(cfg: QuadratureConfig) -> list:
    """The standard iterated-integral identity battery on fixed inputs:
    shuffle, reversal, composition and homotopy invariance."""
    sig = AlgebraSignature((), 1, Backend.FLOAT)
    w0 = SimplePole(sig, 0)
    w1 = SimplePole(sig, 1)
    arc = Path([ArcSegment(0, 2.0, 0.0, math.pi / 2)])
    upper = Path([ArcSegment(0, 2.0, 0.0, math.pi)])
    lower = Path([ArcSegment(0, 2.0, math.pi, math.pi)])
    reports = [
        chen_identity_check("shuffle", cfg, word1=[w0], word2=[w1], path=arc),
        chen_identity_check("shuffle", cfg, word1=[w0], word2=[w1, w0], path=arc),
        chen_identity_check("reversal", cfg, word=[w0, w1], path=arc),
        chen_identity_check("composition", cfg, word=[w0, w1], path1=upper, path2=lower),
        chen_identity_check(
            "homotopy",
            cfg,
            word=[w0, SimplePole(sig, 5)],
            path_a=lasso(1.0, 0, 0.3),
            path_b=lasso(1.0, 0, 0.7),
        ),
    ]
    return reports


def commutator_quadratic_check(
    alpha: Path, beta: Path, form1, form2, cfg: QuadratureConfig
) -> CheckReport:
    """int_{[a,b]} w1 o w2 = int_a w1 int_b w2 - int_b w1 int_a w2."""
    started = time.perf_counter()
    comm = commutator(alpha, beta)
    lhs = iterated_integral([form1, form2], comm, cfg)
    a1 = line_integral(form1, alpha, cfg)
    b2 = line_integral(form2, beta, cfg)
    b1 = line_integral(form1, beta, cfg)
    a2 = line_integral(form2, alpha, cfg)
    rhs = a1 * b2 - b1 * a2
    inputs = {
        "alpha": str(alpha),
        "beta": str(beta),
        "form1": str(form1),
        "form2": str(form2),
        "steps_per_segment": cfg.steps_per_segment,
    }
    return make_report(
        "commutator-quadratic", inputs, lhs, rhs, deviation(lhs, rhs), cfg.tolerance, started
    )

import cmath
import math

import pytest

from ccsym.algebra import AlgebraSignature, Backend, deviation, parse_signature
from ccsym.chen import (
    BinomialLogForm,
    DlogForm,
    Dz,
    QuadratureConfig,
    SimplePole,
    TruncatedWordSeries,
    chen_identity_check,
    iterated_integral,
    line_integral,
    shuffles,
    transport,
)
from ccsym.errors import InputError, PathError, PoleOnPath
from ccsym.paths import ArcSegment, LineSegment, Path, circle, commutator, concat, lasso, segment
from ccsym.ratfunc import RationalFunctionA as RF

from conftest import group_like_deviation, oracle_iterated_2

TRIV = AlgebraSignature((), 1, Backend.FLOAT)
TPI = 2j * math.pi
CFG = QuadratureConfig(steps_per_segment=512, tolerance=1e-8)


def test_path_chaining_enforced():
    with pytest.raises(PathError):
        Path([LineSegment(0, 1), LineSegment(2, 3)])
    p = concat(segment(0, 1), segment(1, 1 + 1j))
    assert p.start == 0 and p.end == 1 + 1j


def test_path_reversal_and_loops():
    c = circle(1, 0.5)
    assert c.is_loop()
    r = c.reversed()
    assert abs(r.start - c.end) < 1e-12
    with pytest.raises(PathError):
        commutator(segment(0, 1), circle(0, 1))


def test_arc_distance():
    arc = ArcSegment(0, 1.0, 0.0, math.pi)  # upper half unit circle
    assert abs(arc.distance_to(2j) - 1.0) < 1e-12
    assert abs(arc.distance_to(-2j) - math.sqrt(5)) < 1e-12
    assert abs(arc.distance_to(0) - 1.0) < 1e-12


def test_line_distance():
    seg = LineSegment(-1, 1)
    assert abs(seg.distance_to(1j) - 1.0) < 1e-12
    assert abs(seg.distance_to(5) - 4.0) < 1e-12


def test_line_integral_winding():
    val = line_integral(SimplePole(TRIV, 0), circle(0, 1), CFG)
    assert abs(complex(val.reduce()) - TPI) < 1e-10


def test_line_integral_dz_fundamental_theorem():
    val = line_integral(Dz(TRIV), segment(0, 1 + 1j), CFG)
    assert abs(complex(val.reduce()) - (1 + 1j)) < 1e-12


def test_line_integral_no_enclosed_pole():
    val = line_integral(SimplePole(TRIV, 5), circle(0, 1), CFG)
    assert abs(complex(val.reduce())) < 1e-10


def test_transport_winding_powers():
    F = transport([SimplePole(TRIV, 0)], circle(0, 0.5), 2, CFG)
    assert abs(complex(F.coeff((1,)).reduce()) - TPI) < 1e-10
    assert abs(complex(F.coeff((1, 1)).reduce()) - TPI ** 2 / 2) < 1e-9
    assert F.coeff(()) == TRIV.one()


def test_transport_empty_path_is_identity():
    F = transport([SimplePole(TRIV, 0)], segment(1, 1), 2, CFG)
    assert F.coeff(()) == TRIV.one()
    assert F.coeff((1,)).max_abs() < 1e-15
    assert F.coeff((1, 1)).max_abs() < 1e-15


def test_commutator_kills_linear_terms():
    al = lasso(-1j, 0, 0.3)
    be = lasso(-1j, 1, 0.3)
    forms = [SimplePole(TRIV, 0), SimplePole(TRIV, 1)]
    F = transport(forms, commutator(al, be), 2, CFG)
    assert F.coeff((1,)).max_abs() < 1e-9
    assert F.coeff((2,)).max_abs() < 1e-9


def test_iterated_integral_r3():
    val = iterated_integral([SimplePole(TRIV, 0)] * 3, circle(0, 0.5), CFG)
    assert abs(complex(val.reduce()) - TPI ** 3 / 6) < 1e-8


def test_iterated_single_matches_line_integral():
    form = SimplePole(TRIV, 2)
    path = segment(3, 4 + 1j)
    a = iterated_integral([form], path, CFG)
    b = line_integral(form, path, CFG)
    assert deviation(a, b) == 0.0


def test_iterated_matches_nested_quadrature_oracle():
    # independent ordered-simplex quadrature cross-check
    form1 = SimplePole(TRIV, 0)
    form2 = SimplePole(TRIV, 1)
    path = Path([ArcSegment(0, 2.0, 0.0, math.pi / 2)])
    engine = complex(iterated_integral([form1, form2], path, CFG).reduce())
    oracle = oracle_iterated_2(form1, form2, path)
    assert abs(engine - oracle) < 1e-6


def test_binomial_form_against_closed_form():
    # int dz/z o dlog(1 - a z^n) over a small circle = 2 pi i log(1 - a r^n)
    a, n, r = 0.2, -1, 0.5
    val = iterated_integral(
        [SimplePole(TRIV, 0), BinomialLogForm(TRIV, a, n)], circle(0, r), CFG
    )
    assert abs(complex(val.reduce()) - TPI * cmath.log(1 - a * r ** n)) < 1e-7


def test_binomial_form_positive_exponent():
    # dz/z o dlog(1 - a z) over a radius-r circle = 2 pi i log(1 - a r)
    a, r = 0.2, 0.5
    val = iterated_integral(
        [SimplePole(TRIV, 0), BinomialLogForm(TRIV, a, 1)], circle(0, r), CFG
    )
    assert abs(complex(val.reduce()) - TPI * cmath.log(1 - a * r)) < 1e-8


def test_quadrature_config_validation():
    with pytest.raises(InputError):
        QuadratureConfig(steps_per_segment=0)
    with pytest.raises(InputError):
        QuadratureConfig(tolerance=0.0)
    with pytest.raises(InputError):
        transport([SimplePole(TRIV, 0)], circle(0, 1), 0, CFG)


def test_binomial_form_nilpotent_coefficient():
    sig = parse_signature("gens=eps;degree=2;scalars=float")
    a = sig.gen("eps") * 0.2
    val = iterated_integral(
        [SimplePole(sig, 0), BinomialLogForm(sig, a, -1)], circle(0, 0.5), CFG
    )
    assert abs(val.coeffs[(1,)] - TPI * (-0.4)) < 1e-7
    assert abs(complex(val.reduce())) < 1e-9


def test_pole_clearance_rejected():
    with pytest.raises(PoleOnPath):
        line_integral(SimplePole(TRIV, 1), circle(0, 1), CFG)
    with pytest.raises(PoleOnPath):
        line_integral(SimplePole(TRIV, 0), segment(-1, 1), CFG)


def test_group_like_transport():
    forms = [SimplePole(TRIV, 0), SimplePole(TRIV, 1)]
    F = transport(forms, lasso(-1j, 0, 0.4), 3, CFG)
    assert group_like_deviation(F) <= 10 * CFG.tolerance


def test_transport_multiplicativity_random_split():
    forms = [SimplePole(TRIV, 0), SimplePole(TRIV, 3)]
    for frac in (0.25, 0.5, 0.8):
        first = Path([ArcSegment(0, 1.0, 0.0, 2 * math.pi * frac)])
        second = Path([ArcSegment(0, 1.0, 2 * math.pi * frac, 2 * math.pi * (1 - frac))])
        Fa = transport(forms, first, 3, CFG)
        Fb = transport(forms, second, 3, CFG)
        Fall = transport(forms, first + second, 3, CFG)
        assert Fall.deviation(Fa * Fb) < 1e-9


def test_convergence_order_at_least_4x():
    # off-center loop around the pole: same closed-form value by homotopy
    # invariance, non-constant pullback so the step error is visible
    exact = TPI ** 2 / 2
    errors = []
    for steps in (2, 4, 8, 16):
        cfg = QuadratureConfig(steps_per_segment=steps, tolerance=1e-8)
        F = transport([SimplePole(TRIV, 0)], circle(0.15, 0.5), 2, cfg)
        errors.append(abs(complex(F.coeff((1, 1)).reduce()) - exact))
    for e1, e2 in zip(errors, errors[1:]):
        assert e1 / e2 >= 4.0


def test_homotopy_invariance_two_radii():
    rep = chen_identity_check(
        "homotopy",
        QuadratureConfig(1024, 1e-8),
        word=[SimplePole(TRIV, 0), SimplePole(TRIV, 5)],
        path_a=lasso(1.0, 0, 0.3),
        path_b=lasso(1.0, 0, 0.7),
    )
    assert rep.passed


def test_shuffle_enumeration():
    assert shuffles(1, 1) == [(0, 1), (1, 0)]
    assert len(shuffles(2, 2)) == 6
    for word in shuffles(2, 2):
        first = [i for i in word if i < 2]
        second = [i for i in word if i >= 2]
        assert first == [0, 1] and second == [2, 3]


def test_shuffle_identity_check():
    rep = chen_identity_check(
        "shuffle",
        CFG,
        word1=[SimplePole(TRIV, 0)],
        word2=[SimplePole(TRIV, 1)],
        path=segment(3, 2 + 2j),
    )
    assert rep.passed
    assert rep.deviation <= 1e-8


def test_reversal_identity_check():
    rep = chen_identity_check(
        "reversal",
        CFG,
        word=[SimplePole(TRIV, 0), SimplePole(TRIV, 1)],
        path=segment(3, 2 + 2j),
    )
    assert rep.passed


def test_composition_identity_check():
    upper = Path([ArcSegment(0, 2.0, 0.0, math.pi)])
    lower = Path([ArcSegment(0, 2.0, math.pi, math.pi)])
    rep = chen_identity_check(
        "composition",
        CFG,
        word=[SimplePole(TRIV, 0), SimplePole(TRIV, 1)],
        path1=upper,
        path2=lower,
    )
    assert rep.passed


def test_unknown_identity_kind():
    with pytest.raises(InputError):
        chen_identity_check("sorcery", CFG, word=[])


def test_dlog_form_over_nilpotent_algebra():
    sig = parse_signature("gens=eps;degree=2;scalars=exact")
    f = RF.monic_linear(sig, 0, shift=sig.gen("eps"))
    form = DlogForm(f)
    val = line_integral(form, circle(0, 1), CFG)
    # winding picks up 2 pi i nu(f) = 2 pi i; the nilpotent part integrates
    # to zero over a loop
    assert abs(complex(val.reduce()) - TPI) < 1e-9
    assert abs(val.coeffs.get((1,), 0j)) < 1e-9


def test_word_series_structure():
    F = TruncatedWordSeries.identity(TRIV, 2, 2)
    with pytest.raises(InputError):
        F.coeff((1, 2, 1))
    with pytest.raises(InputError):
        F.coeff((3,))
    G = F * F
    assert G.coeff(()) == TRIV.one()

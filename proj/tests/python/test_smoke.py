import math

import pytest

import gcalc


def test_euler_sum_sphere():
    k = gcalc.mesh("builtin:sphere")
    assert k.dimension == 2
    assert gcalc.euler_sum(k) == pytest.approx(2.0, abs=1e-12)


def test_exact_cochain_telescopes():
    k = gcalc.mesh("builtin:interval:5")
    c = gcalc.cochain("exact(sin(x))")
    assert gcalc.riemann_sum(c, k) == pytest.approx(math.sin(1.0), abs=1e-12)


def test_refine_limit_left_rule():
    k = gcalc.mesh("builtin:interval:2")
    r = gcalc.refine_limit(gcalc.cochain("left(x)"), k, "barycentric", 8)
    assert r["limit"] == pytest.approx(0.5, abs=1e-6)


def test_python_cochain():
    k = gcalc.mesh("builtin:interval:8")
    c = gcalc.cochain_from_callable(1, lambda pts: pts[1][0] ** 2 - pts[0][0] ** 2)
    assert gcalc.riemann_sum(c, k) == pytest.approx(1.0, abs=1e-12)


def test_ve1_jet():
    c0, c1, c2 = gcalc.ve1(gcalc.cochain("exact(x^2)"), 0.5)
    assert c0 == pytest.approx(0.0, abs=1e-8)
    assert c1 == pytest.approx(1.0, abs=1e-6)


def test_star_commutator():
    assert gcalc.star_value("q", "p", 0.3, 0.2, 0.1) == pytest.approx(0.2 * 0.3 + 0.1j, abs=1e-12)
    assert gcalc.star_value("p", "q", 0.3, 0.2, 0.1) == pytest.approx(0.2 * 0.3 - 0.1j, abs=1e-12)


def test_dw_torus_z2():
    k = gcalc.mesh("builtin:torus:1")
    assert gcalc.dw_partition_function(k, "builtin:Z2").real == pytest.approx(2.0, abs=1e-12)


def test_config_roundtrip():
    text = gcalc.config_roundtrip("[run]\ncommand = \"euler\"\n[numeric]\nsamples = 7\n")
    assert gcalc.config_roundtrip(text) == text
    assert "samples = 7" in text


def test_run_ftc_exact():
    report, code = gcalc.run('[run]\ncommand = "ftc-exact"\n[input]\nmesh = "builtin:interval:3"\nf = "exp(x)"\n'
                             '[numeric]\ndepths = 3\n')
    assert code == 0


def test_errors_raise():
    with pytest.raises(gcalc.GcalcError):
        gcalc.mesh("builtin:nosuchthing")
    with pytest.raises(gcalc.GcalcError):
        gcalc.config_roundtrip("[numeric]\nbogus = 1\n")

import math

import pytest

from calcforge import expr as ex
from calcforge import geometry as geo


def test_disk_sphere_closures():
    for R in (1.0, 2.5, 7.0):
        r_text = f"{R:g}"
        # area of the disk as a polar sector
        a = geo.area(geo.PolarSector(ex.parse(r_text), 0.0, 2 * math.pi))
        assert a == pytest.approx(math.pi * R * R, rel=1e-10)
        # circumference as a polar arc length
        l = geo.arc_length(geo.Polar(ex.parse(r_text), 0.0, 2 * math.pi))
        assert l == pytest.approx(2 * math.pi * R, rel=1e-10)
        # sphere surface from the semicircle about OX
        semi = geo.CartesianY(ex.parse(f"sqrt({R * R:g}-x^2)"), -R, R)
        s = geo.surface_of_revolution(semi, geo.Axis.OX)
        assert s == pytest.approx(4 * math.pi * R * R, rel=1e-8)
        # sphere volume from the half-disk about OX
        shape = geo.BetweenCartesian(ex.parse("0"),
                                     ex.parse(f"sqrt({R * R:g}-x^2)"), -R, R)
        v = geo.volume_of_revolution(shape, geo.Axis.OX)
        assert v == pytest.approx(4.0 / 3.0 * math.pi * R ** 3, rel=1e-10)


def test_pappus_consistency():
    # off-axis unit circle centred at (3, 2) revolved about OY
    curve = geo.Parametric(ex.parse("3+cos(t)"), ex.parse("2+sin(t)"),
                           0.0, 2 * math.pi)
    s = geo.surface_of_revolution(curve, geo.Axis.OY)
    assert s == pytest.approx(2 * math.pi * 3 * (2 * math.pi * 1), rel=1e-9)


def test_coordinate_system_agreement():
    # disk of radius 2 in three coordinate systems
    between = geo.area(geo.BetweenCartesian(
        ex.parse("-sqrt(4-x^2)"), ex.parse("sqrt(4-x^2)"), -2.0, 2.0))
    parametric = geo.area_parametric(geo.Parametric(
        ex.parse("2*cos(t)"), ex.parse("2*sin(t)"), 0.0, 2 * math.pi))
    polar = geo.area(geo.PolarSector(ex.parse("2"), 0.0, 2 * math.pi))
    assert between == pytest.approx(abs(parametric), rel=1e-9)
    assert abs(parametric) == pytest.approx(polar, rel=1e-9)
    assert between == pytest.approx(polar, rel=1e-9)


def test_intersections_sound_and_sorted():
    f, g = ex.parse("2*x^2-10*x+6"), ex.parse("x^2-3*x")
    roots = geo.find_intersections(f, g, "x", -10.0, 10.0)
    assert roots == pytest.approx([1.0, 6.0], abs=1e-8)
    ff = ex.compile_single(f, "x")
    gg = ex.compile_single(g, "x")
    for r in roots:
        assert abs(ff(r) - gg(r)) <= 1e-8 * (1 + abs(ff(r)))
    roots = geo.find_intersections(ex.parse("x^2+2*x+5"), ex.parse("5-x"),
                                   "x", -10.0, 10.0)
    assert roots == pytest.approx([-3.0, 0.0], abs=1e-8)


def test_intersections_errors():
    with pytest.raises(ValueError):
        geo.find_intersections(ex.parse("x"), ex.parse("x"), "x", 0.0, 1.0)
    with pytest.raises(geo.TooManyRoots):
        geo.find_intersections(ex.parse("sin(40*x)"), ex.parse("0"),
                               "x", 0.0, 10.0, max_roots=8)
    with pytest.raises(ValueError):
        geo.find_intersections(ex.parse("x"), ex.parse("0"), "x", 1.0, 1.0)


def test_region_invariants_probed():
    with pytest.raises(geo.ProfileOrderViolated):
        geo.area(geo.BetweenCartesian(ex.parse("x"), ex.parse("-x"), 1.0, 2.0))
    with pytest.raises(geo.ProfileOrderViolated):
        geo.volume_of_revolution(
            geo.BetweenCartesian(ex.parse("2"), ex.parse("1"), 0.0, 1.0),
            geo.Axis.OX)
    with pytest.raises(geo.NegativeRadius):
        geo.surface_of_revolution(
            geo.CartesianY(ex.parse("x-5"), 0.0, 1.0), geo.Axis.OX)
    with pytest.raises(geo.NegativeRadius):
        geo.area(geo.PolarSector(ex.parse("cos(phi)"), 0.0, math.pi))


def test_polar_volume_domain_restriction():
    with pytest.raises(ValueError):
        geo.volume_of_revolution(
            geo.Polar(ex.parse("1"), 0.0, 2 * math.pi), geo.Axis.POLAR)


def test_axis_pairings():
    with pytest.raises(ValueError):
        geo.surface_of_revolution(
            geo.Polar(ex.parse("1"), 0.0, math.pi / 2), geo.Axis.OX)
    with pytest.raises(ValueError):
        geo.volume_of_revolution(
            geo.BetweenCartesian(ex.parse("0"), ex.parse("1"), 0.0, 1.0),
            geo.Axis.OY)


def test_symmetry_factor_validation():
    with pytest.raises(ValueError):
        geo.area(geo.PolarSector(ex.parse("1"), 0.0, 1.0), factor=0)


def test_arc_length_cusp_reroutes_to_improper():
    # astroid quarter-arc: derivative radicand is singular at both cusps
    quarter = geo.Parametric(ex.parse("4*cos(t)^3"), ex.parse("4*sin(t)^3"),
                             0.0, math.pi / 2)
    assert geo.arc_length(quarter) == pytest.approx(6.0, rel=1e-6)


def test_trivial_shapes():
    assert geo.arc_length(geo.CartesianY(ex.parse("2*x"), 0.0, 1.0)) == \
        pytest.approx(math.sqrt(5), rel=1e-10)
    assert geo.surface_of_revolution(
        geo.CartesianY(ex.parse("1"), 0.0, 1.0), geo.Axis.OX) == \
        pytest.approx(2 * math.pi, rel=1e-10)
    assert geo.area_parametric(
        geo.Parametric(ex.parse("t"), ex.parse("0"), 0.0, 1.0)) == 0.0

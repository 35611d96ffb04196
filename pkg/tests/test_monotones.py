"""Tests for closed-form volumes, coherence monotones, and region geometry."""

import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cohertk.feasibility import LemmaNotApplicableError
from cohertk.monotones import (
    MonotoneValue,
    _permutation_sum_fraction,
    permutation_sum,
    planar_example_volumes,
    qubit_pio_Ca,
    qubit_pio_Cs,
    qubit_sio_Ca,
    qubit_sio_Cs,
    region_geometry,
    source_coherence_closed,
    sup_source_volume,
)
from cohertk.states import PureState, QubitBloch, maximally_correlated_lift

RT = math.sqrt
PIO_SUP = 1.0 + RT(2.0)


# ---------------------------------------------------------------------------
# signed permutation sums


def test_permutation_sum_pinned_values():
    assert_allclose(permutation_sum([0.6, 0.4]), 0.2, atol=1e-15)
    assert_allclose(permutation_sum([0.5, 1 / 3, 1 / 6]), 1 / 6, atol=1e-15)
    for d in (2, 3, 4, 5):
        assert_allclose(permutation_sum(np.full(d, 1 / d)), 0.0, atol=1e-12)
        basis = np.zeros(d)
        basis[0] = 1.0
        assert_allclose(permutation_sum(basis), 1.0, atol=1e-12)


def test_permutation_sum_strips_zeros():
    assert_allclose(permutation_sum([0.6, 0.4, 0.0]),
                    permutation_sum([0.6, 0.4]), atol=1e-15)
    # single support point is the incoherent extreme
    assert permutation_sum([1.0, 0.0, 0.0]) == 1.0
    assert permutation_sum([1.0]) == 1.0


def test_permutation_sum_dimension_cap():
    lam = np.full(10, 0.1)
    with pytest.raises(ValueError, match="recursion|cap|9"):
        permutation_sum(lam)


def test_permutation_sum_fraction_ambient_reading():
    # without zero stripping the degenerate direction contributes: the
    # length-3 evaluation of (0.6, 0.4, 0) differs from the stripped one
    ambient = _permutation_sum_fraction(
        [Fraction(3, 5), Fraction(2, 5), Fraction(0)], strip=False)
    assert ambient == Fraction(13, 25)  # 0.52, hand-checked expansion
    stripped = _permutation_sum_fraction(
        [Fraction(3, 5), Fraction(2, 5), Fraction(0)])
    assert stripped == Fraction(1, 5)


def test_sup_source_volume_values():
    assert_allclose(sup_source_volume(2), RT(2) / 2, atol=1e-15)
    assert_allclose(sup_source_volume(3), RT(3) / 12, atol=1e-15)
    assert_allclose(sup_source_volume(4), 1 / 72, atol=1e-17)


def test_source_coherence_closed_spectrum_route():
    value = source_coherence_closed([0.6, 0.4])
    assert value.kind == "source"
    assert value.value == 0.8
    assert_allclose(value.volume, RT(2) / 2 * 0.2, atol=1e-15)
    assert_allclose(value.sup_volume, RT(2) / 2, atol=1e-15)
    assert value.measure == "sorted-representative"

    # extremes: uniform input is maximally coherent, a point is incoherent
    assert_allclose(source_coherence_closed([0.25] * 4).value, 1.0, atol=1e-12)
    assert source_coherence_closed([1.0, 0.0, 0.0]).value == 0.0


def test_source_coherence_closed_state_routes():
    single = PureState((3,), [RT(0.5), RT(0.3), RT(0.2)])
    ic_value = source_coherence_closed(single, "IC")
    lifted = maximally_correlated_lift(single)
    licc_value = source_coherence_closed(lifted, "LICC")
    assert_allclose(ic_value.value, licc_value.value, atol=1e-12)

    skew = PureState((2, 2), [RT(0.5), RT(0.5), 0, 0])
    with pytest.raises(LemmaNotApplicableError):
        source_coherence_closed(skew, "LICC")
    with pytest.raises(ValueError, match="unknown operation class"):
        source_coherence_closed([0.6, 0.4], "LOCC")


def test_monotone_value_validates_identity():
    with pytest.raises(ValueError, match="unknown kind"):
        MonotoneValue("sideways", 0.5, 0.5, 1.0,
                      "sorted-representative", "IC")
    with pytest.raises(ValueError, match="does not match"):
        MonotoneValue("accessible", 0.9, 0.5, 1.0,
                      "sorted-representative", "IC")


# ---------------------------------------------------------------------------
# single-qubit closed forms


def test_qubit_sio_accessible_pinned_points():
    assert_allclose(qubit_sio_Ca(QubitBloch(1.0, 0.0, 0.0)).value, 1.0,
                    atol=1e-12)
    assert qubit_sio_Ca(QubitBloch(0.0, 0.0, 0.7)).value == 0.0
    # a generic mixed point against the explicit expression
    t, z = 0.5, 0.3
    expected = (2 * (t / RT(1 - z * z)) * math.asin(RT(1 - z * z))
                + 2 * abs(z) * t)
    value = qubit_sio_Ca(QubitBloch(0.3, 0.4, 0.3))
    assert_allclose(value.volume, expected, atol=1e-12)
    assert_allclose(value.value, expected / math.pi, atol=1e-12)
    assert value.measure == "bloch-halfplane"


def test_qubit_sio_source_pinned_points():
    assert_allclose(qubit_sio_Cs(QubitBloch(1.0, 0.0, 0.0)).value, 1.0,
                    atol=1e-12)
    assert qubit_sio_Cs(QubitBloch(0.0, 0.0, 0.0)).value == 0.0
    assert qubit_sio_Cs(QubitBloch(0.0, 0.0, 1.0)).value == 0.0
    # accessible and source coincide on the pure circle
    for z in (0.0, 0.28, -0.6, 0.8):
        r = QubitBloch(RT(1 - z * z), 0.0, z)
        assert_allclose(qubit_sio_Cs(r).value, qubit_sio_Ca(r).value,
                        atol=1e-12)


def test_qubit_pio_accessible_pinned_points():
    peak = qubit_pio_Ca(QubitBloch(RT(0.5), 0.0, RT(0.5)))
    assert_allclose(peak.value, 1.0, atol=1e-10)
    assert_allclose(peak.volume, PIO_SUP, atol=1e-10)
    assert_allclose(qubit_pio_Ca(QubitBloch(1.0, 0.0, 0.0)).value,
                    2.0 / PIO_SUP, atol=1e-12)
    # the normalization is the value on the maximizing family, not a
    # global bound: part of the pure circle exceeds 1, and is reported as is
    tall = qubit_pio_Ca(QubitBloch(0.9, 0.0, RT(0.19)))
    assert tall.value > 1.0


def test_qubit_pio_source_pinned_points():
    assert_allclose(qubit_pio_Cs(QubitBloch(0.0, 0.0, 0.4)).value, 0.0,
                    atol=1e-12)
    # continuous to one on the pure circle, both branch sides
    assert_allclose(qubit_pio_Cs(QubitBloch(1.0, 0.0, 0.0)).value, 1.0,
                    atol=1e-12)
    assert_allclose(qubit_pio_Cs(QubitBloch(0.8, 0.0, 0.6)).value, 1.0,
                    atol=1e-12)
    # interior values stay inside [0, 1]
    rng = np.random.default_rng(3)
    for _ in range(200):
        v = rng.standard_normal(3)
        v *= rng.random() ** (1 / 3) / np.linalg.norm(v)
        value = qubit_pio_Cs(QubitBloch(*v)).value
        assert -1e-12 <= value <= 1.0 + 1e-12


def test_qubit_monotones_accept_tuples():
    direct = qubit_sio_Ca((0.3, 0.4, 0.3))
    wrapped = qubit_sio_Ca(QubitBloch(0.3, 0.4, 0.3))
    assert direct.value == wrapped.value


# ---------------------------------------------------------------------------
# planar example families


def test_planar_example_volumes_three_level():
    va, vs, ca, cs = planar_example_volumes([0.5, 0.3, 0.2])
    assert_allclose(va, 0.08, atol=1e-15)
    assert_allclose(vs, 0.275, atol=1e-15)
    assert_allclose(ca, 0.16, atol=1e-15)
    assert_allclose(cs, 0.45, atol=1e-15)


def test_planar_example_volumes_two_level():
    va, vs, ca, cs = planar_example_volumes([0.6, 0.4])
    assert_allclose(va, RT(2) * 0.4, atol=1e-15)
    assert_allclose(vs, RT(2) * 0.1, atol=1e-15)
    assert ca == cs == pytest.approx(0.8, abs=1e-15)
    # agreement with the permutation-sum source value
    assert_allclose(cs, source_coherence_closed([0.6, 0.4]).value, atol=1e-12)

    # degenerate support reduces to the segment family at x = 1
    va, vs, ca, cs = planar_example_volumes([1.0, 0.0, 0.0, 0.0])
    assert ca == cs == 0.0

    with pytest.raises(ValueError, match="support size 4"):
        planar_example_volumes([0.4, 0.3, 0.2, 0.1])


def test_planar_example_accepts_states():
    state = PureState((2, 2), [RT(0.5), RT(0.3), RT(0.2), 0])
    va, vs, ca, cs = planar_example_volumes(state, "IC")
    assert_allclose((va, vs, ca, cs), (0.08, 0.275, 0.16, 0.45), atol=1e-12)


# ---------------------------------------------------------------------------
# region geometry: the emitted boundaries must integrate back to the
# closed-form areas (Green's theorem is an independent evaluation route)


def check_area_matches(subject, operation_class, kind, expected, atol=1e-9):
    geo = region_geometry(subject, operation_class, kind)
    assert geo.kind == kind
    assert_allclose(geo.area(), expected, atol=atol)
    for polyline in geo.boundary_points(32):
        assert polyline.ndim == 2 and polyline.shape[1] == 2


def test_region_geometry_qubit_sio():
    mixed = QubitBloch(0.5, 0.0, 0.3)
    check_area_matches(mixed, "SIO", "accessible",
                       qubit_sio_Ca(mixed).volume)
    check_area_matches(mixed, "SIO", "source",
                       math.pi - math.pi * qubit_sio_Cs(mixed).value)
    pure = QubitBloch(0.6, 0.0, 0.8)
    check_area_matches(pure, "IC", "source",
                       math.pi - math.pi * qubit_sio_Cs(pure).value)


def test_region_geometry_qubit_pio():
    wide = QubitBloch(0.3, 0.0, 0.2)   # cap branch
    check_area_matches(wide, "PIO", "accessible",
                       qubit_pio_Ca(wide).volume)
    check_area_matches(wide, "PIO", "source",
                       math.pi - math.pi * qubit_pio_Cs(wide).value)
    tall = QubitBloch(0.8, 0.0, 0.4)   # sliver branch
    check_area_matches(tall, "PIO", "source",
                       math.pi - math.pi * qubit_pio_Cs(tall).value)


def test_region_geometry_planar():
    va, vs, _, _ = planar_example_volumes([0.5, 0.3, 0.2])
    # coordinate-plane regions carry plain areas (no sqrt(2) scale)
    check_area_matches([0.5, 0.3, 0.2], "IC", "accessible", va)
    check_area_matches([0.5, 0.3, 0.2], "IC", "source", vs)

    va, vs, _, _ = planar_example_volumes([0.6, 0.4])
    check_area_matches([0.6, 0.4], "IC", "accessible", va)
    check_area_matches([0.6, 0.4], "IC", "source", vs)


def test_region_geometry_validation():
    with pytest.raises(ValueError, match="unknown kind"):
        region_geometry(QubitBloch(0.5, 0.0, 0.0), "SIO", "outside")
    with pytest.raises(ValueError, match="no qubit region geometry"):
        region_geometry(QubitBloch(0.5, 0.0, 0.0), "LICC", "source")

"""Tests for the JSON formats and 12-significant-digit float policy."""

import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cohertk.channels import random_channel
from cohertk.oracle import VolumeEstimate
from cohertk.serialize import (
    bloch_from_dict,
    bloch_to_dict,
    channel_from_dict,
    channel_to_dict,
    dumps,
    round_floats,
    spectrum_from_dict,
    state_from_dict,
    state_to_dict,
    subject_from_dict,
)
from cohertk.states import PureState, QubitBloch


# ---------------------------------------------------------------------------
# round_floats / dumps


def test_round_floats_trims_to_twelve_significant_digits():
    assert round_floats(math.pi) == 3.14159265359
    assert round_floats(1 / 3) == 0.333333333333
    assert round_floats(1.5e-17) == 1.5e-17  # significant, not absolute
    assert round_floats(123456789012345.0) == 123456789012000.0


def test_round_floats_handles_structured_inputs():
    assert round_floats(2 + 3j) == [2.0, 3.0]
    assert round_floats(float("nan")) is None
    assert round_floats(float("inf")) is None
    assert round_floats(np.float64(0.25)) == 0.25
    assert round_floats(np.int64(7)) == 7
    assert round_floats(np.bool_(True)) is True
    assert round_floats(np.array([[1.0, 2.0]])) == [[1.0, 2.0]]
    assert round_floats({1: [np.float32(0.5)]}) == {"1": [0.5]}
    est = VolumeEstimate(mean=1 / 7, standard_error=0.0,
                         samples=10, seed=3)
    assert round_floats(est) == {
        "mean": 0.142857142857, "standard_error": 0.0,
        "samples": 10, "seed": 3,
    }


def test_dumps_emits_strict_indented_json():
    text = dumps({"value": float("nan"), "flag": np.bool_(False)})
    assert text.endswith("\n")
    assert "\n  " in text  # indented
    assert json.loads(text) == {"value": None, "flag": False}


# ---------------------------------------------------------------------------
# state / bloch / spectrum round trips


def test_state_round_trip_within_tolerance():
    amps = np.array([math.sqrt(1 / 3) * np.exp(1j),
                     math.sqrt(2 / 3) * np.exp(-0.7j)])
    state = PureState((2,), amps)
    parsed = state_from_dict(json.loads(dumps(state_to_dict(state))))
    assert parsed.dims == (2,)
    assert_allclose(parsed.amps, amps, atol=1e-12)


def test_state_from_dict_accepts_bare_reals_and_rejects_malformed():
    parsed = state_from_dict({"dims": [2], "amps": [1.0, 0.0]})
    assert parsed.amps[0] == 1.0 + 0.0j
    with pytest.raises(ValueError, match="malformed state"):
        state_from_dict({"amps": [[1.0, 0.0], [0.0, 0.0]]})
    with pytest.raises(ValueError, match="re, im"):
        state_from_dict({"dims": [2], "amps": [[1.0, 0.0, 0.0], [0.0]]})


def test_bloch_round_trip_and_validation():
    r = QubitBloch(0.25, -0.125, 0.5)
    parsed = bloch_from_dict(json.loads(dumps(bloch_to_dict(r))))
    assert (parsed.r_x, parsed.r_y, parsed.r_z) == (0.25, -0.125, 0.5)
    with pytest.raises(ValueError, match="three components"):
        bloch_from_dict({"bloch": [0.1, 0.2]})
    with pytest.raises(ValueError, match="malformed bloch"):
        bloch_from_dict({"vector": [0.1, 0.2, 0.3]})


def test_spectrum_from_dict_is_a_plain_parse():
    values = spectrum_from_dict({"spectrum": [0.5, 0.3, 0.2]})
    assert values.tolist() == [0.5, 0.3, 0.2]
    # no sorting or sum validation at parse time; consumers canonicalize
    assert spectrum_from_dict({"spectrum": [0.1, 0.9]}).tolist() == [0.1, 0.9]
    with pytest.raises(ValueError, match="malformed spectrum"):
        spectrum_from_dict({"spectrum": None})


def test_subject_from_dict_dispatches_on_identifying_key():
    assert isinstance(
        subject_from_dict({"dims": [2], "amps": [[1.0, 0.0], [0.0, 0.0]]}),
        PureState)
    assert isinstance(subject_from_dict({"bloch": [0.0, 0.0, 0.5]}),
                      QubitBloch)
    assert isinstance(subject_from_dict({"spectrum": [0.6, 0.4]}),
                      np.ndarray)
    with pytest.raises(ValueError, match="'amps', 'bloch', 'spectrum'"):
        subject_from_dict({"state": [1, 0]})


# ---------------------------------------------------------------------------
# channels


def check_channel_round_trip(channel):
    parsed = channel_from_dict(json.loads(dumps(channel_to_dict(channel))))
    assert parsed.class_tag == channel.class_tag
    assert parsed.dim == channel.dim
    assert len(parsed.kraus) == len(channel.kraus)
    for before, after in zip(channel.kraus, parsed.kraus):
        assert_allclose(after.matrix(), before.matrix(), atol=1e-12)


def test_channel_round_trips_preserve_kraus_matrices():
    check_channel_round_trip(random_channel("IU", 3, 1, seed=11))
    check_channel_round_trip(random_channel("PIO", 4, 2, seed=12))
    check_channel_round_trip(random_channel("SIO", 3, 3, seed=13))
    check_channel_round_trip(random_channel("IC", 3, 3, seed=14))


def test_channel_from_dict_revalidates_class_tag():
    obj = channel_to_dict(random_channel("IC", 3, 3, seed=14))
    obj["class"] = "IU"  # stronger than the Kraus structure supports
    with pytest.raises(ValueError, match="only IC, weaker"):
        channel_from_dict(obj)


def test_channel_from_dict_rejects_malformed_objects():
    with pytest.raises(ValueError, match="malformed channel"):
        channel_from_dict({"class": "SIO", "dim": 2})
    with pytest.raises(ValueError, match="malformed channel"):
        channel_from_dict({"class": "SIO", "dim": 2,
                           "kraus": [{"entries": [["a", 0, 1.0, 0.0]]}]})

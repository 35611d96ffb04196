"""JSON formats for states, Bloch vectors, spectra, and channels.

Formats
-------
Pure state::

    {"dims": [2, 2], "amps": [[re, im], ...]}

with ``prod(dims)`` amplitude pairs in row-major order, last party
fastest.

Bloch vector::

    {"bloch": [rx, ry, rz]}

Sorted spectrum::

    {"spectrum": [0.5, 0.3, 0.2]}

Channel::

    {"class": "SIO", "dim": 2,
     "kraus": [{"entries": [[target, source, re, im], ...]}, ...]}

Every float emitted by :func:`dumps` is rounded to 12 significant
digits; emitted objects re-parse equal to the originals within 1e-12.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

from .channels import IncoherentChannel, KrausOperator
from .states import PureState, QubitBloch

__all__ = [
    "SIG_DIGITS",
    "round_floats",
    "dumps",
    "state_to_dict",
    "state_from_dict",
    "bloch_to_dict",
    "bloch_from_dict",
    "spectrum_from_dict",
    "channel_to_dict",
    "channel_from_dict",
    "subject_from_dict",
    "load_json",
]

SIG_DIGITS = 12


def round_floats(obj):
    """Recursively convert an object tree to JSON-ready form with all
    floats carrying 12 significant digits.

    Handles dataclasses, mappings, sequences, numpy scalars/arrays, and
    complex numbers (emitted as [re, im] pairs).  Non-finite floats are
    emitted as None so the output stays strict JSON.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return round_floats(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [round_floats(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [round_floats(obj.real), round_floats(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIG_DIGITS}g}")
    return obj


def dumps(obj) -> str:
    """Serialize through :func:`round_floats` to a newline-terminated
    JSON document."""
    return json.dumps(round_floats(obj), indent=2, allow_nan=False) + "\n"


def load_json(path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


# ---------------------------------------------------------------------------
# states


def state_to_dict(state: PureState) -> dict:
    return {
        "dims": list(state.dims),
        "amps": [[amp.real, amp.imag] for amp in state.amps],
    }


def _as_complex(pair):
    if isinstance(pair, (int, float)):
        return complex(pair)
    if isinstance(pair, (list, tuple)) and len(pair) == 2:
        return complex(float(pair[0]), float(pair[1]))
    raise ValueError(f"expected a number or [re, im] pair, got {pair!r}")


def state_from_dict(obj: dict) -> PureState:
    try:
        dims = [int(d) for d in obj["dims"]]
        amps = [_as_complex(pair) for pair in obj["amps"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state object: {exc}") from exc
    return PureState(dims, amps)


def bloch_to_dict(r: QubitBloch) -> dict:
    return {"bloch": [r.r_x, r.r_y, r.r_z]}


def bloch_from_dict(obj: dict) -> QubitBloch:
    try:
        triple = [float(x) for x in obj["bloch"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed bloch object: {exc}") from exc
    if len(triple) != 3:
        raise ValueError("bloch vector must have three components")
    return QubitBloch(*triple)


def spectrum_from_dict(obj: dict) -> np.ndarray:
    try:
        values = np.asarray([float(x) for x in obj["spectrum"]], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed spectrum object: {exc}") from exc
    return values


def subject_from_dict(obj: dict):
    """Dispatch a JSON object to PureState, QubitBloch, or a bare
    spectrum array by its identifying key."""
    if "amps" in obj:
        return state_from_dict(obj)
    if "bloch" in obj:
        return bloch_from_dict(obj)
    if "spectrum" in obj:
        return spectrum_from_dict(obj)
    raise ValueError(
        "object must contain one of the keys 'amps', 'bloch', 'spectrum'")


# ---------------------------------------------------------------------------
# channels


def channel_to_dict(channel: IncoherentChannel) -> dict:
    return {
        "class": channel.class_tag,
        "dim": channel.dim,
        "kraus": [
            {"entries": [[target, source, coeff.real, coeff.imag]
                         for target, source, coeff in op.entries]}
            for op in channel.kraus
        ],
    }


def channel_from_dict(obj: dict) -> IncoherentChannel:
    try:
        class_tag = str(obj["class"])
        dim = int(obj["dim"])
        ops = []
        for item in obj["kraus"]:
            entries = [(int(t), int(s), complex(float(re), float(im)))
                       for t, s, re, im in item["entries"]]
            ops.append(KrausOperator(dim, entries))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed channel object: {exc}") from exc
    return IncoherentChannel(class_tag, ops)

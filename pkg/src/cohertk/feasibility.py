"""Transformation-feasibility predicates.

Pure-state convertibility under the incoherent classes reduces to
majorization between spectra; single-qubit mixed-state convertibility
under SIO/IC and PIO reduces to closed inequality systems on Bloch
triples.  All predicates return a :class:`FeasibilityVerdict` carrying
the tight or violated constraints, and all inequality tests use an
additive slack of ``1e-10`` so that boundary points of the closed
feasibility regions test feasible.

Vectorized boolean kernels (`sio_feasible_mask`, `pio_feasible_mask`)
back the Monte-Carlo volume oracle; the scalar predicates are thin
wrappers around the same inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import PureState, QubitBloch, dephased_spectrum, schmidt_spectrum

__all__ = [
    "FeasibilityVerdict",
    "LemmaNotApplicableError",
    "majorizes",
    "majorization_verdict",
    "ic_pure_feasible",
    "locc_pure_feasible",
    "licc_bipartite_feasible",
    "sio_qubit_feasible",
    "pio_qubit_feasible",
    "sio_feasible_mask",
    "pio_feasible_mask",
]

#: Additive slack on every feasibility inequality.
SLACK = 1e-10


class LemmaNotApplicableError(ValueError):
    """A feasibility criterion's precondition is not met.

    Distinct from an ordinary input error: the requested comparison is
    well-formed, but the closed-form criterion does not decide it.
    """


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of a feasibility test plus constraint diagnostics.

    ``binding`` lists the constraints that are tight (within slack) when
    feasible, or the violated constraints when not; it is always
    nonempty for an infeasible verdict.
    """

    feasible: bool
    binding: tuple

    def __bool__(self) -> bool:
        return self.feasible


def _pad(vec: np.ndarray, length: int) -> np.ndarray:
    if vec.size == length:
        return vec
    out = np.zeros(length)
    out[:vec.size] = vec
    return out


def majorizes(y, x, slack: float = SLACK) -> bool:
    """True iff ``x`` is majorized by ``y`` (every partial sum of the
    sorted ``x`` is at most that of the sorted ``y``, totals equal).

    The shorter vector is zero-padded.  Raises ``ValueError`` when
    either input is not a normalized probability vector.
    """
    return majorization_verdict(y, x, slack=slack).feasible


def majorization_verdict(y, x, slack: float = SLACK) -> FeasibilityVerdict:
    """Constraint-level form of :func:`majorizes` (x majorized by y)."""
    xv = np.sort(np.asarray(x, dtype=float).ravel())[::-1]
    yv = np.sort(np.asarray(y, dtype=float).ravel())[::-1]
    for name, v in (("x", xv), ("y", yv)):
        if v.size == 0 or abs(v.sum() - 1.0) > 1e-8 or v.min() < -1e-8:
            raise ValueError(f"{name} is not a normalized probability vector")
    length = max(xv.size, yv.size)
    cx = np.cumsum(_pad(xv, length))
    cy = np.cumsum(_pad(yv, length))
    binding = []
    feasible = True
    for k in range(length):
        gap = cy[k] - cx[k]
        if gap < -slack:
            feasible = False
            binding.append(f"partial-sum {k + 1}: violated by {-gap:.3g}")
        elif gap <= slack:
            binding.append(f"partial-sum {k + 1}: tight")
    return FeasibilityVerdict(feasible, tuple(binding))


def ic_pure_feasible(psi: PureState, phi: PureState) -> FeasibilityVerdict:
    """Can ``psi`` be converted to ``phi`` deterministically by an
    incoherent (or strictly incoherent) channel?

    Holds iff the dephased spectrum of the *target* majorizes that of
    the source.
    """
    if psi.dim != phi.dim:
        raise ValueError("states live on different total dimensions")
    return majorization_verdict(dephased_spectrum(phi), dephased_spectrum(psi))


def locc_pure_feasible(psi: PureState, phi: PureState, cut=None) -> FeasibilityVerdict:
    """Bipartite LOCC convertibility ``psi -> phi`` across ``cut``:
    the target's squared Schmidt vector must majorize the source's."""
    if psi.dims != phi.dims:
        raise ValueError("states have different party structures")
    s_psi = schmidt_spectrum(psi, cut).coefficients
    s_phi = schmidt_spectrum(phi, cut).coefficients
    return majorization_verdict(s_phi, s_psi)


def licc_bipartite_feasible(psi: PureState, phi: PureState) -> FeasibilityVerdict:
    """Convertibility ``psi -> phi`` under local incoherent operations
    and classical communication, for bipartite states whose reduced
    states are diagonal in the reference bases.

    Raises
    ------
    LemmaNotApplicableError
        When either state has a non-diagonal reduced state; the
        criterion then simply does not decide the instance.
    """
    if psi.n_parties != 2 or phi.n_parties != 2:
        raise ValueError("both states must be bipartite")
    if psi.dims != phi.dims:
        raise ValueError("states have different party structures")
    data_psi = schmidt_spectrum(psi)
    data_phi = schmidt_spectrum(phi)
    for label, data in (("source", data_psi), ("target", data_phi)):
        if not (data.left_diagonal and data.right_diagonal):
            raise LemmaNotApplicableError(
                f"{label} state has a non-diagonal reduced state; the "
                "Schmidt-majorization criterion does not apply")
    return majorization_verdict(data_phi.coefficients, data_psi.coefficients)


def _tag(binding, name, lhs, rhs, feasible_so_far):
    """Append tight/violated diagnostics for constraint lhs <= rhs."""
    gap = rhs - lhs
    if gap < -SLACK:
        binding.append(f"{name}: violated by {-gap:.3g}")
        return False
    if gap <= SLACK:
        binding.append(f"{name}: tight")
    return feasible_so_far


def sio_qubit_feasible(r: QubitBloch, s: QubitBloch) -> FeasibilityVerdict:
    """Single-qubit convertibility ``r -> s`` under strictly/plainly
    incoherent channels.

    Two inequalities: the transverse component cannot grow, and the
    target must lie inside the ellipse obtained by shrinking the unit
    disc's transverse axis by the source's transverse-to-purity ratio:

    * ``s_x^2 + s_y^2 <= r_x^2 + r_y^2``
    * ``(1 - r_z^2)(s_x^2 + s_y^2) + s_z^2 (r_x^2 + r_y^2)
      <= r_x^2 + r_y^2``

    A source on the z axis (no transverse part) can reach exactly the
    z axis.
    """
    t2r, t2s = r.transverse_sq, s.transverse_sq
    binding = []
    if t2r <= SLACK:
        ok = _tag(binding, "degenerate-transverse", t2s, 0.0, True)
        return FeasibilityVerdict(ok, tuple(binding))
    ok = _tag(binding, "transverse", t2s, t2r, True)
    ok = _tag(binding, "ellipse",
              (1.0 - r.r_z**2) * t2s / t2r + s.r_z**2, 1.0, ok)
    return FeasibilityVerdict(ok, tuple(binding))


def pio_qubit_feasible(r: QubitBloch, s: QubitBloch) -> FeasibilityVerdict:
    """Single-qubit convertibility ``r -> s`` under the physical
    (projector-based) incoherent channels.

    The accessible set is the hexagon with vertices
    ``(+-t_r, +-|r_z|)`` and ``(0, +-1)`` in the transverse--z plane
    (``t_r = sqrt(r_x^2 + r_y^2)``), rotationally symmetric in the
    transverse plane:

    * ``s_x^2 + s_y^2 <= r_x^2 + r_y^2``
    * ``(s_x^2 + s_y^2)(1 - |r_z|)^2 <= (r_x^2 + r_y^2)(1 - s_z)^2``
    * ``(s_x^2 + s_y^2)(1 - |r_z|)^2 <= (r_x^2 + r_y^2)(1 + s_z)^2``

    The same degenerate z-axis rule as the SIO test applies.
    """
    t2r, t2s = r.transverse_sq, s.transverse_sq
    binding = []
    if t2r <= SLACK:
        ok = _tag(binding, "degenerate-transverse", t2s, 0.0, True)
        return FeasibilityVerdict(ok, tuple(binding))
    shrink = (1.0 - abs(r.r_z)) ** 2
    ratio = t2s / t2r
    ok = _tag(binding, "transverse", t2s, t2r, True)
    ok = _tag(binding, "upper-cone", ratio * shrink, (1.0 - s.r_z) ** 2, ok)
    ok = _tag(binding, "lower-cone", ratio * shrink, (1.0 + s.r_z) ** 2, ok)
    return FeasibilityVerdict(ok, tuple(binding))


def sio_feasible_mask(src_t2, src_z, dst_t2, dst_z):
    """Vectorized boolean form of the SIO qubit criterion.

    All four arguments broadcast; returns the boolean array of
    "source (src) converts to target (dst)".  Used by the Monte-Carlo
    volume oracle, where either role may be the sampled batch.
    """
    src_t2, src_z, dst_t2, dst_z = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (src_t2, src_z, dst_t2, dst_z)))
    degenerate = src_t2 <= SLACK
    safe = np.where(degenerate, 1.0, src_t2)
    transverse = dst_t2 <= src_t2 + SLACK
    ellipse = (1.0 - src_z**2) * dst_t2 / safe + dst_z**2 <= 1.0 + SLACK
    return np.where(degenerate, dst_t2 <= SLACK, transverse & ellipse)


def pio_feasible_mask(src_t2, src_z, dst_t2, dst_z):
    """Vectorized boolean form of the PIO qubit criterion (see
    :func:`pio_qubit_feasible`)."""
    src_t2, src_z, dst_t2, dst_z = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (src_t2, src_z, dst_t2, dst_z)))
    degenerate = src_t2 <= SLACK
    safe = np.where(degenerate, 1.0, src_t2)
    shrink = (1.0 - np.abs(src_z)) ** 2
    ratio = dst_t2 / safe
    transverse = dst_t2 <= src_t2 + SLACK
    upper = ratio * shrink <= (1.0 - dst_z) ** 2 + SLACK
    lower = ratio * shrink <= (1.0 + dst_z) ** 2 + SLACK
    return np.where(degenerate, dst_t2 <= SLACK, transverse & upper & lower)

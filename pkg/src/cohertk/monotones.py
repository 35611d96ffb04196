"""Closed-form accessible and source coherence.

The source-coherence value of a pure state is one minus the normalized
volume of its source set, a majorization polytope whose volume admits a
signed sum over permutations of the sorted spectrum.  For single qubits
the accessible and source volumes under strictly-incoherent and
partition-preserving operations reduce to piecewise areas in the x-z
Bloch disc, and two small planar families (spectra of length 2 and 3)
have elementary polygon formulas.

Every monotone value is reported together with the raw region volume,
the normalizing supremum and a measure tag, so downstream checks can
confirm ``value = volume/sup`` (accessible) or ``1 - volume/sup``
(source) exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .feasibility import LemmaNotApplicableError
from .states import (PureState, QubitBloch, dephased_spectrum,
                     schmidt_spectrum, sorted_spectrum)

__all__ = [
    "MonotoneValue",
    "RegionGeometry",
    "Segment",
    "Arc",
    "MEASURE_TAGS",
    "permutation_sum",
    "source_coherence_closed",
    "qubit_sio_Ca",
    "qubit_sio_Cs",
    "qubit_pio_Ca",
    "qubit_pio_Cs",
    "planar_example_volumes",
    "region_geometry",
]

#: Recognized Lebesgue-measure conventions for region volumes.
MEASURE_TAGS = ("sorted-representative", "coordinate-plane", "bloch-halfplane")

_OPERATION_CLASSES = ("PIO", "SIO", "IC", "LSICC", "LICC")

#: Eigenvalues at or below this are treated as exact zeros of a spectrum.
STRIP_TOL = 1e-12

#: Permutation enumeration cap (d! terms).
MAX_SPECTRUM_LEN = 9


@dataclass(frozen=True)
class MonotoneValue:
    """A coherence monotone value with its defining volume data.

    ``value`` is ``volume / sup_volume`` for accessible kind and
    ``1 - volume / sup_volume`` for source kind; construction enforces
    the identity to 1e-12.  Values normally lie in [0, 1]; the one
    documented exception is the qubit PIO accessible coherence, whose
    normalization constant is the value attained on the maximizing
    state family rather than a global bound, so values up to about
    1.076 can occur.  They are reported as computed, never clamped.
    """

    kind: str
    value: float
    volume: float
    sup_volume: float
    measure: str
    operation_class: str

    def __post_init__(self):
        if self.kind not in ("accessible", "source"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.measure not in MEASURE_TAGS:
            raise ValueError(f"unknown measure tag {self.measure!r}")
        if self.operation_class not in _OPERATION_CLASSES:
            raise ValueError(f"unknown operation class {self.operation_class!r}")
        if not self.sup_volume > 0:
            raise ValueError("sup_volume must be positive")
        if self.kind == "accessible":
            expected = self.volume / self.sup_volume
        else:
            expected = 1.0 - self.volume / self.sup_volume
        if abs(self.value - expected) > 1e-12:
            raise ValueError("value does not match volume / sup_volume")


# ---------------------------------------------------------------------------
# permutation-sum source coherence


def _strip_zeros(spectrum) -> np.ndarray:
    arr = sorted_spectrum(spectrum)
    return arr[arr > STRIP_TOL]


def permutation_sum(spectrum) -> float:
    """Signed permutation sum of a sorted spectrum.

    For a nonincreasing probability vector of length d (zeros stripped
    first), computes

        sum over permutations pi of
            [sum_k pi(k) lam_k - (d+1)/2]^(d-1)
            / prod_{k=1}^{d-1} (pi(k) - pi(k+1))

    which equals the source-polytope volume divided by its value at an
    incoherent spectrum.  Terms cancel heavily near uniform spectra, so
    the sum is accumulated with compensated summation.

    Length-1 spectra return 1.0 by convention (the source set is the
    whole simplex); lengths above 9 raise (d! term enumeration).
    """
    lam = _strip_zeros(spectrum)
    d = len(lam)
    if d == 1:
        return 1.0
    if d == 2:
        # the two-term sum collapses algebraically to lam_1 - lam_2,
        # which avoids the cancellation against the (d+1)/2 shift
        return float(lam[0] - lam[1])
    if d > MAX_SPECTRUM_LEN:
        raise ValueError(f"spectrum length {d} exceeds cap {MAX_SPECTRUM_LEN}")
    center = (d + 1) / 2.0
    terms = []
    for pi in itertools.permutations(range(1, d + 1)):
        bracket = math.fsum(pi[k] * lam[k] for k in range(d)) - center
        denom = 1
        for k in range(d - 1):
            denom *= pi[k] - pi[k + 1]
        terms.append(bracket ** (d - 1) / denom)
    return math.fsum(terms)


def _permutation_sum_fraction(spectrum, strip: bool = True) -> Fraction:
    """Exact-rational permutation sum; spectrum entries must be Fractions
    or integers summing to 1.  Private cross-check used by the volume
    oracle tests (optionally without zero stripping, where the sum is
    still well defined but no longer matches the stripped convention).
    """
    lam = [Fraction(x) for x in spectrum]
    if sum(lam) != 1:
        raise ValueError("spectrum must sum to 1 exactly")
    if strip:
        lam = [x for x in lam if x > 0]
    d = len(lam)
    if d == 1:
        return Fraction(1)
    total = Fraction(0)
    center = Fraction(d + 1, 2)
    for pi in itertools.permutations(range(1, d + 1)):
        bracket = sum((pi[k] * lam[k] for k in range(d)), start=Fraction(0))
        bracket -= center
        denom = 1
        for k in range(d - 1):
            denom *= pi[k] - pi[k + 1]
        total += bracket ** (d - 1) / denom
    return total


def sup_source_volume(dim: int) -> float:
    """Largest source volume in ambient dimension ``dim`` (attained at
    incoherent spectra): sqrt(d) / (d! (d-1)!)."""
    return math.sqrt(dim) / (math.factorial(dim) * math.factorial(dim - 1))


def _select_spectrum(state, operation_class: str, cut=None):
    """Spectrum relevant to a class: dephased populations for IC/SIO,
    Schmidt coefficients (with the diagonal-marginals precondition) for
    LICC/LSICC.  Returns (sorted spectrum, ambient length)."""
    if operation_class in ("IC", "SIO"):
        spec = dephased_spectrum(state)
        return spec, len(spec)
    if operation_class in ("LICC", "LSICC"):
        if state.n_parties != 2:
            raise LemmaNotApplicableError(
                "local-incoherent path needs a bipartite state")
        data = schmidt_spectrum(state, cut)
        if not (data.left_diagonal and data.right_diagonal):
            raise LemmaNotApplicableError(
                "reduced states are not diagonal in the reference basis")
        return data.coefficients, len(data.coefficients)
    raise ValueError(f"no closed source form for class {operation_class!r}")


def source_coherence_closed(state, operation_class: str = "IC",
                            cut=None) -> MonotoneValue:
    """Closed-form source coherence of a pure state.

    ``state`` may be a :class:`~cohertk.states.PureState` — the
    spectrum is then chosen by ``operation_class`` (dephased
    populations for IC/SIO; Schmidt coefficients for LICC/LSICC, which
    requires diagonal reduced states and raises
    :class:`~cohertk.feasibility.LemmaNotApplicableError` otherwise) —
    or a bare sorted probability vector used as the spectrum directly.

    The value is ``1 - permutation_sum(spectrum)`` after zero
    stripping; the reported raw volume is normalized by the ambient
    (pre-stripping) dimension so that the incoherent spectrum attains
    the supremum ``sqrt(d)/(d! (d-1)!)`` exactly.
    """
    operation_class = operation_class.upper()
    if isinstance(state, PureState):
        spectrum, ambient = _select_spectrum(state, operation_class, cut)
    else:
        if operation_class not in _OPERATION_CLASSES:
            raise ValueError(f"unknown operation class {operation_class!r}")
        spectrum = sorted_spectrum(state)
        ambient = len(spectrum)
    sigma = permutation_sum(spectrum)
    sup = sup_source_volume(ambient)
    return MonotoneValue(kind="source", value=1.0 - sigma,
                         volume=sup * sigma, sup_volume=sup,
                         measure="sorted-representative",
                         operation_class=operation_class)


# ---------------------------------------------------------------------------
# single-qubit closed forms (x-z Bloch disc areas)


def _coerce_bloch(r) -> QubitBloch:
    if isinstance(r, QubitBloch):
        return r
    return QubitBloch(*r)


def _sio_accessible_volume(t, z):
    """Accessible area under strictly/fully incoherent qubit operations:
    the ellipse x^2 (1-z_r^2)/t_r^2 + z^2 <= 1 cut to the strip
    |x| <= t_r.  Vectorized over numpy arrays."""
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    safe = np.where(t > 0, t, 1.0)
    one_minus = np.clip(1.0 - z * z, 0.0, None)
    body = (2.0 * safe / np.sqrt(np.where(one_minus > 0, one_minus, 1.0))
            * np.arcsin(np.sqrt(one_minus))
            + 2.0 * np.abs(z) * safe)
    return np.where(t > 0, body, 0.0)


def _sio_source_volume_mixed(t, z):
    """Source area for strictly mixed qubit states (|r| < 1): the disc
    minus the strip-and-ellipse exclusion.  Vectorized."""
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    one_minus_t = np.clip(1.0 - t * t, 0.0, None)
    one_minus_z = np.clip(1.0 - z * z, 0.0, None)
    safe = np.where(one_minus_z > 0, one_minus_z, 1.0)
    body = (2.0 * np.arcsin(np.sqrt(one_minus_t))
            - 2.0 * t * np.sqrt(one_minus_t)
            - 2.0 * t / np.sqrt(safe) * np.arcsin(np.clip(np.abs(z), 0.0, 1.0))
            + 2.0 * np.abs(z) * t)
    return np.clip(body, 0.0, np.pi)


def _sio_source_volume_pure(z):
    """Source area convention on the pure boundary: the side caps
    |x| >= sqrt(1-z^2) of the disc."""
    az = np.clip(np.abs(np.asarray(z, dtype=float)), 0.0, 1.0)
    return 2.0 * np.arcsin(az) - 2.0 * az * np.sqrt(1.0 - az * az)


def qubit_sio_Ca(r) -> MonotoneValue:
    """Accessible coherence of a qubit under SIO (equivalently IC).

    The accessible region of a Bloch vector with transverse radius
    t = sqrt(r_x^2 + r_y^2) is the central strip |x| <= t of the
    ellipse x^2 (1 - r_z^2)/t^2 + z^2 = 1; its area divided by the
    disc area pi is the monotone.  States on the z axis (t = 0) have
    value 0.
    """
    r = _coerce_bloch(r)
    volume = float(_sio_accessible_volume(math.sqrt(r.transverse_sq), r.r_z))
    return MonotoneValue(kind="accessible", value=volume / math.pi,
                         volume=volume, sup_volume=math.pi,
                         measure="bloch-halfplane", operation_class="SIO")


def qubit_sio_Cs(r) -> MonotoneValue:
    """Source coherence of a qubit under SIO (equivalently IC).

    Piecewise in the Bloch ball: strictly mixed states use the
    strip-and-ellipse exclusion area; states on the pure boundary
    (|r|^2 = 1 within 1e-12) use the side-caps convention, under which
    source and accessible coherence agree on pure states.
    """
    r = _coerce_bloch(r)
    t = math.sqrt(r.transverse_sq)
    if r.is_pure():
        volume = float(_sio_source_volume_pure(r.r_z))
    else:
        volume = float(_sio_source_volume_mixed(t, r.r_z))
    return MonotoneValue(kind="source", value=1.0 - volume / math.pi,
                         volume=volume, sup_volume=math.pi,
                         measure="bloch-halfplane", operation_class="SIO")


_PIO_SUP_ACCESSIBLE = 1.0 + math.sqrt(2.0)


def _pio_accessible_volume(t, z):
    """Hexagon area 2 t (1 + |z|), vectorized."""
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    return 2.0 * t * (1.0 + np.abs(z))


def _pio_source_volume(t, z):
    """Source area under partition-preserving qubit operations,
    vectorized over numpy arrays.

    With k = (1 - |z|)/t the inner boundary |x| = (1 - |z'|)/k meets
    the unit circle at x* = 2k/(1+k^2); for k < 1 the region splits
    into four quadrant slivers between the strip |x| >= t, that line
    and the circle (empty when t >= x*, which happens exactly on and
    beyond the pure boundary), while for k >= 1 it is the side strip
    minus two triangles.  t = 0 gives the whole disc.
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    az = np.abs(z)
    degenerate = t <= STRIP_TOL
    safe_t = np.where(degenerate, 1.0, t)
    k = (1.0 - az) / safe_t

    # k >= 1 branch: strip caps minus triangles
    cap = np.pi - 2.0 * np.arcsin(np.clip(t, 0, 1)) \
        - 2.0 * t * np.sqrt(np.clip(1 - t * t, 0, None))
    safe_gap = np.where(az < 1.0, 1.0 - az, 1.0)
    strip_branch = cap - 2.0 * t * z * z / safe_gap

    # k < 1 branch: four slivers between strip, line and circle
    safe_k = np.where(k > 0, k, 1.0)
    x_star = 2.0 * safe_k / (1.0 + safe_k * safe_k)
    z_star = (1.0 - safe_k * safe_k) / (1.0 + safe_k * safe_k)
    sliver = (2.0 * (np.arcsin(np.clip(x_star, 0, 1))
                     - np.arcsin(np.clip(t, 0, 1)))
              + 2.0 * x_star * np.sqrt(np.clip(1 - x_star * x_star, 0, None))
              - 2.0 * t * np.sqrt(np.clip(1 - t * t, 0, None))
              - 2.0 * (az + z_star) * (x_star - t))
    sliver = np.where(t >= x_star, 0.0, sliver)

    body = np.where(k >= 1.0, strip_branch, sliver)
    return np.clip(np.where(degenerate, np.pi, body), 0.0, np.pi)


def qubit_pio_Ca(r) -> MonotoneValue:
    """Accessible coherence of a qubit under partition-preserving
    incoherent operations: hexagon area 2t(1+|r_z|) over 1 + sqrt(2).

    The normalization is the area attained on the maximizing family
    t^2 = r_z^2 = 1/2, not a global bound, so the value can exceed 1
    (up to 3*sqrt(3)/2 / (1+sqrt(2)) ~ 1.076); it is reported as is.
    """
    r = _coerce_bloch(r)
    volume = float(_pio_accessible_volume(math.sqrt(r.transverse_sq), r.r_z))
    return MonotoneValue(kind="accessible",
                         value=volume / _PIO_SUP_ACCESSIBLE,
                         volume=volume, sup_volume=_PIO_SUP_ACCESSIBLE,
                         measure="bloch-halfplane", operation_class="PIO")


def qubit_pio_Cs(r) -> MonotoneValue:
    """Source coherence of a qubit under partition-preserving
    incoherent operations (piecewise disc area, sup pi)."""
    r = _coerce_bloch(r)
    volume = float(_pio_source_volume(math.sqrt(r.transverse_sq), r.r_z))
    return MonotoneValue(kind="source", value=1.0 - volume / math.pi,
                         volume=volume, sup_volume=math.pi,
                         measure="bloch-halfplane", operation_class="PIO")


# ---------------------------------------------------------------------------
# planar example families


def _planar_spectrum(state, operation_class, cut):
    if isinstance(state, PureState):
        spectrum, _ = _select_spectrum(state, operation_class.upper(), cut)
    else:
        spectrum = sorted_spectrum(state)
    return spectrum


def planar_example_volumes(state, operation_class: str = "IC", cut=None):
    """Accessible/source volumes for the planar example families.

    ``state`` is a pure state (spectrum chosen by class as in
    :func:`source_coherence_closed`) or a bare sorted spectrum.  After
    zero stripping the support size picks the family:

    * size 3 — coordinate-plane measure on the (x1, x2) triangle:
      V_a = [(1-a)^2 - b^2]/2, V_s = [(a+b)^2 - b^2]/2, sup 1/2.
    * size 2 — sorted-representative segment: V_a = sqrt(2)(1-x),
      V_s = sqrt(2)(x - 1/2), sup sqrt(2)/2.
    * size 1 — incoherent; reported in the segment convention with
      x = 1.

    Returns ``(V_a, V_s, C_a, C_s)``.
    """
    lam = _strip_zeros(_planar_spectrum(state, operation_class, cut))
    if len(lam) == 3:
        a, b = float(lam[0]), float(lam[1])
        va = 0.5 * ((1.0 - a) ** 2 - b * b)
        vs = 0.5 * ((a + b) ** 2 - b * b)
        return (va, vs, 2.0 * va, 1.0 - 2.0 * vs)
    if len(lam) in (1, 2):
        x = float(lam[0])
        va = math.sqrt(2.0) * (1.0 - x)
        vs = math.sqrt(2.0) * (x - 0.5)
        c = 2.0 * (1.0 - x)
        return (va, vs, c, c)
    raise ValueError(f"no planar formula for support size {len(lam)}")


# ---------------------------------------------------------------------------
# region geometry (plot data with analytically exact boundaries)


@dataclass(frozen=True)
class Segment:
    """Directed straight boundary piece."""

    start: tuple
    end: tuple

    def green_term(self) -> float:
        return 0.5 * (self.start[0] * self.end[1]
                      - self.start[1] * self.end[0])

    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0],
                          self.end[1] - self.start[1])

    def sample(self, n: int) -> np.ndarray:
        s = np.linspace(0.0, 1.0, n)
        return np.column_stack([
            self.start[0] + s * (self.end[0] - self.start[0]),
            self.start[1] + s * (self.end[1] - self.start[1])])


@dataclass(frozen=True)
class Arc:
    """Axis-aligned elliptical arc, parameterized
    (cx + rx cos(theta), cy + ry sin(theta)) for theta from theta0 to
    theta1 (counterclockwise when theta1 > theta0)."""

    center: tuple
    rx: float
    ry: float
    theta0: float
    theta1: float

    def point(self, theta: float) -> tuple:
        return (self.center[0] + self.rx * math.cos(theta),
                self.center[1] + self.ry * math.sin(theta))

    @property
    def start(self) -> tuple:
        return self.point(self.theta0)

    @property
    def end(self) -> tuple:
        return self.point(self.theta1)

    def green_term(self) -> float:
        # 1/2 integral of (x dy - y dx) along the arc
        x0, y0 = self.start
        x1, y1 = self.end
        sweep = self.theta1 - self.theta0
        return 0.5 * (self.rx * self.ry * sweep
                      + self.center[0] * (y1 - y0)
                      - self.center[1] * (x1 - x0))

    def sample(self, n: int) -> np.ndarray:
        theta = np.linspace(self.theta0, self.theta1, n)
        return np.column_stack([
            self.center[0] + self.rx * np.cos(theta),
            self.center[1] + self.ry * np.sin(theta)])


@dataclass(frozen=True)
class RegionGeometry:
    """Boundary description of an accessible or source region.

    ``components`` is a tuple of closed counterclockwise loops, each a
    tuple of :class:`Segment`/:class:`Arc` pieces; one-dimensional
    regions (the sorted-representative segment family) instead carry
    open single-segment components and report length.  ``area()``
    evaluates Green's theorem piecewise and must reproduce the closed
    form within 1e-6.
    """

    measure: str
    kind: str
    dimension: int
    components: tuple

    def area(self) -> float:
        if self.dimension == 1:
            return sum(piece.length()
                       for loop in self.components for piece in loop)
        return sum(piece.green_term()
                   for loop in self.components for piece in loop)

    def boundary_points(self, per_piece: int = 64) -> list:
        """One (n, 2) polyline array per component."""
        out = []
        for loop in self.components:
            chunks = [piece.sample(per_piece) for piece in loop]
            out.append(np.vstack(chunks))
        return out


def _full_disc() -> tuple:
    return ((Arc((0.0, 0.0), 1.0, 1.0, -0.5 * math.pi, 0.5 * math.pi),
             Arc((0.0, 0.0), 1.0, 1.0, 0.5 * math.pi, 1.5 * math.pi)),)


def _sio_accessible_geometry(t: float, z: float) -> tuple:
    az = abs(z)
    rx = t / math.sqrt(1.0 - az * az) if az < 1.0 else 0.0
    theta = math.acos(min(1.0, math.sqrt(max(0.0, 1.0 - az * az))))
    loop = (
        Segment((t, -az), (t, az)),
        Arc((0.0, 0.0), rx, 1.0, theta, math.pi - theta),
        Segment((-t, az), (-t, -az)),
        Arc((0.0, 0.0), rx, 1.0, math.pi + theta, 2.0 * math.pi - theta),
    )
    return (loop,)


def _sio_source_geometry(t: float, z: float, pure: bool) -> tuple:
    if t <= STRIP_TOL:
        return _full_disc()
    az = abs(z)
    h = math.sqrt(max(0.0, 1.0 - t * t))
    theta_h = math.atan2(h, t)
    if pure:
        right = (
            Segment((t, h), (t, -h)),
            Arc((0.0, 0.0), 1.0, 1.0, -theta_h, theta_h),
        )
        left = (
            Segment((-t, -h), (-t, h)),
            Arc((0.0, 0.0), 1.0, 1.0, math.pi - theta_h, math.pi + theta_h),
        )
        return (right, left)
    rx = t / math.sqrt(1.0 - az * az)
    # ellipse parameter of the strip corner (t, +/-az)
    phi = math.acos(min(1.0, t / rx)) if rx > 0 else 0.5 * math.pi
    right = (
        Segment((t, h), (t, az)),
        Arc((0.0, 0.0), rx, 1.0, phi, -phi),       # bulge through (rx, 0)
        Segment((t, -az), (t, -h)),
        Arc((0.0, 0.0), 1.0, 1.0, -theta_h, theta_h),
    )
    left = (
        Segment((-t, -h), (-t, -az)),
        Arc((0.0, 0.0), rx, 1.0, math.pi + phi, math.pi - phi),
        Segment((-t, az), (-t, h)),
        Arc((0.0, 0.0), 1.0, 1.0, math.pi - theta_h, math.pi + theta_h),
    )
    return (right, left)


def _pio_accessible_geometry(t: float, z: float) -> tuple:
    az = abs(z)
    hexagon = [(t, az), (0.0, 1.0), (-t, az), (-t, -az), (0.0, -1.0), (t, -az)]
    loop = tuple(Segment(hexagon[i], hexagon[(i + 1) % 6]) for i in range(6))
    return (loop,)


def _pio_source_geometry(t: float, z: float) -> tuple:
    if t <= STRIP_TOL:
        return _full_disc()
    az = abs(z)
    h = math.sqrt(max(0.0, 1.0 - t * t))
    theta_h = math.atan2(h, t)
    k = (1.0 - az) / t
    if k >= 1.0:
        apex = 1.0 / k
        right = (
            Segment((t, h), (t, az)),
            Segment((t, az), (apex, 0.0)),
            Segment((apex, 0.0), (t, -az)),
            Segment((t, -az), (t, -h)),
            Arc((0.0, 0.0), 1.0, 1.0, -theta_h, theta_h),
        )
        left = (
            Segment((-t, -h), (-t, -az)),
            Segment((-t, -az), (-apex, 0.0)),
            Segment((-apex, 0.0), (-t, az)),
            Segment((-t, az), (-t, h)),
            Arc((0.0, 0.0), 1.0, 1.0, math.pi - theta_h, math.pi + theta_h),
        )
        return (right, left)
    x_star = 2.0 * k / (1.0 + k * k)
    if t >= x_star:
        return ()
    z_star = (1.0 - k * k) / (1.0 + k * k)
    theta_star = math.atan2(z_star, x_star)
    line_meet = 1.0 - k * t  # z where the line crosses x = t (equals az)
    top_right = (
        Segment((t, h), (t, line_meet)),
        Segment((t, line_meet), (x_star, z_star)),
        Arc((0.0, 0.0), 1.0, 1.0, theta_star, theta_h),
    )
    bottom_right = (
        Segment((x_star, -z_star), (t, -line_meet)),
        Segment((t, -line_meet), (t, -h)),
        Arc((0.0, 0.0), 1.0, 1.0, -theta_h, -theta_star),
    )
    top_left = (
        Segment((-t, line_meet), (-t, h)),
        Arc((0.0, 0.0), 1.0, 1.0, math.pi - theta_h, math.pi - theta_star),
        Segment((-x_star, z_star), (-t, line_meet)),
    )
    bottom_left = (
        Arc((0.0, 0.0), 1.0, 1.0, math.pi + theta_star, math.pi + theta_h),
        Segment((-t, -h), (-t, -line_meet)),
        Segment((-t, -line_meet), (-x_star, -z_star)),
    )
    return (top_right, bottom_right, top_left, bottom_left)


def _planar_polygon(vertices) -> tuple:
    n = len(vertices)
    return (tuple(Segment(vertices[i], vertices[(i + 1) % n])
                  for i in range(n)),)


def region_geometry(subject, operation_class: str, kind: str) -> RegionGeometry:
    """Exact boundary of an accessible or source region as plot data.

    Supported subjects: a :class:`~cohertk.states.QubitBloch` (or
    3-tuple) with class SIO/IC or PIO — regions in the x-z Bloch disc —
    and a pure state or sorted spectrum with support size 2 or 3 — the
    planar example regions.  The emitted piecewise boundary integrates
    (via :meth:`RegionGeometry.area`) to the closed-form volume within
    1e-6.
    """
    if kind not in ("accessible", "source"):
        raise ValueError(f"unknown kind {kind!r}")
    operation_class = operation_class.upper()

    # A bare 3-vector is ambiguous; read it as a spectrum when it is a
    # sorted probability vector, as a Bloch vector otherwise.  Pass a
    # QubitBloch explicitly to force the Bloch reading.
    bloch = None
    if isinstance(subject, QubitBloch):
        bloch = subject
    elif not isinstance(subject, PureState):
        arr = np.asarray(subject, dtype=float)
        if arr.shape == (3,):
            is_spectrum = (abs(float(arr.sum()) - 1.0) <= 1e-8
                           and np.all(arr >= -1e-12)
                           and np.all(np.diff(arr) <= 1e-12))
            if not is_spectrum:
                bloch = QubitBloch(*arr)

    if bloch is not None:
        t = math.sqrt(bloch.transverse_sq)
        z = bloch.r_z
        if operation_class in ("SIO", "IC"):
            if kind == "accessible":
                loops = _sio_accessible_geometry(t, z)
            else:
                loops = _sio_source_geometry(t, z, bloch.is_pure())
        elif operation_class == "PIO":
            if kind == "accessible":
                loops = _pio_accessible_geometry(t, z)
            else:
                loops = _pio_source_geometry(t, z)
        else:
            raise ValueError(
                f"no qubit region geometry for class {operation_class!r}")
        return RegionGeometry(measure="bloch-halfplane", kind=kind,
                              dimension=2, components=loops)

    lam = _strip_zeros(_planar_spectrum(subject, operation_class, None))
    if len(lam) == 3:
        a, b = float(lam[0]), float(lam[1])
        if kind == "source":
            vertices = [(0.0, 0.0), (a, 0.0), (a, b), (0.0, a + b)]
        else:
            vertices = [(a, b), (a, 1.0 - a), (1.0, 0.0), (a + b, 0.0)]
            vertices.reverse()  # counterclockwise
        return RegionGeometry(measure="coordinate-plane", kind=kind,
                              dimension=2,
                              components=_planar_polygon(vertices))
    if len(lam) in (1, 2):
        x = float(lam[0])
        if kind == "accessible":
            seg = Segment((x, 1.0 - x), (1.0, 0.0))
        else:
            seg = Segment((0.5, 0.5), (x, 1.0 - x))
        return RegionGeometry(measure="sorted-representative", kind=kind,
                              dimension=1, components=((seg,),))
    raise ValueError(f"no region geometry for support size {len(lam)}")

"""Independent ground truth for the closed-form volumes and monotone
properties.

Three kinds of oracle live here: exact majorization-polytope volumes by
rational vertex enumeration (no floating-point noise), seeded
Monte-Carlo volume estimation over feasibility predicates, and
property-test drivers for the monotone axioms (nonincrease under free
channels, and the two conditions — average coherence under selective
measurements and convexity under mixing — that the volume monotones
deliberately fail).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channels import apply_to_density, apply_to_pure, random_channel
from .feasibility import pio_feasible_mask, sio_feasible_mask
from .monotones import (_sio_accessible_volume, _sio_source_volume_mixed,
                        _sio_source_volume_pure, permutation_sum,
                        qubit_pio_Ca, qubit_pio_Cs, qubit_sio_Ca,
                        qubit_sio_Cs, source_coherence_closed,
                        sup_source_volume)
from .states import PureState, QubitBloch, product_term_count, sorted_spectrum

__all__ = [
    "DEFAULT_SEED",
    "VolumeEstimate",
    "SampleRegion",
    "make_region",
    "mc_volume",
    "exact_polytope_volume",
    "qubit_region_predicate",
    "sorted_simplex_predicate",
    "coordinate_plane_predicate",
    "IdentityReport",
    "formula_identity_check",
    "MonotonicityReport",
    "monotonicity_suite",
    "Lemma1Report",
    "lemma1_suite",
    "CounterexampleReport",
    "b3_b4_counterexamples",
]

#: Documented default seed for every stochastic oracle entry point.
DEFAULT_SEED = 715517

#: Monte-Carlo samples are drawn in fixed-size shards with seeds spawned
#: from the root seed, so results do not depend on how shards are
#: scheduled across workers.
SHARD_SIZE = 100_000

_MONOTONICITY_TOL = 1e-8


# ---------------------------------------------------------------------------
# Monte-Carlo volume estimation


@dataclass(frozen=True)
class VolumeEstimate:
    """Monte-Carlo volume with its sampling error.

    ``mean`` is hit-ratio times region measure; ``standard_error`` is
    the binomial proportion error scaled the same way.  Identical
    (seed, samples) pairs reproduce bit-identical estimates.
    """

    mean: float
    standard_error: float
    samples: int
    seed: int


@dataclass(frozen=True)
class SampleRegion:
    """A sampleable base region with known measure.

    ``sample(rng, n)`` returns an (n, dimension) array of points drawn
    uniformly from the region.
    """

    name: str
    measure: float
    dimension: int
    _sampler: object

    def sample(self, rng, n: int) -> np.ndarray:
        return self._sampler(rng, n)


def _sample_sorted_simplex(d):
    def sampler(rng, n):
        raw = rng.standard_exponential((n, d))
        raw /= raw.sum(axis=1, keepdims=True)
        raw.sort(axis=1)
        return raw[:, ::-1]
    return sampler


def _sample_coordinate_plane(rng, n):
    pts = rng.random((n, 2))
    fold = pts.sum(axis=1) > 1.0
    pts[fold] = 1.0 - pts[fold]
    return pts


def _sample_disc(theta_lo, theta_hi):
    def sampler(rng, n):
        radius = np.sqrt(rng.random(n))
        theta = theta_lo + (theta_hi - theta_lo) * rng.random(n)
        return np.column_stack([radius * np.cos(theta),
                                radius * np.sin(theta)])
    return sampler


def make_region(name: str, dim: int = None) -> SampleRegion:
    """Region factory.

    * ``"simplex-sorted"`` (needs ``dim``): nonincreasing probability
      vectors, uniform w.r.t. the Euclidean measure on the simplex
      hyperplane; measure sqrt(d)/(d! (d-1)!).
    * ``"coordinate-plane"``: the (x1, x2) triangle x1, x2 >= 0,
      x1 + x2 <= 1; measure 1/2.
    * ``"bloch-disc"``: the full x-z Bloch disc; measure pi.
    * ``"bloch-half-disc"``: its x >= 0 half; measure pi/2.
    """
    if name == "simplex-sorted":
        if dim is None or dim < 2:
            raise ValueError("simplex-sorted needs dim >= 2")
        return SampleRegion(name=f"simplex-sorted-{dim}",
                            measure=sup_source_volume(dim),
                            dimension=dim,
                            _sampler=_sample_sorted_simplex(dim))
    if name == "coordinate-plane":
        return SampleRegion(name=name, measure=0.5, dimension=2,
                            _sampler=_sample_coordinate_plane)
    if name == "bloch-disc":
        return SampleRegion(name=name, measure=math.pi, dimension=2,
                            _sampler=_sample_disc(0.0, 2.0 * math.pi))
    if name == "bloch-half-disc":
        return SampleRegion(name=name, measure=0.5 * math.pi, dimension=2,
                            _sampler=_sample_disc(-0.5 * math.pi,
                                                  0.5 * math.pi))
    raise ValueError(f"unknown region {name!r}")


def mc_volume(predicate, region: SampleRegion, samples: int,
              seed: int = DEFAULT_SEED) -> VolumeEstimate:
    """Monte-Carlo volume of {x in region : predicate(x)}.

    ``predicate`` must be vectorized: given an (n, dim) array it
    returns n booleans.  Sampling is sharded deterministically (fixed
    shard size, per-shard seeds spawned from ``seed``), so the result
    depends only on (seed, samples).
    """
    samples = int(samples)
    if samples <= 0:
        raise ValueError("samples must be positive")
    n_shards = (samples + SHARD_SIZE - 1) // SHARD_SIZE
    children = np.random.SeedSequence(seed).spawn(n_shards)
    hits = 0
    remaining = samples
    for child in children:
        m = min(SHARD_SIZE, remaining)
        remaining -= m
        rng = np.random.default_rng(child)
        points = region.sample(rng, m)
        flags = np.asarray(predicate(points), dtype=bool)
        if flags.shape != (m,):
            raise ValueError("predicate must return one boolean per point")
        hits += int(flags.sum())
    ratio = hits / samples
    err = region.measure * math.sqrt(ratio * (1.0 - ratio) / samples)
    return VolumeEstimate(mean=region.measure * ratio, standard_error=err,
                          samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# feasibility predicates over the sample regions


def qubit_region_predicate(r, operation_class: str, kind: str):
    """Vectorized membership test of the accessible/source set of a
    Bloch vector, over x-z disc points.

    ``kind="accessible"`` tests "r converts to the sampled point";
    ``kind="source"`` tests "the sampled point converts to r".
    """
    if not isinstance(r, QubitBloch):
        r = QubitBloch(*r)
    operation_class = operation_class.upper()
    if operation_class in ("SIO", "IC"):
        mask = sio_feasible_mask
    elif operation_class == "PIO":
        mask = pio_feasible_mask
    else:
        raise ValueError(f"no qubit predicate for class {operation_class!r}")
    t2, z = r.transverse_sq, r.r_z
    if kind == "accessible":
        def predicate(points):
            return mask(t2, z, points[:, 0] ** 2, points[:, 1])
    elif kind == "source":
        def predicate(points):
            return mask(points[:, 0] ** 2, points[:, 1], t2, z)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return predicate


def sorted_simplex_predicate(spectrum, kind: str, slack: float = 1e-10):
    """Majorization test against a fixed sorted spectrum, vectorized
    over sorted-simplex sample points.

    Source points are majorized by the spectrum (all partial sums
    below); accessible points majorize it.
    """
    lam = sorted_spectrum(spectrum)
    cumulative = np.cumsum(lam)

    def predicate(points):
        sums = np.cumsum(points, axis=1)
        if kind == "source":
            return np.all(sums <= cumulative + slack, axis=1)
        if kind == "accessible":
            return np.all(sums >= cumulative - slack, axis=1)
        raise ValueError(f"unknown kind {kind!r}")
    return predicate


def coordinate_plane_predicate(spectrum, kind: str, slack: float = 1e-10):
    """Coordinate-ordered partial-sum test for the planar qutrit
    family: x1 against a and x1 + x2 against a + b, in the unsorted
    coordinate plane."""
    lam = sorted_spectrum(spectrum)
    if len(lam) != 3:
        raise ValueError("coordinate-plane predicate needs a length-3 spectrum")
    a, ab = float(lam[0]), float(lam[0] + lam[1])

    def predicate(points):
        first = points[:, 0]
        both = points[:, 0] + points[:, 1]
        if kind == "source":
            return (first <= a + slack) & (both <= ab + slack)
        if kind == "accessible":
            return (first >= a - slack) & (both >= ab - slack)
        raise ValueError(f"unknown kind {kind!r}")
    return predicate


# ---------------------------------------------------------------------------
# exact majorization polytope volume (rational arithmetic)


def _solve_square_exact(rows, rhs):
    """Solve an n x n Fraction system; None when singular."""
    n = len(rhs)
    aug = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        head = aug[col][col]
        aug[col] = [x / head for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


def _halfspaces(lam):
    """Constraint list a . x <= b over x = (mu_1 .. mu_{d-1}) for the
    polytope {mu nonincreasing, sum mu = total, partial sums of mu
    bounded by those of lam}."""
    d = len(lam)
    n = d - 1
    partial = list(itertools.accumulate(lam))
    cons = []
    zero = [Fraction(0)] * n
    for k in range(n - 1):  # x_{k+1} <= x_k
        a = zero.copy()
        a[k + 1], a[k] = Fraction(1), Fraction(-1)
        cons.append((a, Fraction(0)))
    # x_{n-1} >= mu_d = total - sum(x):  -(sum x) - x_{n-1} <= -total
    a = [Fraction(-1)] * n
    a[n - 1] -= 1
    cons.append((a, -partial[-1]))
    # mu_d >= 0: sum x <= total
    cons.append(([Fraction(1)] * n, partial[-1]))
    for k in range(1, d):  # partial sums
        a = [Fraction(1)] * k + [Fraction(0)] * (n - k)
        cons.append((a, partial[k - 1]))
    return cons


def _dot(a, x):
    return sum(ai * xi for ai, xi in zip(a, x))


def _enumerate_vertices(cons, n):
    vertices = []
    seen = set()
    for subset in itertools.combinations(range(len(cons)), n):
        rows = [cons[i][0] for i in subset]
        rhs = [cons[i][1] for i in subset]
        point = _solve_square_exact(rows, rhs)
        if point is None or point in seen:
            continue
        if all(_dot(a, point) <= b for a, b in cons):
            seen.add(point)
            vertices.append(point)
    return vertices


def _angular_order(points):
    """Order 2-D Fraction points counterclockwise around their mean
    (exact comparisons; correct for vertices of a convex polygon)."""
    m = len(points)
    cx = sum(p[0] for p in points) / m
    cy = sum(p[1] for p in points) / m

    def half(p):
        dy = p[1] - cy
        dx = p[0] - cx
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    import functools

    def compare(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return -1 if hp < hq else 1
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    return sorted(points, key=functools.cmp_to_key(compare))


def _polygon_area(points):
    ordered = _angular_order(points)
    total = Fraction(0)
    m = len(ordered)
    for i in range(m):
        x0, y0 = ordered[i]
        x1, y1 = ordered[(i + 1) % m]
        total += x0 * y1 - x1 * y0
    return abs(total) / 2


def _polytope_volume_3d(cons, vertices):
    m = len(vertices)
    centroid = tuple(sum(v[i] for v in vertices) / m for i in range(3))
    total = Fraction(0)
    seen_planes = set()
    for a, b in cons:
        scale = next((c for c in a if c != 0), None)
        if scale is None:
            continue
        key = tuple(c / scale for c in a) + (b / scale,)
        if key in seen_planes:
            continue
        seen_planes.add(key)
        contact = [v for v in vertices if _dot(a, v) == b]
        if len(contact) < 3:
            continue
        v0 = contact[0]
        u1 = tuple(contact[1][i] - v0[i] for i in range(3))
        u2 = None
        for w in contact[2:]:
            cand = tuple(w[i] - v0[i] for i in range(3))
            cross = (u1[1] * cand[2] - u1[2] * cand[1],
                     u1[2] * cand[0] - u1[0] * cand[2],
                     u1[0] * cand[1] - u1[1] * cand[0])
            if any(c != 0 for c in cross):
                u2 = cand
                break
        if u2 is None:
            continue
        # linear chart of the facet plane; convex angular order survives
        chart = []
        for v in contact:
            dv = tuple(v[i] - v0[i] for i in range(3))
            chart.append((_dot(u1, dv), _dot(u2, dv)))
        order = _angular_order(chart)
        index = {c: v for c, v in zip(chart, contact)}
        ring = [index[c] for c in order]
        for i in range(1, len(ring) - 1):
            e0 = tuple(ring[0][j] - centroid[j] for j in range(3))
            e1 = tuple(ring[i][j] - centroid[j] for j in range(3))
            e2 = tuple(ring[i + 1][j] - centroid[j] for j in range(3))
            det = (e0[0] * (e1[1] * e2[2] - e1[2] * e2[1])
                   - e0[1] * (e1[0] * e2[2] - e1[2] * e2[0])
                   + e0[2] * (e1[0] * e2[1] - e1[1] * e2[0]))
            total += abs(det)
    return total / 6


def exact_polytope_volume(spectrum) -> float:
    """Euclidean volume of the majorization polytope of a sorted
    spectrum, by exact rational vertex enumeration.

    The polytope is {mu nonincreasing, sum mu = sum lam, partial sums
    of mu <= those of lam}, measured inside the simplex hyperplane
    (metric factor sqrt(d) over the first d-1 coordinates).  Zero
    entries are kept — the ambient dimension is part of the input.
    Supports lengths up to 4; length 1 returns 1.0 by convention.
    """
    lam = [Fraction(x) for x in np.asarray(spectrum, dtype=float)]
    d = len(lam)
    if d > 4:
        raise ValueError("exact volumes are implemented for lengths <= 4")
    if any(lam[i] < lam[i + 1] for i in range(d - 1)) or lam[-1] < 0:
        raise ValueError("spectrum must be sorted nonincreasing and nonnegative")
    if abs(float(sum(lam)) - 1.0) > 1e-8:
        raise ValueError("spectrum must sum to 1")
    if d == 1:
        return 1.0
    n = d - 1
    cons = _halfspaces(lam)
    vertices = _enumerate_vertices(cons, n)
    if len(vertices) <= n:
        return 0.0
    if n == 1:
        xs = [v[0] for v in vertices]
        coord = max(xs) - min(xs)
    elif n == 2:
        coord = _polygon_area(vertices)
    else:
        coord = _polytope_volume_3d(cons, vertices)
    return float(coord) * math.sqrt(d)


@dataclass(frozen=True)
class IdentityReport:
    """Worst disagreement between the closed-form source volume and the
    exact polytope volume over random positive spectra."""

    count: int
    dims: tuple
    seed: int
    max_abs_difference: float


def formula_identity_check(count: int = 100, dims=(2, 3, 4),
                           seed: int = DEFAULT_SEED) -> IdentityReport:
    """For ``count`` random strictly positive sorted spectra in each
    dimension, compare sup-volume times the signed permutation sum
    against :func:`exact_polytope_volume` and report the largest
    absolute difference."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for d in dims:
        sup = sup_source_volume(d)
        for _ in range(count):
            lam = rng.standard_exponential(d)
            lam /= lam.sum()
            lam[::-1].sort()
            closed = sup * permutation_sum(lam)
            exact = exact_polytope_volume(lam)
            worst = max(worst, abs(closed - exact))
    return IdentityReport(count=count, dims=tuple(dims), seed=seed,
                          max_abs_difference=worst)


# ---------------------------------------------------------------------------
# monotonicity property suite


@dataclass(frozen=True)
class MonotonicityReport:
    """Outcome of random (state, channel) monotonicity trials."""

    monotone: str
    operation_class: str
    trials: int
    seed: int
    tolerance: float
    max_increase: float
    violations: int


_QUBIT_MONOTONES = {
    "sio-Ca": qubit_sio_Ca,
    "sio-Cs": qubit_sio_Cs,
    "pio-Ca": qubit_pio_Ca,
    "pio-Cs": qubit_pio_Cs,
}

_KRAUS_RANGE = {"IU": (1, 1), "PIO": (1, 2), "SIO": (1, 4), "IC": (1, 4)}


def _random_ball_point(rng) -> QubitBloch:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius = rng.random() ** (1.0 / 3.0)
    return QubitBloch(*(radius * direction))


def monotonicity_suite(monotone: str, operation_class: str, trials: int,
                       seed: int = DEFAULT_SEED) -> MonotonicityReport:
    """Random trials of "free channels never increase the monotone".

    Qubit monotones (``sio-Ca``, ``sio-Cs``, ``pio-Ca``, ``pio-Cs``)
    are tested on Bloch vectors uniform in the ball against random
    channels of ``operation_class``; the partition-preserving
    monotones support channel classes IU and PIO only.  The spectrum
    monotone ``source-closed`` is tested on random sorted spectra
    against random feasible pure-state targets (interpolations toward
    the incoherent vertex, which majorize the source spectrum).

    The report carries the largest observed increase and the count of
    increases above 1e-8.
    """
    operation_class = operation_class.upper()
    rng = np.random.default_rng(seed)
    worst = -math.inf
    violations = 0

    if monotone == "source-closed":
        if operation_class not in ("SIO", "IC", "LICC", "LSICC"):
            raise ValueError(
                f"source-closed is not claimed monotone under {operation_class!r}")
        for _ in range(trials):
            d = int(rng.integers(2, 6))
            lam = rng.standard_exponential(d)
            lam /= lam.sum()
            lam[::-1].sort()
            blend = rng.random()
            target = blend * lam + (1.0 - blend) * np.eye(d)[0]
            before = source_coherence_closed(lam, operation_class).value
            after = source_coherence_closed(target, operation_class).value
            increase = after - before
            worst = max(worst, increase)
            if increase > _MONOTONICITY_TOL:
                violations += 1
        return MonotonicityReport(monotone, operation_class, trials, seed,
                                  _MONOTONICITY_TOL, worst, violations)

    if monotone not in _QUBIT_MONOTONES:
        raise ValueError(f"unknown monotone {monotone!r}")
    if monotone.startswith("pio") and operation_class not in ("IU", "PIO"):
        raise ValueError(
            "partition-preserving monotones are claimed only under IU/PIO")
    if operation_class not in _KRAUS_RANGE:
        raise ValueError(f"unknown operation class {operation_class!r}")
    fn = _QUBIT_MONOTONES[monotone]
    lo, hi = _KRAUS_RANGE[operation_class]
    for _ in range(trials):
        state = _random_ball_point(rng)
        n_kraus = int(rng.integers(lo, hi + 1))
        channel = random_channel(operation_class, 2, n_kraus,
                                 int(rng.integers(0, 2**63)))
        image = apply_to_density(channel, state)
        increase = fn(image).value - fn(state).value
        worst = max(worst, increase)
        if increase > _MONOTONICITY_TOL:
            violations += 1
    return MonotonicityReport(monotone, operation_class, trials, seed,
                              _MONOTONICITY_TOL, worst, violations)


@dataclass(frozen=True)
class Lemma1Report:
    """Outcome of random product-term-count trials: free-channel
    branches never increase the number of nonzero amplitudes."""

    trials: int
    seed: int
    max_increase: int
    violations: int


def lemma1_suite(trials: int, seed: int = DEFAULT_SEED) -> Lemma1Report:
    """Random SIO/IC channel branches on random states of 1-3 qubits:
    reports the largest change in nonzero-amplitude count across
    branches (never positive)."""
    rng = np.random.default_rng(seed)
    shapes = [(2,), (2, 2), (2, 2, 2)]
    worst = -(2 ** 31)
    violations = 0
    for _ in range(trials):
        dims = shapes[int(rng.integers(0, len(shapes)))]
        total = int(np.prod(dims))
        support_size = int(rng.integers(1, total + 1))
        support = rng.choice(total, size=support_size, replace=False)
        amps = np.zeros(total, dtype=complex)
        amps[support] = rng.normal(size=support_size) \
            + 1j * rng.normal(size=support_size)
        amps /= np.linalg.norm(amps)
        state = PureState(dims, amps)
        rank = product_term_count(state)
        class_tag = ("SIO", "IC")[int(rng.integers(0, 2))]
        channel = random_channel(class_tag, total, int(rng.integers(1, 5)),
                                 int(rng.integers(0, 2**63)))
        for _, branch in apply_to_pure(channel, state):
            change = product_term_count(branch) - rank
            worst = max(worst, change)
            if change > 0:
                violations += 1
    return Lemma1Report(trials, seed, worst, violations)


# ---------------------------------------------------------------------------
# conditions the volume monotones fail (with certified counterexamples)


@dataclass(frozen=True)
class PrintedInstance:
    """One reference evaluation reported side by side with its
    literature value (no equality asserted; the printed derivations are
    ambiguous about normalization)."""

    label: str
    parameters: dict
    printed_value: float
    normalized_convention: float
    as_printed_convention: float


@dataclass(frozen=True)
class GridViolations:
    """Summary of one condition scanned over one parameter grid.

    ``reading`` distinguishes the branch-probability-weighted average
    (the standard selective-measurement condition) from the unweighted
    branch sum that the literature instances print.
    """

    condition: str
    monotone: str
    reading: str
    count: int
    best_margin: float
    best_parameters: dict


@dataclass(frozen=True)
class CounterexampleReport:
    largest_eigenvalue_check: float
    printed_instances: tuple
    grid: tuple
    grid_points: int


def _ca_value(t, z):
    return _sio_accessible_volume(t, z) / math.pi


def _cs_value_mixed(t, z):
    return 1.0 - _sio_source_volume_mixed(t, z) / math.pi


def _cs_value_pure(z):
    return 1.0 - _sio_source_volume_pure(z) / math.pi


def _qubit_value(kind, t, z):
    """Scalar C_a/C_s with the pure/mixed branching of the closed forms."""
    if kind == "Ca":
        return float(_ca_value(t, z))
    if t * t + z * z >= 1.0 - 1e-12:
        return float(_cs_value_pure(z))
    return float(_cs_value_mixed(t, z))


def _printed_eigenvector_bloch(t, z):
    """Bloch data of the two eigenvectors exactly as printed
    (unnormalized coefficients mapped to t = 2|c0 c1|, z = c0^2 - c1^2)
    and under the normalized convention (unit vectors along the
    +/- (t, z) axis)."""
    w = math.hypot(t, z)
    printed = []
    for sign in (1.0, -1.0):
        denom = t * t + z * z + sign * z * w
        c0 = 0.5 * t * (z + sign * w) / denom
        c1 = 0.5 * t * t / denom
        printed.append((2.0 * abs(c0 * c1), c0 * c0 - c1 * c1))
    normalized = [(t / w, z / w), (t / w, -z / w)]
    weights = ((1.0 + w) / 2.0, (1.0 - w) / 2.0)
    return weights, normalized, printed


def _damping_branches(t, z, p, gamma):
    """Weights and Bloch vectors of the nontrivial branches of the
    two-sided damping channel on the state with Bloch vector (t, 0, z).
    The two jump branches land on basis states (zero coherence) and are
    omitted; their weights complete the total to 1."""
    rho00 = (1.0 + z) / 2.0
    rho11 = (1.0 - z) / 2.0
    keep = np.sqrt(1.0 - gamma)
    w0 = p * (rho00 + (1.0 - gamma) * rho11)
    t0 = p * keep * t / w0
    z0 = p * (rho00 - (1.0 - gamma) * rho11) / w0
    w2 = (1.0 - p) * ((1.0 - gamma) * rho00 + rho11)
    t2 = (1.0 - p) * keep * t / w2
    z2 = (1.0 - p) * ((1.0 - gamma) * rho00 - rho11) / w2
    return (w0, t0, z0), (w2, t2, z2)


def _printed_instances():
    out = []

    # mixing (convexity) instances: eigendecomposition of rho(t, z)
    for kind, t, printed in (("Ca", 0.1, 0.0994), ("Cs", 0.1, 0.6930)):
        z = t
        weights, normalized, as_printed = _printed_eigenvector_bloch(t, z)
        mixed = _qubit_value(kind, t, z)
        norm_val = mixed - sum(
            wt * _qubit_value(kind, tt, zz)
            for wt, (tt, zz) in zip(weights, normalized))
        printed_val = mixed - sum(
            wt * _qubit_value(kind, tt, zz)
            for wt, (tt, zz) in zip(weights, as_printed))
        label = ("accessible" if kind == "Ca" else "source") \
            + "-coherence convexity gap, eigendecomposition at t=z=0.1"
        out.append(PrintedInstance(
            label=label,
            parameters={"t": t, "z": z},
            printed_value=printed,
            normalized_convention=norm_val,
            as_printed_convention=printed_val))

    # selective-measurement instances: damping-channel branches
    for kind, params, printed in (
            ("Ca", {"p": 0.99, "gamma": 0.5, "t": 0.5, "z": 0.5}, -0.1912),
            ("Cs", {"p": 0.99, "gamma": 0.8, "t": 0.4, "z": 0.4}, -0.2123)):
        t, z = params["t"], params["z"]
        branches = _damping_branches(t, z, params["p"], params["gamma"])
        whole = _qubit_value(kind, t, z)
        weighted = whole - sum(w * _qubit_value(kind, tt, zz)
                               for w, tt, zz in branches)
        unweighted = whole - sum(_qubit_value(kind, tt, zz)
                                 for _, tt, zz in branches)
        label = ("accessible" if kind == "Ca" else "source") \
            + "-coherence selective-measurement gap, damping channel"
        out.append(PrintedInstance(
            label=label,
            parameters=params,
            printed_value=printed,
            normalized_convention=weighted,
            as_printed_convention=unweighted))
    return tuple(out)


def b3_b4_counterexamples(step: float = 0.05) -> CounterexampleReport:
    """Certified failures of averaging and convexity for the qubit
    volume monotones.

    Scans grids with axes in [0.05, 0.95] (default step 0.05,
    restricted to valid Bloch vectors) for

    * selective-measurement violations over the damping channels
      (t, z, p, gamma), under two readings: the unweighted branch sum
      printed in the literature instances (grandly violated) and the
      standard probability-weighted branch average (never violated by
      this family — reported with its actual best margin);
    * weighted selective-measurement violations over general
      two-outcome diagonal instruments K0 = diag(a, b),
      K1 = diag(sqrt(1-a^2), sqrt(1-b^2)) on states (t, z) — the source
      monotone admits strict weighted violations here, the accessible
      one does not;
    * convexity violations: C of a mixture exceeds the corresponding
      mixture of C values by more than 1e-3, over both the
      eigendecomposition family and mixtures with an incoherent state.

    The four literature reference instances are evaluated side by side
    under a normalized and an as-printed convention; no equality with
    the printed constants is asserted.
    """
    margin = 1e-3
    axis = np.arange(0.05, 0.95 + 1e-9, step)
    t, z, p, g = np.meshgrid(axis, axis, axis, axis, indexing="ij")
    t, z, p, g = (a.ravel() for a in (t, z, p, g))
    valid = t * t + z * z < 1.0 - 1e-9
    t, z, p, g = t[valid], z[valid], p[valid], g[valid]

    ca_in = _ca_value(t, z)
    cs_in = _cs_value_mixed(t, z)

    results = []

    # selective measurement: damping-channel branches, both readings
    (w0, t0, z0), (w2, t2, z2) = _damping_branches(t, z, p, g)
    for name, value_in, fn in (("accessible", ca_in, _ca_value),
                               ("source", cs_in, _cs_value_mixed)):
        c0, c2 = fn(t0, z0), fn(t2, z2)
        for reading, total in (("unweighted", c0 + c2),
                               ("weighted", w0 * c0 + w2 * c2)):
            gap = total - value_in  # positive = violation
            results.append(_summarize(
                "selective-measurement", name, gap, margin, reading=reading,
                family="damping", t=t, z=z, p=p, gamma=g))

    # weighted selective measurement over two-outcome diagonal
    # instruments (a, b axes replace p, gamma; same grid bounds)
    a, b, ti, zi = np.meshgrid(axis, axis, axis, axis, indexing="ij")
    a, b, ti, zi = (x.ravel() for x in (a, b, ti, zi))
    ok = ti * ti + zi * zi < 1.0 - 1e-9
    a, b, ti, zi = a[ok], b[ok], ti[ok], zi[ok]
    rho00, rho11 = (1.0 + zi) / 2.0, (1.0 - zi) / 2.0
    wa = a * a * rho00 + b * b * rho11
    ta, za = a * b * ti / wa, (a * a * rho00 - b * b * rho11) / wa
    ac, bc = np.sqrt(1.0 - a * a), np.sqrt(1.0 - b * b)
    wb = 1.0 - wa
    safe_wb = np.where(wb > 1e-12, wb, 1.0)
    tb = ac * bc * ti / safe_wb
    zb = (ac * ac * rho00 - bc * bc * rho11) / safe_wb
    for name, fn in (("accessible", _ca_value), ("source", _cs_value_mixed)):
        avg = wa * fn(ta, za) + np.where(wb > 1e-12, wb * fn(tb, zb), 0.0)
        gap = avg - fn(ti, zi)
        results.append(_summarize(
            "selective-measurement", name, gap, margin, reading="weighted",
            family="diagonal-instrument", a=a, b=b, t=ti, z=zi))

    # convexity family 1: eigendecomposition into the +/- pure states
    w = np.sqrt(t * t + z * z)
    lam1 = (1.0 + w) / 2.0
    lam2 = (1.0 - w) / 2.0
    tp, zp = t / w, z / w
    ca_pure = _ca_value(tp, zp)          # even in z
    cs_pure1 = _cs_value_pure(zp)
    cs_pure2 = _cs_value_pure(-zp)
    eigen_gap_ca = ca_in - ca_pure       # lam1 + lam2 = 1
    eigen_gap_cs = cs_in - lam1 * cs_pure1 - lam2 * cs_pure2

    # convexity family 2: mix with an incoherent state of bias 2 gamma - 1
    bias = 2.0 * g - 1.0
    t_mix = p * t
    z_mix = p * z + (1.0 - p) * bias
    mix_gap_ca = _ca_value(t_mix, z_mix) - p * ca_in
    mix_gap_cs = _cs_value_mixed(t_mix, z_mix) - p * cs_in

    for name, eigen_gap, mix_gap in (
            ("accessible", eigen_gap_ca, mix_gap_ca),
            ("source", eigen_gap_cs, mix_gap_cs)):
        eig = _summarize("convexity", name, eigen_gap, margin,
                         reading="weighted", family="eigendecomposition",
                         t=t, z=z)
        mix = _summarize("convexity", name, mix_gap, margin,
                         reading="weighted", family="incoherent-mixture",
                         t=t, z=z, p=p, gamma=g)
        best = eig if eig.best_margin >= mix.best_margin else mix
        results.append(GridViolations(
            condition="convexity", monotone=name, reading="weighted",
            count=eig.count + mix.count,
            best_margin=best.best_margin,
            best_parameters=best.best_parameters))

    weights, _, _ = _printed_eigenvector_bloch(0.1, 0.1)
    return CounterexampleReport(
        largest_eigenvalue_check=weights[0],
        printed_instances=_printed_instances(),
        grid=tuple(results),
        grid_points=int(t.size))


def _summarize(condition, monotone, gaps, margin, reading, family=None,
               **params):
    over = gaps > margin
    count = int(over.sum())
    best = int(np.argmax(gaps))
    best_params = {k: float(v[best]) for k, v in params.items()}
    if family is not None:
        best_params["family"] = family
    return GridViolations(condition=condition, monotone=monotone,
                          reading=reading, count=count,
                          best_margin=float(gaps[best]),
                          best_parameters=best_params)

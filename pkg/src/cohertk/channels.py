"""Incoherent Kraus channels: construction, validation, sampling, application.

Four nested channel classes are distinguished by the sparsity pattern of
their Kraus operators ``K_n = sum_i c_n(i) |j_n(i)><i|`` (at most one
entry per source column ``i``):

``IU``
    A single permutation-with-phases unitary.
``PIO``
    Each Kraus operator acts as a permutation-with-phases on one cell of
    a partition of the basis (unimodular coefficients, each source index
    covered by exactly one operator).
``SIO``
    Every Kraus operator is permutation-sparse: at most one entry per
    row *and* per column.
``IC``
    Only the per-column sparsity is required.

The inclusion chain is IU < PIO < SIO < IC; :func:`validate_class`
returns the strongest label that applies.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .states import PureState, QubitBloch, bloch_from_density, density_from_bloch

__all__ = [
    "KrausOperator",
    "IncoherentChannel",
    "LocalChannelProduct",
    "LocalBranch",
    "validate_class",
    "apply_to_pure",
    "apply_to_density",
    "complete_to_povm",
    "random_channel",
    "local_product_apply",
]

#: Frobenius tolerance on the completeness relation sum K^dag K = I.
COMPLETENESS_TOL = 1e-9

#: Branches with probability below this are pruned from ensembles.
BRANCH_PRUNE = 1e-12

_CLASS_ORDER = {"IU": 0, "PIO": 1, "SIO": 2, "IC": 3}


@dataclass(frozen=True)
class KrausOperator:
    """A single incoherent Kraus operator in sparse form.

    Parameters
    ----------
    dim : int
        Dimension of the space the operator acts on.
    entries : iterable of (target, source, coefficient)
        At most one entry per source index; this column sparsity is the
        defining structure of an incoherent operator and is enforced.
    """

    dim: int
    entries: tuple = field(repr=False)

    def __init__(self, dim: int, entries: Iterable):
        dim = int(dim)
        if dim < 1:
            raise ValueError("dim must be positive")
        norm_entries = []
        seen_sources = set()
        for target, source, coeff in entries:
            target, source, coeff = int(target), int(source), complex(coeff)
            if not (0 <= target < dim and 0 <= source < dim):
                raise ValueError(f"entry ({target},{source}) outside dim {dim}")
            if source in seen_sources:
                raise ValueError(
                    f"two entries share source column {source}: "
                    "not an incoherent operator")
            if coeff != 0:
                seen_sources.add(source)
                norm_entries.append((target, source, coeff))
        norm_entries.sort(key=lambda e: e[1])
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "entries", tuple(norm_entries))

    @classmethod
    def from_matrix(cls, mat, tol: float = 0.0) -> "KrausOperator":
        """Build from a dense matrix, checking column sparsity.

        Entries with modulus <= ``tol`` are treated as zero.
        """
        arr = np.asarray(mat, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("expected a square matrix")
        dim = arr.shape[0]
        entries = []
        for source in range(dim):
            col = arr[:, source]
            hot = np.flatnonzero(np.abs(col) > tol)
            if hot.size > 1:
                raise ValueError(
                    f"column {source} has {hot.size} nonzero entries: "
                    "not an incoherent operator")
            if hot.size == 1:
                entries.append((int(hot[0]), source, complex(col[hot[0]])))
        return cls(dim, entries)

    def matrix(self) -> np.ndarray:
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        for target, source, coeff in self.entries:
            mat[target, source] = coeff
        return mat

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        for target, source, coeff in self.entries:
            out[target] += coeff * vec[source]
        return out

    def sources(self) -> tuple:
        return tuple(source for _, source, _ in self.entries)

    def is_permutation_sparse(self) -> bool:
        """True when the operator also has at most one entry per row."""
        targets = [target for target, _, _ in self.entries]
        return len(targets) == len(set(targets))

    def is_unitary_permutation(self, atol: float = COMPLETENESS_TOL) -> bool:
        """True for a full permutation with unimodular coefficients."""
        if len(self.entries) != self.dim or not self.is_permutation_sparse():
            return False
        return all(abs(abs(coeff) - 1.0) <= atol for _, _, coeff in self.entries)

    def inverse(self) -> "KrausOperator":
        """Inverse of an invertible (generalized permutation) operator."""
        if len(self.entries) != self.dim or not self.is_permutation_sparse():
            raise ValueError("operator is not invertible")
        return KrausOperator(self.dim, [(source, target, 1.0 / coeff)
                                        for target, source, coeff in self.entries])


def _coerce_kraus(ops, dim=None):
    kraus = []
    for op in ops:
        if isinstance(op, KrausOperator):
            kraus.append(op)
        else:
            kraus.append(KrausOperator.from_matrix(op))
    if not kraus:
        raise ValueError("empty Kraus list")
    dims = {op.dim for op in kraus}
    if len(dims) != 1 or (dim is not None and kraus[0].dim != dim):
        raise ValueError("Kraus operators have inconsistent dimensions")
    return tuple(kraus)


def _completeness_defect(kraus) -> float:
    dim = kraus[0].dim
    gram = np.zeros((dim, dim), dtype=complex)
    for op in kraus:
        mat = op.matrix()
        gram += mat.conj().T @ mat
    return float(np.linalg.norm(gram - np.eye(dim)))


def validate_class(channel_or_kraus) -> str:
    """Return the strongest class label a Kraus set satisfies.

    Accepts an :class:`IncoherentChannel`, a list of
    :class:`KrausOperator`, or a list of dense matrices.  Checks the
    completeness relation (Frobenius norm below ``1e-9``) and the column
    sparsity, then reports the first of ``IU``, ``PIO``, ``SIO``, ``IC``
    whose structural conditions hold.

    Raises
    ------
    ValueError
        On a completeness violation or a non-incoherent column pattern.
    """
    if isinstance(channel_or_kraus, IncoherentChannel):
        kraus = channel_or_kraus.kraus
    else:
        kraus = _coerce_kraus(channel_or_kraus)
    defect = _completeness_defect(kraus)
    if defect >= COMPLETENESS_TOL:
        raise ValueError(
            f"completeness violated: |sum K^dag K - I| = {defect:.3g}")

    dim = kraus[0].dim
    if len(kraus) == 1 and kraus[0].is_unitary_permutation():
        return "IU"

    # PIO: sources partition the basis, each operator is a phase-permutation
    # on its cell (unimodular coefficients, distinct targets), no empty cell.
    source_cover = []
    pio = True
    for op in kraus:
        if not op.entries or not op.is_permutation_sparse():
            pio = False
            break
        if any(abs(abs(coeff) - 1.0) > COMPLETENESS_TOL
               for _, _, coeff in op.entries):
            pio = False
            break
        source_cover.extend(op.sources())
    if pio and sorted(source_cover) == list(range(dim)):
        return "PIO"

    if all(op.is_permutation_sparse() for op in kraus):
        return "SIO"
    return "IC"


@dataclass(frozen=True)
class IncoherentChannel:
    """A complete set of incoherent Kraus operators with a class tag.

    The constructor verifies completeness and that the declared
    ``class_tag`` is consistent with the structure: the strongest label
    found by :func:`validate_class` must be at least as strong as the
    tag (a permutation unitary may be tagged SIO, but a merely-IC Kraus
    set may not).
    """

    class_tag: str
    kraus: tuple

    def __init__(self, class_tag: str, kraus):
        class_tag = str(class_tag).upper()
        if class_tag not in _CLASS_ORDER:
            raise ValueError(f"unknown class tag {class_tag!r}")
        kraus = _coerce_kraus(kraus)
        strongest = validate_class(kraus)
        if _CLASS_ORDER[strongest] > _CLASS_ORDER[class_tag]:
            raise ValueError(
                f"Kraus structure is only {strongest}, weaker than the "
                f"declared tag {class_tag}")
        object.__setattr__(self, "class_tag", class_tag)
        object.__setattr__(self, "kraus", kraus)

    @property
    def dim(self) -> int:
        return self.kraus[0].dim

    def strongest_class(self) -> str:
        return validate_class(self.kraus)


def apply_to_pure(channel: IncoherentChannel, state: PureState):
    """Selective application: list of ``(probability, PureState)`` branches.

    Branch probabilities are ``|K_n psi|^2``; branches below ``1e-12``
    are pruned and the remaining mass renormalized.
    """
    if channel.dim != state.dim:
        raise ValueError("channel and state dimensions differ")
    branches = []
    for op in channel.kraus:
        out = op.apply(state.amps)
        prob = float(np.vdot(out, out).real)
        if prob > BRANCH_PRUNE:
            branches.append((prob, PureState(state.dims, out / math.sqrt(prob))))
    total = sum(p for p, _ in branches)
    if total <= 0:
        raise ValueError("all branches vanished")
    return [(p / total, s) for p, s in branches]


def apply_to_density(channel: IncoherentChannel, rho):
    """Deterministic application ``sum_n K_n rho K_n^dag``.

    Accepts a density matrix or a :class:`QubitBloch` (returned in the
    same representation).  Verifies trace preservation within ``1e-10``
    and positivity within ``1e-9``.
    """
    as_bloch = isinstance(rho, QubitBloch)
    mat = density_from_bloch(rho) if as_bloch else np.asarray(rho, dtype=complex)
    if mat.shape != (channel.dim, channel.dim):
        raise ValueError("channel and state dimensions differ")
    out = np.zeros_like(mat)
    for op in channel.kraus:
        kmat = op.matrix()
        out += kmat @ mat @ kmat.conj().T
    if abs(out.trace().real - mat.trace().real) > 1e-10:
        raise ValueError("channel did not preserve the trace")
    if np.linalg.eigvalsh(out).min() < -1e-9:
        raise ValueError("channel output is not positive semidefinite")
    return bloch_from_density(out) if as_bloch else out


def complete_to_povm(element) -> list:
    """Complete one measurement element to a full incoherent POVM.

    Given ``0 <= E <= I``, returns ``[E, E_1, ..., E_k]`` where the
    added elements are the rank-one spectral pieces of ``I - E``; each
    added element comes from a single-target Kraus operator, so the
    completion is always incoherent.  The returned elements sum to the
    identity within ``1e-9``.
    """
    mat = np.asarray(element, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    if np.max(np.abs(mat - mat.conj().T)) > 1e-9:
        raise ValueError("element is not Hermitian")
    eigs = np.linalg.eigvalsh(mat)
    if eigs.min() < -1e-9 or eigs.max() > 1.0 + 1e-9:
        raise ValueError("element is not between 0 and the identity")
    rest = np.eye(mat.shape[0]) - mat
    vals, vecs = np.linalg.eigh(rest)
    out = [mat]
    for k in range(vals.size):
        if vals[k] > BRANCH_PRUNE:
            v = vecs[:, k]
            out.append(vals[k] * np.outer(v, v.conj()))
    total = sum(out)
    if np.linalg.norm(total - np.eye(mat.shape[0])) > COMPLETENESS_TOL:
        raise ValueError("POVM completion failed the identity check")
    return out


def _random_unit_phases(rng, n: int) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(n))


def _random_unit_vector(rng, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def _random_surjection(rng, n_sources: int, n_cells: int) -> np.ndarray:
    """Uniform random map [n_sources] -> [n_cells] hitting every cell."""
    while True:
        f = rng.integers(0, n_cells, size=n_sources)
        if np.unique(f).size == n_cells:
            return f


def random_channel(class_tag: str, dim: int, n_kraus: int, seed) -> IncoherentChannel:
    """Sample a random channel of the requested class.

    Deterministic given ``seed``.  Construction guarantees exact
    completeness by distributing, for every source index, a unit vector
    of coefficients over the allowed (branch, target) slots.

    Raises
    ------
    ValueError
        For infeasible combinations: IU needs ``n_kraus == 1``; PIO
        needs ``n_kraus <= dim`` (one operator per partition cell).
    """
    class_tag = str(class_tag).upper()
    if class_tag not in _CLASS_ORDER:
        raise ValueError(f"unknown class tag {class_tag!r}")
    dim, n_kraus = int(dim), int(n_kraus)
    if dim < 2 or n_kraus < 1:
        raise ValueError("need dim >= 2 and n_kraus >= 1")
    rng = np.random.default_rng(seed)

    if class_tag == "IU":
        if n_kraus != 1:
            raise ValueError("an IU channel has exactly one Kraus operator")
        perm = rng.permutation(dim)
        phases = _random_unit_phases(rng, dim)
        op = KrausOperator(dim, [(int(perm[i]), i, phases[i]) for i in range(dim)])
        return IncoherentChannel("IU", [op])

    if class_tag == "PIO":
        if n_kraus > dim:
            raise ValueError("a PIO channel needs n_kraus <= dim "
                             "(one operator per nonempty partition cell)")
        cells = _random_surjection(rng, dim, n_kraus)
        ops = []
        for n in range(n_kraus):
            members = np.flatnonzero(cells == n)
            targets = rng.permutation(dim)[:members.size]
            phases = _random_unit_phases(rng, members.size)
            ops.append(KrausOperator(dim, [
                (int(targets[k]), int(members[k]), phases[k])
                for k in range(members.size)]))
        return IncoherentChannel("PIO", ops)

    if class_tag == "SIO":
        perms = [rng.permutation(dim) for _ in range(n_kraus)]
        weights = np.stack([_random_unit_vector(rng, n_kraus)
                            for _ in range(dim)])  # (source, branch)
        ops = []
        for n in range(n_kraus):
            ops.append(KrausOperator(dim, [
                (int(perms[n][i]), i, weights[i, n]) for i in range(dim)]))
        return IncoherentChannel("SIO", ops)

    # IC: branches are organized in groups; inside a group, sources that
    # collide on the same target are separated by distinct roots of unity,
    # which keeps sum K^dag K exactly diagonal while allowing genuinely
    # non-permutation-sparse operators.
    group_sizes = []
    remaining = n_kraus
    while remaining > 0:
        size = min(dim, remaining)
        group_sizes.append(size)
        remaining -= size
    n_groups = len(group_sizes)
    split = np.stack([_random_unit_vector(rng, n_groups) for _ in range(dim)])
    ops = []
    first_group = True
    for g, m in enumerate(group_sizes):
        while True:
            target_map = rng.integers(0, dim, size=dim)
            if first_group and m >= 2 and dim >= 2:
                target_map[1] = target_map[0]  # force one genuine collision
            counts = np.bincount(target_map, minlength=dim)
            if counts.max() <= m:
                break
        # distinct residue per source within each collision class
        residues = np.zeros(dim, dtype=int)
        for t in range(dim):
            members = np.flatnonzero(target_map == t)
            residues[members] = rng.permutation(m)[:members.size]
        phases = _random_unit_phases(rng, dim)
        omega = cmath.exp(2j * cmath.pi / m)
        for n in range(m):
            coeffs = (split[:, g] * phases * omega ** (n * residues)
                      / math.sqrt(m))
            ops.append(KrausOperator(dim, [
                (int(target_map[i]), i, coeffs[i]) for i in range(dim)]))
        first_group = False
    return IncoherentChannel("IC", ops)


@dataclass(frozen=True)
class LocalChannelProduct:
    """One channel per party, applied as a tensor product with bookkeeping."""

    channels: tuple

    def __init__(self, channels: Sequence[IncoherentChannel]):
        channels = tuple(channels)
        if not channels:
            raise ValueError("need at least one party channel")
        if not all(isinstance(ch, IncoherentChannel) for ch in channels):
            raise ValueError("every entry must be an IncoherentChannel")
        object.__setattr__(self, "channels", channels)

    @property
    def dims(self) -> tuple:
        return tuple(ch.dim for ch in self.channels)


@dataclass(frozen=True)
class LocalBranch:
    """One outcome of a local product channel.

    ``labels[k]`` is the Kraus index selected at party ``k``; the branch
    tree of a stochastic local protocol is read off these labels.
    """

    probability: float
    state: PureState
    labels: tuple


def local_product_apply(product: LocalChannelProduct, state: PureState):
    """Apply each party's channel in sequence, tracking outcome labels.

    Returns a list of :class:`LocalBranch`; probabilities sum to 1
    after pruning branches below ``1e-12``.
    """
    if product.dims != state.dims:
        raise ValueError(
            f"party dimensions {product.dims} do not match state {state.dims}")
    branches = [(1.0, state.amps, ())]
    for k, channel in enumerate(product.channels):
        new_branches = []
        for prob, amps, labels in branches:
            tensor = amps.reshape(state.dims)
            moved = np.moveaxis(tensor, k, 0)
            for idx, op in enumerate(channel.kraus):
                flat = moved.reshape(channel.dim, -1)
                out = np.zeros_like(flat)
                for target, source, coeff in op.entries:
                    out[target] += coeff * flat[source]
                branch_prob = float(np.vdot(out, out).real)
                if prob * branch_prob > BRANCH_PRUNE:
                    shaped = np.moveaxis(out.reshape(moved.shape), 0, k)
                    new_branches.append((prob * branch_prob,
                                         shaped.reshape(-1) / math.sqrt(branch_prob),
                                         labels + (idx,)))
        branches = new_branches
    total = sum(p for p, _, _ in branches)
    if total <= 0:
        raise ValueError("all branches vanished")
    return [LocalBranch(p / total, PureState(state.dims, amps), labels)
            for p, amps, labels in branches]

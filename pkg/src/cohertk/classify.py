"""Equivalence deciders and canonical forms for stochastic local
incoherent classification.

Two pure states are *locally incoherent-unitarily* (LIU) equivalent when
some tensor product of permutation-with-phases unitaries maps one to the
other; for local incoherent protocols with classical communication this
already decides deterministic equivalence.  For the stochastic theory on
two qubits the classification is complete: the number of nonzero basis
amplitudes ``R`` splits states into ranks, ranks 2 and 3 split by
support pattern, and rank 4 carries the complex invariant
``r = ad / (bc)`` identified up to inversion, with the one-parameter
canonical family ``alpha (|00> + |01> + |10>) + beta |11>``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channels import (IncoherentChannel, KrausOperator, LocalChannelProduct)
from .states import AMP_TOL, PureState

__all__ = [
    "SliccClass",
    "LiuWitness",
    "CanonicalForm",
    "TemplateWitness",
    "liu_equivalent",
    "slicc_class_2qubit",
    "slicc_equivalent_2qubit",
    "canonical_form_r4",
    "witness_templates_r4",
    "verify_slicc_witness",
]

#: Cap on the local-permutation search space of liu_equivalent.
SEARCH_CAP = 10**6

#: Global-phase-adjusted fidelity threshold for witness verification.
FIDELITY_TOL = 1e-9


@dataclass(frozen=True)
class LiuWitness:
    """Per-party permutations and phases realizing an LIU equivalence.

    Party ``k`` applies ``U_k = sum_i exp(1j * phases[k][i])
    |permutations[k][i]><i|``.
    """

    permutations: tuple
    phases: tuple

    def unitaries(self) -> list:
        out = []
        for perm, phase in zip(self.permutations, self.phases):
            d = len(perm)
            mat = np.zeros((d, d), dtype=complex)
            for i in range(d):
                mat[perm[i], i] = np.exp(1j * phase[i])
            out.append(mat)
        return out

    def as_channels(self) -> LocalChannelProduct:
        return LocalChannelProduct([
            IncoherentChannel("IU", [KrausOperator.from_matrix(u)])
            for u in self.unitaries()])

    def apply(self, state: PureState) -> PureState:
        tensor = state.tensor()
        for k, u in enumerate(self.unitaries()):
            tensor = np.moveaxis(
                np.tensordot(u, tensor, axes=([1], [k])), 0, k)
        return PureState(state.dims, tensor.reshape(-1))


def _permuted_flat_index(dims, perms) -> np.ndarray:
    """Flat index array F with F[i] = flat(perm applied to multi-index i)."""
    grid = np.arange(int(np.prod(dims))).reshape(dims)
    return grid[np.ix_(*[np.asarray(p) for p in perms])].ravel()


def _solve_torus(rows, rhs, n, tol=1e-6):
    """Solve an integer linear system ``M x = rhs (mod 2 pi)``.

    ``rows`` is a list of integer coefficient vectors.  Gaussian
    elimination over the integers (keeping coefficients integral) makes
    the mod-2pi consistency of dependent equations checkable; plain
    phase propagation is not sound here because amplitude supports can
    carry affine relations among the unknowns.

    Returns a particular solution array or ``None`` when inconsistent.
    """
    two_pi = 2.0 * math.pi
    work = [(list(row), float(b)) for row, b in zip(rows, rhs)]
    pivots = []  # (column, coeffs, rhs)
    for col in range(n):
        # repeatedly reduce until at most one active row hits this column
        while True:
            active = [i for i, (row, _) in enumerate(work) if row[col] != 0]
            if not active:
                break
            if len(active) == 1:
                row, b = work.pop(active[0])
                pivots.append((col, row, b))
                break
            active.sort(key=lambda i: abs(work[i][0][col]))
            base_row, base_rhs = work[active[0]]
            coef = base_row[col]
            for i in active[1:]:
                row, b = work[i]
                q = row[col] // coef
                if q:
                    new_row = [x - q * y for x, y in zip(row, base_row)]
                    work[i] = (new_row, b - q * base_rhs)
    for row, b in work:
        if any(row):
            raise AssertionError("elimination left a nonzero row")
        wrapped = (b + math.pi) % two_pi - math.pi
        if abs(wrapped) > tol:
            return None

    # Back-substitute.  A pivot coefficient m with |m| > 1 divides the
    # torus: x = (resid + 2 pi ell) / m for ell = 0..|m|-1 are distinct
    # mod 2 pi, so enumerate the branches (capped) and keep the first
    # assignment satisfying every original equation.
    order = list(reversed(pivots))
    branch_total = 1
    for col, row, _ in order:
        branch_total *= abs(row[col])
    full_search = branch_total <= 512

    mat = np.array(rows, dtype=float)
    target = np.asarray(rhs, dtype=float)

    def assignments(i, x):
        if i == len(order):
            yield x.copy()
            return
        col, row, b = order[i]
        coeff = row[col]
        resid = b - sum(row[j] * x[j] for j in range(col + 1, n) if row[j])
        n_branches = abs(coeff) if full_search else 1
        for ell in range(n_branches):
            x[col] = (resid + two_pi * ell) / coeff
            yield from assignments(i + 1, x)

    for x in assignments(0, np.zeros(n)):
        residual = mat @ x - target
        wrapped = (residual + math.pi) % two_pi - math.pi
        if np.max(np.abs(wrapped)) <= tol:
            return x
    return None


def liu_equivalent(psi: PureState, phi: PureState, tol: float = AMP_TOL):
    """Search for a local permutation-with-phases map from psi to phi.

    Exhausts all tuples of per-party permutations (product of factorials
    capped at 1e6), matching the amplitude-modulus pattern first and
    then solving the phase constraints exactly on the torus.  Every
    candidate is verified by application before being returned, at
    global-phase-adjusted fidelity ``1 - 1e-9``.

    Returns a :class:`LiuWitness`, or ``None`` when no witness exists;
    since deterministic local incoherent interconversion of pure states
    forces such a relabeling map, ``None`` also rules that out.
    """
    if psi.dims != phi.dims:
        raise ValueError("states have different party structures")
    space = 1
    for d in psi.dims:
        space *= math.factorial(d)
    if space > SEARCH_CAP:
        raise ValueError(f"permutation search space {space} exceeds cap {SEARCH_CAP}")

    mod_psi = np.abs(psi.amps)
    mod_phi = np.abs(phi.amps)
    if not np.allclose(np.sort(mod_psi), np.sort(mod_phi), atol=1e-8):
        return None

    support = np.flatnonzero(mod_psi > tol)
    dims = psi.dims
    n_unknowns = sum(dims)
    offsets = np.concatenate([[0], np.cumsum(dims)[:-1]])
    multi = np.array(np.unravel_index(support, dims)).T  # (m, parties)

    for perms in itertools.product(*[itertools.permutations(range(d))
                                     for d in dims]):
        flat = _permuted_flat_index(dims, perms)
        if not np.allclose(mod_phi[flat], mod_psi, atol=1e-8):
            continue
        target_arg = np.angle(phi.amps[flat[support]])
        source_arg = np.angle(psi.amps[support])
        rows = []
        for idx in multi:
            row = [0] * n_unknowns
            for k, i_k in enumerate(idx):
                row[offsets[k] + i_k] = 1
            rows.append(row)
        solution = _solve_torus(rows, target_arg - source_arg, n_unknowns)
        if solution is None:
            continue
        witness = LiuWitness(
            permutations=tuple(tuple(p) for p in perms),
            phases=tuple(tuple(solution[offsets[k]:offsets[k] + dims[k]])
                         for k in range(len(dims))))
        image = witness.apply(psi)
        if abs(np.vdot(phi.amps, image.amps)) >= 1.0 - FIDELITY_TOL:
            return witness
    return None


# ---------------------------------------------------------------------------
# two-qubit stochastic classification


@dataclass(frozen=True)
class SliccClass:
    """Classification label of a two-qubit pure state.

    ``support_pattern`` is the occupied-index set canonicalized over the
    four local bit swaps.  ``invariant_r`` is present only at rank 4 and
    holds the representative of the unordered pair ``{r, 1/r}`` with
    modulus >= 1 (ties broken toward nonnegative imaginary part); the
    ``invariant_pair`` property exposes both members.
    """

    rank: int
    subclass: str
    support_pattern: tuple
    invariant_r: complex = None

    @property
    def invariant_pair(self):
        if self.invariant_r is None:
            return None
        return (self.invariant_r, 1.0 / self.invariant_r)


def _canonical_invariant(r: complex) -> complex:
    mod = abs(r)
    if abs(mod - 1.0) <= 1e-12:
        return r if r.imag >= 0 else 1.0 / r
    return r if mod > 1.0 else 1.0 / r


_SWAPS = (0, 1, 2, 3)  # xor masks: identity, flip B, flip A, flip both


def _canonical_support(support) -> tuple:
    return min(tuple(sorted(i ^ mask for i in support)) for mask in _SWAPS)


def slicc_class_2qubit(state: PureState, tol: float = AMP_TOL) -> SliccClass:
    """Classify a two-qubit pure state under stochastic local incoherent
    protocols.

    Rank 1 states form one class; rank 2 splits into same-row,
    same-column and diagonal supports; all rank-3 supports are locally
    interchangeable and form a single class; rank-4 classes are labeled
    by ``r = ad/(bc)`` up to inversion.
    """
    if state.dims != (2, 2):
        raise ValueError("slicc_class_2qubit needs dims (2, 2)")
    amps = state.amps
    support = tuple(int(i) for i in np.flatnonzero(np.abs(amps) > tol))
    rank = len(support)
    pattern = _canonical_support(support)
    if rank == 1:
        return SliccClass(1, "point", pattern)
    if rank == 2:
        i, j = support
        differ = i ^ j
        subclass = {1: "row", 2: "column", 3: "diagonal"}[differ]
        return SliccClass(2, subclass, pattern)
    if rank == 3:
        return SliccClass(3, "triangle", pattern)
    a, b, c, d = amps
    r = (a * d) / (b * c)
    return SliccClass(4, "generic", pattern, _canonical_invariant(complex(r)))


def _invariants_close(p: complex, q: complex, tol: float) -> bool:
    scale = max(1.0, abs(p), abs(q))
    return abs(p - q) <= tol * scale


def slicc_equivalent_2qubit(psi: PureState, phi: PureState,
                            tol: float = 1e-8) -> bool:
    """Same stochastic-local-incoherent class?

    Rank and subclass must agree; at rank 4 the invariants must match
    as the unordered pair ``{r, 1/r}`` within relative tolerance.
    """
    cls_psi = slicc_class_2qubit(psi)
    cls_phi = slicc_class_2qubit(phi)
    if cls_psi.rank != cls_phi.rank or cls_psi.subclass != cls_phi.subclass:
        return False
    if cls_psi.rank != 4:
        return True
    p, q = cls_psi.invariant_r, cls_phi.invariant_r
    return (_invariants_close(p, q, tol)
            or _invariants_close(p, 1.0 / q, tol))


def _sio_instrument(mat) -> IncoherentChannel:
    """Wrap one permutation-sparse operator as a two-outcome channel.

    The operator is rescaled to have largest coefficient modulus 1 and
    completed by the diagonal square root of what remains; outcome 0 is
    the wrapped operator.
    """
    op = KrausOperator.from_matrix(np.asarray(mat, dtype=complex))
    if not op.is_permutation_sparse():
        raise ValueError("witness operators must be permutation-sparse")
    scale = max(abs(coeff) for _, _, coeff in op.entries)
    scaled = KrausOperator(op.dim, [(t, s, coeff / scale)
                                    for t, s, coeff in op.entries])
    weight = np.zeros(op.dim)
    for _, source, coeff in scaled.entries:
        weight[source] = abs(coeff) ** 2
    leftover = np.sqrt(np.clip(1.0 - weight, 0.0, None))
    completion = [(i, i, leftover[i]) for i in range(op.dim)
                  if leftover[i] > 0]
    kraus = [scaled]
    if completion:
        kraus.append(KrausOperator(op.dim, completion))
    return IncoherentChannel("SIO", kraus)


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical rank-4 representative and the operator pair reaching it.

    The canonical state is ``alpha (|00> + |01> + |10>) + beta |11>``
    with ``3 alpha^2 + |beta|^2 = 1``, ``alpha`` real positive and
    ``beta = invariant * alpha``.  ``witness`` is a local two-outcome
    channel pair whose (0, 0) branch maps the classified state exactly
    onto the canonical state.
    """

    alpha: float
    beta: complex
    invariant: complex
    witness: LocalChannelProduct


def _canonical_parameters(invariant: complex):
    alpha = 1.0 / math.sqrt(3.0 + abs(invariant) ** 2)
    return alpha, invariant * alpha


@dataclass(frozen=True)
class TemplateWitness:
    """One of the four local operator templates for rank-4 states.

    Applying ``product`` and selecting the (0, 0) branch yields the
    canonical state of ``invariant`` (which is ``r`` for the two
    diagonal-diagonal/antidiagonal-antidiagonal templates and ``1/r``
    for the two mixed ones).
    """

    name: str
    product: LocalChannelProduct
    invariant: complex
    alpha: float
    beta: complex


def witness_templates_r4(state: PureState) -> list:
    """All four local operator templates mapping a rank-4 two-qubit
    state onto a canonical representative.

    Diagonal operators keep the support in place; antidiagonal ones
    swap a local bit, which inverts the invariant.  Each template is a
    :class:`TemplateWitness` whose product, applied via
    :func:`cohertk.channels.local_product_apply`, has its (0, 0) branch
    exactly equal to the canonical state of ``invariant``.
    """
    if slicc_class_2qubit(state).rank != 4:
        raise ValueError("witness templates exist only for rank-4 states")
    a, b, c, d = state.amps
    r = complex((a * d) / (b * c))
    alpha, beta = _canonical_parameters(r)
    alpha_inv, beta_inv = _canonical_parameters(1.0 / r)
    templates = []

    def add(name, mat_a, mat_b, invariant, al, be):
        product = LocalChannelProduct(
            [_sio_instrument(mat_a), _sio_instrument(mat_b)])
        templates.append(TemplateWitness(name, product, invariant, al, be))

    add("diag-diag",
        np.array([[alpha / (b * beta), 0], [0, 1.0 / d]]),
        np.array([[d * alpha / c, 0], [0, beta]]),
        r, alpha, beta)
    add("diag-antidiag",
        np.array([[alpha_inv / b, 0], [0, alpha_inv / d]]),
        np.array([[0, 1.0], [b / a, 0]]),
        1.0 / r, alpha_inv, beta_inv)
    add("antidiag-diag",
        np.array([[0, 1.0], [c / a, 0]]),
        np.array([[alpha_inv / c, 0], [0, alpha_inv / d]]),
        1.0 / r, alpha_inv, beta_inv)
    add("antidiag-antidiag",
        np.array([[0, alpha / d], [alpha / b, 0]]),
        np.array([[0, 1.0], [d / c, 0]]),
        r, alpha, beta)
    return templates


def canonical_form_r4(state: PureState) -> CanonicalForm:
    """Canonical representative of a rank-4 two-qubit state.

    Returns ``alpha`` (real positive), ``beta`` with
    ``beta/alpha = ad/(bc)``, and the diagonal-diagonal witness pair
    whose (0, 0) branch is exactly the canonical state.
    """
    template = witness_templates_r4(state)[0]
    return CanonicalForm(alpha=template.alpha, beta=template.beta,
                         invariant=template.invariant,
                         witness=template.product)


def canonical_state(alpha: float, beta: complex) -> PureState:
    """The state ``alpha (|00> + |01> + |10>) + beta |11>``."""
    return PureState((2, 2), [alpha, alpha, alpha, beta])


def _first_kraus_operators(ops):
    if isinstance(ops, LocalChannelProduct):
        return [ch.kraus[0] for ch in ops.channels]
    out = []
    for op in ops:
        if isinstance(op, KrausOperator):
            out.append(op)
        else:
            out.append(KrausOperator.from_matrix(np.asarray(op, dtype=complex)))
    return out


def _apply_local_operators(mats, state: PureState) -> np.ndarray:
    tensor = state.tensor()
    for k, mat in enumerate(mats):
        tensor = np.moveaxis(
            np.tensordot(mat, tensor, axes=([1], [k])), 0, k)
    return tensor.reshape(-1)


def verify_slicc_witness(psi: PureState, phi: PureState, ops) -> bool:
    """Check that a local operator tuple stochastically maps psi onto
    phi and back.

    ``ops`` may be a :class:`LocalChannelProduct` (outcome-0 operators
    are taken as the witness) or a plain sequence of per-party matrices
    or Kraus operators.  Each operator must be an invertible
    permutation-sparse matrix; the forward image must be proportional
    to ``phi`` and the inverse image of ``phi`` proportional to ``psi``
    within global-phase-adjusted fidelity ``1 - 1e-9``.
    """
    kraus = _first_kraus_operators(ops)
    if len(kraus) != psi.n_parties or psi.dims != phi.dims:
        raise ValueError("operator count does not match the party structure")
    for k, op in enumerate(kraus):
        if op.dim != psi.dims[k]:
            raise ValueError(f"operator {k} has wrong dimension")
        if len(op.entries) != op.dim or not op.is_permutation_sparse():
            raise ValueError(f"operator {k} is not invertible permutation-sparse")
    forward = _apply_local_operators([op.matrix() for op in kraus], psi)
    norm_f = np.linalg.norm(forward)
    if norm_f <= FIDELITY_TOL:
        return False
    if abs(np.vdot(phi.amps, forward)) / norm_f < 1.0 - FIDELITY_TOL:
        return False
    backward = _apply_local_operators(
        [op.inverse().matrix() for op in kraus], phi)
    norm_b = np.linalg.norm(backward)
    if norm_b <= FIDELITY_TOL:
        return False
    return bool(abs(np.vdot(psi.amps, backward)) / norm_b >= 1.0 - FIDELITY_TOL)

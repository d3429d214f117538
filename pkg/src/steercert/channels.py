"""States, measurements and channels, with the Choi transform as the
canonical channel representation.

A Choi matrix lives on ``output (x) input`` (output factor first).  With
the normalized maximally entangled state ``(1/sqrt(d)) sum_i |ii>``, the
map action is recovered as ``L(X) = d_in * Tr_in[(1_out (x) X^T) J]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .core import (
    DEFAULT_TOL,
    Ket,
    Op,
    identity,
    is_hermitian,
    is_psd,
    kron,
    partial_trace,
)


@dataclass(frozen=True)
class State:
    """Density matrix: Hermitian, PSD, unit trace within ``abs_tol``."""

    op: Op

    def __post_init__(self):
        tol = DEFAULT_TOL.abs_tol
        if not is_psd(self.op, tol):
            raise ValueError("state must be Hermitian and PSD")
        if abs(self.op.trace() - 1) > 1e-8:
            raise ValueError("state must have unit trace")

    @property
    def dims(self):
        return self.op.dims


def pure_state(ket: Ket) -> State:
    n = ket.norm()
    return State(Op(ket.dims, np.outer(ket.data, ket.data.conj()) / n**2))


@dataclass(frozen=True)
class Povm:
    """Measurement effects indexed by (setting, outcome).

    ``effects[x][a]`` is the effect for outcome ``a`` under setting ``x``.
    Effects of each setting must be PSD and sum to the identity.
    """

    dim: int
    effects: tuple  # tuple of tuples of Op

    def __post_init__(self):
        effects = tuple(tuple(row) for row in self.effects)
        object.__setattr__(self, "effects", effects)
        eye = np.eye(self.dim)
        for x, row in enumerate(effects):
            total = np.zeros((self.dim, self.dim), dtype=complex)
            for a, eff in enumerate(row):
                if eff.data.shape != (self.dim, self.dim):
                    raise ValueError(f"effect ({x},{a}) has wrong dimension")
                if not is_psd(eff, 1e-8):
                    raise ValueError(f"effect ({x},{a}) is not PSD")
                total += eff.data
            if np.max(np.abs(total - eye)) > 1e-8:
                raise ValueError(f"effects of setting {x} do not sum to identity")

    @property
    def settings(self) -> int:
        return len(self.effects)

    @property
    def outcomes(self) -> int:
        return len(self.effects[0])


def projective_povm(bases) -> Povm:
    """POVM whose setting-``x`` effects project on the kets ``bases[x]``."""
    rows = []
    dim = None
    for basis in bases:
        row = []
        for ket in basis:
            v = np.asarray(ket, dtype=complex).reshape(-1)
            dim = v.size
            row.append(Op((dim,), np.outer(v, v.conj())))
        rows.append(tuple(row))
    return Povm(dim, tuple(rows))


@dataclass(frozen=True)
class KrausChannel:
    """Channel in Kraus form: operators map ``in_dim`` to ``out_dim``."""

    in_dim: int
    out_dim: int
    kraus_ops: tuple = field(repr=False)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        object.__setattr__(self, "kraus_ops", ops)
        for k in ops:
            if k.shape != (self.out_dim, self.in_dim):
                raise ValueError("Kraus operator has mismatched shape")
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(self.in_dim))) > 1e-8:
            raise ValueError("Kraus operators do not satisfy completeness")


@dataclass(frozen=True)
class ChoiOp:
    """Choi matrix of a linear map, with factorized input/output dims.

    ``op.dims`` equals ``out_dims + in_dims``.
    """

    in_dims: tuple
    out_dims: tuple
    op: Op

    def __post_init__(self):
        in_dims = tuple(int(d) for d in self.in_dims)
        out_dims = tuple(int(d) for d in self.out_dims)
        object.__setattr__(self, "in_dims", in_dims)
        object.__setattr__(self, "out_dims", out_dims)
        if self.op.dims != out_dims + in_dims:
            raise ValueError("Choi operator dims must be out_dims + in_dims")
        if not is_hermitian(self.op, 1e-8):
            raise ValueError("Choi matrix must be Hermitian")

    @property
    def in_dim(self) -> int:
        return prod(self.in_dims)

    @property
    def out_dim(self) -> int:
        return prod(self.out_dims)

    def _blocks(self):
        """View as J[o, m, p, n] with row (out, in), column (out, in)."""
        do, di = self.out_dim, self.in_dim
        return self.op.data.reshape(do, di, do, di)


def maximally_entangled(d: int) -> Ket:
    """Unit-norm ``(1/sqrt(d)) sum_i |ii>`` on dims ``(d, d)``."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1 / np.sqrt(d)
    return Ket((d, d), v)


def choi_of_kraus(k: KrausChannel, in_dims=None, out_dims=None) -> ChoiOp:
    """Choi matrix of a Kraus channel; unit trace, PSD."""
    d = k.in_dim
    phi = maximally_entangled(d).outer()
    total = np.zeros((k.out_dim * d, k.out_dim * d), dtype=complex)
    eye = np.eye(d)
    for op in k.kraus_ops:
        lifted = np.kron(op, eye)
        total += lifted @ phi.data @ lifted.conj().T
    in_dims = tuple(in_dims) if in_dims is not None else (k.in_dim,)
    out_dims = tuple(out_dims) if out_dims is not None else (k.out_dim,)
    return ChoiOp(in_dims, out_dims, Op(out_dims + in_dims, total))


def choi_of_unitary(u: np.ndarray, in_dims=None, out_dims=None) -> ChoiOp:
    d = u.shape[0]
    return choi_of_kraus(KrausChannel(d, d, (u,)), in_dims, out_dims)


def apply_choi(c: ChoiOp, x: Op) -> Op:
    """Apply the map represented by Choi matrix ``c`` to operator ``x``."""
    if x.data.shape[0] != c.in_dim:
        raise ValueError("input operator dimension does not match the channel")
    j = c._blocks()
    out = c.in_dim * np.einsum("omyn,mn->oy", j, x.data)
    return Op(c.out_dims, out)


def choi_from_map(fn, in_dims, out_dims) -> ChoiOp:
    """Assemble a Choi matrix by probing the map on all matrix units."""
    in_dims, out_dims = tuple(in_dims), tuple(out_dims)
    di, do = prod(in_dims), prod(out_dims)
    j = np.zeros((do, di, do, di), dtype=complex)
    for m in range(di):
        for n in range(di):
            unit = np.zeros((di, di), dtype=complex)
            unit[m, n] = 1.0
            j[:, m, :, n] = fn(Op(in_dims, unit)).data / di
    mat = j.reshape(do * di, do * di)
    mat = (mat + mat.conj().T) / 2
    return ChoiOp(in_dims, out_dims, Op(out_dims + in_dims, mat))


@dataclass(frozen=True)
class CptpReport:
    cp: bool
    tp: bool
    min_eigenvalue: float
    tp_deviation: float

    @property
    def ok(self) -> bool:
        return self.cp and self.tp


def verify_cptp(c: ChoiOp, tol: float = DEFAULT_TOL.abs_tol) -> CptpReport:
    """Complete positivity (PSD Choi) and trace preservation checks.

    Trace preservation: the partial trace of the Choi matrix over the
    output factor must equal ``1/d_in``.
    """
    n_out = len(c.out_dims)
    cp = is_psd(c.op, tol)
    evals = np.linalg.eigvalsh((c.op.data + c.op.data.conj().T) / 2)
    reduced = partial_trace(c.op, keep=range(n_out, n_out + len(c.in_dims)))
    dev = float(np.max(np.abs(reduced.data - np.eye(c.in_dim) / c.in_dim)))
    return CptpReport(cp=cp, tp=dev < tol,
                      min_eigenvalue=float(evals[0]), tp_deviation=dev)


def extend_channel(e: ChoiOp):
    """Extend ``e: A -> A' (x) B`` to ``E: A (x) B -> A' (x) B``.

    Returns a fixed ancilla state ``|0><0|`` on B and the extension
    ``E = e o Tr_B``, which is CPTP and satisfies
    ``E(rho_A (x) |0><0|) = e(rho_A)`` for every state ``rho_A``.
    """
    if len(e.out_dims) < 2:
        raise ValueError("output of the channel must factor as A' (x) B")
    if not verify_cptp(e, 1e-8).ok:
        raise ValueError("extend_channel expects a CPTP input")
    d_b = e.out_dims[-1]
    anc = np.zeros((d_b, d_b), dtype=complex)
    anc[0, 0] = 1.0
    rho_b = State(Op((d_b,), anc))

    in_dims = e.in_dims + (d_b,)

    def extended(x: Op) -> Op:
        reduced = partial_trace(Op(e.in_dims + (d_b,), x.data),
                                keep=range(len(e.in_dims)))
        return apply_choi(e, reduced)

    return rho_b, choi_from_map(extended, in_dims, e.out_dims)


def apply_channel_on_subsystems(c: ChoiOp, rho: Op, targets) -> Op:
    """Apply ``c`` on the listed subsystems of ``rho``, identity elsewhere.

    The result carries ``c.out_dims`` first, followed by the spectator
    subsystems in their original relative order.
    """
    targets = [int(t) for t in targets]
    n = len(rho.dims)
    if sorted(set(targets)) != sorted(targets) or any(t < 0 or t >= n for t in targets):
        raise IndexError("invalid target subsystem list")
    if tuple(rho.dims[t] for t in targets) != c.in_dims:
        raise ValueError("target dims do not match the channel input")
    spectators = [k for k in range(n) if k not in targets]
    perm = targets + spectators
    tensor = rho.data.reshape(rho.dims + rho.dims)
    tensor = np.transpose(tensor, perm + [n + p for p in perm])
    di = c.in_dim
    ds = prod([rho.dims[k] for k in spectators]) if spectators else 1
    block = tensor.reshape(di, ds, di, ds)
    j = c._blocks()
    out = di * np.einsum("omyn,mrns->orys", j, block)
    do = c.out_dim
    out_dims = c.out_dims + tuple(rho.dims[k] for k in spectators)
    return Op(out_dims, out.reshape(do * ds, do * ds))


def random_kraus_channel(rng: np.random.Generator, in_dim: int, out_dim: int,
                         n_kraus: int = None) -> KrausChannel:
    """Haar-ish random channel from a random isometry, for testing."""
    if n_kraus is None:
        n_kraus = in_dim * out_dim
    n_kraus = min(n_kraus, in_dim * out_dim)
    g = rng.normal(size=(out_dim * n_kraus, in_dim)) \
        + 1j * rng.normal(size=(out_dim * n_kraus, in_dim))
    q, _ = np.linalg.qr(g)
    iso = q[:, :in_dim]
    ops = [iso[k * out_dim:(k + 1) * out_dim, :] for k in range(n_kraus)]
    return KrausChannel(in_dim, out_dim, tuple(ops))


def random_density(rng: np.random.Generator, dims) -> State:
    dims = tuple(dims)
    d = prod(dims)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return State(Op(dims, m / np.trace(m)))

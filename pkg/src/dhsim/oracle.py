"""Dense Schrodinger-picture reference implementation.

Everything here is floating point (tolerance 1e-9) and exists to
cross-check the exact descriptor path: state vectors, unitary matrices,
operator conjugation with projection back onto the Pauli basis, and
conditional states via projection.

Conventions, fixed once:

* qubit 0 is the leftmost tensor factor (most significant bit of the
  basis index);
* a circuit with steps t0..tk corresponds to U = U_k ... U_0, and a
  descriptor evolves as U^dagger P U.  Folding a new gate therefore
  conjugates the *initial* operator first:
  ``conjugate(U_0, conjugate(U_1, ... conjugate(U_k, P)))``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .pauli import ComplexDyadic, PauliSum, LETTER_NAMES

ATOL = 1e-9

_SQ = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
}

_CNOT = np.array([[1, 0, 0, 0],
                  [0, 1, 0, 0],
                  [0, 0, 0, 1],
                  [0, 0, 1, 0]], dtype=complex)


class OracleError(ValueError):
    pass


def zero_state(n: int) -> np.ndarray:
    state = np.zeros(2 ** n, dtype=complex)
    state[0] = 1.0
    return state


def string_matrix(letters: tuple[int, ...] | str) -> np.ndarray:
    """Dense matrix of a bare letter sequence (qubit 0 leftmost)."""
    if not isinstance(letters, str):
        letters = "".join(LETTER_NAMES[l] for l in letters)
    m = np.eye(1, dtype=complex)
    for ch in letters:
        m = np.kron(m, _SQ[ch])
    return m


def sum_matrix(s: PauliSum) -> np.ndarray:
    """Dense matrix of a Pauli sum."""
    m = np.zeros((2 ** s.n, 2 ** s.n), dtype=complex)
    for letters, coef in s.terms():
        m += complex(coef) * string_matrix(letters)
    return m


def single_qubit_gate(name: str, n: int, qubit: int) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for q in range(n):
        m = np.kron(m, _SQ[name] if q == qubit else _SQ["I"])
    return m


def cnot_gate(n: int, control: int, target: int) -> np.ndarray:
    """CNOT embedded in an n-qubit register."""
    dim = 2 ** n
    m = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
        if bits[control]:
            bits[target] ^= 1
        out = 0
        for b in bits:
            out = (out << 1) | b
        m[out, idx] = 1.0
    return m


def bell_gate(n: int, a: int, b: int) -> np.ndarray:
    """Rotation of a pair into the computational basis of Bell labels.

    Defined as CNOT(a -> b) followed by H on a (the inverse of the usual
    Bell-pair preparation).
    """
    return single_qubit_gate("H", n, a) @ cnot_gate(n, a, b)


def gate_matrix(kind: str, n: int, operands: tuple[int, ...]) -> np.ndarray:
    kind = kind.upper()
    if kind in ("H", "X", "Y", "Z", "S", "T"):
        return single_qubit_gate(kind, n, operands[0])
    if kind == "CNOT":
        return cnot_gate(n, operands[0], operands[1])
    if kind == "BELL":
        return bell_gate(n, operands[0], operands[1])
    raise OracleError(f"unknown gate kind {kind!r}")


def circuit_unitary(n: int, steps) -> np.ndarray:
    """U = U_k ... U_0 for gate steps in time order."""
    u = np.eye(2 ** n, dtype=complex)
    for kind, operands in steps:
        u = gate_matrix(kind, n, tuple(operands)) @ u
    return u


def _check_unitary(u: np.ndarray) -> None:
    dim = u.shape[0]
    if not np.allclose(u.conj().T @ u, np.eye(dim), atol=ATOL):
        raise OracleError("matrix is not unitary")


def _snap_fraction(x: float, max_den: int = 2 ** 40) -> Fraction:
    frac = Fraction(x).limit_denominator(max_den)
    if abs(float(frac) - x) > ATOL:
        raise OracleError(f"residual {x} is not within 1e-9 of a dyadic")
    d = frac.denominator
    if d & (d - 1) != 0:
        raise OracleError(f"value {x} does not snap to a dyadic rational")
    return frac


def _string_column_entries(letters: tuple[int, ...], n: int) -> tuple[int, np.ndarray]:
    """x-mask and per-column entries of a Pauli string.

    A string has exactly one nonzero per column: P[col ^ xmask, col].
    """
    dim = 2 ** n
    xmask = 0
    entries = np.ones(dim, dtype=complex)
    for q, letter in enumerate(letters):
        bitpos = n - 1 - q
        bits = (np.arange(dim) >> bitpos) & 1
        if letter == 1:          # X
            xmask |= 1 << bitpos
        elif letter == 2:        # Y
            xmask |= 1 << bitpos
            entries = entries * np.where(bits == 0, 1j, -1j)
        elif letter == 3:        # Z
            entries = entries * np.where(bits == 0, 1.0, -1.0)
    return xmask, entries


def conjugate(u: np.ndarray, p: PauliSum) -> PauliSum:
    """U^dagger P U, projected back onto the Pauli basis exactly.

    The projection uses the normalized Hilbert-Schmidt inner product; each
    near-dyadic coefficient snaps to its exact value and anything left over
    beyond 1e-9 is an error (the input was not Clifford-compatible).
    """
    n = p.n
    dim = 2 ** n
    if u.shape != (dim, dim):
        raise OracleError(f"operator shape {u.shape} does not match {n} qubits")
    _check_unitary(u)
    dense = u.conj().T @ sum_matrix(p) @ u

    # Strings with x-mask m live on the anti-diagonal band row = col ^ m;
    # only masks carrying weight in the dense matrix need projecting.
    cols = np.arange(dim)
    masks = set()
    rows, cs = np.nonzero(np.abs(dense) > ATOL / dim)
    for r, c in zip(rows, cs):
        masks.add(int(r) ^ int(c))
    terms = {}
    captured = np.zeros_like(dense)
    for mask in sorted(masks):
        band = dense[cols ^ mask, cols]
        xy_slots = [q for q in range(n) if (mask >> (n - 1 - q)) & 1]
        iz_slots = [q for q in range(n) if q not in xy_slots]
        for zpick in itertools.product((0, 3), repeat=len(iz_slots)):
            for xypick in itertools.product((1, 2), repeat=len(xy_slots)):
                letters = [0] * n
                for q, letter in zip(iz_slots, zpick):
                    letters[q] = letter
                for q, letter in zip(xy_slots, xypick):
                    letters[q] = letter
                letters = tuple(letters)
                _, entries = _string_column_entries(letters, n)
                coef = complex(np.dot(np.conj(entries), band)) / dim
                if abs(coef) <= ATOL:
                    continue
                re = (_snap_fraction(float(coef.real))
                      if abs(coef.real) > ATOL else Fraction(0))
                im = (_snap_fraction(float(coef.imag))
                      if abs(coef.imag) > ATOL else Fraction(0))
                terms[letters] = ComplexDyadic(re, im)
                captured[cols ^ mask, cols] += complex(terms[letters]) * entries
    if np.max(np.abs(dense - captured)) > ATOL:
        raise OracleError("projection residual exceeds tolerance")
    return PauliSum(n, terms)


def expectation_dense(state: np.ndarray, p: PauliSum) -> complex:
    """<psi| P |psi> for a dense state, term by term without dense matrices."""
    n = p.n
    dim = 2 ** n
    if state.shape[0] != dim:
        raise OracleError("state dimension does not match operator")
    cols = np.arange(dim)
    total = 0j
    for letters, coef in p.terms():
        xmask, entries = _string_column_entries(letters, n)
        total += complex(coef) * complex(
            np.conj(state[cols ^ xmask]) @ (entries * state))
    return total


def apply_circuit(n: int, steps, state: np.ndarray | None = None) -> np.ndarray:
    """Evolve |0...0> (or a given state) through gate steps in time order."""
    psi = zero_state(n) if state is None else state.astype(complex)
    for kind, operands in steps:
        psi = gate_matrix(kind, n, tuple(operands)) @ psi
    return psi


def conditional_state(state: np.ndarray, qubits: list[int],
                      outcome: list[int]) -> tuple[np.ndarray, float]:
    """Project the listed qubits onto a bitstring outcome and renormalize.

    Returns the normalized state of the remaining qubits and the outcome
    probability.  Zero-probability outcomes raise.
    """
    n = int(round(np.log2(state.shape[0])))
    rest = [q for q in range(n) if q not in qubits]
    amps = np.zeros(2 ** len(rest), dtype=complex)
    want = dict(zip(qubits, outcome))
    for idx in range(state.shape[0]):
        bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
        if any(bits[q] != want[q] for q in qubits):
            continue
        out = 0
        for q in rest:
            out = (out << 1) | bits[q]
        amps[out] = state[idx]
    prob = float(np.sum(np.abs(amps) ** 2))
    if prob <= 1e-12:
        raise OracleError(f"outcome {outcome} has zero probability")
    return amps / np.sqrt(prob), prob


def reduced_density(state: np.ndarray, qubits: list[int]) -> np.ndarray:
    """Partial trace of |psi><psi| keeping only the listed qubits."""
    n = int(round(np.log2(state.shape[0])))
    keep = list(qubits)
    rest = [q for q in range(n) if q not in keep]
    psi = state.reshape([2] * n)
    perm = keep + rest
    psi = np.transpose(psi, perm).reshape(2 ** len(keep), 2 ** len(rest))
    return psi @ psi.conj().T

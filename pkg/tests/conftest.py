import random

import pytest

from dhsim.engine import GATE_KINDS, Circuit, Gate, apply_gate, initial_set


def random_gate(rng: random.Random, n: int) -> Gate:
    kinds = GATE_KINDS if n >= 2 else tuple(
        k for k in GATE_KINDS if k not in ("CNOT", "BELL"))
    kind = rng.choice(kinds)
    if kind in ("CNOT", "BELL"):
        a, b = rng.sample(range(n), 2)
        return Gate(kind, (a, b))
    return Gate(kind, (rng.randrange(n),))


def random_circuit(rng: random.Random, n: int, depth: int) -> Circuit:
    return Circuit(n, tuple(random_gate(rng, n) for _ in range(depth)))


@pytest.fixture(scope="session")
def bell_set():
    set_ = initial_set(2)
    set_ = apply_gate(set_, Gate("H", (0,)))
    return apply_gate(set_, Gate("CNOT", (0, 1)))


@pytest.fixture(scope="session")
def swap_result():
    from dhsim.protocols import run_entanglement_swap
    return run_entanglement_swap()

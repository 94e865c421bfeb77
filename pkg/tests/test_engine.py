import itertools
import random

import pytest

from dhsim import oracle
from dhsim.pauli import (
    I, X, Y, Z, ComplexDyadic, PauliSum, hs_inner, parse_sum,
)
from dhsim.engine import (
    SINGLE_QUBIT_KINDS, TWO_QUBIT_KINDS,
    Circuit, Gate, GateError,
    add_ancilla, apply_gate, component_product, evolve_circuit, expectation,
    gate_steps, heisenberg_image, initial_set,
)
from conftest import random_circuit

ONE = ComplexDyadic.of(1)


def S(text):
    return parse_sum(text)


class TestInitialSet:
    def test_two_qubits(self):
        s = initial_set(2)
        assert s.component(0, X) == S("1 * X⊗I")
        assert s.component(1, Z) == S("1 * I⊗Z")

    def test_single_qubit(self):
        s = initial_set(1)
        assert [s.component(0, w).render() for w in (X, Y, Z)] == \
            ["1 * X", "1 * Y", "1 * Z"]

    def test_locality_of_fresh_register(self):
        s = initial_set(6)
        for a in range(6):
            assert s.descriptor(a).support() == {a}

    def test_empty_register_rejected(self):
        with pytest.raises(ValueError):
            initial_set(0)


class TestGateRules:
    """Every rewrite rule must agree with dense conjugation."""

    @pytest.mark.parametrize("kind", SINGLE_QUBIT_KINDS)
    def test_single_qubit_rules(self, kind):
        u = oracle.gate_matrix(kind, 1, (0,))
        s = apply_gate(initial_set(1), Gate(kind, (0,)))
        for w in (X, Y, Z):
            want = oracle.conjugate(u, PauliSum.single(1, 0, w))
            assert s.component(0, w) == want, (kind, w)

    @pytest.mark.parametrize("kind", TWO_QUBIT_KINDS)
    @pytest.mark.parametrize("operands", [(0, 1), (1, 0)])
    def test_two_qubit_rules(self, kind, operands):
        u = oracle.gate_matrix(kind, 2, operands)
        s = apply_gate(initial_set(2), Gate(kind, operands))
        for a in range(2):
            for w in (X, Y, Z):
                want = oracle.conjugate(u, PauliSum.single(2, a, w))
                assert s.component(a, w) == want, (kind, operands, a, w)

    def test_operand_validation(self):
        with pytest.raises(GateError):
            Gate("CNOT", (0, 0))
        with pytest.raises(GateError):
            Gate("H", (0, 1))
        with pytest.raises(GateError):
            apply_gate(initial_set(1), Gate("X", (3,)))


class TestBellConstruction:
    def test_hadamard_step(self):
        s = apply_gate(initial_set(2), Gate("H", (0,)))
        assert [s.component(0, w).render() for w in (X, Y, Z)] == \
            ["1 * Z⊗I", "-1 * Y⊗I", "1 * X⊗I"]

    def test_full_construction(self, bell_set):
        assert [bell_set.component(0, w).render() for w in (X, Y, Z)] == \
            ["1 * Z⊗X", "-1 * Y⊗X", "1 * X⊗I"]
        assert [bell_set.component(1, w).render() for w in (X, Y, Z)] == \
            ["1 * I⊗X", "1 * X⊗Y", "1 * X⊗Z"]

    def test_hadamard_squares_to_identity(self):
        s = initial_set(3)
        t = apply_gate(apply_gate(s, Gate("H", (1,))), Gate("H", (1,)))
        assert t.descriptors == s.descriptors

    def test_expectations(self, bell_set):
        assert expectation(bell_set, (X, X)) == ONE
        assert expectation(bell_set, (Y, Y)) == -ONE
        assert expectation(bell_set, (Z, Z)) == ONE
        assert not expectation(bell_set, (X, I))


class TestAncilla:
    def test_growth(self, bell_set):
        s = add_ancilla(bell_set)
        assert s.n == 3
        assert s.component(2, X) == S("1 * I⊗I⊗X")
        for a in range(2):
            assert s.descriptor(a).support() == bell_set.descriptor(a).support()

    def test_extension_preserves_components(self, bell_set):
        s = add_ancilla(bell_set)
        assert s.component(0, X) == bell_set.component(0, X).extended(1)


class TestEvolveCircuit:
    def test_bell_circuit(self, bell_set):
        c = Circuit(2, (Gate("H", (0,)), Gate("CNOT", (0, 1))))
        assert evolve_circuit(c).descriptors == bell_set.descriptors

    def test_empty_circuit(self):
        assert evolve_circuit(Circuit(3)).descriptors == initial_set(3).descriptors

    def test_step_errors_carry_index(self):
        c = Circuit(2, (Gate("H", (0,)),))
        bad = Circuit.__new__(Circuit)
        object.__setattr__(bad, "initial_qubits", 2)
        object.__setattr__(bad, "steps", (Gate("H", (0,)), Gate("X", (5,))))
        with pytest.raises(GateError, match="step 2"):
            evolve_circuit(bad)

    def test_history_recorded(self, bell_set):
        assert gate_steps(bell_set) == [("H", (0,)), ("CNOT", (0, 1))]


class TestStructuralInvariants:
    def test_y_convention_preserved(self):
        rng = random.Random(11)
        for _ in range(20):
            circuit = random_circuit(rng, 3, 12)
            s = evolve_circuit(circuit)
            for a in range(3):
                assert s.descriptor(a).is_canonical()

    def test_homomorphism(self):
        # The image of a product is the product of the images.
        rng = random.Random(5)
        for _ in range(10):
            s = evolve_circuit(random_circuit(rng, 3, 10))
            for _ in range(5):
                la = tuple(rng.randrange(4) for _ in range(3))
                lb = tuple(rng.randrange(4) for _ in range(3))
                a = PauliSum(3, {la: ONE})
                b = PauliSum(3, {lb: ONE})
                assert heisenberg_image(s, a * b) == \
                    heisenberg_image(s, a) * heisenberg_image(s, b)

    def test_unitarity_preserves_orthonormality(self):
        rng = random.Random(7)
        for _ in range(5):
            s = evolve_circuit(random_circuit(rng, 2, 15))
            images = []
            for letters in itertools.product(range(4), repeat=2):
                images.append(heisenberg_image(s, PauliSum(2, {letters: ONE})))
            for i, a in enumerate(images):
                for j, b in enumerate(images):
                    want = ONE if i == j else ComplexDyadic.of(0)
                    assert hs_inner(a, b) == want

    def test_component_product_matches_expectation(self, bell_set):
        from dhsim.pauli import vacuum_expectation
        prod = component_product(bell_set, (X, X))
        assert vacuum_expectation(prod) == expectation(bell_set, (X, X))


class TestPictureEquivalence:
    def test_random_circuits_small(self):
        rng = random.Random(23)
        for _ in range(10):
            n = rng.randint(1, 4)
            circuit = random_circuit(rng, n, 12)
            s = evolve_circuit(circuit)
            psi = oracle.apply_circuit(n, gate_steps(s))
            for _ in range(25):
                idx = tuple(rng.randrange(4) for _ in range(n))
                got = complex(expectation(s, idx))
                p = PauliSum(n, {idx: ONE})
                want = oracle.expectation_dense(psi, p)
                assert abs(got - want) < 1e-9

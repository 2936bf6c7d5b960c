import numpy as np
import pytest

from ftec.code import five_qubit_code, steane_code, syndrome_of_pauli
from ftec.extraction import Circuit, compile_full, run_extraction
from ftec.experiments import counterexample_location
from ftec.noise import (
    FaultError,
    FaultLocation,
    apply_error_process,
    enumerate_fault_locations,
    inject,
    inject_many,
    sample_faults,
)
from ftec.pauli import PauliOperator
from ftec.statevec import OneQubit, StateVector, Xor, apply_gate, encode_logical, fidelity

FIVE = five_qubit_code()


def tiny(*gates, n=2):
    return Circuit(n, list(gates), [], "bare")


class TestEnumerate:
    def test_single_rotation(self):
        locs = enumerate_fault_locations(tiny(OneQubit("R", 0), n=1))
        assert len(locs) == 6
        assert {(l.timing, l.kind) for l in locs} == {(t, k) for t in ("before", "after") for k in "XYZ"}

    def test_xor_touches_both(self):
        locs = enumerate_fault_locations(tiny(Xor(0, 1)))
        assert {l.qubit for l in locs} == {0, 1}
        assert len(locs) == 12

    def test_adjacent_gates_share_a_slot(self):
        locs = enumerate_fault_locations(tiny(OneQubit("R", 0), OneQubit("X", 0), n=1))
        assert len(locs) == 9
        assert not any(l.gate_index == 1 and l.timing == "before" for l in locs)

    @pytest.mark.parametrize(
        "code,mode,count",
        [(FIVE, "bare", 171), (FIVE, "cat", 255), (steane_code(), "bare", 255), (steane_code(), "cat", 381)],
    )
    def test_compiled_counts(self, code, mode, count):
        circuit, _ = compile_full(code, mode)
        locs = enumerate_fault_locations(circuit)
        assert len(locs) == count
        assert locs == enumerate_fault_locations(compile_full(code, mode)[0])

    def test_five_bare_slot_count(self):
        circuit, _ = compile_full(FIVE, "bare")
        # per data qubit: one slot before its first gate plus one after each gate;
        # per ancilla: one slot after each gate except its measurement
        slots = 0
        for q in range(5):
            slots += 1 + sum(q in g.qubits for g in circuit.gates)
        for a in circuit.ancillas:
            slots += sum(a in g.qubits for g in circuit.gates) - 1
        assert slots == 57
        assert len(enumerate_fault_locations(circuit)) == 3 * slots == 171

    def test_every_location_is_injectable(self):
        circuit, _ = compile_full(FIVE, "cat")
        for loc in enumerate_fault_locations(circuit, kinds=("Z",)):
            assert len(inject(circuit, loc).gates) == len(circuit.gates) + 1


class TestInject:
    def test_counterexample_location(self):
        circuit, _ = compile_full(FIVE, "bare")
        loc = counterexample_location(circuit)
        assert str(loc) == "@4:after:a0:Z"
        xors = [i for i in range(circuit.stages[0].stop) if isinstance(circuit.gates[i], Xor)]
        assert xors[1] == loc.gate_index < xors[2]
        faulty = inject(circuit, loc)
        assert faulty.gates[loc.gate_index + 1] == OneQubit("Z", "a0")

    def test_splice_preserves_rest(self):
        circuit, _ = compile_full(FIVE, "bare")
        loc = FaultLocation(10, "before", 3, "Y")
        faulty = inject(circuit, loc)
        assert faulty.gates[:10] + faulty.gates[11:] == circuit.gates
        assert faulty.gates[10] == OneQubit("Y", 3)
        old, new = circuit.stages, faulty.stages
        assert [s.generator for s in new] == [s.generator for s in old]
        assert new[1].stop - new[1].start == old[1].stop - old[1].start + 1
        assert new[2].start == old[2].start + 1

    @pytest.mark.parametrize("kind", ["I", "W"])
    def test_rejects_non_pauli_kind(self, kind):
        circuit, _ = compile_full(FIVE, "bare")
        with pytest.raises(FaultError):
            inject(circuit, FaultLocation(0, "after", 0, kind))

    @pytest.mark.parametrize(
        "loc",
        [FaultLocation(999, "after", 0, "X"), FaultLocation(0, "before", "a0", "X"),
         FaultLocation(1, "after", "a1", "X"), FaultLocation(1, "after", "zz", "X")],
    )
    def test_rejects_invalid_location(self, loc):
        circuit, _ = compile_full(FIVE, "bare")
        with pytest.raises(FaultError):
            inject(circuit, loc)

    def test_inject_many_keeps_indices_meaningful(self):
        circuit, _ = compile_full(FIVE, "bare")
        locs = [FaultLocation(2, "after", 0, "X"), FaultLocation(5, "before", 2, "Z")]
        both = inject_many(circuit, locs)
        assert both.gates[3] == OneQubit("X", 0) and both.gates[6] == OneQubit("Z", 2)


class TestSpecString:
    def test_round_trip(self):
        for text in ("@4:after:a0:Z", "@0:before:3:Y"):
            assert str(FaultLocation.parse(text)) == text
        assert FaultLocation.parse("@0:before:3:Y").qubit == 3

    @pytest.mark.parametrize("text", ["@x:after:0:Z", "@1:during:0:Z", "@1:after:0:I", "1:after:0:Z"])
    def test_malformed(self, text):
        with pytest.raises(FaultError):
            FaultLocation.parse(text)


def test_xor_back_propagation():
    rng = np.random.default_rng(0)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    base = StateVector([0, 1], v / np.linalg.norm(v))
    before, after = base.copy(), base.copy()
    apply_gate(before, OneQubit("Z", 1))
    apply_gate(before, Xor(0, 1))
    apply_gate(after, Xor(0, 1))
    apply_gate(after, OneQubit("Z", 0))
    apply_gate(after, OneQubit("Z", 1))
    assert fidelity(before, after) == pytest.approx(1, abs=1e-12)


class TestErrorProcess:
    def test_identity(self):
        st = encode_logical(0.6, 0.8, "S")
        out = apply_error_process(st, PauliOperator(5))
        np.testing.assert_array_equal(out.amplitudes, st.amplitudes)

    @pytest.mark.parametrize("label,syn", [("Y3", (0, 1, 1, 1)), ("X4", (1, 0, 1, 0))])
    def test_syndrome_via_circuit(self, label, syn):
        circuit, _ = compile_full(FIVE, "cat")
        st = encode_logical(0.6, 0.8j, "S")
        p = PauliOperator.from_label(label, 5)
        out, _ = run_extraction(apply_error_process(st, p), circuit, np.random.default_rng(1))
        assert out.syndrome == syn == syndrome_of_pauli(FIVE, p)

    def test_original_untouched(self):
        st = encode_logical(1, 0, "S")
        ref = st.amplitudes.copy()
        apply_error_process(st, PauliOperator.from_label("X0", 5))
        np.testing.assert_array_equal(st.amplitudes, ref)


def test_sample_faults_rate():
    circuit, _ = compile_full(FIVE, "bare")
    rng = np.random.default_rng(5)
    assert sample_faults(circuit, 0.0, rng) == []
    assert len(sample_faults(circuit, 1.0, rng)) == 57
    n = sum(len(sample_faults(circuit, 0.1, rng)) for _ in range(200))
    assert 0.08 < n / (200 * 57) < 0.12

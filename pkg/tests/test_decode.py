import itertools

import numpy as np
import pytest

from ftec.code import TABLE1, five_qubit_code, steane_code, syndrome_of_pauli, validate
from ftec.decode import (
    AmbiguousSyndrome,
    Uncorrectable,
    build_table,
    decode_and_correct,
    verify_table1,
)
from ftec.extraction import compile_full, repeat_until_confirmed, run_extraction
from ftec.pauli import PauliOperator, parse_notation
from ftec.statevec import apply_pauli, encode_code_state, fidelity, haar_qubit

FIVE = five_qubit_code()
STEANE = steane_code()


def key(bits):
    return tuple(int(c) for c in bits)


class TestBuildTable:
    def test_five_entries(self):
        table = build_table(FIVE)
        assert len(table) == 16
        assert table[key("0101")].label() == "X0"
        assert table[key("1100")].label() == "Z1"
        assert table[key("1011")].label() == "Y4"
        assert table[key("0000")].is_identity()

    def test_five_corrections_are_single_qubit(self):
        for u in build_table(FIVE).entries.values():
            assert len(u.support) <= 1

    @pytest.mark.parametrize("code", [FIVE, STEANE], ids=["five", "steane"])
    def test_entries_match_oracle(self, code):
        for s, u in build_table(code).entries.items():
            assert syndrome_of_pauli(code, u) == s
            assert u.phase == 0

    def test_steane(self):
        table = build_table(STEANE)
        assert len(table) == 22
        assert len(list(itertools.product((0, 1), repeat=6))) - len(table) == 42

    def test_repetition_code_bit_flips(self):
        code = validate([parse_notation("X(000)Z(110)"), parse_notation("X(000)Z(011)")], 3, t=1)
        table = build_table(code, kinds="X")
        assert len(table) == 4
        assert {s: u.label() for s, u in table.entries.items()} == {
            (0, 0): "I", (1, 0): "X0", (1, 1): "X1", (0, 1): "X2",
        }

    def test_ambiguous(self):
        code = validate([parse_notation("X(000)Z(110)")], 3, t=1)
        with pytest.raises(AmbiguousSyndrome):
            build_table(code)

    def test_degenerate_keeps_least(self):
        code = validate([parse_notation("X(00)Z(11)"), parse_notation("X(11)Z(00)")], 2, t=1)
        table = build_table(code)
        labels = {u.label() for u in table.entries.values()}
        assert {"X1", "Y1", "Z1"} <= labels and not {"X0", "Y0", "Z0"} & labels

    def test_dump_sorted(self):
        lines = build_table(FIVE).dump().splitlines()
        assert lines[0] == "0000 -> I" and lines[-1] == "1111 -> Y2"
        assert lines == sorted(lines)


class TestDecodeAndCorrect:
    def test_zero_syndrome_is_identity(self):
        st = encode_code_state(FIVE, [0.6, 0.8])
        out = decode_and_correct(st, build_table(FIVE), (0, 0, 0, 0))
        np.testing.assert_allclose(out.amplitudes, st.amplitudes)

    def test_0011_applies_z3(self):
        st = encode_code_state(FIVE, [0.6, 0.8])
        bad = st.copy()
        apply_pauli(bad, PauliOperator.from_label("Z3", 5))
        out = decode_and_correct(bad, build_table(FIVE), key("0011"))
        assert fidelity(out, st) == pytest.approx(1, abs=1e-12)

    def test_unpopulated_steane_syndrome(self):
        table = build_table(STEANE)
        missing = next(s for s in itertools.product((0, 1), repeat=6) if s not in table)
        with pytest.raises(Uncorrectable):
            decode_and_correct(encode_code_state(STEANE, [1, 0]), table, missing)

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            decode_and_correct(encode_code_state(FIVE, [1, 0]), build_table(FIVE), (0, 0))

    def test_idempotent(self):
        table = build_table(FIVE)
        circuit, _ = compile_full(FIVE, "bare")
        rng = np.random.default_rng(9)
        st = encode_code_state(FIVE, haar_qubit(rng))
        apply_pauli(st, PauliOperator.from_label("Y1", 5))
        out, post = run_extraction(st, circuit, rng)
        fixed = decode_and_correct(post, table, out.syndrome)
        again, post2 = run_extraction(fixed, circuit, rng)
        assert again.syndrome == (0, 0, 0, 0)
        assert fidelity(decode_and_correct(post2, table, again.syndrome), fixed) > 1 - 1e-12


class TestTable1:
    def test_canonical(self):
        rep = verify_table1(build_table(FIVE))
        assert rep.ok and rep.matched == 16

    def test_reordered_generators_report_rows(self):
        rep = verify_table1(build_table(FIVE.reordered([1, 0, 2, 3])))
        assert not rep.ok
        bad = {s for s, _, _ in rep.mismatches}
        assert "1000" in bad and "0100" in bad
        assert any("expected" in line for line in rep.lines())

    def test_fixture_is_bijection(self):
        assert len(TABLE1) == 16 and len(set(TABLE1.values())) == 16
        assert set(TABLE1) == {"".join(b) for b in itertools.product("01", repeat=4)}

    def test_fixture_consistent_with_oracle(self):
        for bits, label in TABLE1.items():
            assert syndrome_of_pauli(FIVE, PauliOperator.from_label(label, 5)) == key(bits)


@pytest.mark.parametrize("code", [FIVE, STEANE], ids=["five", "steane"])
@pytest.mark.parametrize("mode", ["bare", "cat"])
def test_end_to_end_recovery(code, mode):
    table = build_table(code)
    circuit, _ = compile_full(code, mode)
    rng = np.random.default_rng(17)
    singles = [PauliOperator.single(k, q, code.n) for q in range(code.n) for k in "XYZ"]
    for i in range(50):
        st = encode_code_state(code, haar_qubit(rng))
        e = singles[i % len(singles)]
        bad = st.copy()
        apply_pauli(bad, e)
        out, post = repeat_until_confirmed(bad, rng=rng, circuit=circuit)
        fixed = decode_and_correct(post, table, out.syndrome)
        assert fidelity(fixed, st) >= 1 - 1e-9, e.label()

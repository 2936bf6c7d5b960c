import itertools

import pytest

from ftec.code import (
    CodeFileError,
    Dependent,
    DimensionMismatch,
    NonCommuting,
    distinct_syndrome_check,
    five_qubit_code,
    five_qubit_shift,
    format_code_file,
    load_code,
    parse_code_file,
    steane_code,
    syndrome_of_pauli,
    validate,
)
from ftec.pauli import PauliOperator, parse_notation, symplectic_product

from oracles import gf2_rank


def test_five_qubit_generators():
    code = five_qubit_code()
    assert code.n == 5 and code.g == 4 and code.k == 1 and code.t == 1
    assert str(code.generators[0]) == "X(11000)Z(00101)"
    assert str(code.generators[1]) == "X(01100)Z(10010)"
    assert code.signs == (1, 1, 1, 1)


def test_five_cyclic_shifts_have_rank_four():
    shifts = [five_qubit_shift(s) for s in range(5)]
    assert gf2_rank(shifts) == 4
    assert gf2_rank(shifts[:4]) == 4


def test_first_generator_support_is_parity_group():
    assert five_qubit_code().generators[0].support == (0, 1, 2, 4)


def test_steane_is_self_dual_css():
    code = steane_code()
    assert code.g == 6 and code.k == 1
    xs = [g for g in code.generators if g.z == 0]
    zs = [g for g in code.generators if g.x == 0]
    assert len(xs) == 3 and len(zs) == 3
    assert sorted(g.x for g in xs) == sorted(g.z for g in zs)
    assert gf2_rank(list(code.generators)) == 6


class TestValidate:
    def test_anticommuting(self):
        with pytest.raises(NonCommuting):
            validate([PauliOperator.single("X", 0, 1), PauliOperator.single("Z", 0, 1)], 1)

    def test_dependent(self):
        z0 = PauliOperator.single("Z", 0, 2)
        with pytest.raises(Dependent):
            validate([z0, z0], 2)

    def test_dependent_product(self):
        gens = [five_qubit_shift(s) for s in range(5)]
        with pytest.raises(Dependent) as err:
            validate(gens, 5)
        assert err.value.i == 4

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            validate([PauliOperator.single("Z", 0, 3)], 2)


class TestSyndromeOracle:
    def test_table_rows(self):
        code = five_qubit_code()
        assert syndrome_of_pauli(code, PauliOperator(5)) == (0, 0, 0, 0)
        assert syndrome_of_pauli(code, PauliOperator.from_label("Z4", 5)) == (0, 0, 0, 1)
        assert syndrome_of_pauli(code, PauliOperator.from_label("Y2", 5)) == (1, 1, 1, 1)

    @pytest.mark.parametrize("code", [five_qubit_code(), steane_code()], ids=["five", "steane"])
    def test_stabilizers_have_zero_syndrome(self, code):
        for r in range(1, 4):
            for sub in itertools.combinations(code.generators, r):
                p = PauliOperator(code.n)
                for g in sub:
                    p = p * g
                assert syndrome_of_pauli(code, p) == (0,) * code.g

    @pytest.mark.parametrize("code", [five_qubit_code(), steane_code()], ids=["five", "steane"])
    def test_syndrome_is_linear(self, code):
        singles = [PauliOperator.single(k, q, code.n) for q in range(code.n) for k in "XYZ"]
        for a, b in itertools.combinations(singles, 2):
            sa, sb = syndrome_of_pauli(code, a), syndrome_of_pauli(code, b)
            assert syndrome_of_pauli(code, a * b) == tuple(x ^ y for x, y in zip(sa, sb))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            syndrome_of_pauli(five_qubit_code(), PauliOperator(3))


class TestDistinct:
    def test_five(self):
        rep = distinct_syndrome_check(five_qubit_code())
        assert (rep.n_errors, rep.n_distinct, rep.ok) == (16, 16, True)

    def test_steane(self):
        rep = distinct_syndrome_check(steane_code())
        assert (rep.n_errors, rep.n_distinct, rep.ok) == (22, 22, True)

    def test_broken_code_reports_collision(self):
        code = validate([parse_notation("X(000)Z(110)")], 3)
        rep = distinct_syndrome_check(code)
        assert not rep.ok
        assert ("1", "X0", "X1") in rep.collisions

    def test_degenerate_pairs_are_not_collisions(self):
        # X0/X1, Y0/Y1, Z0/Z1 each differ by an element of {Z0Z1, X0X1}
        code = validate([parse_notation("X(00)Z(11)"), parse_notation("X(11)Z(00)")], 2, t=1)
        rep = distinct_syndrome_check(code)
        assert rep.ok
        assert sorted(d[1:] for d in rep.degenerate) == [("X0", "X1"), ("Y0", "Y1"), ("Z0", "Z1")]


class TestCodeFile:
    def test_round_trip(self):
        text = format_code_file(five_qubit_code())
        assert text.splitlines()[0] == "n=5 k=1 t=1"
        code = parse_code_file(text)
        assert code.generators == five_qubit_code().generators

    def test_signed_generator(self):
        code = parse_code_file("n=2 k=1 t=0\n-X(00)Z(11)\n")
        assert code.signs == (-1,)
        assert format_code_file(code).splitlines()[1] == "-X(00)Z(11)"

    @pytest.mark.parametrize(
        "text",
        ["", "n=2 k=1\nX(00)Z(11)", "n=1 k=0 t=0\nX(1)Z(0)\nX(0)Z(1)", "n=2 k=0 t=0\nX(00)Z(11)",
         "n=2 k=1 t=0\nX(0)Z(11)"],
    )
    def test_bad_files(self, text):
        with pytest.raises(ValueError):
            parse_code_file(text)

    def test_load_sources(self, tmp_path):
        assert load_code("five").name == "five"
        assert load_code("steane").n == 7
        path = tmp_path / "rep.stab"
        path.write_text("n=3 k=1 t=1\nX(000)Z(110)\nX(000)Z(011)\n")
        assert load_code(f"file:{path}").g == 2
        with pytest.raises(CodeFileError):
            load_code("file:/nonexistent/x.stab")
        with pytest.raises(CodeFileError):
            load_code("golay")


def test_generators_commute_pairwise():
    for code in (five_qubit_code(), steane_code()):
        for a, b in itertools.combinations(code.generators, 2):
            assert symplectic_product(a, b) == 0

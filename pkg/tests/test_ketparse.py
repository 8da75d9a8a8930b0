import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etensor.ketparse import (
    KetFormatError,
    KetSyntaxError,
    load_ket_json,
    parse_amplitudes,
    parse_ket,
    save_ket_json,
    state_from_dict,
    state_to_dict,
)
from etensor.states import NormalizationError, PartyStructure


class TestGrammar:
    def test_epr(self):
        state = parse_ket("(|0,0> + |1,1>)/sqrt(2)")
        assert state.structure.dims == (2, 2)
        root_half = 1 / math.sqrt(2)
        assert state.amplitude((0, 0)) == pytest.approx(root_half, abs=1e-15)
        assert state.amplitude((1, 1)) == pytest.approx(root_half, abs=1e-15)
        assert state.amplitude((0, 1)) == 0

    def test_w3(self):
        state = parse_ket("(|1,0,0> + |0,1,0> + |0,0,1>)/sqrt(3)")
        assert state.structure.dims == (2, 2, 2)
        third = 1 / math.sqrt(3)
        for tup in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            assert state.amplitude(tup) == pytest.approx(third, abs=1e-15)

    def test_unnormalized_rejected_with_norm_in_message(self):
        with pytest.raises(NormalizationError, match="0.666666"):
            parse_ket("(|0,0,0> + |1,1,1>)/sqrt(3)")

    def test_normalize_flag(self):
        state = parse_ket("(|0,0,0> + |1,1,1>)/sqrt(3)", normalize=True)
        assert state.amplitude((0, 0, 0)) == pytest.approx(1 / math.sqrt(2))

    def test_minus_and_leading_sign(self):
        state = parse_ket("-(|0,0> - |1,1>)/sqrt(2)")
        assert state.amplitude((0, 0)) == pytest.approx(-1 / math.sqrt(2))
        assert state.amplitude((1, 1)) == pytest.approx(1 / math.sqrt(2))

    def test_imaginary_coefficient(self):
        state = parse_ket("(|0,1> + i*|1,0>)/sqrt(2)")
        assert state.amplitude((1, 0)) == pytest.approx(1j / math.sqrt(2))

    def test_decimal_and_fraction_scalars(self):
        state = parse_ket("0.6|0,0> + 0.8|1,1>")
        assert state.amplitude((0, 0)) == pytest.approx(0.6)
        state = parse_ket("3/5*|0,0> + 4/5*|1,1>")
        assert state.amplitude((1, 1)) == pytest.approx(0.8)

    def test_scalar_products(self):
        state = parse_ket("(sqrt(2)*i*|0,1> + sqrt(2)*|1,0>)/2")
        assert state.amplitude((0, 1)) == pytest.approx(1j / math.sqrt(2))

    def test_repeated_kets_are_summed(self):
        state = parse_ket("(|0,0> + |0,0> + |1,1> + |1,1>)/sqrt(8)")
        assert state.amplitude((0, 0)) == pytest.approx(1 / math.sqrt(2))

    def test_zero_vector(self):
        with pytest.raises(NormalizationError, match="zero vector"):
            parse_ket("|0,0> - |0,0>")

    def test_division_at_state_level(self):
        state = parse_ket("|0,0>/1")
        assert state.amplitude((0, 0)) == 1.0

    def test_qudit_digits(self):
        state = parse_ket("(|0,0> + |2,1>)/sqrt(2)")
        assert state.structure.dims == (3, 2)


class TestCompactForm:
    def test_compact_qubits(self):
        state = parse_ket("(|0110> + |1001>)/sqrt(2)")
        assert state.structure.dims == (2, 2, 2, 2)
        assert state.amplitude((0, 1, 1, 0)) == pytest.approx(1 / math.sqrt(2))

    def test_compact_rejects_qudit_digit(self):
        with pytest.raises(KetSyntaxError, match="compact"):
            parse_ket("|012>")

    def test_compact_rejected_under_qudit_hint(self):
        hint = PartyStructure((2, 3))
        with pytest.raises(KetSyntaxError, match="compact"):
            parse_ket("(|00> + |11>)/sqrt(2)", structure_hint=hint)

    def test_single_digit_is_one_party(self):
        state = parse_ket("(|0> + |3>)/sqrt(2)")
        assert state.structure.dims == (4,)


class TestErrors:
    def test_syntax_error_has_position(self):
        with pytest.raises(KetSyntaxError) as err:
            parse_ket("(|0,0> + ")
        assert err.value.line == 1
        assert err.value.col == 10

    def test_unterminated_ket(self):
        with pytest.raises(KetSyntaxError, match="unterminated"):
            parse_ket("|0,0")

    def test_bad_character(self):
        with pytest.raises(KetSyntaxError, match="unexpected character"):
            parse_ket("|0,0> ^ |1,1>")

    def test_bad_ket_contents(self):
        with pytest.raises(KetSyntaxError, match="integers"):
            parse_ket("|0,a>")

    def test_arity_mismatch(self):
        with pytest.raises(KetSyntaxError, match="arity"):
            parse_ket("|0,0> + |0,0,0>")

    def test_hint_dimension_violation(self):
        hint = PartyStructure((2, 2))
        with pytest.raises(KetSyntaxError, match="exceeds hinted dimension"):
            parse_ket("|0,2>", structure_hint=hint)

    def test_hint_arity_violation(self):
        hint = PartyStructure((2, 2, 2))
        with pytest.raises(KetSyntaxError, match="parties"):
            parse_ket("(|0,0> + |1,1>)/sqrt(2)", structure_hint=hint)

    def test_trailing_garbage(self):
        with pytest.raises(KetSyntaxError, match="trailing"):
            parse_ket("|0,0> |1,1>")

    def test_division_by_zero(self):
        with pytest.raises(KetSyntaxError, match="zero"):
            parse_ket("|0,0>/0")


class TestLinearity:
    @given(
        st.integers(1, 9), st.integers(1, 9),
        st.integers(2, 9), st.integers(2, 9),
    )
    @settings(max_examples=40)
    def test_raw_parse_is_linear(self, a_num, a_den, b_num, b_den):
        expr = f"{a_num}/{a_den}*|0,1> + {b_num}/{b_den}*|1,0>"
        _, amps = parse_amplitudes(expr)
        _, e1 = parse_amplitudes("|0,1>", PartyStructure((2, 2)))
        _, e2 = parse_amplitudes("|1,0>", PartyStructure((2, 2)))
        expected = (a_num / a_den) * e1 + (b_num / b_den) * e2
        assert np.array_equal(amps, expected)


class TestJsonFormat:
    def test_round_trip_bit_for_bit(self, tmp_path):
        exprs = [
            "(|0,0> + |1,1>)/sqrt(2)",
            "(|1,0,0> + i*|0,1,0> - |0,0,1>)/sqrt(3)",
            "0.6|0,0> + 0.8|1,1>",
        ]
        for i, expr in enumerate(exprs):
            state = parse_ket(expr)
            path = tmp_path / f"case{i}.ket.json"
            save_ket_json(state, str(path))
            loaded = load_ket_json(str(path))
            assert loaded.structure.dims == state.structure.dims
            assert np.array_equal(loaded.amplitudes, state.amplitudes)

    def test_dict_round_trip(self):
        state = parse_ket("(|0,2> + |1,0>)/sqrt(2)")
        again = state_from_dict(state_to_dict(state))
        assert np.array_equal(again.amplitudes, state.amplitudes)

    def test_omitted_indices_are_zero(self):
        doc = {"dims": [2, 2],
               "amplitudes": [{"index": [0, 0], "re": 1.0, "im": 0.0}]}
        state = state_from_dict(doc)
        assert state.amplitude((1, 1)) == 0

    def test_duplicate_index_rejected(self):
        doc = {"dims": [2, 2], "amplitudes": [
            {"index": [0, 0], "re": 0.7, "im": 0.0},
            {"index": [0, 0], "re": 0.7, "im": 0.0},
        ]}
        with pytest.raises(KetFormatError, match="duplicate"):
            state_from_dict(doc)

    def test_bad_dims_rejected(self):
        with pytest.raises(KetFormatError):
            state_from_dict({"dims": [1, 2], "amplitudes": []})
        with pytest.raises(KetFormatError):
            state_from_dict({"amplitudes": []})

    def test_out_of_range_index_rejected(self):
        doc = {"dims": [2, 2],
               "amplitudes": [{"index": [0, 2], "re": 1.0, "im": 0.0}]}
        with pytest.raises(KetFormatError):
            state_from_dict(doc)

    def test_norm_still_enforced(self):
        doc = {"dims": [2, 2],
               "amplitudes": [{"index": [0, 0], "re": 0.5, "im": 0.0}]}
        with pytest.raises(NormalizationError):
            state_from_dict(doc)
        state = state_from_dict(doc, normalize=True)
        assert state.amplitude((0, 0)) == 1.0

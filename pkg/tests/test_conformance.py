"""Conformance relations: fault models, verdicts, oracles."""

import pytest

from confkit import (
    ConformanceError,
    EmptyLanguage,
    LabelingConfig,
    TransitionSystem,
    accepts,
    add_quiescence,
    canonical_alphabet,
    determinize,
    fault_model_ioco,
    fault_model_language,
    induced_fsa,
    intersection,
    match_regex,
    model_d,
    oracle_ioco,
    oracle_language,
    parse_aldebaran,
    parse_regex,
    verify_ioco,
    verify_language,
)

from conftest import all_words, is_trace, outputs_enabled, walk_word

DELTA = "delta"

# The published counterexample suite for checking R against S, in order:
# first the premature-output group, then the missed-output group.
IOCO_SUITE_R = [
    ("b", "x"),
    ("a", "a", "x"),
    ("b", "a", "x"),
    ("a", "a", "a", "x"),
    ("a", "b", DELTA),
    ("a", "x", DELTA),
    ("a", "b", "b", DELTA),
    ("a", "x", "b", DELTA),
]

LANG_SUITE_Q = [
    ("a", "b", "a", "b", "a", "x"),
    ("a", "b", "a", "a", "b", "a", "x"),
]


class TestModelD:
    def test_contract_words(self, spec_s):
        fsa = model_d(spec_s)
        assert accepts(fsa, ("a", "b", "x"))
        assert accepts(fsa, ("x",))
        assert not accepts(fsa, ("a", "b"))
        assert not accepts(fsa, ())

    def test_language_is_trace_then_output(self, spec_s):
        fsa = model_d(spec_s)
        for word in all_words(("a", "b", "x"), 4):
            expected = (
                len(word) >= 1
                and word[-1] in spec_s.outputs
                and is_trace(spec_s, word[:-1])
            )
            assert accepts(fsa, word) == expected, word

    def test_works_on_augmented_model(self, spec_s):
        fsa = model_d(add_quiescence(spec_s))
        assert accepts(fsa, (DELTA,))
        assert accepts(fsa, ("a", "b", DELTA))

    def test_needs_iolts(self):
        lts = parse_aldebaran(
            "des (p0, 1, 1)\n(p0, go, p0)\n", LabelingConfig(model_kind="lts")
        )
        with pytest.raises(ConformanceError):
            model_d(lts)


class TestFaultModelIoco:
    def test_language_is_unexpected_output_after_trace(self, spec_s):
        fault = fault_model_ioco(spec_s).automaton
        sd = add_quiescence(spec_s)
        for word in all_words(("a", "b", "x", DELTA), 4):
            expected = (
                len(word) >= 1
                and word[-1] in sd.outputs
                and is_trace(sd, word[:-1])
                and not is_trace(sd, word)
            )
            assert accepts(fault, word) == expected, word

    def test_known_words(self, spec_s):
        fault = fault_model_ioco(spec_s).automaton
        for word in [("x",), ("b", "x"), ("a", "a", "x"), ("a", "b", DELTA)]:
            assert accepts(fault, word)
        for word in [(), ("a", "x"), ("a", "b"), (DELTA,), ("b", DELTA)]:
            assert not accepts(fault, word)

    def test_merged_state_names(self, spec_s):
        fault = fault_model_ioco(spec_s).automaton
        assert {"s0s0", "s1s1", "s2s2", "s3s3", "cf"} <= set(fault.states)
        assert fault.finals == {"cf"}


class TestVerifyIoco:
    def test_faulty_implementation(self, spec_s, impl_r):
        verdict = verify_ioco(spec_s, impl_r)
        assert not verdict.conforms
        assert [c.fault_word for c in verdict.test_cases] == IOCO_SUITE_R
        assert not verdict.warnings

    def test_case_details(self, spec_s, impl_r):
        cases = verify_ioco(spec_s, impl_r).test_cases
        first = cases[0]
        assert first.stimulus_prefix == ("b",)
        assert first.expected_outputs == (DELTA,)
        assert first.observed_output == "x"
        assert first.spec_path == ("s0", "s3")
        assert first.iut_path == ("q0", "q3", "q0")
        last = cases[-1]
        assert last.stimulus_prefix == ("a", "x", "b")
        assert last.expected_outputs == ("x",)
        assert last.observed_output == DELTA
        assert last.iut_path == ("q0", "q1", "q2", "q2", "q2")

    def test_grouping_by_fault(self, spec_s, impl_r):
        cases = verify_ioco(spec_s, impl_r).test_cases
        observed = [c.observed_output for c in cases]
        assert observed == ["x"] * 4 + [DELTA] * 4

    def test_covered_spec_transitions(self, spec_s, impl_r):
        verdict = verify_ioco(spec_s, impl_r)
        assert verdict.covered_spec_transitions == (
            ("s0", "a", "s1"),
            ("s0", "b", "s3"),
            ("s1", "a", "s3"),
            ("s1", "b", "s2"),
            ("s1", "x", "s2"),
            ("s2", "b", "s2"),
            ("s3", "a", "s3"),
        )

    def test_conforming_implementation(self, spec_s, impl_q):
        verdict = verify_ioco(spec_s, impl_q)
        assert verdict.conforms
        assert verdict.test_cases == ()
        assert verdict.covered_spec_transitions == ()

    def test_reflexive(self, spec_s, impl_r, impl_q):
        for ts in (spec_s, impl_r, impl_q):
            assert verify_ioco(ts, ts).conforms

    def test_cases_replay_soundly(self, spec_s, impl_r):
        sd = add_quiescence(spec_s)
        rd = add_quiescence(impl_r)
        for case in verify_ioco(spec_s, impl_r).test_cases:
            sets = walk_word(sd, case.stimulus_prefix)
            assert sets is not None, "stimulus must be a spec suspension trace"
            assert walk_word(rd, case.fault_word) is not None
            allowed = outputs_enabled(sd, sets[-1])
            assert case.observed_output not in allowed
            assert set(case.expected_outputs) == allowed

    def test_bound_truncates_with_warning(self, spec_s, impl_r):
        verdict = verify_ioco(spec_s, impl_r, bound=2)
        assert [c.fault_word for c in verdict.test_cases] == [("b", "x")]
        assert any("bound" in w for w in verdict.warnings)
        zero = verify_ioco(spec_s, impl_r, bound=0)
        assert zero.test_cases == ()
        assert zero.warnings

    def test_negative_bound_rejected(self, spec_s, impl_r):
        with pytest.raises(ConformanceError):
            verify_ioco(spec_s, impl_r, bound=-1)

    def test_requires_iolts(self, spec_s):
        lts = parse_aldebaran(
            "des (p0, 1, 1)\n(p0, go, p0)\n", LabelingConfig(model_kind="lts")
        )
        with pytest.raises(ConformanceError, match="iolts"):
            verify_ioco(spec_s, lts)

    def test_requires_same_alphabet(self, spec_s):
        other = parse_aldebaran(
            "des (p0, 1, 1)\n(p0, ?z, p0)\n", LabelingConfig()
        )
        with pytest.raises(ConformanceError, match="disagree"):
            verify_ioco(spec_s, other)

    def test_product_sizes_recorded_and_bounded(self, spec_s, impl_r):
        stats = verify_ioco(spec_s, impl_r).stats
        assert {p["name"] for p in stats["products"]} == {"faultModel", "verdict"}
        for product in stats["products"]:
            assert product["result"] <= (product["left"] + 1) * (product["right"] + 1)


class TestVerifyLanguage:
    def test_desirable_scenario(self, spec_s, impl_q):
        pattern = parse_regex("(a|b)*ax", canonical_alphabet(spec_s.inputs, spec_s.outputs))
        verdict = verify_language(spec_s, impl_q, desirable=pattern)
        assert not verdict.conforms
        assert [c.fault_word for c in verdict.test_cases] == LANG_SUITE_Q
        first = verdict.test_cases[0]
        assert first.stimulus_prefix == first.fault_word
        assert first.observed_output is None
        assert first.expected_outputs == ()
        assert first.spec_path == ("s0", "s1", "s2")  # walk stops where S diverges
        assert first.iut_path == ("q0", "q1", "q2", "q3", "q0", "q1", "q2")

    def test_fault_product_contains_published_final_state(self, spec_s, impl_q):
        pattern = parse_regex("(a|b)*ax", canonical_alphabet(spec_s.inputs, spec_s.outputs))
        fm = fault_model_language(spec_s, pattern)
        product = intersection(fm.automaton, determinize(induced_fsa(impl_q)))
        assert "cd2q2" in product.states
        assert "cd2q2" in product.finals

    def test_blank_desirable_means_every_word(self, spec_s, impl_r):
        verdict = verify_language(spec_s, impl_r)
        assert not verdict.conforms
        assert verdict.test_cases[0].fault_word == ("b", "x")

    def test_self_check_with_defaults(self, spec_s, impl_r, impl_q):
        for ts in (spec_s, impl_r, impl_q):
            assert verify_language(ts, ts).conforms

    def test_undesirable_trace_fails(self, spec_s):
        alphabet = canonical_alphabet(spec_s.inputs, spec_s.outputs)
        verdict = verify_language(
            spec_s,
            spec_s,
            desirable=EmptyLanguage(),
            undesirable=parse_regex("ax", alphabet),
        )
        assert not verdict.conforms
        assert [c.fault_word for c in verdict.test_cases] == [("a", "x")]

    def test_union_of_both_fault_kinds(self, spec_s, impl_r):
        alphabet = canonical_alphabet(spec_s.inputs, spec_s.outputs)
        verdict = verify_language(
            spec_s,
            impl_r,
            desirable=parse_regex("(a|b)*ax", alphabet),
            undesirable=parse_regex("ab", alphabet),
        )
        assert not verdict.conforms
        words = [c.fault_word for c in verdict.test_cases]
        assert ("a", "b") in words  # undesirable trace R shares with S
        assert ("b", "a", "x") in words  # desirable word S lacks but R shows
        union_products = [p for p in verdict.stats["products"] if p["name"] == "faultModelUnion"]
        assert len(union_products) == 1

    def test_fault_model_language_formula(self, spec_s):
        alphabet = canonical_alphabet(spec_s.inputs, spec_s.outputs)
        d = parse_regex("(a|b)*ax", alphabet)
        f = parse_regex("ab|bb", alphabet)
        fault = fault_model_language(spec_s, d, f).automaton
        for word in all_words(alphabet, 5):
            expected = (match_regex(d, word) and not is_trace(spec_s, word)) or (
                match_regex(f, word) and is_trace(spec_s, word)
            )
            assert accepts(fault, word) == expected, word

    def test_kind_mismatch_rejected(self, spec_s):
        lts = parse_aldebaran(
            "des (p0, 1, 1)\n(p0, go, p0)\n", LabelingConfig(model_kind="lts")
        )
        with pytest.raises(ConformanceError, match="kinds differ"):
            verify_language(spec_s, lts)

    def test_lts_models_supported(self):
        config = LabelingConfig(model_kind="lts")
        spec = parse_aldebaran(
            "des (p0, 2, 2)\n(p0, go, p1)\n(p1, stop, p0)\n", config
        )
        iut = parse_aldebaran(
            "des (p0, 2, 2)\n(p0, go, p1)\n(p1, go, p1)\n",
            LabelingConfig(model_kind="lts", inputs=frozenset({"go", "stop"}), use_markers=False),
        )
        verdict = verify_language(spec, iut)
        assert not verdict.conforms
        assert verdict.test_cases[0].fault_word == ("go", "go")


class TestOracles:
    def test_oracle_ioco_known_values(self, spec_s, impl_r, impl_q):
        assert oracle_ioco(spec_s, impl_r, 0)
        assert not oracle_ioco(spec_s, impl_r, 1)
        assert not oracle_ioco(spec_s, impl_r, 4)
        assert oracle_ioco(spec_s, impl_q, 12)
        assert oracle_ioco(spec_s, spec_s, 8)

    def test_oracle_language_depth_sensitivity(self, spec_s, impl_q):
        pattern = parse_regex("(a|b)*ax", canonical_alphabet(spec_s.inputs, spec_s.outputs))
        assert oracle_language(spec_s, impl_q, pattern, None, 5)
        assert not oracle_language(spec_s, impl_q, pattern, None, 6)

    def test_oracle_language_undesirable(self, spec_s):
        alphabet = canonical_alphabet(spec_s.inputs, spec_s.outputs)
        assert not oracle_language(
            spec_s, spec_s, EmptyLanguage(), parse_regex("ax", alphabet), 4
        )
        assert oracle_language(spec_s, spec_s, None, None, 6)

    def test_oracles_agree_with_pipeline_on_scenarios(self, spec_s, impl_r, impl_q):
        assert oracle_ioco(spec_s, impl_r, 8) == verify_ioco(spec_s, impl_r).conforms
        assert oracle_ioco(spec_s, impl_q, 8) == verify_ioco(spec_s, impl_q).conforms


def test_extraction_caps_dense_products():
    from confkit.conformance import extract_test_suite

    n = 7
    symbols = tuple(chr(ord("a") + i) for i in range(n))
    states = tuple(f"k{i}" for i in range(n))
    transitions = [(s, symbols[j], states[j]) for s in states for j in range(n)]
    from confkit import Fsa

    dense = Fsa(states, states[0], symbols, transitions, frozenset(states))
    walkable = TransitionSystem(
        "lts", states, states[0], frozenset(symbols), frozenset(), frozenset(),
        transitions,
    )
    silent = TransitionSystem(
        "lts", ("z",), "z", frozenset(symbols), frozenset(), frozenset(), []
    )
    cases, _, warnings = extract_test_suite(
        dense, silent, walkable, "language", max_cases=10
    )
    assert cases
    assert any("truncated" in w for w in warnings)

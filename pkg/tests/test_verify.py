"""Exhaustive labeling, core detection, and certificate checking."""
from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from satforge import (
    BRUTE_FORCE_CAP,
    SAT,
    UNSAT,
    Assignment,
    Clause,
    CnfFormula,
    GeneratedInstance,
    brute_force_label,
    build_core,
    default_3sat_profile,
    detect_core,
    evaluate_formula,
    generate_sat,
    generate_unsat,
    verify_witness,
)
from util import (
    SAT_FORMULA,
    SAT_SLACKS,
    SAT_WITNESS,
    UNSAT_FORMULA,
    UNSAT_WITNESS,
    enumerate_label,
    random_formula,
)


def sat_instance(**overrides) -> GeneratedInstance:
    fields = dict(
        formula=SAT_FORMULA,
        label=SAT,
        witness=SAT_WITNESS,
        planted_slacks=SAT_SLACKS,
        core_indices=(),
        seed=0,
    )
    fields.update(overrides)
    return GeneratedInstance(**fields)


def unsat_instance(**overrides) -> GeneratedInstance:
    fields = dict(
        formula=UNSAT_FORMULA,
        label=UNSAT,
        witness=UNSAT_WITNESS,
        planted_slacks=(0,),
        core_indices=(0, 1, 2, 3),
        seed=0,
    )
    fields.update(overrides)
    return GeneratedInstance(**fields)


class TestBruteForceLabel:
    def test_worked_examples(self):
        label, witness = brute_force_label(SAT_FORMULA)
        assert label == SAT
        assert evaluate_formula(SAT_FORMULA, witness)[0]
        assert brute_force_label(UNSAT_FORMULA) == (UNSAT, None)

    def test_agrees_with_enumeration_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(150):
            f = random_formula(rng, max_n=10, max_m=14)
            expected, _ = enumerate_label(f)
            label, witness = brute_force_label(f)
            assert label == expected
            if label == SAT:
                assert evaluate_formula(f, witness)[0]
            else:
                assert witness is None

    def test_empty_formula_is_sat(self):
        assert brute_force_label(CnfFormula(3, ())) == (SAT, Assignment((0, 0, 0)))

    def test_cap_enforced(self):
        f = CnfFormula(BRUTE_FORCE_CAP + 1, (Clause((1,)),))
        with pytest.raises(ValueError, match="cap"):
            brute_force_label(f)
        with pytest.raises(ValueError, match="cap"):
            brute_force_label(CnfFormula(6, (Clause((1,)),)), cap=5)

    def test_labels_generated_instances(self):
        p = default_3sat_profile()
        for seed in range(20):
            sat = generate_sat(11, 47, p, seed=seed)
            assert brute_force_label(sat.formula)[0] == SAT
            unsat = generate_unsat(11, 47, p, seed=seed)
            assert brute_force_label(unsat.formula)[0] == UNSAT


class TestDetectCore:
    def test_worked_example(self):
        info = detect_core(UNSAT_FORMULA)
        assert info is not None
        assert info.width == 2
        assert info.variables == (1, 2)
        assert info.clause_indices == (0, 1, 2, 3)

    def test_no_core_in_sat_formula(self):
        assert detect_core(SAT_FORMULA) is None

    def test_incomplete_enumeration(self):
        f = CnfFormula(2, (Clause((1, 2)), Clause((1, -2)), Clause((-1, 2))))
        assert detect_core(f) is None

    def test_width_cap_skips_wide_cores(self):
        f = CnfFormula(3, build_core((1, 2, 3)))
        assert detect_core(f) is not None
        assert detect_core(f, w_max=2) is None

    def test_first_occurrence_of_each_pattern_wins(self):
        f = CnfFormula(
            2,
            (
                Clause((1, 2)),
                Clause((1, 2)),
                Clause((1, -2)),
                Clause((-1, 2)),
                Clause((-1, -2)),
            ),
        )
        info = detect_core(f)
        assert info.clause_indices == (0, 2, 3, 4)

    def test_finds_shuffled_planted_core(self):
        inst = generate_unsat(
            18, 77, default_3sat_profile(), seed=8, exclude_core_vars=True
        )
        info = detect_core(inst.formula)
        assert info is not None
        assert info.width == 3
        assert info.clause_indices == inst.core_indices


class TestVerifyWitnessSat:
    def test_ok(self):
        report = verify_witness(sat_instance())
        assert report.ok and report.failures == () and report.label == SAT

    def test_slack_mismatch_names_clause(self):
        report = verify_witness(sat_instance(planted_slacks=(0, 0)))
        assert not report.ok
        assert any("clause 0" in f and "induced slack 1" in f for f in report.failures)

    def test_violated_clause_reported(self):
        report = verify_witness(sat_instance(witness=Assignment((0, 1, 1))))
        assert not report.ok
        assert any("violated by witness" in f for f in report.failures)

    def test_core_indices_forbidden(self):
        report = verify_witness(sat_instance(core_indices=(0,)))
        assert not report.ok
        assert any("core indices" in f for f in report.failures)

    def test_witness_length_checked(self):
        report = verify_witness(sat_instance(witness=Assignment((1, 0))))
        assert not report.ok
        assert any("witness length" in f for f in report.failures)

    def test_slack_count_checked(self):
        report = verify_witness(sat_instance(planted_slacks=(1,)))
        assert not report.ok
        assert any("planted slacks" in f for f in report.failures)

    def test_unknown_label(self):
        report = verify_witness(sat_instance(label="FOO"))
        assert not report.ok
        assert any("unknown label" in f for f in report.failures)


class TestVerifyWitnessUnsat:
    def test_ok(self):
        report = verify_witness(unsat_instance())
        assert report.ok and report.failures == ()

    def test_missing_core(self):
        report = verify_witness(unsat_instance(core_indices=()))
        assert any("no core indices" in f for f in report.failures)

    def test_core_size_not_power_of_two(self):
        report = verify_witness(unsat_instance(core_indices=(0, 1, 2)))
        assert any("power of two" in f for f in report.failures)

    def test_core_indices_out_of_range(self):
        report = verify_witness(unsat_instance(core_indices=(0, 1, 2, 5)))
        assert any("distinct clause positions" in f for f in report.failures)

    def test_core_spanning_two_variable_sets(self):
        report = verify_witness(unsat_instance(core_indices=(0, 1, 2, 4)))
        assert any("one variable set" in f for f in report.failures)

    def test_core_with_repeated_pattern(self):
        f = CnfFormula(
            4,
            (
                Clause((1, 2)),
                Clause((1, 2)),
                Clause((1, -2)),
                Clause((-1, 2)),
                Clause((3, 4)),
            ),
        )
        report = verify_witness(
            unsat_instance(formula=f, core_indices=(0, 1, 2, 3))
        )
        assert not report.ok
        assert any("polarity patterns" in f_ for f_ in report.failures)

    def test_witness_violating_filler_too(self):
        report = verify_witness(unsat_instance(witness=Assignment((0, 1, 0, 0))))
        assert not report.ok
        assert any("expected exactly 1" in f for f in report.failures)

    def test_filler_slack_mismatch(self):
        report = verify_witness(unsat_instance(witness=Assignment((0, 1, 1, 1))))
        assert not report.ok
        assert any("induced slack 1 != planted 0" in f for f in report.failures)

    def test_planted_slack_count_checked(self):
        report = verify_witness(unsat_instance(planted_slacks=()))
        assert not report.ok
        assert any("filler clauses" in f for f in report.failures)


class TestVerifyGenerated:
    def test_generated_instances_pass(self):
        p = default_3sat_profile()
        for seed in range(25):
            assert verify_witness(generate_sat(20, 85, p, seed=seed)).ok
            assert verify_witness(generate_unsat(20, 85, p, seed=seed)).ok

    def test_tampering_is_detected(self):
        p = default_3sat_profile()
        inst = generate_sat(15, 64, p, seed=40)
        first = inst.formula.clauses[0]
        flipped = Clause((-first.lits[0],) + first.lits[1:])
        tampered = dataclasses.replace(
            inst, formula=CnfFormula(15, (flipped,) + inst.formula.clauses[1:])
        )
        assert not verify_witness(tampered).ok

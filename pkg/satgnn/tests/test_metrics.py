"""Exact clause-evaluation metrics, independent of the model."""

import math

import numpy as np
import pytest
from util import record_from_clauses, single_clause_record

from satgnn import (
    SAT,
    UNSAT,
    evaluate,
    graph_from_record,
    satisfied_fraction,
    satisfied_mask,
)


class TestSatisfiedMask:
    def test_single_clause(self):
        graph = graph_from_record(single_clause_record())
        assert satisfied_mask(graph, np.array([0, 0])).tolist() == [False]
        assert satisfied_mask(graph, np.array([1, 0])).tolist() == [True]
        assert satisfied_mask(graph, np.array([0, 1])).tolist() == [True]
        assert satisfied_mask(graph, np.array([1, 1])).tolist() == [True]

    def test_worked_formula_over_all_assignments(self):
        """(x1 v ~x2 v ~x3) and (x3 v x2): truth decided literal by literal."""
        record = record_from_clauses(3, [[1, -2, -3], [3, 2]], SAT, witness="101")
        graph = graph_from_record(record)
        for bits in range(8):
            x = np.array([(bits >> k) & 1 for k in range(3)], dtype=np.int64)
            expected = [
                x[0] == 1 or x[1] == 0 or x[2] == 0,
                x[2] == 1 or x[1] == 1,
            ]
            assert satisfied_mask(graph, x).tolist() == expected

    def test_witness_satisfies_every_sat_clause(self, tiny_graphs):
        for graph in tiny_graphs:
            if graph.label == 1:
                assert satisfied_fraction(graph, graph.witness) == 1.0

    def test_unsat_witness_violates_exactly_one_clause(self, tiny_graphs):
        for graph in tiny_graphs:
            if graph.label == 0:
                violated = graph.m - int(satisfied_mask(graph, graph.witness).sum())
                assert violated == 1

    def test_random_assignment_sits_at_the_width3_floor(self, tiny_graphs):
        """A uniformly random assignment satisfies a width-3 clause with
        probability 7/8; pooled over thousands of clauses the mean lands
        tightly on the floor."""
        rng = np.random.default_rng(123)
        satisfied = total = 0
        for graph in tiny_graphs:
            for _ in range(20):
                x = rng.integers(0, 2, size=graph.n)
                satisfied += int(satisfied_mask(graph, x).sum())
                total += graph.m
        assert total > 20_000
        assert abs(satisfied / total - 7 / 8) < 0.02

    def test_wrong_assignment_shape_rejected(self):
        graph = graph_from_record(single_clause_record())
        with pytest.raises(ValueError, match="shape"):
            satisfied_mask(graph, np.zeros(3, dtype=np.int64))


class _Stub:
    """Predictor returning a fixed probability and each graph's witness."""

    def __init__(self, probability: float, use_witness: bool = True):
        self.probability = probability
        self.use_witness = use_witness

    def predict(self, graph):
        if self.use_witness:
            return self.probability, graph.witness
        return self.probability, np.zeros(graph.n, dtype=np.uint8)


class TestEvaluate:
    def test_always_sat_stub(self, tiny_graphs):
        scores = evaluate(_Stub(0.9), tiny_graphs)
        assert scores.n_sat == scores.n_unsat == 12
        assert scores.accuracy == 0.5  # every instance called SAT
        assert scores.csr == 1.0  # witness satisfies everything on SAT
        expected_km = np.mean([1 / g.m for g in tiny_graphs if g.label == 0])
        assert math.isclose(scores.k_over_m, expected_km)

    def test_always_unsat_stub(self, tiny_graphs):
        scores = evaluate(_Stub(0.1), tiny_graphs)
        assert scores.accuracy == 0.5

    def test_csr_nan_without_sat_instances(self, tiny_graphs):
        unsat_only = [g for g in tiny_graphs if g.label == 0]
        scores = evaluate(_Stub(0.1), unsat_only)
        assert math.isnan(scores.csr)
        assert scores.accuracy == 1.0

    def test_k_over_m_nan_without_unsat_instances(self, tiny_graphs):
        sat_only = [g for g in tiny_graphs if g.label == 1]
        scores = evaluate(_Stub(0.9), sat_only)
        assert math.isnan(scores.k_over_m)
        assert scores.csr == 1.0

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError, match="no graphs"):
            evaluate(_Stub(0.5), [])

    def test_all_zeros_assignment_changes_csr(self, tiny_graphs):
        scores = evaluate(_Stub(0.9, use_witness=False), tiny_graphs)
        assert scores.csr < 1.0


def test_unsat_record_without_witness_loads():
    record = record_from_clauses(2, [[1], [-1], [2], [-2]], UNSAT)
    graph = graph_from_record(record)
    assert graph.witness is None
    assert satisfied_fraction(graph, np.array([1, 0])) == 0.5

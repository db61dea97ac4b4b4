"""Record readers and tensor construction."""

import json

import numpy as np
import pytest
import torch
from util import single_clause_record, write_record_json

from satgnn import (
    SAT,
    UNSAT,
    graph_from_record,
    load_dataset,
    load_manifest,
    read_graph_binary,
    read_graph_file,
    read_graph_json,
)


class TestReaders:
    def test_binary_equals_json_on_every_instance(self, tiny_dir, tiny_json_dir):
        json_files = sorted(tiny_json_dir.glob("*.graph.json"))
        assert len(json_files) == 24
        for json_path in json_files:
            bin_path = tiny_dir / json_path.name.replace(".json", ".bin")
            assert read_graph_binary(bin_path) == read_graph_json(json_path)

    def test_both_labels_and_witness_presence(self, tiny_json_dir):
        sat = read_graph_json(tiny_json_dir / "sat_00000.graph.json")
        unsat = read_graph_json(tiny_json_dir / "unsat_00012.graph.json")
        assert sat["label"] == SAT and "witness" in sat
        assert unsat["label"] == UNSAT and "witness" not in unsat

    def test_dispatch_on_extension(self, tiny_dir, tiny_json_dir):
        assert read_graph_file(tiny_dir / "sat_00000.graph.bin") == read_graph_file(
            tiny_json_dir / "sat_00000.graph.json"
        )

    def test_bad_magic_rejected(self, tiny_dir, tmp_path):
        data = (tiny_dir / "sat_00000.graph.bin").read_bytes()
        broken = tmp_path / "broken.bin"
        broken.write_bytes(b"XXGRAPH\x00" + data[8:])
        with pytest.raises(ValueError, match="magic"):
            read_graph_binary(broken)

    def test_bad_version_rejected(self, tiny_dir, tmp_path):
        data = bytearray((tiny_dir / "sat_00000.graph.bin").read_bytes())
        data[8:12] = (99).to_bytes(4, "little")
        broken = tmp_path / "versioned.bin"
        broken.write_bytes(bytes(data))
        with pytest.raises(ValueError, match="version"):
            read_graph_binary(broken)

    def test_trailing_bytes_rejected(self, tiny_dir, tmp_path):
        data = (tiny_dir / "sat_00000.graph.bin").read_bytes()
        padded = tmp_path / "padded.bin"
        padded.write_bytes(data + b"\x00")
        with pytest.raises(ValueError, match="trailing"):
            read_graph_binary(padded)

    def test_foreign_json_rejected(self, tmp_path):
        record = single_clause_record()
        record["format"] = "something-else"
        path = write_record_json(record, tmp_path / "foreign.graph.json")
        with pytest.raises(ValueError, match="not a"):
            read_graph_json(path)

    def test_unsupported_json_version_rejected(self, tmp_path):
        record = single_clause_record()
        record["version"] = 99
        path = write_record_json(record, tmp_path / "versioned.graph.json")
        with pytest.raises(ValueError, match="version"):
            read_graph_json(path)


class TestGraphFromRecord:
    def test_single_clause_worked_example(self):
        graph = graph_from_record(single_clause_record())
        assert (graph.n, graph.m) == (2, 1)
        assert graph.num_nodes == 3
        assert graph.num_edges == 2
        assert graph.label == 1
        dense = graph.a_hat.to_dense()
        assert torch.equal(dense, torch.tensor([[1.0, 1.0, -1.0]]))
        assert torch.equal(graph.b, torch.tensor([1.0]))
        assert torch.equal(graph.node_type, torch.tensor([0, 0, 1]))
        assert np.array_equal(graph.witness, [1, 1])
        # undirected var-slack edges, both directions, coefficient +1
        pairs = set(zip(graph.edge_src.tolist(), graph.edge_dst.tolist()))
        assert pairs == {(0, 2), (1, 2), (2, 0), (2, 1)}
        assert torch.equal(graph.edge_attr, torch.ones(4, 1))

    def test_transpose_matches(self):
        graph = graph_from_record(single_clause_record())
        assert torch.equal(graph.a_hat_t.to_dense(), graph.a_hat.to_dense().t())

    def test_loaded_graph_invariants(self, tiny_graphs):
        for graph in tiny_graphs:
            assert graph.a_hat.shape == (graph.m, graph.n + graph.m)
            assert graph.num_edges == int(graph.widths.sum())
            assert graph.edge_src.shape == graph.edge_dst.shape
            assert graph.edge_attr.shape == (2 * graph.num_edges, 1)
            # the slack block is exactly -I
            slack = graph.cols >= graph.n
            assert np.array_equal(
                graph.cols[slack], graph.n + np.arange(graph.m)
            )
            assert (graph.vals[slack] == -1).all()
            assert np.array_equal(np.sort(graph.rows[slack]), np.arange(graph.m))

    def test_var_features_match_occurrences(self, tiny_graphs):
        for graph in tiny_graphs:
            var_part = graph.cols < graph.n
            pos = np.bincount(
                graph.cols[var_part][graph.vals[var_part] == 1], minlength=graph.n
            )
            neg = np.bincount(
                graph.cols[var_part][graph.vals[var_part] == -1], minlength=graph.n
            )
            expected = np.stack([pos + neg, pos, neg], axis=1)
            assert np.array_equal(graph.var_features.numpy().astype(np.int64), expected)

    def test_dtype_control(self):
        graph = graph_from_record(single_clause_record(), dtype=torch.float64)
        assert graph.var_features.dtype == torch.float64
        assert graph.a_hat.dtype == torch.float64
        assert graph.edge_attr.dtype == torch.float64

    def test_witness_argument_must_agree_with_record(self):
        with pytest.raises(ValueError, match="disagrees"):
            graph_from_record(single_clause_record(), witness="01")

    def test_witness_length_checked(self):
        record = single_clause_record()
        del record["witness"]
        with pytest.raises(ValueError, match="bits"):
            graph_from_record(record, witness="1")

    def test_inconsistent_literal_count_rejected(self):
        record = single_clause_record()
        record["widths"] = [3]
        with pytest.raises(ValueError, match="literal count"):
            graph_from_record(record)


class TestLoadDataset:
    def test_pairs_manifest_with_graph_files(self, tiny_dir):
        graphs = load_dataset(tiny_dir)
        manifest = load_manifest(tiny_dir / "manifest.jsonl")
        assert len(graphs) == len(manifest) == 24
        for graph, row in zip(graphs, manifest):
            assert graph.label == (1 if row["label"] == SAT else 0)
            assert graph.n == row["n"] and graph.m == row["m"]

    def test_unsat_graphs_carry_manifest_witness(self, tiny_graphs):
        unsat = [g for g in tiny_graphs if g.label == 0]
        assert len(unsat) == 12
        for graph in unsat:
            assert graph.witness is not None
            assert graph.witness.shape == (graph.n,)

    def test_accepts_manifest_path_or_directory(self, tiny_dir):
        by_dir = load_dataset(tiny_dir)
        by_file = load_dataset(tiny_dir / "manifest.jsonl")
        assert len(by_dir) == len(by_file)
        assert all(
            np.array_equal(a.cols, b.cols) for a, b in zip(by_dir, by_file)
        )

    def test_missing_graph_file_reported(self, tiny_dir, tmp_path):
        manifest = tmp_path / "manifest.jsonl"
        manifest.write_text((tiny_dir / "manifest.jsonl").read_text())
        with pytest.raises(FileNotFoundError, match="no graph record"):
            load_dataset(manifest)

    def test_label_mismatch_detected(self, tiny_dir, tmp_path):
        rows = load_manifest(tiny_dir / "manifest.jsonl")
        rows[0]["label"] = UNSAT  # first instance is SAT
        manifest = tmp_path / "manifest.jsonl"
        manifest.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        with pytest.raises(ValueError, match="label"):
            load_dataset(manifest, graph_dir=tiny_dir)

    def test_empty_manifest_rejected(self, tmp_path):
        manifest = tmp_path / "manifest.jsonl"
        manifest.write_text("")
        with pytest.raises(ValueError, match="empty"):
            load_dataset(manifest)

import json

import numpy as np
import pytest

from smartfan.datafiles import (
    REFERENCE_ANCHOR_ROWS,
    REFERENCE_RECALL_RATE,
    WEIGHTS_ENCODING,
    WEIGHTS_FORMAT_VERSION,
    append_training_csv,
    data_dir,
    load_reference_matrix,
    load_table1,
    load_table2,
    read_training_csv,
    read_weights_json,
    write_training_csv,
    write_weights_json,
)
from smartfan.encoding import SensorReading
from smartfan.memory import TrainingPair, recall_rate, train_batch


class TestBundledData:
    def test_data_dir_exists(self):
        d = data_dir()
        assert (d / "table1.csv").is_file()
        assert (d / "table2.csv").is_file()
        assert (d / "reference_weights.json").is_file()

    def test_table_sizes(self, table1, table2):
        assert len(table1) == 48
        assert len(table2) == 3

    def test_table1_covers_all_speeds(self, table1):
        assert {p.speed for p in table1} == set(range(6))
        assert {p.reading.humidity_pct for p in table1} == {85}

    def test_table2_rows(self, table2):
        assert [(p.reading.as_tuple(), p.speed) for p in table2] == [
            ((30, 20, 85), 4),
            ((30, 40, 85), 3),
            ((30, 60, 85), 2),
        ]

    def test_reference_matrix_is_trained_table1(self, table1, reference_matrix):
        assert np.array_equal(reference_matrix, train_batch(table1))

    def test_reference_anchor_rows(self, reference_matrix):
        for idx, row in REFERENCE_ANCHOR_ROWS.items():
            assert tuple(reference_matrix[idx].tolist()) == row

    def test_reference_recall_rate_is_frozen(self, table1, reference_matrix):
        assert recall_rate(reference_matrix, table1) == REFERENCE_RECALL_RATE
        assert REFERENCE_RECALL_RATE == 0.75


class TestTrainingCsv:
    def pairs(self):
        return [
            TrainingPair(SensorReading(30, 20, 85), 4),
            TrainingPair(SensorReading(17, 60, 85), 0),
        ]

    def test_round_trip(self, tmp_path):
        path = tmp_path / "pairs.csv"
        write_training_csv(path, self.pairs())
        assert read_training_csv(path) == self.pairs()

    def test_append_creates_then_extends(self, tmp_path):
        path = tmp_path / "log.csv"
        append_training_csv(path, self.pairs()[:1])
        append_training_csv(path, self.pairs()[1:])
        assert read_training_csv(path) == self.pairs()
        # header written exactly once
        assert path.read_text().count("temperature_c") == 1

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="empty"):
            read_training_csv(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("a,b,c,d\n30,20,85,4\n")
        with pytest.raises(ValueError, match="line 1"):
            read_training_csv(path)

    def test_bad_cell_carries_line_number(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("temperature_c,duration_min,humidity_pct,speed\n"
                        "30,20,85,4\n30,twenty,85,4\n")
        with pytest.raises(ValueError, match="line 3"):
            read_training_csv(path)

    def test_out_of_range_value_carries_line_number(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("temperature_c,duration_min,humidity_pct,speed\n"
                        "200,20,85,4\n")
        with pytest.raises(ValueError, match="line 2"):
            read_training_csv(path)

    def test_header_only_gives_no_pairs(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("temperature_c,duration_min,humidity_pct,speed\n")
        assert read_training_csv(path) == []


class TestWeightsJson:
    def test_round_trip(self, tmp_path, reference_matrix):
        path = tmp_path / "w.json"
        write_weights_json(path, reference_matrix)
        assert np.array_equal(read_weights_json(path), reference_matrix)

    def test_document_shape(self, tmp_path, reference_matrix):
        path = tmp_path / "w.json"
        write_weights_json(path, reference_matrix)
        doc = json.loads(path.read_text())
        assert doc["rows"] == 21
        assert doc["cols"] == 6
        assert doc["encoding"] == WEIGHTS_ENCODING
        assert doc["version"] == WEIGHTS_FORMAT_VERSION
        assert len(doc["data"]) == 21
        assert all(len(row) == 6 for row in doc["data"])

    @pytest.mark.parametrize("mutate, message", [
        (lambda d: d.pop("encoding"), "missing key"),
        (lambda d: d.update(encoding="msb7"), "not supported"),
        (lambda d: d.update(version=99), "version"),
        (lambda d: d.update(rows=22), "shape"),
        (lambda d: d["data"].pop(), "shape"),
    ])
    def test_rejects_malformed_documents(self, tmp_path, reference_matrix, mutate, message):
        path = tmp_path / "w.json"
        write_weights_json(path, reference_matrix)
        doc = json.loads(path.read_text())
        mutate(doc)
        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match=message):
            read_weights_json(path)

    def test_loaders_accept_alternate_root(self, tmp_path, table1, reference_matrix):
        write_training_csv(tmp_path / "table1.csv", table1)
        write_training_csv(tmp_path / "table2.csv", [])
        write_weights_json(tmp_path / "reference_weights.json", reference_matrix)
        assert load_table1(tmp_path) == table1
        assert load_table2(tmp_path) == []
        assert np.array_equal(load_reference_matrix(tmp_path), reference_matrix)

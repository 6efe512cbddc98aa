"""Pair-class enumeration tests.

Oracles: the n=4 sweep under the 2x2 transpose has exactly five
nontrivial classes with multiplicities (4, 2, 2, 2, 2) and closed-form
probabilities for the representatives {3,6} (1/sqrt(2)) and {6,15}
((9 + 2 sqrt(3) pi)/24); the n=6 sweep under 3x2 has a 48-member class
of inscribed-disk sections with probability pi/4.
"""

import json

import numpy as np
import pytest

from bloch_atlas import enumeration
from bloch_atlas.enumeration import ClassTable, PairClass
from bloch_atlas.errors import BlochAtlasError


@pytest.fixture(scope="module")
def table4():
    return enumeration.enumerate_classes(4, "2x2")


class TestSweepN4:
    def test_counts(self, table4):
        assert table4.total_pairs == 105
        assert table4.trivial_count == 93
        assert sum(c.members for c in table4.classes) == 12
        assert len(table4.classes) == 5

    def test_class_sizes_and_representatives(self, table4):
        assert [c.members for c in table4.classes] == [4, 2, 2, 2, 2]
        assert [c.representative for c in table4.classes] == [
            (3, 6), (6, 8), (6, 15), (8, 9), (9, 15)]

    def test_probabilities(self, table4):
        got = {c.representative: c.probability for c in table4.classes}
        assert got[(3, 6)] == pytest.approx(1 / np.sqrt(2), abs=1e-7)
        assert got[(6, 15)] == pytest.approx(
            (9 + 2 * np.sqrt(3) * np.pi) / 24, abs=1e-7)
        assert got[(6, 8)] == pytest.approx(0.825312, abs=1e-6)
        assert got[(8, 9)] == pytest.approx(0.842035, abs=1e-6)
        assert got[(9, 15)] == pytest.approx(0.608998, abs=1e-6)

    def test_signatures_match_probability(self, table4):
        for c in table4.classes:
            total, joint = c.signature
            assert c.probability == joint / total
            assert 0.0 < c.probability < 1.0

    def test_parallel_sweep_identical(self, table4):
        assert enumeration.enumerate_classes(4, "2x2", parallel=2) == table4


class TestSweepN6:
    def test_disk_class(self):
        table = enumeration.enumerate_classes(6, "3x2")
        assert table.total_pairs == 595
        match = [c for c in table.classes
                 if c.probability == pytest.approx(np.pi / 4, abs=1e-6)]
        assert len(match) == 1
        assert match[0].members == 48
        assert match[0].representative == (1, 13)


class TestSignature:
    def test_order_invariant(self):
        a = enumeration._coarse_worker((4, (3, 6), ("2x2",), 1e-5))
        b = enumeration._coarse_worker((4, (6, 3), ("2x2",), 1e-5))
        assert a == b


class TestValidation:
    def test_split_and_retry_succeeds(self, monkeypatch):
        fine = {(1, 2): (0.5, 0.3), (1, 3): (0.500005, 0.3)}
        monkeypatch.setattr(enumeration, "_fine_signature",
                            lambda n, pair, maps, rtol: fine[pair])
        group = [((0.5, 0.3), (1, 2)), ((0.500005, 0.3), (1, 3))]
        classes = enumeration._validated(4, (), group, 1e-5, 1e-8)
        assert sorted(c.representative for c in classes) == [(1, 2), (1, 3)]
        assert all(c.members == 1 for c in classes)

    def test_persistent_disagreement_is_hard_error(self, monkeypatch):
        fine = {(1, 2): (0.5, 0.3), (1, 3): (0.5 + 8e-7, 0.3),
                (1, 4): (0.5 + 1.6e-6, 0.3)}
        monkeypatch.setattr(enumeration, "_fine_signature",
                            lambda n, pair, maps, rtol: fine[pair])
        group = [(fine[p], p) for p in fine]
        with pytest.raises(BlochAtlasError, match="split-and-retry"):
            enumeration._validated(4, (), group, 1e-5, 1e-8)

    def test_table_accounting_enforced(self):
        cls = PairClass(representative=(3, 6), members=4,
                        signature=(0.9, 0.6), probability=0.7)
        with pytest.raises(BlochAtlasError, match="accounts for"):
            ClassTable(n=4, conditions=(), classes=(cls,),
                       trivial_count=3, total_pairs=105)


class TestSerialization:
    def test_json_shape(self, table4):
        record = json.loads(table4.to_json())
        assert list(record.keys()) == [
            "n", "conditions", "classes", "trivial_count", "total_pairs"]
        assert record["conditions"] == ["2x2"]
        first = record["classes"][0]
        assert first["representative"] == [3, 6]
        assert first["members"] == 4

    def test_csv_rows(self, table4):
        rows = table4.csv_rows()
        assert len(rows) == 5
        assert all(len(r) == len(enumeration.CSV_COLUMNS) for r in rows)
        assert rows[0][:4] == (4, "2x2", "3+6", 4)
        assert float(rows[0][6]) == pytest.approx(1 / np.sqrt(2), abs=1e-7)

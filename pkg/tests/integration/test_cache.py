"""
Integration tests for the classification result cache.
"""
import json

import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent.parent))

from permpoly import field_core as fc
from permpoly.classify import classify_normalized
from permpoly.models import ClassificationResult
from permpoly.ortho import classify_orthomorphisms
from permpoly.validation import CacheError
from services.cache import (
    cache_dir,
    cache_filename,
    cached_classification,
    clear_cache,
    list_entries,
    load_result,
    read_result,
    save_result,
)


@pytest.fixture
def f7():
    return fc.make_field(7)


class Counter:
    """Compute callback that records how often it ran."""

    def __init__(self, compute):
        self.compute = compute
        self.calls = 0

    def __call__(self):
        self.calls += 1
        return self.compute()


def test_filename(f7):
    assert cache_filename(f7, 4, "normalized") == "class_p7r1_d4_normalized.json"
    assert cache_filename(fc.make_field(3, 2), 6, "ortho-all") == "class_p3r2_d6_ortho-all.json"


def test_cache_dir_from_settings(tmp_path):
    assert cache_dir({"cache": {"dir": str(tmp_path)}}) == tmp_path


def test_round_trip(tmp_path, f7):
    compute = Counter(lambda: classify_normalized(f7, 4, jobs=1))
    first = cached_classification(f7, 4, "normalized", compute, directory=tmp_path)
    second = cached_classification(f7, 4, "normalized", compute, directory=tmp_path)
    assert compute.calls == 1
    assert (tmp_path / "class_p7r1_d4_normalized.json").exists()
    assert second.polynomials == first.polynomials
    assert second.field == f7


def test_ortho_round_trip_keeps_cases(tmp_path):
    f9 = fc.make_field(3, 2)
    result = classify_orthomorphisms(f9, 6, jobs=1)
    save_result(result, tmp_path)
    loaded = load_result(f9, 6, "ortho", tmp_path)
    assert loaded is not None
    assert loaded.cases == result.cases
    assert loaded.counts == result.counts


def test_cache_disabled(tmp_path, f7):
    compute = Counter(lambda: classify_normalized(f7, 4, jobs=1))
    cached_classification(f7, 4, "normalized", compute, directory=tmp_path, use_cache=False)
    assert compute.calls == 1
    assert list_entries(tmp_path) == []


def test_schema_mismatch_is_a_miss(tmp_path, f7):
    path = save_result(classify_normalized(f7, 4, jobs=1), tmp_path)
    data = json.loads(path.read_text())
    data["schema"] = 99
    path.write_text(json.dumps(data))
    with pytest.raises(CacheError):
        read_result(path)
    assert load_result(f7, 4, "normalized", tmp_path) is None


def test_failed_revalidation_is_a_miss(tmp_path, f7):
    """A cached non-PP is caught by the spot check."""
    bogus = ClassificationResult(field=f7, degree=4, mode="normalized",
                                 polynomials=[(0, 1, 0, 0, 1)], search_space=49)
    save_result(bogus, tmp_path)
    assert load_result(f7, 4, "normalized", tmp_path) is None
    compute = Counter(lambda: classify_normalized(f7, 4, jobs=1))
    fresh = cached_classification(f7, 4, "normalized", compute, directory=tmp_path)
    assert compute.calls == 1
    assert fresh.count == 2


def test_other_modulus_is_a_miss(tmp_path):
    """F_9 built from x^2 + 2x + 2 is not the canonical F_9."""
    other = fc.make_field(3, 2, (2, 2, 1))
    canonical = fc.make_field(3, 2)
    save_result(ClassificationResult(field=other, degree=3, mode="normalized", search_space=9), tmp_path)
    assert load_result(canonical, 3, "normalized", tmp_path) is None


def test_list_and_clear(tmp_path, f7):
    save_result(classify_normalized(f7, 4, jobs=1), tmp_path)
    save_result(classify_normalized(f7, 5, jobs=1), tmp_path)
    (tmp_path / "class_p7r1_d3_normalized.json").write_text("{not json")
    entries = list_entries(tmp_path)
    assert [e["degree"] for e in entries] == [3, 4, 5]
    assert entries[0]["count"] is None and "error" in entries[0]
    assert entries[1]["count"] == 2
    assert entries[2]["count"] == 15
    assert clear_cache(tmp_path) == 3
    assert list_entries(tmp_path) == []


def test_missing_directory(tmp_path):
    assert list_entries(tmp_path / "absent") == []

"""Distribution reports: facets, block profiles, variation, comparisons."""

import random
from collections import Counter

import pytest

from andbench.builder import build_block_dataset
from andbench.ingest import CitationRecord, AuthorSlot
from andbench.profiler import (
    block_profile,
    compare_reports,
    load_lookup_table,
    log_bucket,
    lookup_distribution,
    name_popularity,
    normalize_lookup_key,
    position_distribution,
    variation_report,
    write_report,
    year_distribution,
)

from conftest import make_claim


def citation(year, doi=None):
    return CitationRecord(
        doi=doi or f"10.2/{random.random()}",
        paper_id="p",
        title="",
        abstract="",
        venue="",
        year=year,
        authors=(AuthorSlot("Ann Berg"),),
    )


def assert_proportions_sum_to_one(report):
    if report.total:
        assert sum(p for _, p in report.bins) == pytest.approx(1.0, abs=1e-9)


class TestYearDistribution:
    def test_single_year(self):
        report = year_distribution([citation(2015) for _ in range(4)])
        assert report.bins == (("2015", 1.0),)

    def test_empty(self):
        report = year_distribution([])
        assert report.bins == () and report.total == 0

    def test_fixture_matches_reference_count(self):
        years = [2001] * 5 + [2002] * 3 + [None] * 2
        random.Random(0).shuffle(years)
        report = year_distribution([citation(y) for y in years])
        reference = Counter("unknown" if y is None else str(y) for y in years)
        assert dict(report.bins) == {k: v / 10 for k, v in reference.items()}
        assert [k for k, _ in report.bins] == ["2001", "2002", "unknown"]
        assert_proportions_sum_to_one(report)

    def test_permutation_invariance(self):
        years = [2001, 2002, 2002, 2003, None]
        a = year_distribution([citation(y) for y in years])
        b = year_distribution([citation(y) for y in reversed(years)])
        assert a.bins == b.bins


class TestPositionDistribution:
    def _claims(self, positions):
        out = []
        for p in positions:
            coauthors = tuple(f"Co Author{i}" for i in range(max(p + 1, 12)))
            out.append(make_claim("A1", "Ann Berg", position=p, coauthors=coauthors))
        return out

    def test_all_first(self):
        report = position_distribution(self._claims([1, 1, 1]))
        assert report.bins == (("1", 1.0),)

    def test_cap_binning(self):
        report = position_distribution(self._claims([1, 12]), cap=10)
        assert dict(report.bins) == {"1": 0.5, "11+": 0.5}

    def test_fixture_reference_count(self):
        positions = [1, 1, 2, 3, 3, 3]
        report = position_distribution(self._claims(positions))
        reference = Counter(str(p) for p in positions)
        assert dict(report.bins) == {k: v / 6 for k, v in reference.items()}
        assert_proportions_sum_to_one(report)


class TestNamePopularity:
    def test_all_distinct(self):
        claims = [make_claim(f"A{i}", f"Ann Berg{i}") for i in range(5)]
        report = name_popularity(claims, "LN")
        assert report.bins == (("1", 1.0),)

    def test_repeated_name_bucket(self):
        claims = [make_claim(f"A{i}", "Ann Berg") for i in range(4)]  # frequency 4
        report = name_popularity(claims, "LN")
        assert report.bins == (("3-4", 1.0),)

    def test_lnfi_distinguishes_initials(self):
        claims = [make_claim("A1", "Ann Berg"), make_claim("A2", "Bo Berg")]
        ln = name_popularity(claims, "LN")
        lnfi = name_popularity(claims, "LNFI")
        assert ln.bins == (("2", 1.0),)
        assert lnfi.bins == (("1", 1.0),)

    def test_zipfish_fixture_reference_count(self):
        claims = []
        spec = {"Berg": 8, "Falk": 4, "Qi": 2, "Unique": 1}
        for fam, count in spec.items():
            for i in range(count):
                claims.append(make_claim(f"{fam}{i}", f"Ann {fam}"))
        report = name_popularity(claims, "LN")
        reference = Counter()
        for fam, count in spec.items():
            reference[log_bucket(count)] += count
        total = sum(spec.values())
        assert dict(report.bins) == {k: v / total for k, v in reference.items()}
        assert_proportions_sum_to_one(report)

    def test_log_buckets(self):
        assert [log_bucket(v) for v in (1, 2, 3, 4, 5, 8, 9, 17)] == [
            "1", "2", "3-4", "3-4", "5-8", "5-8", "9-16", "17-32",
        ]
        with pytest.raises(ValueError):
            log_bucket(0)


class TestLookupDistribution:
    def test_empty_table_all_unknown(self):
        claims = [make_claim("A1", "Ann Berg")]
        report = lookup_distribution(claims, {})
        assert report.bins == (("unknown", 1.0),)

    def test_total_coverage(self):
        claims = [make_claim("A1", "Ann Berg"), make_claim("A2", "Bo Falk")]
        table = {"ann berg": "F", "bo falk": "M"}
        report = lookup_distribution(claims, table)
        assert dict(report.bins) == {"F": 0.5, "M": 0.5}

    def test_three_category_fixture(self):
        spec = [("Ann Berg", "X", 3), ("Bo Falk", "Y", 2), ("Xu Qi", "Z", 1), ("No Match", None, 2)]
        claims, table = [], {}
        for name, cat, count in spec:
            for i in range(count):
                claims.append(make_claim(f"{name}{i}", name))
            if cat:
                table[normalize_lookup_key(name)] = cat
        report = lookup_distribution(claims, table)
        assert dict(report.bins) == {"X": 3 / 8, "Y": 2 / 8, "Z": 1 / 8, "unknown": 2 / 8}
        assert [k for k, _ in report.bins] == ["X", "Y", "Z", "unknown"]

    def test_key_normalization_matches_loader(self, tmp_path):
        path = tmp_path / "genders.tsv"
        path.write_text("Ann  Berg\tF\n# comment\nBo-Falk\tM\n", encoding="utf-8")
        table = load_lookup_table(path)
        assert table == {"ann berg": "F", "bofalk": "M"}
        claims = [make_claim("A1", "ann BERG")]
        assert lookup_distribution(claims, table).bins == (("F", 1.0),)


class TestBlockProfile:
    def test_minimal_block(self):
        claims = [make_claim("A1", "Ann Berg"), make_claim("A2", "Ann Berg")]
        ds = build_block_dataset(claims)
        size, variants, authors = block_profile(ds)
        assert size.bins == (("2", 1.0),)
        assert authors.bins == (("2", 1.0),)
        assert variants.total == 0

    def test_single_author_share_mirror(self):
        claims = []
        for i in range(189):  # 189 singles + 11 multi = 94.5% singles
            claims.append(make_claim(f"S{i}", f"Single Name{i}"))
        for i in range(11):
            claims += [make_claim(f"Xa{i}", f"Multi Name{i}"), make_claim(f"Xb{i}", f"Multi Name{i}")]
        _, _, authors = block_profile(build_block_dataset(claims))
        assert dict(authors.bins)["1"] == pytest.approx(0.945)

    def test_variant_injection_ground_truth(self):
        claims = [make_claim("A1", "Ann Berg", byline="Ann Berg") for _ in range(3)]
        claims += [make_claim("A2", "Bo Falk", byline="Bo Falkner")]  # variant in size-1 block
        claims += [make_claim("A3", "Xu Qi", byline="Xu Qin"),
                   make_claim("A3", "Xu Qi", byline="Xu Qi")]  # one variant in size-2 block
        ds = build_block_dataset(claims)
        _, variants, _ = block_profile(ds)
        assert variants.total == 2
        assert dict(variants.bins) == {"1": 0.5, "2": 0.5}


class TestVariationReport:
    def test_civd_never_exceeds_csvd(self):
        claims = [
            make_claim("A1", "Ansgar Höper", byline="Ansgar Hoper"),
            make_claim("A2", "Remko Leijs", byline="Remko Leys"),
            make_claim("A3", "Fan Wang", byline="Fan Wang"),
            make_claim("A4", "Ana Peña", byline="Ana Pena"),
        ]
        for row in variation_report(claims):
            assert row.civd <= row.csvd
            assert row.total == 4

    def test_endwith_fixture_value(self):
        claims = [make_claim(f"A{i}", f"Ann Kow{i}", byline=f"Ann Kow{i}") for i in range(47)]
        claims += [make_claim(f"B{i}", "Remko Leijs", byline="Remko Leys") for i in range(3)]
        rows = {r.measure: r for r in variation_report(claims)}
        assert rows["endwith"].csvd == 0.06


class TestCompareReports:
    def test_self_comparison_is_zero(self):
        claims = [make_claim(f"A{i}", f"N{i}", position=1) for i in range(5)]
        report = position_distribution(claims)
        comparison = compare_reports(report, report)
        assert comparison.max_gap == 0.0
        assert all(gap == 0.0 for *_, gap in comparison.gaps)

    def test_gap_over_disjoint_keys(self):
        a = year_distribution([citation(2001)])
        b = year_distribution([citation(2002)])
        comparison = compare_reports(a, b)
        assert comparison.max_gap == 1.0
        assert dict((k, g) for k, _, _, g in comparison.gaps) == {"2001": 1.0, "2002": 1.0}


def test_write_report_format(tmp_path):
    claims = [make_claim("A1", "Ann Berg", position=1)]
    report = position_distribution(claims)
    path = tmp_path / "r.tsv"
    write_report(report, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "facet\tkey\tproportion"
    assert lines[1] == "author_position\t1\t1.0"

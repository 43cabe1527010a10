import math

import pytest

from modknot.cf import PeriodicWord, geodesic_length
from modknot.census import (CensusError, CensusFile, ChecksumError, ResourceGuardError,
                            GeodesicRecord, brute_force_orbits, build_census, count_geodesics,
                            count_points, enumerate_orbits, make_record, read_census,
                            write_census)


def necklaces_by_length(T, max_sum):
    """Independent listing: all compositions, primitive roots, least rotations."""
    def comps(n):
        if n == 0:
            yield ()
            return
        for a in range(1, n + 1):
            for rest in comps(n - a):
                yield (a,) + rest
    found = set()
    for n in range(1, max_sum + 1):
        for c in comps(n):
            w = PeriodicWord(c)
            if w.is_primitive and geodesic_length(w) <= T:
                found.add(w.canonical().digits)
    return found


class TestRecords:
    def test_make_record(self):
        r = make_record((1, 2))
        assert r.trace == 4 and r.alt == 1 and r.parity == "even" and not r.inert
        assert r.length == pytest.approx(2 * math.acosh(2))
        assert r.geodesic_multiplicity == 2 and r.period == 2
        g = make_record((1,))
        assert g.trace == 3 and g.alt == 0 and g.inert and g.geodesic_multiplicity == 1
        assert g.period == 1

    def test_line_round_trip(self):
        r = make_record((1, 3, 2))
        assert GeodesicRecord.from_line(r.to_line()) == r


class TestEnumeration:
    def test_tiny(self):
        assert [r.canonical_word for r in enumerate_orbits(2.0)] == [(1,)]
        assert [r.canonical_word for r in enumerate_orbits(2.7)] == [(1,), (1, 2)]

    @pytest.mark.parametrize("T", [4.0, 5.0])
    def test_against_composition_listing(self, T):
        # the B-product trace is at least the digit sum, so sum <= 2 cosh(T/2) suffices
        listing = necklaces_by_length(T, int(2 * math.cosh(T / 2)) + 1)
        assert {r.canonical_word for r in enumerate_orbits(T)} == listing

    def test_brute_force_matches(self):
        assert enumerate_orbits(6.0) == brute_force_orbits(6.0)

    def test_sorted_and_unique(self, census8):
        keys = [r.sort_key() for r in census8.records]
        assert keys == sorted(keys)
        assert len({r.canonical_word for r in census8.records}) == len(keys)

    def test_lengths_within_bound(self, census8):
        assert all(r.length <= 8.0 for r in census8.records)
        for r in census8.records[::25]:
            assert r.length == pytest.approx(geodesic_length(PeriodicWord(r.canonical_word)),
                                             abs=1e-9)

    def test_odd_only_is_the_inert_part(self):
        full = [r for r in enumerate_orbits(10.0) if r.inert]
        assert enumerate_orbits(10.0, odd_only=True) == full
        assert enumerate_orbits(10.0, odd_only=True) == brute_force_orbits(10.0, odd_only=True)

    def test_jobs_do_not_change_result(self):
        assert enumerate_orbits(7.0, jobs=2) == enumerate_orbits(7.0)

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            enumerate_orbits(19.0)
        with pytest.raises(CensusError):
            enumerate_orbits(-1.0)
        # the odd-only guard is on T/2
        assert enumerate_orbits(20.0, odd_only=True)


class TestCounts:
    def test_tiny_census(self):
        c = CensusFile(2.7, enumerate_orbits(2.7), {})
        assert count_geodesics(c, 2.7) == 3
        assert count_geodesics(c, 2.7, inert=True) == 1
        assert count_geodesics(c, 2.7, lk_abs=1) == 2
        assert count_geodesics(c, 2.7, lk=1) == 1
        assert count_points(c, 1, 2.7) == 1
        assert count_points(c, 1, 2.7, plus=True) == 2
        assert count_points(c, None, 2.7, odd=True) == 1
        assert count_points(c, None, 2.7) == 3
        assert count_points(c, None, 2.0) == 1

    def test_empty_below_first_orbit(self):
        c = CensusFile(2.0, enumerate_orbits(2.0), {})
        assert count_geodesics(c, 1.0) == 0
        assert count_points(c, 0, 1.0, plus=True) == 0

    def test_lk_counts_sum_to_total(self, census8):
        total = count_geodesics(census8, 8.0)
        by_lk = sum(count_geodesics(census8, 8.0, lk=n) for n in range(-200, 201))
        assert by_lk == total

    def test_points_sum_to_total(self, census8):
        total = count_points(census8, None, 8.0)
        assert sum(count_points(census8, n, 8.0) for n in range(-200, 201)) == total

    def test_symmetry(self, census8):
        for n in range(1, 5):
            assert count_geodesics(census8, 8.0, lk=n) == count_geodesics(census8, 8.0, lk=-n)

    def test_incomplete_census_rejected(self, census8):
        with pytest.raises(CensusError):
            count_geodesics(census8, 9.0)

    def test_odd_only_census_rejects_even_queries(self):
        c = build_census(8.0, odd_only=True)
        assert count_geodesics(c, 8.0, inert=True) == len(c.records)
        with pytest.raises(CensusError):
            count_geodesics(c, 8.0)


class TestPersistence:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "c.mkc"
        c = build_census(6.0, path)
        back = read_census(path)
        assert back.records == c.records and back.t_max == 6.0
        assert not (tmp_path / "c.mkc.tmp").exists()

    def test_corruption_detected(self, tmp_path):
        path = tmp_path / "c.mkc"
        build_census(6.0, path)
        text = path.read_text().replace("1,2 ", "1,3 ", 1)
        path.write_text(text)
        with pytest.raises(ChecksumError):
            read_census(path)

    def test_truncation_detected(self, tmp_path):
        path = tmp_path / "c.mkc"
        build_census(6.0, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-3]) + "\n")
        with pytest.raises(ChecksumError):
            read_census(path)

    def test_unsorted_rejected(self, tmp_path):
        recs = enumerate_orbits(4.0)
        with pytest.raises(CensusError):
            write_census(tmp_path / "x.mkc", recs[::-1], 4.0)

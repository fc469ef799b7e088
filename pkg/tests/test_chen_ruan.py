"""Orbifold cohomology dimension over the twisted sectors."""

from collections import Counter
from fractions import Fraction

import pytest

from invquot import (
    FixedLocusNotImplementedError,
    UnsupportedGeometryError,
    chen_ruan_dim,
    enumerate_sectors,
    parse,
    symmetry_quotient,
    untwisted_invariants,
)


class TestUntwisted:
    def test_pentagon(self, sq):
        u = untwisted_invariants(sq)
        assert u.hyperplane_classes == 4
        assert u.middle_full == 5
        assert u.middle_invariant == 0
        assert u.total == 4

    def test_trivial_quotient(self, trivial_sq):
        u = untwisted_invariants(trivial_sq)
        assert u.middle_full == 5
        assert u.middle_invariant == 5
        assert u.total == 14


class TestSectors:
    def test_piece_count(self, sq):
        sectors = enumerate_sectors(sq)
        # ten nonzero classes at level 33 plus 32 extra identity pieces,
        # minus nothing else: 10 * 11 + 10? enumerate by actual grouping below
        assert len(sectors) == 120

    def test_fifty_contributing_pieces(self, sq):
        sectors = enumerate_sectors(sq)
        contributing = [s for s in sectors if s.contribution]
        assert len(contributing) == 50
        assert all(s.contribution == 1 for s in contributing)

    def test_five_per_nonzero_class(self, sq):
        sectors = enumerate_sectors(sq)
        per_class = Counter(
            s.class_powers for s in sectors if s.contribution
        )
        assert set(per_class) == {(k,) for k in range(1, 11)}
        assert set(per_class.values()) == {5}

    def test_contributions_have_singleton_fixed_axis(self, sq):
        for s in enumerate_sectors(sq):
            if s.contribution:
                assert len(s.fixed_coords) == 1

    def test_each_axis_contributes_for_some_class(self, sq):
        axes = {
            s.fixed_coords[0] for s in enumerate_sectors(sq) if s.contribution
        }
        assert axes == {1, 2, 3, 4, 5}

    def test_eigenphases_are_fractions_in_unit_interval(self, sq):
        for s in enumerate_sectors(sq):
            assert isinstance(s.eigenphase, Fraction)
            assert 0 <= s.eigenphase < 1

    def test_identity_class_contributes_nothing(self, sq):
        for s in enumerate_sectors(sq):
            if s.class_powers == (0,):
                assert s.contribution == 0

    def test_trivial_quotient_has_no_sectors(self, trivial_sq):
        assert enumerate_sectors(trivial_sq) == []


class TestTotal:
    def test_pentagon_is_54(self, sq):
        assert chen_ruan_dim(sq) == 54

    def test_trivial_quotient_is_14(self, trivial_sq):
        assert chen_ruan_dim(trivial_sq) == 14

    def test_decomposition_of_54(self, sq):
        u = untwisted_invariants(sq)
        twisted = sum(s.contribution for s in enumerate_sectors(sq))
        assert u.total + twisted == 54 == 4 + 50


class TestGuards:
    def test_requires_degree_three(self):
        sq = symmetry_quotient(parse("x1^2 + x2^2 + x3^2 + x4^2 + x5^2"))
        with pytest.raises(UnsupportedGeometryError):
            chen_ruan_dim(sq)

    def test_positive_dimensional_fixed_locus_raises(self):
        # x1^3 + x2^3 + x3^3 + x4^3 + x5^3: the quotient contains classes
        # fixing whole coordinate planes
        sq = symmetry_quotient(parse("x1^3 + x2^3 + x3^3 + x4^3 + x5^3"))
        with pytest.raises(FixedLocusNotImplementedError):
            enumerate_sectors(sq)
        # the total also refuses, whichever guard fires first
        with pytest.raises(UnsupportedGeometryError):
            chen_ruan_dim(sq)

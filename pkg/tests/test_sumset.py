from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rlab.config import Settings
from rlab.errors import DomainError, NormalizationError, OutOfRangeError, SizingError
from rlab.sumset import (
	DensityRow, ExponentSet, cs_lower_bound, cs_lower_bound_exact, density_row, first_moment_product, moment_profile,
	moment_row, off_diagonal_weights, rep_counts_direct, rep_square_sum, rep_sum, romanov_count, shift_or_count,
	sumset_count
)

def test_exponent_set():
	assert ExponentSet.upto(20).exps == (2, 3)
	assert ExponentSet.upto(20).shifts == (4, 8)
	assert ExponentSet.upto(256).exps == (2, 3, 5, 7)
	assert len(ExponentSet.upto(3)) == 0
	with pytest.raises(DomainError):
		ExponentSet.upto(0)

def test_moments_at_20(classified_small):
	s = classified_small.p2star
	assert sumset_count(20, s) == 11
	assert rep_sum(20, s) == 14
	assert rep_square_sum(20, s) == 20
	assert first_moment_product(20, s) == 10

def test_direct_counts(classified_small):
	r = rep_counts_direct(20, classified_small.p2star)
	assert (r[15], r[6], r[11], r[12]) == (2, 1, 2, 0)
	with pytest.raises(OutOfRangeError):
		r[21]

def test_r_vanishes_at_100(classified_small):
	assert rep_counts_direct(200, classified_small.p2star)[100] == 0

@pytest.mark.parametrize("x", [100, 1234, 10 ** 4])
def test_streaming_moments_match_direct_counts(classified_small, x):
	s = classified_small.p2star
	r = rep_counts_direct(x, s)
	assert r.total == rep_sum(x, s)
	assert r.square_total == rep_square_sum(x, s)
	assert r.support == sumset_count(x, s)

def test_direct_counts_are_capped(classified_small):
	with pytest.raises(SizingError):
		rep_counts_direct(1000, classified_small.p2star, settings=Settings(direct_cap=100))

def test_moment_profile_decomposition(classified_small):
	profile = moment_profile(20, classified_small.p2star)
	assert profile.diagonal == 14
	assert profile.off_diagonal == 6
	assert profile.factor2_form == 34
	counts = { (w.p1, w.p2): w.count for w in profile.windows }
	assert counts == { (2, 2): 8, (3, 3): 6, (2, 3): 3, (3, 2): 3 }

def test_moment_profile_threads(classified):
	single = moment_profile(10 ** 6, classified.p2star, threads=1)
	many = moment_profile(10 ** 6, classified.p2star, threads=4)
	assert single == many

def test_off_diagonal_weights(classified_small):
	weights = off_diagonal_weights(moment_profile(20, classified_small.p2star))
	# 2^1 - 1 = 1 has no prime factors
	assert [s for _, s in weights] == [Fraction(1), Fraction(1)]

def test_cauchy_schwarz(classified_small):
	s = classified_small.p2star
	assert cs_lower_bound_exact(20, s) == Fraction(49, 5)
	assert cs_lower_bound(20, s) == pytest.approx(9.8)
	assert cs_lower_bound(10 ** 4, s) <= sumset_count(10 ** 4, s)
	with pytest.raises(NormalizationError):
		cs_lower_bound(3, s)

def test_density_row(classified_small):
	row = density_row(20, classified_small.p2star)
	assert row == DensityRow(x=20, sumset_count=11, rep_sum=14, rep_square_sum=20)
	assert row.certified
	assert row.density == pytest.approx(0.55)
	assert row.as_row()["cs_bound"] == pytest.approx(9.8)

def test_moment_row(classified_small):
	row = moment_row(20, classified_small.p2star).as_row()
	assert row == {
		"x": 20, "rep_sum": 14, "first_moment_product": 10, "diagonal": 14, "off_diagonal": 6, "rep_square_sum": 20,
		"factor2_form": 34
	}

def test_romanov(primes_small):
	assert romanov_count(10, primes_small) == 8
	assert 0.2 < romanov_count(10 ** 5, primes_small) / 10 ** 5 < 0.7

def test_shift_or_count(classified_small):
	s = classified_small.primes
	assert shift_or_count(10, s, []) == 0
	assert shift_or_count(10, s, [0]) == 4
	assert shift_or_count(10, s, [2, 2, 100]) == 4
	with pytest.raises(DomainError):
		shift_or_count(10, s, [-1])
	with pytest.raises(OutOfRangeError):
		sumset_count(classified_small.limit + 1, classified_small.p2star)

def test_density_stays_positive(classified):
	for x in (10 ** 4, 10 ** 5, 10 ** 6):
		row = density_row(x, classified.p2star)
		assert row.certified
		assert row.density >= 0.05

def test_moment_identities_at_1e6(classified):
	from rlab.sieve import count_upto

	s, x = classified.p2star, 10 ** 6
	r = rep_counts_direct(x, s)
	assert rep_square_sum(x, s) == r.square_total
	assert rep_sum(x, s) == sum(count_upto(s, x - t) for t in ExponentSet.upto(x).shifts) == r.total

@pytest.mark.parametrize("x", [20, 97, 500, 4096, 10 ** 4])
def test_sumset_count_against_double_loop(classified_small, x):
	s = classified_small.p2star
	members = s.members(x).tolist()
	sums = { t + q for t in ExponentSet.upto(x).shifts for q in members if t + q <= x }
	assert sumset_count(x, s) == len(sums)

@given(st.lists(st.integers(min_value=0, max_value=300), max_size=8), st.integers(min_value=1, max_value=400))
def test_shift_or_count_against_double_loop(classified_small, shifts, x):
	s = classified_small.p2star
	members = s.members(x).tolist()
	sums = { t + q for t in shifts for q in members if t + q <= x }
	assert shift_or_count(x, s, shifts) == len(sums)

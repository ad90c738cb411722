import math
from fractions import Fraction

import pytest

from rlab.errors import EmptyRangeError, NormalizationError, OutOfRangeError, ParameterError
from rlab.paircorr import (
	PairReport, count_linear_pairs, count_pairs, pair_normalizer, pair_ratio, pair_table, prime_pair_count,
	sigma_tracking
)

def test_pair_counts(classified_small):
	s = classified_small.p2star
	assert count_pairs(30, 2, s) == 4
	assert count_pairs(20, 4, s) == 4
	assert count_pairs(10, 9, s) == 0

@pytest.mark.parametrize("x, N", [(10, 10), (10, 11), (10, 0)])
def test_empty_offsets(classified_small, x, N):
	with pytest.raises(EmptyRangeError):
		count_pairs(x, N, classified_small.p2star)

def test_pair_count_beyond_table(classified_small):
	with pytest.raises(OutOfRangeError):
		count_pairs(classified_small.limit + 1, 2, classified_small.p2star)

def test_pair_ratio(classified_small):
	report = pair_ratio(30, 2, classified_small.p2star)
	assert report.count == 4 and report.sigma == Fraction(3, 2)
	assert report.normalized == pytest.approx(4 / (pair_normalizer(30) * 1.5))
	with pytest.raises(NormalizationError):
		pair_ratio(30, 3, classified_small.p2star)
	with pytest.raises(NormalizationError):
		pair_ratio(15, 2, classified_small.p2star)

def test_pair_table_keeps_odd_offsets(classified_small):
	reports = pair_table(100, [1, 2, 3], classified_small.p2star)
	assert [r.N for r in reports] == [1, 2, 3]
	assert reports[0].normalized is None and reports[2].normalized is None
	assert reports[1].normalized is not None
	assert reports[2].sigma == Fraction(4, 3)

def test_sigma_tracking():
	reports = [
		PairReport(x=100, N=2, count=10, sigma=Fraction(3, 2), normalized=1.0),
		PairReport(x=100, N=4, count=10, sigma=Fraction(3, 2), normalized=1.0),
		PairReport(x=100, N=6, count=20, sigma=Fraction(2), normalized=1.2),
		PairReport(x=100, N=12, count=9, sigma=Fraction(2), normalized=0.3),
	]
	tracks = sigma_tracking(reports)
	assert [(t.N, t.within_band) for t in tracks] == [(2, True), (4, False)]
	assert tracks[0].ratio == pytest.approx(1.2)

def test_pair_ratios_stay_bounded(classified):
	reports = pair_table(10 ** 6, range(2, 62, 2), classified.p2star)
	for report in reports:
		assert 0.1 < report.normalized < 10

def test_twin_primes(primes_small):
	report = prime_pair_count(30, 1, 0, 1, 2, primes_small)
	assert report.count == 5
	assert report.sigma == Fraction(3, 2)
	assert report.normalized == pytest.approx(5 / (30 / math.log(30) ** 2 * 1.5))
	assert report.as_row()["k2"] == 1

def test_linear_pairs_without_parity(primes_small):
	assert count_linear_pairs(30, 1, 0, 2, 1, primes_small) == 6
	with pytest.raises(ParameterError, match="not even"):
		prime_pair_count(30, 1, 0, 2, 1, primes_small)

@pytest.mark.parametrize("forms, message", [
	((2, 4, 1, 2), "gcd"),
	((1, 2, 3, 6), "gcd"),
	((1, 1, 1, 1), "proportional"),
	((1, -1, 1, 1), "nonnegative"),
])
def test_form_hypotheses(primes_small, forms, message):
	with pytest.raises(ParameterError, match=message):
		prime_pair_count(30, *forms, primes_small)

def test_forms_beyond_table(primes_small):
	with pytest.raises(ParameterError, match="limit"):
		count_linear_pairs(10 ** 5, 1, 0, 1, 2, primes_small)

def test_sigma_tracking_keeps_zero_counts():
	reports = [
		PairReport(x=100, N=2, count=0, sigma=Fraction(3, 2), normalized=0.0),
		PairReport(x=100, N=4, count=10, sigma=Fraction(3, 2), normalized=0.4),
		PairReport(x=100, N=6, count=20, sigma=Fraction(2), normalized=0.5),
		PairReport(x=100, N=12, count=0, sigma=Fraction(2), normalized=0.0),
	]
	tracks = sigma_tracking(reports)
	assert [(t.N, t.ratio) for t in tracks] == [(2, None), (4, 0.0)]
	assert not any(t.within_band for t in tracks)
	assert tracks[0].as_row() == { "N": 2, "ratio": None, "within_band": False }

def test_pair_counts_against_naive_loop(classified_small):
	s = classified_small.p2star
	x = 5000
	members = set(s.members(x).tolist())
	for N in range(1, 65):
		assert count_pairs(x, N, s) == sum(1 for q in members if q + N <= x and q + N in members), N

def test_pair_counts_read_from_either_end(classified_small):
	s = classified_small.p2star
	members = set(s.members(3000).tolist())
	for N in (2, 7, 30):
		from_top = sum(1 for q in members if q - N >= 1 and q - N in members)
		assert count_pairs(3000, N, s) == from_top

def test_pair_counts_grow_with_x(classified_small):
	s = classified_small.p2star
	for N in (2, 6, 10):
		counts = [count_pairs(x, N, s) for x in range(N + 1, 2000, 37)]
		assert counts == sorted(counts)

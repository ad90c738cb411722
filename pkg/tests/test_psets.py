import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlab.errors import DomainError, NormalizationError, SizingError
from rlab.psets import (
	CheckpointRecord, checkpoint_report, classify, classify_naive, mertens_report, p2star_param_count, psi,
	square_count, star_by_cube, star_by_square
)
from rlab.sieve import count_upto, sieve_lpf

def test_counts_at_100(classified_small):
	assert count_upto(classified_small.p2, 100) == 59
	assert count_upto(classified_small.p2star, 100) == 45
	assert count_upto(classified_small.p2star, 96) == 44

def test_small_members(classified_small):
	assert classified_small.p2star.members(30).tolist() == [2, 3, 5, 7, 10, 11, 13, 14, 17, 19, 22, 23, 26, 29]
	# prime squares and cubes of the least factor stay out of P2*
	for n in (4, 9, 25, 6, 15, 21):
		assert n in classified_small.p2 and n not in classified_small.p2star
	for n in (1, 8, 12, 30):
		assert n not in classified_small.p2

def test_square_count(classified_small):
	assert classified_small.square_count(100) == 4
	assert square_count(classified_small.primes, 48) == 3
	difference = count_upto(classified_small.p2, 10 ** 4) - count_upto(classified_small.p2star, 10 ** 4)
	assert difference >= classified_small.square_count()

@given(st.integers(min_value=1, max_value=10 ** 4))
def test_classify_agrees_with_trial_division(classified_small, n):
	in_p2, in_star = classify_naive(n)
	assert (n in classified_small.p2) == in_p2
	assert (n in classified_small.p2star) == in_star

@given(st.integers(min_value=2, max_value=10 ** 3), st.integers(min_value=2, max_value=10 ** 3))
def test_star_predicates_agree(p1, p2):
	p1, p2 = min(p1, p2), max(p1, p2)
	assert star_by_cube(p1, p1 * p2) == star_by_square(p1, p2)

def test_segmented_classification_is_identical(classified_small):
	other = classify(classified_small.limit, segment_size=777, threads=3)
	assert np.array_equal(other.p2.packed, classified_small.p2.packed)
	assert np.array_equal(other.p2star.packed, classified_small.p2star.packed)

def test_classify_needs_a_table():
	with pytest.raises(SizingError):
		classify(3)

@pytest.mark.parametrize("x", [100, 1000, 9999, 10 ** 4])
def test_parametrization_count(classified_small, x):
	assert p2star_param_count(x, classified_small.primes) == count_upto(classified_small.p2star, x)

def test_psi():
	lpf = sieve_lpf(100)
	assert psi(97, lpf) == 1
	assert psi(91, lpf) == 7
	assert psi(4, lpf) == 2
	with pytest.raises(DomainError):
		psi(1, lpf)

def test_checkpoint_record(classified_small):
	record = CheckpointRecord.at(classified_small.p2star, 100)
	assert record.count == 45
	assert record.normalized == pytest.approx(45 * math.log(100) / (100 * math.log(math.log(100))))
	assert record.as_row()["x"] == 100
	with pytest.raises(NormalizationError):
		CheckpointRecord.at(classified_small.p2star, 15)

def test_checkpoint_report_is_sorted(classified_small):
	records = checkpoint_report(classified_small.p2, [1000, 100])
	assert [r.x for r in records] == [100, 1000]

def test_mertens(classified_small):
	(record,) = mertens_report(classified_small.primes, [10 ** 4])
	assert record.loglog == pytest.approx(math.log(math.log(10 ** 4)))
	# Mertens' constant is 0.2615
	assert record.difference == pytest.approx(0.2615, abs=0.01)
	with pytest.raises(NormalizationError):
		mertens_report(classified_small.primes, [10])

def test_normalized_p2star_is_bounded(classified):
	for record in checkpoint_report(classified.p2star, [10 ** 4, 10 ** 5, 10 ** 6]):
		assert 0.3 <= record.normalized <= 3.0

def test_classify_reuses_a_larger_prime_table(primes_small, classified_small):
	other = classify(classified_small.limit, primes=primes_small)
	assert other.primes.limit == classified_small.limit
	assert np.array_equal(other.primes.packed, classified_small.primes.packed)
	assert np.array_equal(other.p2star.packed, classified_small.p2star.packed)

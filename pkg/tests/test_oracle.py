import itertools
import math

import numpy as np
import pytest

from uwmac.oracle import (Branch, OracleResult, ValidationError,
                          expected_mixed_throughput, expected_slot_throughput,
                          optimal_aloha, optimal_mixed, optimal_tdma_only,
                          prob_all_silent, success_prob_exactly_one)


def enum_exactly_one(q):
    """Independent check: walk all 2^N ALOHA outcomes."""
    total = 0.0
    for outcome in itertools.product((0, 1), repeat=len(q)):
        if sum(outcome) == 1:
            total += math.prod(qi if bit else 1.0 - qi
                               for qi, bit in zip(q, outcome))
    return total


def enum_expected_f(b, q):
    """Independent check of f(b): joint enumeration over the model-aware coin
    and all ALOHA outcomes, counting exactly-one-arrival events."""
    total = 0.0
    for ma_bit in (0, 1):
        ma_prob = b if ma_bit else 1.0 - b
        for outcome in itertools.product((0, 1), repeat=len(q)):
            prob = ma_prob * math.prod(qi if bit else 1.0 - qi
                                       for qi, bit in zip(q, outcome))
            if ma_bit + sum(outcome) == 1:
                total += prob
    return total


def test_exactly_one_frozen_values():
    assert success_prob_exactly_one([0.5, 0.5]) == pytest.approx(0.5, abs=1e-15)
    assert success_prob_exactly_one([1.0]) == 1.0
    assert success_prob_exactly_one([0.2, 0.3, 0.1]) == pytest.approx(0.398, abs=1e-15)
    assert success_prob_exactly_one([]) == 0.0


def test_exactly_one_matches_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(50):
        q = list(rng.random(int(rng.integers(1, 11))))
        assert success_prob_exactly_one(q) == pytest.approx(enum_exactly_one(q),
                                                            abs=1e-12)


def test_prob_all_silent():
    assert prob_all_silent([]) == 1.0
    assert isinstance(prob_all_silent([]), float)
    assert prob_all_silent([0.2, 0.3, 0.1]) == pytest.approx(0.504, abs=1e-15)


def test_probability_inputs_validated():
    with pytest.raises(ValidationError):
        success_prob_exactly_one([0.5, 1.2])
    with pytest.raises(ValidationError):
        expected_slot_throughput(1.5, [0.5])


def test_expected_slot_throughput_examples():
    assert expected_slot_throughput(1.0, [0.3]) == pytest.approx(0.7, abs=1e-15)
    assert expected_slot_throughput(0.0, [0.3]) == pytest.approx(0.3, abs=1e-15)
    assert expected_slot_throughput(0.5, [0.5, 0.5]) == pytest.approx(0.375, abs=1e-15)


def test_expected_slot_throughput_matches_enumeration():
    rng = np.random.default_rng(23)
    for _ in range(50):
        b = float(rng.random())
        q = list(rng.random(int(rng.integers(0, 5))))
        assert expected_slot_throughput(b, q) == pytest.approx(enum_expected_f(b, q),
                                                               abs=1e-12)


def test_optimal_tdma_only_is_one():
    result = optimal_tdma_only()
    assert result.optimal_throughput == 1.0
    assert result.chosen_branch is Branch.TRANSMIT


def test_optimal_aloha_cases():
    high = optimal_aloha([0.7])
    assert high.optimal_throughput == pytest.approx(0.7, abs=1e-15)
    assert high.chosen_branch is Branch.SILENT

    boundary = optimal_aloha([0.5])
    assert boundary.optimal_throughput == 0.5
    assert boundary.chosen_branch is Branch.TRANSMIT   # z = 0 ties to transmit
    assert boundary.z_value == 0.0

    pair = optimal_aloha([0.5, 0.5])
    assert pair.optimal_throughput == pytest.approx(0.5, abs=1e-15)
    assert pair.chosen_branch is Branch.SILENT
    assert pair.z_value == pytest.approx(-0.25, abs=1e-15)


def test_optimal_aloha_single_node_threshold():
    for q in np.linspace(0.0, 1.0, 21):
        result = optimal_aloha([float(q)])
        expected = q if q > 0.5 else 1.0 - q
        assert result.optimal_throughput == pytest.approx(expected, abs=1e-12)
        assert result.z_value == pytest.approx(1.0 - 2.0 * q, abs=1e-12)


def test_expected_mixed_examples():
    assert expected_mixed_throughput(0.4, 1.0, [0.3]) == pytest.approx(0.7, abs=1e-15)
    assert expected_mixed_throughput(1.0, 0.0, [0.3]) == pytest.approx(0.7, abs=1e-15)
    assert expected_mixed_throughput(0.0, 0.2, [0.6]) == pytest.approx(0.56, abs=1e-15)


def test_optimal_mixed_cases():
    silent = optimal_mixed(0.2, [0.6])
    assert silent.optimal_throughput == pytest.approx(0.56, abs=1e-15)
    assert silent.chosen_branch is Branch.SILENT

    transmit = optimal_mixed(0.25, [0.2])
    assert transmit.optimal_throughput == pytest.approx(0.8, abs=1e-15)
    assert transmit.chosen_branch is Branch.TRANSMIT
    assert transmit.z_value == pytest.approx(0.75 * 0.6, abs=1e-15)

    degenerate = optimal_mixed(0.0, [0.7])
    assert degenerate == optimal_aloha([0.7])


def test_optimal_mixed_reduces_to_tdma_only():
    for p in (0.0, 0.3, 1.0):
        result = optimal_mixed(p, [])
        assert result.optimal_throughput == 1.0
        assert result.chosen_branch is Branch.TRANSMIT


def test_optimal_mixed_p_one_routes_to_transmit_branch():
    # F is constant in b at p = 1; the tie goes to the transmit branch
    result = optimal_mixed(1.0, [0.9])
    assert result.chosen_branch is Branch.TRANSMIT
    assert result.z_value == 0.0
    assert result.optimal_throughput == pytest.approx(0.1, abs=1e-15)


def test_endpoint_optimality_random():
    rng = np.random.default_rng(37)
    for _ in range(300):
        q = list(rng.random(int(rng.integers(0, 5))))
        p = float(rng.random())
        f0 = expected_slot_throughput(0.0, q)
        f1 = expected_slot_throughput(1.0, q)
        assert optimal_aloha(q).optimal_throughput == max(f0, f1)
        m0 = expected_mixed_throughput(0.0, p, q)
        m1 = expected_mixed_throughput(1.0, p, q)
        assert optimal_mixed(p, q).optimal_throughput == pytest.approx(max(m0, m1),
                                                                       abs=1e-12)
        for b in rng.random(5):
            assert expected_slot_throughput(float(b), q) <= max(f0, f1) + 1e-12
            assert expected_mixed_throughput(float(b), p, q) <= max(m0, m1) + 1e-12


def test_throughputs_stay_in_unit_interval():
    rng = np.random.default_rng(41)
    for _ in range(200):
        q = list(rng.random(int(rng.integers(0, 6))))
        p = float(rng.random())
        assert 0.0 <= optimal_aloha(q).optimal_throughput <= 1.0
        assert 0.0 <= optimal_mixed(p, q).optimal_throughput <= 1.0
        assert 0.0 <= expected_mixed_throughput(float(rng.random()), p, q) <= 1.0


def test_oracle_result_invariants():
    with pytest.raises(ValidationError):
        OracleResult(1.5, Branch.TRANSMIT, 1.0)
    with pytest.raises(ValidationError):
        OracleResult(0.5, Branch.SILENT, 0.1)
    with pytest.raises(ValidationError):
        OracleResult(0.5, Branch.TRANSMIT, -0.1)

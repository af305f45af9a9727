"""Closed-form expected and optimal slot throughputs.

Against N independent slotted-ALOHA senders with probabilities q_i and a TDMA
side occupying a fraction p of frame slots, the expected per-slot throughput
when the model-aware side transmits with probability b is affine in b, so the
optimum sits at b = 0 or b = 1. These formulas are the ground truth the
simulation engine is checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .core import ValidationError


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")


def _check_probs(q: Sequence[float]) -> None:
    bad = [f"q[{i}] must lie in [0, 1], got {qi}"
           for i, qi in enumerate(q) if not 0.0 <= qi <= 1.0]
    if bad:
        raise ValidationError(bad)


def prob_all_silent(q: Sequence[float]) -> float:
    """P(no ALOHA node transmits) = prod_i (1 - q_i). Empty input gives 1."""
    _check_probs(q)
    return math.prod((1.0 - qi for qi in q), start=1.0)


def success_prob_exactly_one(q: Sequence[float]) -> float:
    """P(exactly one ALOHA node transmits) = sum_i q_i * prod_{j != i} (1 - q_j).

    Empty input gives 0 (no node can succeed).
    """
    _check_probs(q)
    total = 0.0
    for i, qi in enumerate(q):
        term = qi
        for j, qj in enumerate(q):
            if j != i:
                term *= 1.0 - qj
        total += term
    return total


def expected_slot_throughput(b: float, q: Sequence[float]) -> float:
    """f(b) = b * prod(1 - q_i) + (1 - b) * P(exactly one ALOHA transmits)."""
    _check_unit("b", b)
    return b * prob_all_silent(q) + (1.0 - b) * success_prob_exactly_one(q)


class Branch(Enum):
    """Which endpoint of the affine objective the optimum takes."""

    TRANSMIT = "transmit"   # b* = 1: model-aware side fills every free slot
    SILENT = "silent"       # b* = 0: channel is left to the ALOHA side


@dataclass(frozen=True)
class OracleResult:
    """Optimal per-slot network throughput and the branch attaining it."""

    optimal_throughput: float
    chosen_branch: Branch
    z_value: float

    def __post_init__(self):
        errors = []
        if not 0.0 <= self.optimal_throughput <= 1.0:
            errors.append(f"throughput must lie in [0, 1], got {self.optimal_throughput}")
        expected = Branch.TRANSMIT if self.z_value >= 0 else Branch.SILENT
        if self.chosen_branch is not expected:
            errors.append(f"branch {self.chosen_branch.value} inconsistent with z = {self.z_value}")
        if errors:
            raise ValidationError(errors)


def optimal_tdma_only() -> OracleResult:
    """TDMA-only competition: the model-aware side fills every free slot, so
    the network saturates at throughput 1 regardless of delays."""
    return OracleResult(1.0, Branch.TRANSMIT, 1.0)


def optimal_aloha(q: Sequence[float]) -> OracleResult:
    """Optimal throughput against ALOHA senders only.

    z = prod(1 - q_i) - sum_i q_i prod_{j != i} (1 - q_j) is df/db. Negative z
    means staying silent wins (throughput = P(exactly one ALOHA transmits));
    otherwise transmitting every slot wins (throughput = prod(1 - q_i)).
    For a single sender this reduces to q if q > 0.5, else 1 - q.
    """
    silent = prob_all_silent(q)
    exactly_one = success_prob_exactly_one(q)
    z = silent - exactly_one
    if z < 0:
        return OracleResult(exactly_one, Branch.SILENT, z)
    return OracleResult(silent, Branch.TRANSMIT, z)


def expected_mixed_throughput(b: float, p: float, q: Sequence[float]) -> float:
    """F(b) = p * prod(1 - q_i) + (1 - p) * f(b) with p the TDMA frame ratio."""
    _check_unit("p", p)
    return p * prob_all_silent(q) + (1.0 - p) * expected_slot_throughput(b, q)


def optimal_mixed(p: float, q: Sequence[float]) -> OracleResult:
    """Optimal throughput with a TDMA side using a fraction p of frame slots.

    dF/db = (1 - p) * z never flips sign versus the ALOHA-only z; at p = 1 it
    degenerates to 0 and routes to the transmit branch, where F is constant.
    """
    _check_unit("p", p)
    silent = prob_all_silent(q)
    exactly_one = success_prob_exactly_one(q)
    z = (1.0 - p) * (silent - exactly_one) + 0.0   # +0.0 normalises -0.0 at p == 1
    if z < 0:
        return OracleResult(p * silent + (1.0 - p) * exactly_one, Branch.SILENT, z)
    return OracleResult(silent, Branch.TRANSMIT, z)

"""Per-slot decision logic: TDMA schedules, ALOHA coin flips, and the
precomputed optimal policy of the model-aware side with its round-robin
gateway roster."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .core import (Action, ContractViolation, Delay, ModelAwareRole, NodeId,
                   Scenario, TdmaSchedule, ValidationError,
                   gateway_strict_errors)
from .oracle import prob_all_silent, success_prob_exactly_one


@dataclass(frozen=True)
class AlohaParams:
    """Constant per-slot transmission probability."""

    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ValidationError(f"ALOHA transmit probability must lie in [0, 1], got {self.q}")


def tdma_decide(schedule: TdmaSchedule, t: int) -> Action:
    """Deterministic frame schedule: transmit iff the slot's frame offset is assigned."""
    if t < 0:
        raise ContractViolation(f"slot index must be >= 0, got {t}")
    if t % schedule.frame_length in schedule.assigned:
        return Action.TRANSMIT
    return Action.WAIT


def aloha_decide(params: AlohaParams, rng: np.random.Generator) -> Action:
    """One Bernoulli(q) draw from the node's stream."""
    return Action.TRANSMIT if rng.random() < params.q else Action.WAIT


def compute_forbidden_send_slots(tdma_nodes: Sequence[tuple[TdmaSchedule, Delay]],
                                 ma_delay: Delay, first_send: int,
                                 last_send: int) -> set[int]:
    """Send slots whose arrival would land on top of a TDMA arrival.

    A model-aware send in slot s arrives at s + ma_delay; it is forbidden when
    some TDMA node scheduled to send in slot t (t >= 0) arrives at the same AP
    slot t + tdma_delay. Negative candidate slots are excluded.
    """
    if last_send < first_send:
        raise ContractViolation(f"last_send {last_send} < first_send {first_send}")
    lo = max(first_send, 0)
    if lo > last_send or not tdma_nodes:
        return set()
    send = np.arange(lo, last_send + 1, dtype=np.int64)
    hit = np.zeros(send.shape, dtype=bool)
    for schedule, delay in tdma_nodes:
        if not schedule.assigned:
            continue
        t = send + (ma_delay.slots - delay.slots)
        offsets = np.fromiter(schedule.assigned, dtype=np.int64)
        hit |= (t >= 0) & np.isin(t % schedule.frame_length, offsets)
    return {int(s) for s in send[hit]}


def z_value(q: Sequence[float]) -> float:
    """Derivative of per-slot throughput w.r.t. the model-aware transmit probability.

    prod(1 - q_i) - sum_i q_i prod_{j != i} (1 - q_j); reduces to 1 - 2q for a
    single sender and to 1 for an empty list. Nonnegative z means transmitting
    every slot is optimal, negative means staying silent wins.
    """
    return prob_all_silent(q) - success_prob_exactly_one(q)


@dataclass(frozen=True)
class ModelAwarePolicy:
    """Precomputed open-loop policy: wait in forbidden slots, otherwise play
    the static default decided by the sign of z."""

    forbidden_send_slots: frozenset[int]
    default_action: Action
    z_value: float

    def __post_init__(self):
        object.__setattr__(self, "forbidden_send_slots", frozenset(self.forbidden_send_slots))
        expected = Action.TRANSMIT if self.z_value >= 0 else Action.WAIT
        if self.default_action is not expected:
            raise ValidationError(f"default action {self.default_action.value} "
                                  f"inconsistent with z = {self.z_value}")

    def decide(self, t: int) -> Action:
        return Action.WAIT if t in self.forbidden_send_slots else self.default_action


def build_model_aware_policy(scenario: Scenario, ma_node: NodeId) -> ModelAwarePolicy:
    """Assemble the optimal policy for a model-aware node (or gateway group).

    The node is assumed to know every delay and every other node's strategy:
    forbidden slots come from all TDMA schedules shifted into its own send
    clock, the default action from the sign of z over all ALOHA probabilities.
    """
    by_id = {n.id: n for n in scenario.nodes}
    node = by_id.get(ma_node)
    if node is None or not isinstance(node.role, ModelAwareRole):
        raise ContractViolation(f"node {ma_node} is not model-aware")
    strict = gateway_strict_errors(scenario)
    if strict:
        raise ValidationError(strict)
    tdma = [(n.role.schedule, n.delay) for n in scenario.tdma_nodes]
    forbidden = compute_forbidden_send_slots(tdma, node.delay, 0,
                                             scenario.total_send_slots - 1)
    z = z_value(scenario.aloha_probs)
    default = Action.TRANSMIT if z >= 0 else Action.WAIT
    return ModelAwarePolicy(frozenset(forbidden), default, z)


@dataclass(frozen=True)
class GatewayRoster:
    """Round-robin rotation over the coordinated model-aware members."""

    members: tuple[NodeId, ...]
    cursor: int = 0

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ContractViolation("gateway roster must have at least one member")
        if not 0 <= self.cursor < len(self.members):
            raise ContractViolation(f"cursor {self.cursor} out of range for "
                                    f"{len(self.members)} members")


def gateway_select(roster: GatewayRoster,
                   decision: Action) -> tuple[NodeId | None, GatewayRoster]:
    """Apply one gateway decision: on TRANSMIT pick the next member in turn,
    on WAIT keep every member silent and leave the cursor alone."""
    if decision is Action.WAIT:
        return None, roster
    node = roster.members[roster.cursor]
    return node, replace(roster, cursor=(roster.cursor + 1) % len(roster.members))

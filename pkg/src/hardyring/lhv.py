"""Exhaustive deterministic local-hidden-variable (LHV) check.

A strategy fixes, per particle, the outcome of the U measurement (u bit) and
of the D measurement (d bit). Under a setting it outputs d bits for reversed
particles and u bits elsewhere. It is consistent if every one of the n+2
standard settings yields an outcome the quantum state can produce.

Bit convention: strings and masks put particle 1 in the most significant
position, same as the rest of the package.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analytic import SUPPORT_EPS, amplitudes_for_setting, coeffs_from_theta
from .config import EntanglerSpec, MeasurementSetting, interest_states_rule, standard_settings

MAX_ENUMERATION_N = 8


class EnumerationCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class LhvStrategy:
    u_bits: str
    d_bits: str

    def outcome(self, setting: MeasurementSetting) -> str:
        return "".join(d if k in setting.reversed_set else u
                       for k, (u, d) in enumerate(zip(self.u_bits, self.d_bits), start=1))


@dataclass(frozen=True)
class SupportSet:
    setting: MeasurementSetting
    support: frozenset[str]
    n: int

    def table(self) -> np.ndarray:
        hit = np.zeros(2**self.n, dtype=bool)
        hit[[int(s, 2) for s in self.support]] = True
        return hit


@dataclass(frozen=True)
class Implication:
    """What D_k = 1 forces on the other particles' U outcomes.

    `options` lists every allowed partner pattern as the set of particles with
    U=1; the implication reads D_k=1 => forced_zero all 0, forced_one all 1,
    and one of `options` holds.
    """

    particle: int
    forced_zero: frozenset[int]
    forced_one: frozenset[int]
    options: tuple[frozenset[int], ...]

    def describe(self) -> str:
        parts = [f"U{j}=0" for j in sorted(self.forced_zero)]
        parts += [f"U{j}=1" for j in sorted(self.forced_one)]
        free = sorted(set().union(*self.options) - self.forced_one) if self.options else []
        if free:
            parts.append("(" + " ∨ ".join(f"U{j}=1" for j in free) + ")")
        if not self.options:
            return f"D{self.particle}=1 never occurs"
        return f"D{self.particle}=1 ⇒ " + (" ∧ ".join(parts) if parts else "nothing")


@dataclass(frozen=True)
class ContradictionChain:
    target_state: str
    implications_used: tuple[tuple[int, frozenset[int]], ...]
    violated_vanished_state: str

    def to_dict(self) -> dict:
        return {
            "target": self.target_state,
            "choices": [{"particle": k, "u_ones": sorted(ones)} for k, ones in self.implications_used],
            "violated": self.violated_vanished_state,
        }


@dataclass
class StrategyCensus:
    n: int
    consistent: list[LhvStrategy]
    # index of the first failing setting per strategy id (-1 if consistent)
    witness: np.ndarray = field(repr=False)

    @property
    def total(self) -> int:
        return 4**self.n


@dataclass
class ParadoxReport:
    spec: EntanglerSpec
    theta: float
    paradox_states: list[str]
    p_success: float
    consistent_count: int
    chains: list[ContradictionChain]
    rule_states: list[str] = field(default_factory=list)
    strategies_total: int = 0

    @property
    def rule_agrees(self) -> bool:
        return set(self.rule_states) == set(self.paradox_states)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "theta": self.theta,
            "paradox_states": list(self.paradox_states),
            "p_success": self.p_success,
            "consistent_count": self.consistent_count,
            "chains": [c.to_dict() for c in self.chains],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _check_cap(n: int) -> None:
    if n > MAX_ENUMERATION_N:
        raise EnumerationCapExceeded(
            f"exhaustive enumeration needs 4**{n} strategies; refusing above n={MAX_ENUMERATION_N}"
        )


def quantum_supports(spec: EntanglerSpec, theta: float | Sequence[float],
                     eps: float = SUPPORT_EPS) -> list[SupportSet]:
    coeffs = coeffs_from_theta(theta, spec.n)
    out = []
    for setting in standard_settings(spec.n):
        amap = amplitudes_for_setting(spec, coeffs, setting)
        out.append(SupportSet(setting, frozenset(amap.support(eps)), spec.n))
    return out


def _strategy_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    ids = np.arange(4**n)
    return ids >> n, ids & ((1 << n) - 1)


def strategy_census(supports: Sequence[SupportSet]) -> StrategyCensus:
    n = supports[0].n
    _check_cap(n)
    u, d = _strategy_arrays(n)
    witness = np.full(u.size, -1)
    for i, sup in enumerate(supports):
        r = sup.setting.mask(n)
        ok = sup.table()[(d & r) | (u & ~r)]
        witness[(witness < 0) & ~ok] = i
    good = np.flatnonzero(witness < 0)
    fmt = f"0{n}b"
    consistent = [LhvStrategy(format(int(u[i]), fmt), format(int(d[i]), fmt)) for i in good]
    return StrategyCensus(n, consistent, witness)


def enumerate_consistent_strategies(supports: Sequence[SupportSet]) -> list[LhvStrategy]:
    n = supports[0].n
    wanted = {s.setting for s in supports}
    if any(s not in wanted for s in standard_settings(n)):
        raise ValueError("supports must cover all n+2 standard settings")
    return strategy_census(supports).consistent


def paradox_states_oracle(spec: EntanglerSpec, theta: float | Sequence[float]) -> set[str]:
    """Set-all outcomes with quantum weight that no consistent strategy can emit."""
    _check_cap(spec.n)
    supports = quantum_supports(spec, theta)
    reachable = {s.d_bits for s in enumerate_consistent_strategies(supports)}
    return set(supports[-1].support) - reachable


def correlation_implications(spec: EntanglerSpec, theta: float | Sequence[float], k: int) -> Implication:
    if not 1 <= k <= spec.n:
        raise ValueError(f"particle {k} outside 1..{spec.n}")
    coeffs = coeffs_from_theta(theta, spec.n)
    support = amplitudes_for_setting(spec, coeffs, MeasurementSetting.single(k)).support()
    others = [j for j in range(1, spec.n + 1) if j != k]
    patterns = {frozenset(j for j in others if s[j - 1] == "1") for s in support if s[k - 1] == "1"}
    patterns = sorted(patterns, key=lambda p: (len(p), sorted(p)))
    if not patterns:
        return Implication(k, frozenset(), frozenset(), ())
    forced_one = frozenset.intersection(*patterns)
    forced_zero = frozenset(others) - frozenset.union(*patterns)
    return Implication(k, forced_zero, forced_one, tuple(patterns))


def _ones_string(n: int, ones: frozenset[int]) -> str:
    return "".join("1" if k in ones else "0" for k in range(1, n + 1))


def _chains_for(spec: EntanglerSpec, theta, target: str) -> list[ContradictionChain]:
    triggered = [k for k, bit in enumerate(target, start=1) if bit == "1"]
    imps = [correlation_implications(spec, theta, k) for k in triggered]
    masks = spec.masks()
    chains = []
    for choice in itertools.product(*(imp.options for imp in imps)):
        ones = frozenset().union(*choice) if choice else frozenset()
        forced = _ones_string(spec.n, ones)
        # vanished states are upward closed, so the all-others-V completion decides
        if any(int(forced, 2) & m == m for m in masks):
            chains.append(ContradictionChain(target, tuple(zip(triggered, choice)), forced))
    return chains


def contradiction_chains(spec: EntanglerSpec, theta: float | Sequence[float], target: str) -> list[ContradictionChain]:
    """Every choice of one allowed partner pattern per triggered D=1 that forces a vanished outcome."""
    if target not in paradox_states_oracle(spec, theta):
        raise ValueError(f"{target} is not a paradox state at this angle")
    return _chains_for(spec, theta, target)


def verify_paradox(spec: EntanglerSpec, theta: float,
                   max_chains_per_state: int | None = None) -> ParadoxReport:
    _check_cap(spec.n)
    coeffs = coeffs_from_theta(theta, spec.n)
    supports = quantum_supports(spec, theta)
    census = strategy_census(supports)
    reachable = {s.d_bits for s in census.consistent}
    paradox = sorted(set(supports[-1].support) - reachable)
    probs = amplitudes_for_setting(spec, coeffs, MeasurementSetting.all(spec.n)).probabilities()
    p_success = math.fsum(probs[s] for s in paradox)
    chains = [c for s in paradox for c in _chains_for(spec, theta, s)[:max_chains_per_state]]
    return ParadoxReport(
        spec=spec,
        theta=theta,
        paradox_states=paradox,
        p_success=p_success,
        consistent_count=len(census.consistent),
        chains=chains,
        rule_states=sorted(interest_states_rule(spec)),
        strategies_total=census.total,
    )

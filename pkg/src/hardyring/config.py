"""Entanglement graphs as Toffoli control sets, and the circuits built from them.

Particles are 1-based everywhere in this module's public surface; qubit
indices inside a `Circuit` are 0-based (particle k -> qubit k-1).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Sequence

from .sv import MCX, RY, Circuit, bitstrings


@dataclass(frozen=True)
class EntanglerSpec:
    n: int
    control_sets: tuple[tuple[int, ...], ...]
    name: str = "custom"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two particles")
        sets = tuple(tuple(sorted(cs)) for cs in self.control_sets)
        if not sets:
            raise ValueError("need at least one control set")
        for cs in sets:
            if len(cs) < 2:
                raise ValueError(f"control set {cs} has fewer than two members")
            if len(set(cs)) != len(cs):
                raise ValueError(f"control set {cs} repeats a particle")
            if cs[0] < 1 or cs[-1] > self.n:
                raise ValueError(f"control set {cs} out of range 1..{self.n}")
        if len(set(sets)) != len(sets):
            raise ValueError("control sets must be distinct")
        object.__setattr__(self, "control_sets", sets)

    @property
    def is_complete(self) -> bool:
        return self.control_sets == (tuple(range(1, self.n + 1)),)

    @property
    def is_pairwise(self) -> bool:
        return all(len(cs) == 2 for cs in self.control_sets)

    def masks(self) -> list[int]:
        """Control sets as bitmasks over n-bit strings (particle 1 = MSB)."""
        return [sum(1 << (self.n - k) for k in cs) for cs in self.control_sets]

    def to_dict(self) -> dict:
        return {"n": self.n, "control_sets": [list(cs) for cs in self.control_sets]}


@dataclass(frozen=True)
class MeasurementSetting:
    """Particles measured in the {c,d} basis; everyone else is measured in {u,v}."""

    reversed_set: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "reversed_set", frozenset(self.reversed_set))

    @classmethod
    def none(cls) -> "MeasurementSetting":
        return cls(frozenset())

    @classmethod
    def single(cls, k: int) -> "MeasurementSetting":
        return cls(frozenset({k}))

    @classmethod
    def all(cls, n: int) -> "MeasurementSetting":
        return cls(frozenset(range(1, n + 1)))

    def mask(self, n: int) -> int:
        return sum(1 << (n - k) for k in self.reversed_set)

    def validate(self, n: int) -> None:
        if any(k < 1 or k > n for k in self.reversed_set):
            raise ValueError(f"setting {sorted(self.reversed_set)} not within 1..{n}")

    def label(self, n: int) -> str:
        if not self.reversed_set:
            return "set1"
        if len(self.reversed_set) == n:
            return "set3"
        if len(self.reversed_set) == 1:
            return f"set2[{next(iter(self.reversed_set))}]"
        return "reversed" + "".join(str(k) for k in sorted(self.reversed_set))


def standard_settings(n: int) -> list[MeasurementSetting]:
    """The n+2 settings: nothing reversed, each particle alone, everything reversed."""
    return [MeasurementSetting.none(), *(MeasurementSetting.single(k) for k in range(1, n + 1)),
            MeasurementSetting.all(n)]


def make_spec(kind: str, n: int, custom_sets: Sequence[Iterable[int]] | None = None) -> EntanglerSpec:
    if n < 2:
        raise ValueError("n must be >= 2")
    if kind == "cycle":
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        sets = [(k, k % n + 1) for k in range(1, n + 1)]
        return EntanglerSpec(n, tuple(sets), name=f"cycle{n}")
    if kind == "complete":
        return EntanglerSpec(n, (tuple(range(1, n + 1)),), name=f"complete{n}")
    if kind == "custom":
        if custom_sets is None:
            raise ValueError("custom spec needs control sets")
        return EntanglerSpec(n, tuple(tuple(cs) for cs in custom_sets))
    raise ValueError(f"unknown spec kind {kind!r}")


def builtin_spec(name: str) -> EntanglerSpec:
    """Parse names like 'cycle4' or 'complete3'."""
    for kind in ("cycle", "complete"):
        if name.startswith(kind) and name[len(kind):].isdigit():
            return make_spec(kind, int(name[len(kind):]))
    raise ValueError(f"unknown builtin spec {name!r}")


def load_spec(path: str | PathLike) -> EntanglerSpec:
    with open(path) as fh:
        raw = json.load(fh)
    try:
        n, sets = int(raw["n"]), raw["control_sets"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"spec file needs 'n' and 'control_sets': {exc}") from None
    return make_spec("custom", n, sets)


def dump_spec(spec: EntanglerSpec, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(spec.to_dict(), fh)


def _strings_hitting(n: int, masks: list[int]) -> set[str]:
    return {format(s, f"0{n}b") for s in range(2**n) if any(s & m == m for m in masks)}


def vanished_states(spec: EntanglerSpec) -> set[str]:
    """Outcomes in the {u,v} bases with some control set all-ones."""
    return _strings_hitting(spec.n, spec.masks())


def interest_states_rule(spec: EntanglerSpec) -> set[str]:
    """Rule-based paradox candidates in the {c,d} bases.

    Complete graph: any two particles with D=1. Otherwise: some control set
    entirely D=1 (for pairwise graphs, two partners of one pair).
    """
    if spec.is_complete:
        return {s for s in bitstrings(spec.n) if s.count("1") >= 2}
    return _strings_hitting(spec.n, spec.masks())


def build_circuit(spec: EntanglerSpec, theta: float, setting: MeasurementSetting) -> Circuit:
    if not 0.0 <= theta <= math.pi + 1e-12:
        raise ValueError("theta must lie in [0, pi]")
    setting.validate(spec.n)
    n = spec.n
    gates: list = [RY(theta, q) for q in range(n)]
    for j, cs in enumerate(spec.control_sets):
        gates.append(MCX(tuple(k - 1 for k in cs), n + j))
    gates += [RY(-theta, k - 1) for k in sorted(setting.reversed_set)]
    return Circuit(n, len(spec.control_sets), gates)

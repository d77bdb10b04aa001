"""Closed-form amplitudes for the post-selected Hardy state.

The post-selected state is the product state |c...c> with every vanished
{u,v} term removed, renormalised. Writing |c_k> = A_k|u_k> + B_k|v_k>, the
surviving {u,v} amplitude of outcome s is N * prod_k (A_k if s_k=1 else B_k),
and 1/N^2 = 1 + C where C is minus the squared weight of the removed terms.
Settings that reverse particle k re-express that particle in the {c,d} basis
via <c|u>=A, <c|v>=B, <d|u>=-B, <d|v>=A (real coefficients throughout).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import EntanglerSpec, MeasurementSetting, vanished_states
from .sv import bitstrings

DEGENERATE_TOL = 1e-12
SUPPORT_EPS = 1e-9


class DegeneratePostSelection(ValueError):
    pass


@dataclass(frozen=True)
class BasisCoeffs:
    A: tuple[float, ...]
    B: tuple[float, ...]

    def __post_init__(self):
        if len(self.A) != len(self.B):
            raise ValueError("A and B must have one entry per particle")
        for a, b in zip(self.A, self.B):
            if not (-1e-15 <= a <= 1 + 1e-15 and -1e-15 <= b <= 1 + 1e-15):
                raise ValueError("coefficients must lie in [0, 1]")
            if abs(a * a + b * b - 1) > 1e-12:
                raise ValueError("A^2 + B^2 must equal 1")

    @property
    def n(self) -> int:
        return len(self.A)


@dataclass(frozen=True)
class NormalizationResult:
    C: float
    N: float


@dataclass(frozen=True)
class AmplitudeMap:
    setting: MeasurementSetting
    entries: Mapping[str, float]

    def probabilities(self) -> dict[str, float]:
        return {k: v * v for k, v in self.entries.items()}

    def support(self, eps: float = SUPPORT_EPS) -> set[str]:
        return {k for k, v in self.entries.items() if v * v > eps}


@dataclass
class SweepResult:
    grid: list[tuple[float, float]]
    argmax_theta: float
    max_p: float
    degenerate: list[float] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta_rad", "theta_pi_units", "p_success"])
        for theta, p in self.grid:
            w.writerow([f"{theta:.12g}", f"{theta / math.pi:.12g}", f"{p:.12g}"])
        return buf.getvalue()


def coeffs_from_theta(theta_k: float | Sequence[float], n: int | None = None) -> BasisCoeffs:
    """A_k = sin(theta_k/2), B_k = cos(theta_k/2). A scalar theta needs `n`."""
    if np.isscalar(theta_k):
        if n is None:
            raise ValueError("scalar theta needs the particle count n")
        thetas = [float(theta_k)] * n
    else:
        thetas = [float(t) for t in theta_k]
    for t in thetas:
        if not 0.0 <= t <= math.pi + 1e-12:
            raise ValueError(f"theta {t} outside [0, pi]")
    t = np.clip(np.array(thetas), 0.0, math.pi)
    return BasisCoeffs(tuple(np.sin(t / 2).tolist()), tuple(np.cos(t / 2).tolist()))


def _bit_table(n: int) -> np.ndarray:
    # row s, column k -> bit of particle k+1 in outcome s
    s = np.arange(2**n)[:, None]
    return ((s >> (n - 1 - np.arange(n))) & 1).astype(bool)


def _vanished_mask(spec: EntanglerSpec) -> np.ndarray:
    s = np.arange(2**spec.n)
    hit = np.zeros(2**spec.n, dtype=bool)
    for m in spec.masks():
        hit |= (s & m) == m
    return hit


def _product_weights(n: int, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Amplitudes of |c...c> in the {u,v} basis; A, B have shape (..., n)."""
    bits = _bit_table(n)
    return np.prod(np.where(bits, A[..., None, :], B[..., None, :]), axis=-1)


def _kept_weight(w: np.ndarray, vanished: np.ndarray) -> np.ndarray:
    # 1 + C summed over the surviving terms; 1 - sum(vanished) cancels badly near theta = pi
    return np.sum(np.where(vanished, 0.0, w * w), axis=-1)


def normalization_constant(spec: EntanglerSpec, coeffs: BasisCoeffs) -> NormalizationResult:
    """C = -sum over vanished s of prod_k (A_k^2 if s_k=1 else B_k^2); N = 1/sqrt(1+C).

    N itself is taken from the surviving terms, which sum to 1 + C exactly
    but without cancellation.
    """
    _check_n(spec, coeffs)
    removed, kept = [], []
    vanished = vanished_states(spec)
    for s in bitstrings(spec.n):
        w2 = math.prod(a * a if bit == "1" else b * b for bit, a, b in zip(s, coeffs.A, coeffs.B))
        (removed if s in vanished else kept).append(w2)
    C = -math.fsum(removed)
    one_plus_c = math.fsum(kept)
    if one_plus_c <= DEGENERATE_TOL:
        raise DegeneratePostSelection(f"degenerate post-selection: 1 + C = {one_plus_c:.3g}")
    return NormalizationResult(C, 1 / math.sqrt(one_plus_c))


def _check_n(spec: EntanglerSpec, coeffs: BasisCoeffs) -> None:
    if coeffs.n != spec.n:
        raise ValueError(f"coefficients cover {coeffs.n} particles, spec has {spec.n}")


def _setting_amplitudes(
    spec: EntanglerSpec, A: np.ndarray, B: np.ndarray, reversed_set: Iterable[int]
) -> np.ndarray:
    """Batched amplitude vectors, shape (..., 2**n); NaN rows where degenerate."""
    n = spec.n
    vanished = _vanished_mask(spec)
    w = _product_weights(n, A, B)
    one_plus_c = _kept_weight(w, vanished)
    with np.errstate(divide="ignore", invalid="ignore"):
        N = np.where(one_plus_c > DEGENERATE_TOL, 1 / np.sqrt(np.maximum(one_plus_c, DEGENERATE_TOL)), np.nan)
    psi = np.where(vanished, 0.0, w) * N[..., None]
    batch = psi.shape[:-1]
    psi = psi.reshape(batch + (2,) * n)
    nb = len(batch)
    for k in sorted(reversed_set):
        a, b = A[..., k - 1], B[..., k - 1]
        # rows: c(0), d(1); columns: v(0), u(1)
        m = np.stack([np.stack([b, a], -1), np.stack([a, -b], -1)], -2)
        axis = nb + k - 1
        moved = np.moveaxis(psi, axis, -1)
        mb = m.reshape(batch + (1,) * (n - 1) + (2, 2))
        psi = np.moveaxis((mb @ moved[..., None])[..., 0], -1, axis)
    return psi.reshape(batch + (2**n,))


def amplitudes_for_setting(
    spec: EntanglerSpec, coeffs: BasisCoeffs, setting: MeasurementSetting
) -> AmplitudeMap:
    _check_n(spec, coeffs)
    setting.validate(spec.n)
    normalization_constant(spec, coeffs)  # raises on degenerate input
    amps = _setting_amplitudes(spec, np.array(coeffs.A), np.array(coeffs.B), setting.reversed_set)
    return AmplitudeMap(setting, dict(zip(bitstrings(spec.n), amps.tolist())))


def p_success_analytic(spec: EntanglerSpec, coeffs: BasisCoeffs, interest: Iterable[str]) -> float:
    """Total probability of `interest` outcomes with every particle measured in {c,d}."""
    amap = amplitudes_for_setting(spec, coeffs, MeasurementSetting.all(spec.n))
    total = 0.0
    for s in interest:
        if len(s) != spec.n or s not in amap.entries:
            raise ValueError(f"{s!r} is not an outcome of {spec.n} particles")
        total += amap.entries[s] ** 2
    return total


def p_success_curve(spec: EntanglerSpec, interest: Iterable[str], thetas: np.ndarray) -> np.ndarray:
    """Vectorised p_success over shared angles; NaN at degenerate angles."""
    thetas = np.asarray(thetas, dtype=float)
    A = np.repeat(np.sin(thetas / 2)[:, None], spec.n, axis=1)
    B = np.repeat(np.cos(thetas / 2)[:, None], spec.n, axis=1)
    amps = _setting_amplitudes(spec, A, B, range(1, spec.n + 1))
    idx = [int(s, 2) for s in interest]
    return np.sum(amps[:, idx] ** 2, axis=-1)


def sweep_theta(
    spec: EntanglerSpec,
    interest: Iterable[str],
    start: float = 0.0,
    end: float = math.pi,
    step: float = math.pi / 18,
    fine: bool = False,
    fine_points: int = 10_000,
) -> SweepResult:
    """p_success over an inclusive grid of shared angles.

    Degenerate angles (post-selection impossible, e.g. theta=pi on a cycle)
    are reported as p=0 and listed in `degenerate`. With `fine`, the grid is
    `fine_points` uniform points and the peak gets a 3-point parabolic
    refinement.
    """
    if not (0.0 <= start < end <= math.pi + 1e-12):
        raise ValueError("need 0 <= start < end <= pi")
    if step <= 0:
        raise ValueError("step must be positive")
    interest = sorted(interest)
    if fine:
        grid = np.linspace(start, end, fine_points)
    else:
        count = int(math.floor((end - start) / step + 1e-9)) + 1
        grid = start + step * np.arange(count)
        if end - grid[-1] > 1e-9:
            grid = np.append(grid, end)
    grid = np.clip(grid, 0.0, math.pi)
    p = p_success_curve(spec, interest, grid)
    degenerate = grid[np.isnan(p)].tolist()
    p = np.nan_to_num(p, nan=0.0)
    i = int(np.argmax(p))
    best_theta, best_p = float(grid[i]), float(p[i])
    if fine and 0 < i < len(grid) - 1:
        y0, y1, y2 = p[i - 1], p[i], p[i + 1]
        denom = y0 - 2 * y1 + y2
        if denom < 0:
            h = grid[1] - grid[0]
            t = grid[i] + 0.5 * h * (y0 - y2) / denom
            pt = float(np.nan_to_num(p_success_curve(spec, interest, np.array([t]))[0]))
            if pt >= best_p:
                best_theta, best_p = float(t), pt
    return SweepResult(list(zip(grid.tolist(), p.tolist())), best_theta, best_p, degenerate)

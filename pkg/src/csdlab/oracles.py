"""Slow, direct-summation reference implementations of every norm.

Everything here is built from the definitions with explicit O(N^2) kernel
sums (no FFT), independent of the fast paths in :mod:`csdlab.spaces`, so
agreement between the two is a real check of conventions, normalisation,
and weights rather than of one code path against itself.
"""

from __future__ import annotations

import numpy as np

from .lattice import GridSpec
from .spaces import SpaceTimeBlock

__all__ = [
    "slow_forward_transform",
    "slow_sobolev_norm",
    "slow_besov_half_norm",
    "slow_spacetime_transform",
    "slow_z_norm",
    "slow_y_norm",
]


def _kernel_1d(grid: GridSpec) -> np.ndarray:
    x = grid.nodes()
    xi = np.pi * np.arange(-(grid.points // 2), grid.points // 2) / grid.half_width
    return np.exp(-1j * np.outer(xi, x))


def slow_forward_transform(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    """f_hat(xi_k) = h sum_j f(x_j) exp(-i xi_k x_j), by explicit kernel."""
    return grid.h * (_kernel_1d(grid) @ np.asarray(values, dtype=np.complex128))


def slow_sobolev_norm(grid: GridSpec, values: np.ndarray, s: float) -> float:
    coeffs = slow_forward_transform(grid, values)
    xi = np.pi * np.arange(-(grid.points // 2), grid.points // 2) / grid.half_width
    w2 = (1.0 + xi * xi) ** s
    return float(np.sqrt(np.sum(w2 * np.abs(coeffs) ** 2) / (2.0 * grid.half_width)))


def slow_besov_half_norm(grid: GridSpec, values: np.ndarray) -> float:
    coeffs = slow_forward_transform(grid, values)
    xi = np.pi * np.arange(-(grid.points // 2), grid.points // 2) / grid.half_width
    absxi = np.abs(xi)
    total = 0.0
    nb = 1
    while True:
        mask = absxi <= 1.0 if nb == 1 else (absxi > nb / 2) & (absxi <= nb)
        total += np.sqrt(nb) * np.sqrt(np.sum(np.abs(coeffs[mask]) ** 2) / (2.0 * grid.half_width))
        if nb >= absxi.max():
            break
        nb *= 2
    return float(total)


def slow_spacetime_transform(block: SpaceTimeBlock) -> np.ndarray:
    """Windowed 2-D transform by explicit kernels in both variables."""
    grid = block.grid
    M = block.times.shape[0]
    T_len = M * grid.dt
    tau = 2.0 * np.pi * np.arange(-(M // 2), M - (M // 2)) / T_len
    kernel_t = np.exp(-1j * np.outer(tau, block.times))
    kernel_x = _kernel_1d(grid)
    w = block.window[:, None] * block.samples
    return grid.dt * grid.h * (kernel_t @ w @ kernel_x.T)


def _slow_weights(block: SpaceTimeBlock, sign: int):
    grid = block.grid
    M = block.times.shape[0]
    T_len = M * grid.dt
    tau = 2.0 * np.pi * np.arange(-(M // 2), M - (M // 2)) / T_len
    xi = np.pi * np.arange(-(grid.points // 2), grid.points // 2) / grid.half_width
    TT, XX = np.meshgrid(tau, xi, indexing="ij")
    along = np.sqrt(1.0 + (TT - sign * XX) ** 2)
    across = np.sqrt(1.0 + (TT + sign * XX) ** 2)
    return along, across, xi, T_len


def slow_z_norm(block: SpaceTimeBlock, s: float, b: float, sign: int) -> float:
    ut = slow_spacetime_transform(block)
    along, across, _, T_len = _slow_weights(block, sign)
    total = 0.0
    M, N = ut.shape
    for mi in range(M):
        for ki in range(N):
            total += (along[mi, ki] ** (2 * s)) * (across[mi, ki] ** (2 * b)) * abs(ut[mi, ki]) ** 2
    return float(np.sqrt(total / (2.0 * block.grid.half_width * T_len)))


def slow_y_norm(block: SpaceTimeBlock, s: float, b: float, sign: int) -> float:
    ut = slow_spacetime_transform(block)
    _, across, xi, T_len = _slow_weights(block, sign)
    M, N = ut.shape
    total = 0.0
    for ki in range(N):
        inner = 0.0
        for mi in range(M):
            inner += (across[mi, ki] ** b) * abs(ut[mi, ki])
        inner /= T_len
        total += (1.0 + xi[ki] ** 2) ** s * inner * inner
    return float(np.sqrt(total / (2.0 * block.grid.half_width)))

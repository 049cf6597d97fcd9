"""Spectral norm toolkit: Sobolev, Besov, and windowed space-time norms.

Fourier convention, fixed project-wide and used by every norm here:

    f_hat(xi_k) = h * sum_j f(x_j) exp(-i xi_k x_j),   xi_k = pi k / L,

with k in [-N/2, N/2), and the Plancherel-consistent normalisation

    ||f||^2_{L^2} = h sum_j |f_j|^2 = (1/2L) sum_k |f_hat_k|^2.

Space-time blocks use the same convention in the time direction with the
block's periodic extent T_len = M*dt playing the role of 2L, i.e.
tau_m = 2 pi m / T_len and a per-bin measure 1/T_len on the tau axis.  With
that measure the embedding  sup_t ||u(t)||_{H^s} <= ||u||_{Y^{s,0}}  is an
exact finite-sum triangle inequality, and the Z norm at s = b = 0 is the
windowed space-time L^2 norm exactly.

The Japanese bracket is always <x> = (1 + x^2)^{1/2}, never max(1, |x|).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import GridSpec, LatticeError

__all__ = [
    "bracket",
    "forward_transform",
    "inverse_transform",
    "SpectralFunction",
    "l2_norm",
    "sobolev_norm",
    "dyadic_blocks",
    "lp_project",
    "besov_half_norm",
    "prec_condition",
    "bump",
    "block_window",
    "SpaceTimeBlock",
    "make_block",
    "spacetime_transform",
    "z_norm",
    "y_norm",
    "slice_sobolev_norms",
    "NormSpec",
    "random_sobolev_field",
]

# Roughness margin for random Sobolev data: coefficients decay like
# <xi>^-(s + 1/2 + RANDOM_FIELD_DELTA), which puts the field just above
# regularity s and keeps the H^s norm convergent under refinement.
RANDOM_FIELD_DELTA = 0.05


def bracket(x) -> np.ndarray:
    """Japanese bracket (1 + x^2)^(1/2)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sqrt(1.0 + x * x)


# ---------------------------------------------------------------------------
# 1-D transforms and norms


def _alternating_signs(k: np.ndarray) -> np.ndarray:
    # exp(i pi k) for integer k
    return np.where(k % 2 == 0, 1.0, -1.0)


def forward_transform(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    """Centered-spectrum transform f_hat(xi_k), k in [-N/2, N/2).

    Computed via FFT; the node offset x_0 = -L contributes the phase
    exp(i pi k) relative to the raw FFT.
    """
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != (grid.points,):
        raise LatticeError(f"expected shape ({grid.points},), got {values.shape}")
    F = np.fft.fftshift(np.fft.fft(values))
    return grid.h * _alternating_signs(grid.mode_numbers()) * F


def inverse_transform(grid: GridSpec, coefficients: np.ndarray) -> np.ndarray:
    """Inverse of :func:`forward_transform`: f_j = (1/2L) sum_k f_hat_k e^{i xi_k x_j}."""
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    if coefficients.shape != (grid.points,):
        raise LatticeError(f"expected shape ({grid.points},), got {coefficients.shape}")
    k = grid.mode_numbers()
    F = np.fft.ifftshift(_alternating_signs(k) * coefficients) / grid.h
    return np.fft.ifft(F)


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """A grid function held by its centered Fourier coefficients."""

    grid: GridSpec
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(self.coefficients, dtype=np.complex128)
        if c.shape != (self.grid.points,):
            raise LatticeError(f"coefficients shape {c.shape} != ({self.grid.points},)")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_values(cls, grid: GridSpec, values: np.ndarray) -> "SpectralFunction":
        return cls(grid, forward_transform(grid, values))

    def values(self) -> np.ndarray:
        return inverse_transform(self.grid, self.coefficients)

    def norm(self, s: float = 0.0) -> float:
        w = bracket(self.grid.frequencies()) ** s
        return float(np.sqrt(np.sum(np.abs(w * self.coefficients) ** 2) / (2.0 * self.grid.half_width)))


def l2_norm(grid: GridSpec, values: np.ndarray) -> float:
    """Discrete L^2 norm (h sum |f|^2)^(1/2)."""
    values = np.asarray(values)
    return float(np.sqrt(grid.h * np.sum(np.abs(values) ** 2)))


def sobolev_norm(grid: GridSpec, values: np.ndarray, s: float) -> float:
    """Discrete H^s norm ((1/2L) sum_k <xi_k>^{2s} |f_hat_k|^2)^(1/2)."""
    coeffs = forward_transform(grid, values)
    w = bracket(grid.frequencies()) ** s
    return float(np.sqrt(np.sum(np.abs(w * coeffs) ** 2) / (2.0 * grid.half_width)))


# ---------------------------------------------------------------------------
# Littlewood-Paley blocks and the Besov B^{1/2}_{2,1} norm


def dyadic_blocks(grid: GridSpec) -> tuple[int, ...]:
    """Dyadic block sizes 1, 2, 4, ... covering every lattice frequency.

    Block 1 holds |xi| <= 1, block Nb >= 2 holds Nb/2 < |xi| <= Nb
    (half-open edges, so the blocks partition the spectrum exactly).
    """
    xi_max = np.pi * (grid.points // 2) / grid.half_width
    blocks = [1]
    while blocks[-1] < xi_max:
        blocks.append(blocks[-1] * 2)
    return tuple(blocks)


def _block_mask(grid: GridSpec, n_block: int) -> np.ndarray:
    if n_block < 1 or (n_block & (n_block - 1)) != 0:
        raise LatticeError(f"block size must be a dyadic integer >= 1, got {n_block}")
    absxi = np.abs(grid.frequencies())
    if n_block == 1:
        return absxi <= 1.0
    return (absxi > n_block / 2) & (absxi <= n_block)


def lp_project(grid: GridSpec, values: np.ndarray, n_block: int) -> np.ndarray:
    """Frequency projection onto the dyadic block `n_block`."""
    coeffs = forward_transform(grid, values)
    return inverse_transform(grid, coeffs * _block_mask(grid, n_block))


def besov_half_norm(grid: GridSpec, values: np.ndarray) -> float:
    """Besov B^{1/2}_{2,1} norm: sum over dyadic blocks of Nb^(1/2) ||f_Nb||_{L^2}."""
    coeffs = forward_transform(grid, values)
    c2 = np.abs(coeffs) ** 2
    total = 0.0
    for nb in dyadic_blocks(grid):
        mask = _block_mask(grid, nb)
        block_l2 = np.sqrt(np.sum(c2[mask]) / (2.0 * grid.half_width))
        total += np.sqrt(nb) * block_l2
    return float(total)


def prec_condition(a: float, b: float, c: float) -> bool:
    """Exponent condition under which ||fg||_{H^c} <= C ||f||_{H^a} ||g||_{H^b}.

    True iff either

        a + b >= 0,  c <= min(a, b),  c < a + b - 1/2     or
        a + b > 0,   c < min(a, b),   c <= a + b - 1/2.
    """
    lo = min(a, b)
    branch1 = (a + b >= 0.0) and (c <= lo) and (c < a + b - 0.5)
    branch2 = (a + b > 0.0) and (c < lo) and (c <= a + b - 0.5)
    return branch1 or branch2


# ---------------------------------------------------------------------------
# Time windows


def bump(t) -> np.ndarray:
    """Canonical C^1 taper: 1 on |t| <= 1/2, cos^2 ramp on 1/2 < |t| <= 1, else 0.

    Used both as the block window profile and as the dilatable cutoff
    rho_T(t) = bump(t/T) in the dilation probes.
    """
    t = np.abs(np.asarray(t, dtype=np.float64))
    out = np.zeros_like(t)
    out[t <= 0.5] = 1.0
    ramp = (t > 0.5) & (t < 1.0)
    out[ramp] = np.cos(0.5 * np.pi * (2.0 * t[ramp] - 1.0)) ** 2
    return out


def block_window(times: np.ndarray) -> np.ndarray:
    """Default window for a block: the canonical taper mapped onto the times.

    Equals 1 on the middle half of the block and falls to zero exactly at
    the first and last sample.
    """
    times = np.asarray(times, dtype=np.float64)
    center = 0.5 * (times[0] + times[-1])
    half = 0.5 * (times[-1] - times[0])
    if half <= 0:
        raise LatticeError("block needs at least two distinct times")
    return bump((times - center) / half)


# ---------------------------------------------------------------------------
# Space-time blocks and the Z / Y norms


@dataclass(frozen=True, eq=False)
class SpaceTimeBlock:
    """Windowed (t, x) samples for space-time norm evaluation.

    ``samples[n, j]`` is the field at (times[n], x_j); ``window`` is a real
    length-M cutoff applied in time before transforming.  The canonical
    window (see :func:`block_window`) vanishes at both time ends; an
    all-ones window is allowed for oracle work on exact lattice modes.
    """

    grid: GridSpec
    times: np.ndarray
    samples: np.ndarray
    window: np.ndarray

    def __post_init__(self):
        times = np.ascontiguousarray(self.times, dtype=np.float64)
        samples = np.ascontiguousarray(self.samples, dtype=np.complex128)
        window = np.ascontiguousarray(self.window, dtype=np.float64)
        M = times.shape[0]
        if M < 8:
            raise LatticeError(f"block needs at least 8 time levels, got {M}")
        dt = self.grid.dt
        if not np.allclose(np.diff(times), dt, rtol=0.0, atol=1e-9 * max(dt, 1.0)):
            raise LatticeError("block times must be consecutive lattice times (spacing dt)")
        if samples.shape != (M, self.grid.points):
            raise LatticeError(f"samples shape {samples.shape} != ({M}, {self.grid.points})")
        if window.shape != (M,):
            raise LatticeError(f"window shape {window.shape} != ({M},)")
        for arr in (times, samples, window):
            arr.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "window", window)

    @property
    def time_extent(self) -> float:
        """Periodic time extent T_len = M*dt."""
        return self.times.shape[0] * self.grid.dt

    def tau(self) -> np.ndarray:
        """Time frequencies tau_m = 2 pi m / T_len, m in [-M/2, M/2)."""
        M = self.times.shape[0]
        m = np.arange(-(M // 2), M - (M // 2))
        return 2.0 * np.pi * m / self.time_extent

    def flat_times(self) -> np.ndarray:
        """Indices where the window equals 1 exactly."""
        return np.flatnonzero(self.window == 1.0)


def _tau_frequencies(block: SpaceTimeBlock) -> np.ndarray:
    return block.tau()


def make_block(grid: GridSpec, times: np.ndarray, samples: np.ndarray,
               window: np.ndarray | None = None) -> SpaceTimeBlock:
    """Build a block; the default window is the canonical taper."""
    times = np.asarray(times, dtype=np.float64)
    if window is None:
        window = block_window(times)
    return SpaceTimeBlock(grid=grid, times=times, samples=samples, window=window)


def spacetime_transform(block: SpaceTimeBlock) -> np.ndarray:
    """Windowed space-time transform on the block.

        u_tilde(tau_m, xi_k) = dt*h * sum_{n,j} w_n u(t_n, x_j)
                               exp(-i (tau_m t_n + xi_k x_j))

    returned as an (M, N) array over centered (m, k).
    """
    grid = block.grid
    M = block.times.shape[0]
    w = block.window[:, None] * block.samples
    F = np.fft.fftshift(np.fft.fft2(w))
    # Phases from t_0 != 0 and x_0 = -L relative to the raw FFT kernels.
    tau = _tau_frequencies(block)
    k = grid.mode_numbers()
    phase_t = np.exp(-1j * tau * block.times[0])
    phase_x = _alternating_signs(k)
    return grid.dt * grid.h * phase_t[:, None] * phase_x[None, :] * F


def _zy_weights(block: SpaceTimeBlock, sign: int) -> tuple[np.ndarray, np.ndarray]:
    """Meshes of <tau -+ xi> and <tau +- xi> for the given sign."""
    if sign not in (+1, -1):
        raise LatticeError(f"sign must be +1 or -1, got {sign}")
    tau = _tau_frequencies(block)[:, None]
    xi = block.grid.frequencies()[None, :]
    along = bracket(tau - sign * xi)   # <tau -+ xi>: distance weight transverse to the packet
    across = bracket(tau + sign * xi)  # <tau +- xi>: distance from the sign's characteristic
    return along, across


def z_norm(block: SpaceTimeBlock, s: float, b: float, sign: int) -> float:
    """Windowed Z^{s,b} norm: || <tau -+ xi>^s <tau +- xi>^b u_tilde ||_{L^2_{tau,xi}}.

    At s = b = 0 this is exactly the window-weighted space-time L^2 norm
    (discrete Plancherel).
    """
    along, across = _zy_weights(block, sign)
    ut = spacetime_transform(block)
    weighted = (along**s) * (across**b) * np.abs(ut)
    measure = 1.0 / (2.0 * block.grid.half_width * block.time_extent)
    return float(np.sqrt(measure * np.sum(weighted**2)))


def y_norm(block: SpaceTimeBlock, s: float, b: float, sign: int) -> float:
    """Windowed Y^{s,b} norm: || <xi>^s <tau +- xi>^b u_tilde ||_{L^2_xi L^1_tau}.

    The L^1 in tau uses the bin measure 1/T_len, which makes
    sup_t ||u(t)||_{H^s} <= y_norm(block, s, 0, sign) exact at times where
    the window equals 1.
    """
    _, across = _zy_weights(block, sign)
    ut = spacetime_transform(block)
    per_xi = np.sum((across**b) * np.abs(ut), axis=0) / block.time_extent
    w = bracket(block.grid.frequencies()) ** s
    return float(np.sqrt(np.sum((w * per_xi) ** 2) / (2.0 * block.grid.half_width)))


def slice_sobolev_norms(block: SpaceTimeBlock, s: float, windowed: bool = True) -> np.ndarray:
    """H^s norm of each time slice (windowed by default)."""
    grid = block.grid
    w = bracket(grid.frequencies()) ** s
    out = np.empty(block.times.shape[0])
    for n in range(block.times.shape[0]):
        row = block.samples[n]
        if windowed:
            row = block.window[n] * row
        coeffs = forward_transform(grid, row)
        out[n] = np.sqrt(np.sum(np.abs(w * coeffs) ** 2) / (2.0 * grid.half_width))
    return out


# ---------------------------------------------------------------------------
# Norm descriptors


@dataclass(frozen=True)
class NormSpec:
    """Descriptor for one norm family, validated at construction.

    family is one of Hs, Besov_half, Z, Y; b and sign are present exactly
    for the space-time families Z and Y.
    """

    family: str
    s: float = 0.0
    b: float | None = None
    sign: int | None = None

    _FAMILIES = ("Hs", "Besov_half", "Z", "Y")

    def __post_init__(self):
        if self.family not in self._FAMILIES:
            raise LatticeError(f"unknown norm family {self.family!r}")
        spacetime = self.family in ("Z", "Y")
        if spacetime and (self.b is None or self.sign is None):
            raise LatticeError(f"{self.family} norm needs both b and sign")
        if not spacetime and (self.b is not None or self.sign is not None):
            raise LatticeError(f"{self.family} norm takes neither b nor sign")
        if self.sign is not None and self.sign not in (+1, -1):
            raise LatticeError(f"sign must be +1 or -1, got {self.sign}")

    def evaluate(self, target, grid: GridSpec | None = None) -> float:
        if self.family == "Hs":
            return sobolev_norm(grid or target.grid, target, self.s)
        if self.family == "Besov_half":
            return besov_half_norm(grid or target.grid, target)
        if self.family == "Z":
            return z_norm(target, self.s, self.b, self.sign)
        return y_norm(target, self.s, self.b, self.sign)


# ---------------------------------------------------------------------------
# Random rough data


def random_sobolev_field(grid: GridSpec, s: float, seed, target_norm: float = 1.0,
                         hermitian: bool = False) -> np.ndarray:
    """Random field at regularity s: coefficients <xi_k>^-(s+1/2+delta) r_k.

    The r_k are independent standard complex Gaussians drawn in order of
    increasing |k|, so refining the grid with the same seed keeps the low
    modes identical (useful for refinement studies).  The Nyquist mode is
    always zeroed.  With ``hermitian=True`` the spectrum is symmetrised,
    r_{-k} = conj(r_k) with r_0 real, producing a real-valued field.

    The output is rescaled so its discrete H^s norm equals ``target_norm``.
    """
    N = grid.points
    rng = np.random.default_rng(seed)
    half = N // 2
    coeffs = np.zeros(N, dtype=np.complex128)
    k_index = grid.mode_numbers()
    offset = half  # position of k = 0 in the centered layout

    def draw() -> complex:
        re, im = rng.standard_normal(2)
        return (re + 1j * im) / np.sqrt(2.0)

    r0 = draw()
    coeffs[offset] = r0.real * np.sqrt(2.0) if hermitian else r0
    for k in range(1, half):  # |k| = N/2 (Nyquist) stays zero
        rk = draw()
        r_neg = np.conj(rk) if hermitian else draw()
        coeffs[offset + k] = rk
        coeffs[offset - k] = r_neg

    xi = np.pi * k_index / grid.half_width
    coeffs *= bracket(xi) ** (-(s + 0.5 + RANDOM_FIELD_DELTA))

    values = inverse_transform(grid, coeffs)
    if hermitian:
        values = values.real.astype(np.complex128)
    current = sobolev_norm(grid, values, s)
    if current == 0.0:
        raise LatticeError("degenerate random field (zero norm)")
    return values * (target_norm / current)

"""Randomized ratio probes for the product, dilation, energy, and bilinear
estimates.

Each probe measures ratios of the form ||output||/(product of input norms)
over a seeded ensemble and aggregates quantiles per resolution (or per
dilation parameter).  Assertions are made by comparing quantiles across
resolution doublings, never against an absolute constant: boundedness under
refinement is the falsifiable content of an estimate with an implicit
constant.  A probe asserts only when the exponent hypotheses of the
corresponding estimate hold (checked through :func:`csdlab.spaces.prec_condition`
and the explicit side conditions); otherwise the report is marked
exploratory and can be used to map failure boundaries.

Ensemble design notes:

* Stationary random data (independent Fourier coefficients) cannot witness
  the failure of an L^2-type product bound: after normalisation the mean
  ratio of a translation-invariant ensemble is resolution-independent.  The
  product probe therefore dresses a fixed fraction (1 in 4) of its pairs
  with a shared concentration envelope whose width tracks the grid spacing.
  Under a true product estimate those members stay bounded (and sink in the
  ensemble), while for exponents violating the scaling condition their
  ratios grow like h^{-1/2}, which is what the q90 statistic detects.
* The dilation probe draws scale-covariant data: a spectrally dilated
  random field under a dilated envelope, with the same Gaussian draws for
  every dilation parameter, so the measured spread isolates the window's
  T-dependence.

Determinism: every member derives its generator from (seed, member index,
stream), so identical seeds and parameters reproduce reports bit for bit,
and members are independent (safe to fan out; reports are assembled in
member order).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .lattice import GridSpec, LatticeError, make_grid
from .spaces import (SpaceTimeBlock, besov_half_norm, bracket, bump, dyadic_blocks,
                     forward_transform, inverse_transform, lp_project, make_block,
                     prec_condition, sobolev_norm, random_sobolev_field, y_norm, z_norm)

__all__ = [
    "ProbeError",
    "ProbeRow",
    "ProbeReport",
    "random_function",
    "product_ratio",
    "trichotomy_split",
    "besov_product_probe",
    "dilation_probe",
    "solve_forced_transport",
    "random_forcing_block",
    "EnergyRecord",
    "energy_probe",
    "BilinearExponents",
    "bilinear_probe",
    "write_report_csv",
    "format_report",
]

WITNESS_STRIDE = 4          # every 4th product pair carries the envelope
WITNESS_WIDTH_CELLS = 3.0   # envelope width in units of the grid spacing
LL_FACTOR = 8               # "much smaller" threshold in the trichotomy: M1 <= M2/8


class ProbeError(ValueError):
    """Invalid probe parameters."""


@dataclass(frozen=True)
class ProbeRow:
    """Quantile statistics for one (resolution | dilation) slot."""

    label: str
    points: int
    ensemble: int
    q50: float
    q90: float
    ratio_max: float
    seed: int

    def __post_init__(self):
        if self.ensemble < 30:
            raise ProbeError(f"ensemble size must be >= 30, got {self.ensemble}")
        for name in ("q50", "q90", "ratio_max"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ProbeError(f"{name} must be finite and nonnegative, got {v}")


@dataclass(frozen=True)
class ProbeReport:
    """Ensemble statistics for one probe at fixed exponents.

    ``assert_mode`` records whether the estimate's hypotheses held; when
    False the report is exploratory and no boundedness claim is attached.
    ``extras`` carries probe-specific scalars (e.g. trichotomy residuals).
    """

    probe: str
    exponents: tuple
    assert_mode: bool
    rows: tuple[ProbeRow, ...]
    extras: dict = field(default_factory=dict)

    def row(self, label: str) -> ProbeRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)


def _quantiles(ratios: np.ndarray) -> tuple[float, float, float]:
    return (float(np.quantile(ratios, 0.5)),
            float(np.quantile(ratios, 0.9)),
            float(np.max(ratios)))


def random_function(grid: GridSpec, s: float, seed) -> np.ndarray:
    """Random rough field at regularity s with unit discrete H^s norm."""
    return random_sobolev_field(grid, s, seed, target_norm=1.0)


# ---------------------------------------------------------------------------
# Sobolev product probe


def _witness_envelope(grid: GridSpec, rng: np.random.Generator) -> np.ndarray:
    """Shared concentration envelope at a random center, width ~ grid spacing."""
    x0 = rng.uniform(-grid.half_width, grid.half_width)
    x = grid.nodes()
    L = grid.half_width
    dist = np.abs((x - x0 + L) % (2.0 * L) - L)  # periodic distance to x0
    w = WITNESS_WIDTH_CELLS * grid.h
    return np.exp(-(dist**2) / (2.0 * w * w))


def _product_pair(grid: GridSpec, a: float, b: float, seed: int, i: int):
    f = random_function(grid, a, [seed, i, 0])
    g = random_function(grid, b, [seed, i, 1])
    if i % WITNESS_STRIDE == 0:
        env = _witness_envelope(grid, np.random.default_rng([seed, i, 2]))
        f = f * env
        g = g * env
    return f, g


def product_ratio(a: float, b: float, c: float, grid: GridSpec,
                  ensemble: int = 100, seed: int = 0) -> ProbeReport:
    """Ratios ||fg||_{H^c} / (||f||_{H^a} ||g||_{H^b}) at resolutions N and 2N.

    The same member seeds are used at both resolutions (coefficients are
    drawn in |k| order, so the coarse spectrum is shared), which keeps the
    quantile comparison a refinement statement rather than a reseeding.
    """
    if ensemble < 30:
        raise ProbeError(f"ensemble must be >= 30, got {ensemble}")
    rows = []
    for g_res in (grid, grid.refine()):
        ratios = np.empty(ensemble)
        for i in range(ensemble):
            f, g = _product_pair(g_res, a, b, seed, i)
            ratios[i] = sobolev_norm(g_res, f * g, c) / (
                sobolev_norm(g_res, f, a) * sobolev_norm(g_res, g, b))
        q50, q90, mx = _quantiles(ratios)
        rows.append(ProbeRow(label=f"N={g_res.points}", points=g_res.points,
                             ensemble=ensemble, q50=q50, q90=q90, ratio_max=mx, seed=seed))
    return ProbeReport(probe="product_ratio", exponents=(a, b, c),
                       assert_mode=prec_condition(a, b, c), rows=tuple(rows))


# ---------------------------------------------------------------------------
# Besov product probe and the frequency trichotomy


def trichotomy_split(grid: GridSpec, f: np.ndarray, g: np.ndarray):
    """Exact low-high / high-low / high-high split of the product fg.

    Dyadic block pairs (M1, M2) are classified by the fixed factor 8:
    low-high means M1 <= M2/8, high-low symmetrically, everything else is
    high-high.  The three terms sum to fg exactly because the blocks
    partition the lattice spectrum.
    """
    blocks = dyadic_blocks(grid)
    f_blk = [lp_project(grid, f, nb) for nb in blocks]
    g_blk = [lp_project(grid, g, nb) for nb in blocks]
    low_high = np.zeros_like(f)
    high_low = np.zeros_like(f)
    high_high = np.zeros_like(f)
    for i1, m1 in enumerate(blocks):
        for i2, m2 in enumerate(blocks):
            term = f_blk[i1] * g_blk[i2]
            if m1 * LL_FACTOR <= m2:
                low_high = low_high + term
            elif m2 * LL_FACTOR <= m1:
                high_low = high_low + term
            else:
                high_high = high_high + term
    return low_high, high_low, high_high


def besov_product_probe(s: float, grid: GridSpec, ensemble: int = 100,
                        seed: int = 0) -> ProbeReport:
    """Ratios ||fg||_{H^s} / (||f||_{B^{1/2}_{2,1}} ||g||_{H^s}), -1/2 < s < 1/2.

    Also verifies the trichotomy reconstruction (exact on the lattice) and
    reports the mean share of ||fg||^2_{H^s} carried by each of the three
    interaction terms.
    """
    if not (-0.5 < s < 0.5):
        raise ProbeError(f"besov product probe needs -1/2 < s < 1/2, got {s}")
    if ensemble < 30:
        raise ProbeError(f"ensemble must be >= 30, got {ensemble}")
    rows = []
    extras: dict = {}
    for g_res in (grid, grid.refine()):
        ratios = np.empty(ensemble)
        recon_worst = 0.0
        shares = np.zeros(3)
        for i in range(ensemble):
            # The Besov factor is drawn well above regularity 1/2 so its
            # dyadic sum converges geometrically; at exactly 1/2 the ell^1
            # tail decays too slowly for refinement-stable ratios.
            f = random_function(g_res, 1.0, [seed, i, 0])
            g = random_function(g_res, s, [seed, i, 1])
            fg = f * g
            ratios[i] = sobolev_norm(g_res, fg, s) / (
                besov_half_norm(g_res, f) * sobolev_norm(g_res, g, s))
            lh, hl, hh = trichotomy_split(g_res, f, g)
            resid = np.max(np.abs(forward_transform(g_res, lh + hl + hh - fg)))
            scale = max(np.max(np.abs(forward_transform(g_res, fg))), 1e-300)
            recon_worst = max(recon_worst, float(resid / scale))
            total = sobolev_norm(g_res, fg, s) ** 2
            if total > 0:
                shares += np.array([sobolev_norm(g_res, t, s) ** 2 / total
                                    for t in (lh, hl, hh)])
        q50, q90, mx = _quantiles(ratios)
        rows.append(ProbeRow(label=f"N={g_res.points}", points=g_res.points,
                             ensemble=ensemble, q50=q50, q90=q90, ratio_max=mx, seed=seed))
        extras[f"trichotomy_residual_N={g_res.points}"] = recon_worst
        for name, val in zip(("low_high", "high_low", "high_high"), shares / ensemble):
            extras[f"share_{name}_N={g_res.points}"] = float(val)
    return ProbeReport(probe="besov_product", exponents=(s,), assert_mode=True,
                       rows=tuple(rows), extras=extras)


# ---------------------------------------------------------------------------
# Dilation probe


def dilation_ratio(grid: GridSpec, f: np.ndarray, s: float, T: float) -> float:
    """||rho_T f||_{H^s} / ||f||_{H^s} with rho_T(x) = bump(x/T)."""
    rho = bump(grid.nodes() / T)
    return sobolev_norm(grid, rho * f, s) / sobolev_norm(grid, f, s)


def _dilated_member(grid: GridSpec, s: float, T: float, seed: int, i: int) -> np.ndarray:
    """Scale-covariant random data: dilated spectrum under a dilated envelope.

    The Gaussian draws and the (relative) envelope jitter are shared across
    T values, so each member is "the same function viewed at scale T" up to
    the lattice cutoff.
    """
    rng = np.random.default_rng([seed, i])
    r = (rng.standard_normal(grid.points) + 1j * rng.standard_normal(grid.points)) / np.sqrt(2.0)
    jitter = rng.uniform(-0.5, 0.5)
    profile = bracket(T * grid.frequencies()) ** (-(s + 0.55))
    f = inverse_transform(grid, profile * r)
    x = grid.nodes()
    return f * np.exp(-(((x - jitter * T) / T) ** 2) / 2.0)


def dilation_probe(s: float, T_list, grid: GridSpec, ensemble: int = 100,
                   seed: int = 0) -> ProbeReport:
    """Per-T ratio statistics for the dilated cutoff multiplier on H^s.

    Valid for s in (-1/2, 1/2) and T in (0, 1]; each T must span at least
    8 grid cells so the taper is resolved.  The spread of the per-T maxima
    is reported in ``extras["max_spread"]``; the T-uniformity assertion made
    by the scenarios is spread <= 0.20.
    """
    if not (-0.5 < s < 0.5):
        raise ProbeError(f"dilation probe needs -1/2 < s < 1/2, got {s}")
    T_list = [float(T) for T in T_list]
    for T in T_list:
        if not (0.0 < T <= 1.0):
            raise ProbeError(f"dilation parameter must lie in (0, 1], got {T}")
        if T < 8 * grid.h:
            raise ProbeError(f"T={T} under-resolved on this grid (needs T >= 8h = {8 * grid.h})")
    if ensemble < 30:
        raise ProbeError(f"ensemble must be >= 30, got {ensemble}")
    rows = []
    for T in T_list:
        ratios = np.empty(ensemble)
        for i in range(ensemble):
            f = _dilated_member(grid, s, T, seed, i)
            ratios[i] = dilation_ratio(grid, f, s, T)
        q50, q90, mx = _quantiles(ratios)
        rows.append(ProbeRow(label=f"T={T:g}", points=grid.points, ensemble=ensemble,
                             q50=q50, q90=q90, ratio_max=mx, seed=seed))
    maxima = [r.ratio_max for r in rows]
    spread = max(maxima) / min(maxima) - 1.0
    return ProbeReport(probe="dilation", exponents=(s,), assert_mode=True,
                       rows=tuple(rows), extras={"max_spread": float(spread)})


# ---------------------------------------------------------------------------
# Energy probe


def solve_forced_transport(grid: GridSpec, f: np.ndarray, forcing: np.ndarray,
                           times: np.ndarray, sign: int) -> np.ndarray:
    """Solve d_t u +- d_x u = F on the block lattice with u = f at t = 0.

    ``times`` are consecutive lattice times containing 0; the solve marches
    both forward and backward from the t = 0 row with the trapezoidal rule
    along the characteristics (forcing known at every node, no predictor).
    """
    if sign not in (+1, -1):
        raise ProbeError(f"sign must be +1 or -1, got {sign}")
    times = np.asarray(times, dtype=np.float64)
    dt = grid.dt
    i0 = int(np.argmin(np.abs(times)))
    if abs(times[i0]) > 1e-9 * max(1.0, abs(times[-1])):
        raise ProbeError("times must contain t = 0")
    M = times.shape[0]
    u = np.empty((M, grid.points), dtype=np.complex128)
    u[i0] = np.asarray(f, dtype=np.complex128)
    fwd = (lambda a: np.roll(a, 1)) if sign > 0 else (lambda a: np.roll(a, -1))
    bwd = (lambda a: np.roll(a, -1)) if sign > 0 else (lambda a: np.roll(a, 1))
    for n in range(i0, M - 1):
        u[n + 1] = fwd(u[n] + 0.5 * dt * forcing[n]) + 0.5 * dt * forcing[n + 1]
    for n in range(i0, 0, -1):
        u[n - 1] = bwd(u[n] - 0.5 * dt * forcing[n]) - 0.5 * dt * forcing[n - 1]
    return u


def _block_values(grid: GridSpec, times: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Samples from centered space-time coefficients (inverse of the block transform)."""
    M = times.shape[0]
    T_len = M * grid.dt
    tau = 2.0 * np.pi * np.arange(-(M // 2), M - (M // 2)) / T_len
    k = grid.mode_numbers()
    phase_t = np.exp(1j * tau * times[0])
    phase_x = np.where(k % 2 == 0, 1.0, -1.0)
    F = np.fft.ifftshift(phase_t[:, None] * phase_x[None, :] * coeffs) / (grid.dt * grid.h)
    return np.fft.ifft2(F)


def random_forcing_block(grid: GridSpec, times: np.ndarray, s: float, b: float,
                         sign: int, seed, modulation_band: tuple[float, float] | None = None
                         ) -> np.ndarray:
    """Random space-time forcing with spectrum <xi>^-(s+0.55) <tau+-xi>^-(b-1+0.55) r.

    ``modulation_band = (lo, hi)`` restricts |tau +- xi| to [lo, hi]; use a
    band hugging zero for resonant forcing (riding the sign's
    characteristic) and a band away from zero for a non-resonant control.
    """
    times = np.asarray(times, dtype=np.float64)
    M = times.shape[0]
    T_len = M * grid.dt
    rng = np.random.default_rng(seed)
    r = (rng.standard_normal((M, grid.points))
         + 1j * rng.standard_normal((M, grid.points))) / np.sqrt(2.0)
    tau = 2.0 * np.pi * np.arange(-(M // 2), M - (M // 2)) / T_len
    xi = grid.frequencies()
    mod = tau[:, None] + sign * xi[None, :]
    coeffs = r * (bracket(xi[None, :]) ** (-(s + 0.55))) * (bracket(mod) ** (-(b - 1.0) - 0.55))
    if modulation_band is not None:
        lo, hi = modulation_band
        coeffs = np.where((np.abs(mod) >= lo) & (np.abs(mod) <= hi), coeffs, 0.0)
    return _block_values(grid, times, coeffs)


@dataclass(frozen=True)
class EnergyRecord:
    """One forced-transport energy ratio.  Trend data only: the true
    right-hand side is an infimum over extensions of the forcing, and the
    windowed extension in hand need not dominate it, so no constant is
    asserted from these records."""

    lhs_z: float
    lhs_y: float
    rhs_data: float
    rhs_z: float
    rhs_y: float

    @property
    def ratio(self) -> float:
        return (self.lhs_z + self.lhs_y) / (self.rhs_data + self.rhs_z + self.rhs_y)


def energy_probe(grid: GridSpec, f: np.ndarray, forcing: np.ndarray,
                 times: np.ndarray, s: float, b: float, sign: int,
                 T_window: float = 1.0) -> EnergyRecord:
    """Solve the forced transport equation and compare block norms.

    LHS: z_norm(u; s, b) + y_norm(u; s, 0); RHS: ||f||_{H^s} plus
    z_norm(F; s, b-1) + y_norm(F; s, -1), all with the window
    bump(t / (2 T_window)), which equals 1 on |t| <= T_window.
    Requires b in (1/2, 1).
    """
    if not (0.5 < b < 1.0):
        raise ProbeError(f"energy probe needs b in (1/2, 1), got {b}")
    times = np.asarray(times, dtype=np.float64)
    u = solve_forced_transport(grid, f, forcing, times, sign)
    window = bump(times / (2.0 * T_window))
    ub = make_block(grid, times, u, window=window)
    fb = make_block(grid, times, forcing, window=window)
    return EnergyRecord(
        lhs_z=z_norm(ub, s, b, sign),
        lhs_y=y_norm(ub, s, 0.0, sign),
        rhs_data=sobolev_norm(grid, u[int(np.argmin(np.abs(times)))], s),
        rhs_z=z_norm(fb, s, b - 1.0, sign),
        rhs_y=y_norm(fb, s, -1.0, sign),
    )


# ---------------------------------------------------------------------------
# Bilinear probe


@dataclass(frozen=True)
class BilinearExponents:
    """Exponent tuple for the bilinear space-time estimates.

    ``b`` is the output modulation exponent (Z-output form only); ``a0`` and
    ``b0`` are the auxiliary exponents witnessing the hypotheses of the
    Y-output form.
    """

    s: float
    s1: float
    b1: float
    s2: float
    b2: float
    b: float | None = None
    a0: float | None = None
    b0: float | None = None

    def as_tuple(self) -> tuple:
        return (self.s, self.s1, self.b1, self.s2, self.b2, self.b, self.a0, self.b0)


def _bilinear_hypotheses(kind: str, e: BilinearExponents) -> bool:
    side = (e.s1 + e.b1 > -0.5) and (e.s2 + e.b2 > -0.5)
    if kind == "Y_est":
        if e.a0 is None or e.b0 is None:
            return False
        return (side
                and prec_condition(e.s1, e.b2, e.a0)
                and prec_condition(e.s2, e.b1, e.b0)
                and prec_condition(e.a0, e.b0 + 1.0, e.s))
    if kind == "Z_est":
        if e.b is None:
            return False
        return prec_condition(e.s1, e.b2, e.s) and prec_condition(e.b1, e.s2, e.b)
    raise ProbeError(f"unknown bilinear kind {kind!r}; expected Y_est or Z_est")


def _characteristic_packet(grid: GridSpec, n_steps: int, mover: int,
                           seed_parts, profile_modes: int = 8,
                           carrier_band: tuple[float, float] = (0.125, 0.1875)) -> np.ndarray:
    """Exactly transported packet: low-pass random profile times a carrier.

    ``mover`` = +1 rides x - t (right), -1 rides x + t (left).  The carrier
    mode is drawn from ``carrier_band`` as a fraction of N, so its physical
    frequency is resolution-independent.
    """
    rng = np.random.default_rng(seed_parts)
    N = grid.points
    coeffs = np.zeros(N, dtype=np.complex128)
    half = N // 2
    lo = int(round(carrier_band[0] * N))
    hi = int(round(carrier_band[1] * N))
    k0 = lo + int(np.floor(rng.uniform() * (hi - lo + 1)))
    for k in range(-profile_modes, profile_modes + 1):
        re, im = rng.standard_normal(2)
        coeffs[half + k] = (re + 1j * im) / np.sqrt(2.0)
    profile = inverse_transform(grid, coeffs)
    q = profile * np.exp(1j * (np.pi * k0 / grid.half_width) * grid.nodes())
    rows = np.empty((n_steps, N), dtype=np.complex128)
    for n in range(n_steps):
        rows[n] = np.roll(q, n * mover)
    return rows


def bilinear_probe(kind: str, exponents: BilinearExponents, grid: GridSpec,
                   ensemble: int = 100, seed: int = 0, block_steps: int | None = None,
                   pairing: str = "opposite", refine: bool = True) -> ProbeReport:
    """Ratio statistics for the bilinear estimates on characteristic packets.

    ``pairing="opposite"`` is the estimate's own configuration: u rides the
    output sign's characteristic, v the opposite one, and the denominators
    are the natural Z norms of each factor.  ``pairing="same"`` is the null
    -structure control: both factors ride one characteristic family and all
    signs follow it; the product then sits on the characteristic where the
    output's modulation weight gives no gain, so the same exponents produce
    visibly larger ratios.

    Hypothesis failure downgrades the report to exploratory (it still runs).
    """
    if pairing not in ("opposite", "same"):
        raise ProbeError(f"unknown pairing {pairing!r}")
    if ensemble < 30:
        raise ProbeError(f"ensemble must be >= 30, got {ensemble}")
    e = exponents
    assert_mode = _bilinear_hypotheses(kind, e)
    out_b = -1.0 if kind == "Y_est" else float(e.b)
    rows = []
    grids = (grid, grid.refine()) if refine else (grid,)
    for g_res in grids:
        M = block_steps if block_steps is not None else g_res.points // 4
        M = M if g_res is grid else 2 * M
        times = g_res.dt * np.arange(M)
        ratios = np.empty(ensemble)
        for i in range(ensemble):
            if pairing == "opposite":
                sign_u, sign_v = +1, -1
            else:
                sign_u, sign_v = -1, -1
            u = _characteristic_packet(g_res, M, sign_u, [seed, i, 0])
            v = _characteristic_packet(g_res, M, sign_v, [seed, i, 1])
            ub = make_block(g_res, times, u)
            vb = make_block(g_res, times, v)
            pb = make_block(g_res, times, u * v)
            if kind == "Y_est":
                num = y_norm(pb, e.s, out_b, sign_u)
            else:
                num = z_norm(pb, e.s, out_b, sign_u)
            den = z_norm(ub, e.s1, e.b1, sign_u) * z_norm(vb, e.s2, e.b2, sign_v)
            ratios[i] = num / den
        q50, q90, mx = _quantiles(ratios)
        rows.append(ProbeRow(label=f"N={g_res.points}", points=g_res.points,
                             ensemble=ensemble, q50=q50, q90=q90, ratio_max=mx, seed=seed))
    return ProbeReport(probe=f"bilinear_{kind}_{pairing}", exponents=e.as_tuple(),
                       assert_mode=assert_mode, rows=tuple(rows))


# ---------------------------------------------------------------------------
# Report serialisation


def write_report_csv(report: ProbeReport, path: str | Path) -> None:
    """One CSV row per (probe, exponents, slot)."""
    with Path(path).open("w") as fh:
        fh.write("# schema=1\n")
        fh.write("probe,exponents,label,points,ensemble,q50,q90,max,seed,assert_mode\n")
        exps = ";".join("" if v is None else repr(float(v)) for v in report.exponents)
        for r in report.rows:
            fh.write(f"{report.probe},{exps},{r.label},{r.points},{r.ensemble},"
                     f"{r.q50!r},{r.q90!r},{r.ratio_max!r},{r.seed},{int(report.assert_mode)}\n")


def format_report(report: ProbeReport) -> str:
    """Human-readable table."""
    mode = "assert" if report.assert_mode else "exploratory"
    lines = [f"probe {report.probe}  exponents={report.exponents}  [{mode}]"]
    lines.append(f"  {'slot':<12} {'N':>6} {'ens':>5} {'q50':>12} {'q90':>12} {'max':>12}")
    for r in report.rows:
        lines.append(f"  {r.label:<12} {r.points:>6} {r.ensemble:>5} "
                     f"{r.q50:>12.5g} {r.q90:>12.5g} {r.ratio_max:>12.5g}")
    for key, val in report.extras.items():
        lines.append(f"  {key} = {val:.5g}")
    return "\n".join(lines)

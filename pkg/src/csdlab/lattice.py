"""Periodic light-cone lattice, field containers, and initial data.

The Chern-Simons-Dirac system on one space dimension is evolved here in its
null-coordinate form.  With spinor components psi_1, psi_2 and gauge
components A_0, A_1 we work with

    u_+ = psi_1 + psi_2        u_- = psi_1 - psi_2        (complex)
    A_+ = A_0 - A_1            A_- = A_0 + A_1            (real)

which transport along the characteristics x - t and x + t respectively.
Fields live on a uniform periodic grid over [-L, L) with N nodes, and the
time step is locked to the grid spacing (dt = h, unit CFL) so that every
characteristic passes exactly through lattice nodes.  Transport is then an
index shift with no dispersion error; all discretisation error comes from
the source-term quadrature in the solver.

Periodic truncation: the continuum problem lives on the whole line, but the
propagation speed is exactly 1, so a run with data supported in
[-R, R] agrees with the whole-line evolution as long as T < L - R.  Pick
the half width L accordingly; it is exposed on :class:`GridSpec` for that
purpose.

All floating point is double precision (float64 / complex128).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

__all__ = [
    "LatticeError",
    "GridSpec",
    "DataSpec",
    "FieldState",
    "make_grid",
    "make_state",
    "to_physical",
    "from_physical",
    "charge",
    "load_field",
    "save_field",
]

# Imaginary residue on gauge constructors above this size triggers a warning
# before being dropped.
IMAG_DROP_TOL = 1e-12


class LatticeError(ValueError):
    """Invalid grid, data-spec, or field-state parameters."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic spatial lattice with unit-CFL time step.

    Node j sits at x_j = -L + j*h with h = 2L/N, and dt = h always.  The
    time step is deliberately not configurable: with dt = h the
    characteristics x +- t connect lattice nodes exactly.
    """

    half_width: float
    points: int

    def __post_init__(self):
        L = float(self.half_width)
        N = self.points
        if not np.isfinite(L) or L <= 0.0:
            raise LatticeError(f"grid half width must be positive, got {self.half_width}")
        if not isinstance(N, (int, np.integer)):
            raise LatticeError(f"grid point count must be an integer, got {N!r}")
        if N % 2 != 0:
            raise LatticeError(f"grid point count must be even, got N={N}")
        if N < 8:
            raise LatticeError(f"grid too small: need N >= 8, got N={N}")
        object.__setattr__(self, "half_width", L)
        object.__setattr__(self, "points", int(N))

    @property
    def h(self) -> float:
        """Grid spacing 2L/N."""
        return 2.0 * self.half_width / self.points

    @property
    def dt(self) -> float:
        """Time step; equal to h by construction (unit CFL)."""
        return self.h

    def nodes(self) -> np.ndarray:
        """Lattice nodes x_j = -L + j*h, j = 0..N-1."""
        return -self.half_width + self.h * np.arange(self.points)

    def mode_numbers(self) -> np.ndarray:
        """Integer mode numbers k in [-N/2, N/2)."""
        return np.arange(-self.points // 2, self.points // 2)

    def frequencies(self) -> np.ndarray:
        """Lattice frequencies xi_k = pi*k/L, k in [-N/2, N/2)."""
        return np.pi * self.mode_numbers() / self.half_width

    def refine(self, factor: int = 2) -> "GridSpec":
        """Same domain with `factor` times as many points."""
        return GridSpec(self.half_width, self.points * factor)


def make_grid(half_width: float, points: int) -> GridSpec:
    """Build a GridSpec, rejecting odd/tiny N and non-positive L."""
    return GridSpec(half_width, points)


@dataclass(frozen=True)
class DataSpec:
    """Declarative recipe for one initial-data field.

    Kinds and their parameters:

    ``zero``
        identically zero.
    ``gaussian``
        amplitude * exp(-(x - center)^2 / (2 width^2)); width > 0.
    ``plane_wave``
        amplitude * exp(i xi_k x) with xi_k = pi*k/L; needs |k| <= N/2 - 1.
    ``random_sobolev``
        random field with Fourier coefficients <xi_k>^-(s + 1/2 + 0.05) r_k,
        r_k seeded standard complex Gaussians, rescaled so the discrete H^s
        norm equals ``target_norm``.  ``hermitian=True`` symmetrises the
        spectrum for real-valued output (use this for gauge data).
    ``file``
        plain-text samples, one line per node: "re im" for complex fields
        or a single "val" column for real ones; exactly N lines, no header.
    """

    kind: str
    center: float = 0.0
    width: float = 1.0
    amplitude: complex = 1.0
    k: int = 0
    s: float = 0.0
    seed: int = 0
    target_norm: float = 1.0
    hermitian: bool = False
    path: str = ""

    _KINDS = ("zero", "gaussian", "plane_wave", "random_sobolev", "file")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise LatticeError(f"unknown data kind {self.kind!r}; expected one of {self._KINDS}")
        if self.kind == "gaussian" and not self.width > 0:
            raise LatticeError(f"gaussian width must be positive, got {self.width}")
        if self.kind == "random_sobolev" and not self.target_norm > 0:
            raise LatticeError(f"random_sobolev target norm must be positive, got {self.target_norm}")
        if self.kind == "file" and not self.path:
            raise LatticeError("file data spec needs a path")

    @classmethod
    def zero(cls) -> "DataSpec":
        return cls(kind="zero")

    @classmethod
    def gaussian(cls, center: float = 0.0, width: float = 1.0, amplitude: complex = 1.0) -> "DataSpec":
        return cls(kind="gaussian", center=center, width=width, amplitude=amplitude)

    @classmethod
    def plane_wave(cls, k: int, amplitude: complex = 1.0) -> "DataSpec":
        return cls(kind="plane_wave", k=k, amplitude=amplitude)

    @classmethod
    def random_sobolev(cls, s: float, seed: int, target_norm: float = 1.0,
                       hermitian: bool = False) -> "DataSpec":
        return cls(kind="random_sobolev", s=s, seed=seed, target_norm=target_norm,
                   hermitian=hermitian)

    @classmethod
    def from_file(cls, path: str | Path) -> "DataSpec":
        return cls(kind="file", path=str(path))

    def sample(self, grid: GridSpec) -> np.ndarray:
        """Sample the spec at the lattice nodes; always complex128."""
        x = grid.nodes()
        if self.kind == "zero":
            return np.zeros(grid.points, dtype=np.complex128)
        if self.kind == "gaussian":
            vals = self.amplitude * np.exp(-((x - self.center) ** 2) / (2.0 * self.width**2))
            return vals.astype(np.complex128)
        if self.kind == "plane_wave":
            if abs(self.k) > grid.points // 2 - 1:
                raise LatticeError(
                    f"plane_wave mode k={self.k} out of range |k| <= N/2 - 1 = {grid.points // 2 - 1}")
            xi = np.pi * self.k / grid.half_width
            return (self.amplitude * np.exp(1j * xi * x)).astype(np.complex128)
        if self.kind == "random_sobolev":
            # Local import: spaces depends on this module for GridSpec.
            from .spaces import random_sobolev_field
            return random_sobolev_field(grid, self.s, self.seed,
                                        target_norm=self.target_norm,
                                        hermitian=self.hermitian)
        if self.kind == "file":
            return load_field(self.path, grid.points)
        raise AssertionError(self.kind)

    def rescaled(self, lam: float) -> "DataSpec":
        """The spec for (1/lam) f(x/lam), used by scaling-symmetry runs.

        Exact for zero/gaussian/plane_wave.  For a plane wave the mode index
        is unchanged: on the grid with half width lam*L the same k gives
        frequency xi_k/lam.
        """
        if self.kind == "zero":
            return self
        if self.kind == "gaussian":
            return DataSpec.gaussian(center=lam * self.center, width=lam * self.width,
                                     amplitude=self.amplitude / lam)
        if self.kind == "plane_wave":
            return DataSpec.plane_wave(k=self.k, amplitude=self.amplitude / lam)
        raise LatticeError(f"cannot rescale data of kind {self.kind!r} exactly")


def _as_real_gauge(values: np.ndarray, name: str) -> np.ndarray:
    """Coerce a sampled gauge field to real, warning on large imaginary residue."""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
        if worst > IMAG_DROP_TOL:
            warnings.warn(
                f"dropping imaginary part of gauge field {name} "
                f"(max residue {worst:.3e} exceeds {IMAG_DROP_TOL:.0e})",
                stacklevel=3,
            )
        values = values.real
    return np.ascontiguousarray(values, dtype=np.float64)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FieldState:
    """Null-coordinate fields at one time level.

    Value type: the arrays are made read-only at construction, so states can
    be shared freely across threads.  Advancing in time always produces a
    new state.
    """

    grid: GridSpec
    t: float
    u_plus: np.ndarray
    u_minus: np.ndarray
    A_plus: np.ndarray
    A_minus: np.ndarray
    m: float

    def __post_init__(self):
        N = self.grid.points
        up = np.ascontiguousarray(self.u_plus, dtype=np.complex128)
        um = np.ascontiguousarray(self.u_minus, dtype=np.complex128)
        ap = np.ascontiguousarray(self.A_plus, dtype=np.float64)
        am = np.ascontiguousarray(self.A_minus, dtype=np.float64)
        for name, arr in (("u_plus", up), ("u_minus", um), ("A_plus", ap), ("A_minus", am)):
            if arr.shape != (N,):
                raise LatticeError(f"{name} has shape {arr.shape}, expected ({N},)")
        object.__setattr__(self, "u_plus", _freeze(up))
        object.__setattr__(self, "u_minus", _freeze(um))
        object.__setattr__(self, "A_plus", _freeze(ap))
        object.__setattr__(self, "A_minus", _freeze(am))
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "m", float(self.m))
        if not np.isfinite(charge(self)):
            raise LatticeError("field state has non-finite charge")

    def with_fields(self, *, t: float, u_plus=None, u_minus=None,
                    A_plus=None, A_minus=None) -> "FieldState":
        """Copy with replaced time and any subset of field arrays."""
        return replace(
            self, t=t,
            u_plus=self.u_plus if u_plus is None else u_plus,
            u_minus=self.u_minus if u_minus is None else u_minus,
            A_plus=self.A_plus if A_plus is None else A_plus,
            A_minus=self.A_minus if A_minus is None else A_minus,
        )


def make_state(grid: GridSpec, f_plus: DataSpec, f_minus: DataSpec,
               a_plus: DataSpec, a_minus: DataSpec, m: float) -> FieldState:
    """Sample the four data specs at t = 0.

    Gauge specs are coerced to real; imaginary residue above 1e-12 triggers
    a warning before being dropped.
    """
    return FieldState(
        grid=grid,
        t=0.0,
        u_plus=f_plus.sample(grid),
        u_minus=f_minus.sample(grid),
        A_plus=_as_real_gauge(a_plus.sample(grid), "A_plus"),
        A_minus=_as_real_gauge(a_minus.sample(grid), "A_minus"),
        m=m,
    )


def to_physical(state: FieldState) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return (psi1, psi2, A0, A1) from the null-coordinate fields."""
    psi1 = (state.u_plus + state.u_minus) / 2.0
    psi2 = (state.u_plus - state.u_minus) / 2.0
    A0 = (state.A_plus + state.A_minus) / 2.0
    A1 = (state.A_minus - state.A_plus) / 2.0
    return psi1, psi2, A0, A1


def from_physical(grid: GridSpec, psi1: np.ndarray, psi2: np.ndarray,
                  A0: np.ndarray, A1: np.ndarray, m: float, t: float = 0.0) -> FieldState:
    """Build a state from physical fields (psi1, psi2, A0, A1)."""
    psi1 = np.asarray(psi1, dtype=np.complex128)
    psi2 = np.asarray(psi2, dtype=np.complex128)
    A0 = np.asarray(A0, dtype=np.float64)
    A1 = np.asarray(A1, dtype=np.float64)
    return FieldState(
        grid=grid, t=t,
        u_plus=psi1 + psi2,
        u_minus=psi1 - psi2,
        A_plus=A0 - A1,
        A_minus=A0 + A1,
        m=m,
    )


def charge(state: FieldState) -> float:
    """Discrete spinor charge ||psi(t)||^2_{L^2}.

    Pointwise |psi1|^2 + |psi2|^2 = (|u_+|^2 + |u_-|^2)/2, so the charge is
    (h/2) sum_j (|u_+|^2 + |u_-|^2).
    """
    h = state.grid.h
    total = np.sum(np.abs(state.u_plus) ** 2) + np.sum(np.abs(state.u_minus) ** 2)
    return 0.5 * h * float(total)


def load_field(path: str | Path, points: int) -> np.ndarray:
    """Read a field from the plain-text format: one line per node.

    Two whitespace-separated columns are read as "re im"; one column as a
    real value.  Exactly ``points`` lines are required, no header.
    """
    path = Path(path)
    rows: list[list[float]] = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) not in (1, 2):
                raise LatticeError(f"{path}:{lineno}: expected 1 or 2 columns, got {len(parts)}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise LatticeError(f"{path}:{lineno}: {exc}") from exc
    if len(rows) != points:
        raise LatticeError(f"{path}: expected {points} lines, found {len(rows)}")
    ncols = {len(r) for r in rows}
    if len(ncols) != 1:
        raise LatticeError(f"{path}: mixed 1- and 2-column lines")
    data = np.asarray(rows, dtype=np.float64)
    if data.shape[1] == 2:
        return np.ascontiguousarray(data[:, 0] + 1j * data[:, 1])
    return np.ascontiguousarray(data[:, 0].astype(np.complex128))


def save_field(path: str | Path, values: np.ndarray) -> None:
    """Write a field in the plain-text format accepted by :func:`load_field`.

    Complex input produces two columns "re im"; real input one column.
    """
    values = np.asarray(values)
    with Path(path).open("w") as fh:
        if np.iscomplexobj(values):
            for v in values:
                fh.write(f"{v.real!r} {v.imag!r}\n")
        else:
            for v in values:
                fh.write(f"{float(v)!r}\n")

"""Fixed-step RK4 integration of vector fields on ``R^{2n}`` and the figure presets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hermitian import SIGMA3, DimensionError
from .kahler import LinearVectorField, dilation_field, gradient_field, hamiltonian_field, phase_field
from .projective import ProjectiveField, projective_gradient, projective_hamiltonian


class IntegrationError(RuntimeError):
    """Non-finite or overflowing state during integration."""


@dataclass(frozen=True)
class IntegratorConfig:
    h: float = 1e-3
    t_max: float = 10.0
    convergence_eps: float = 1e-8  # stop once |field| drops below; 0 disables
    renormalize: bool = False

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError("h must be positive")
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise ValueError("t_max must be positive")
        if self.convergence_eps < 0:
            raise ValueError("convergence_eps must be non-negative")


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    points: np.ndarray  # (samples, 2n)
    meta: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.points[-1]

    @property
    def converged(self) -> bool:
        return bool(self.meta.get("converged", False))

    def __len__(self) -> int:
        return len(self.times)


def _field_dim(f) -> int | None:
    if isinstance(f, (LinearVectorField, ProjectiveField, ReversedField)):
        return 2 * f.n
    return None


def _rk4_step(f, x, h):
    k1 = f(x)
    k2 = f(x + 0.5 * h * k1)
    k3 = f(x + 0.5 * h * k2)
    k4 = f(x + h * k3)
    return x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate(f, psi0, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Classical RK4 trajectory of ``f`` from ``psi0``.

    ``f`` is any callable ``R^{2n} -> R^{2n}``.  The run stops at ``t_max``
    (the final step is shortened to land on it exactly) or as soon as the
    field norm falls below ``cfg.convergence_eps``.
    """
    cfg = cfg or IntegratorConfig()
    x = np.array(psi0, dtype=float).ravel()
    d = _field_dim(f)
    if d is not None and x.size != d:
        raise DimensionError(f"field acts on R^{d}, seed has {x.size} components")
    if cfg.renormalize:
        x = x / np.linalg.norm(x)
    times = [0.0]
    points = [x.copy()]
    t = 0.0
    converged = False
    steps = 0
    with np.errstate(over="raise", invalid="raise"):
        while True:
            try:
                v = f(x)
            except FloatingPointError as exc:
                raise IntegrationError(f"field evaluation failed at t={t:.6g}: {exc}") from exc
            if cfg.convergence_eps > 0 and np.linalg.norm(v) < cfg.convergence_eps:
                converged = True
                break
            remaining = cfg.t_max - t
            if remaining <= 1e-12 * cfg.t_max:
                break
            h = min(cfg.h, remaining)
            try:
                x = _rk4_step(f, x, h)
            except FloatingPointError as exc:
                raise IntegrationError(f"overflow at t={t:.6g}: {exc}") from exc
            if not np.all(np.isfinite(x)):
                raise IntegrationError(f"non-finite state at t={t + h:.6g}")
            if cfg.renormalize:
                x = x / np.linalg.norm(x)
            steps += 1
            t = steps * cfg.h if h == cfg.h else cfg.t_max
            times.append(t)
            points.append(x.copy())
    meta = {
        "field": getattr(f, "label", "") or type(f).__name__,
        "h": cfg.h,
        "seed": np.array(psi0, dtype=float).ravel().tolist(),
        "converged": converged,
        "field_norm": float(np.linalg.norm(f(x))),
    }
    return Trajectory(np.array(times), np.array(points), meta)


@dataclass(frozen=True, eq=False)
class ReversedField:
    """``psi -> -f(psi)``.

    ``X_{f_H}`` integrates to ``e^{+iHt}``; the reversed field gives the
    Schrodinger-sign evolution ``e^{-iHt}``.
    """

    field: object

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def label(self) -> str:
        return "-" + (getattr(self.field, "label", "") or "field")

    def __call__(self, psi) -> np.ndarray:
        return -self.field(psi)


def flow_map(f, psi0, t: float, h: float = 1e-3) -> np.ndarray:
    """``Phi^f_t(psi0)`` by RK4 with the largest step ``<= h`` dividing ``t``."""
    x = np.array(psi0, dtype=float).ravel()
    if t == 0:
        return x
    steps = max(1, math.ceil(abs(t) / h))
    step = t / steps
    for _ in range(steps):
        x = _rk4_step(f, x, step)
    if not np.all(np.isfinite(x)):
        raise IntegrationError("non-finite state in flow map")
    return x


@dataclass(frozen=True)
class FlowCommutation:
    commute: bool
    defect: float

    def __bool__(self) -> bool:
        return self.commute


def flows_commute(f1, f2, psi0, s: float = 1.0, t: float = 1.0, tol: float = 1e-6, h: float = 1e-3) -> FlowCommutation:
    """Compare ``Phi^{f1}_s(Phi^{f2}_t(psi0))`` with ``Phi^{f2}_t(Phi^{f1}_s(psi0))``."""
    a = flow_map(f1, flow_map(f2, psi0, t, h), s, h)
    b = flow_map(f2, flow_map(f1, psi0, s, h), t, h)
    defect = float(np.linalg.norm(a - b))
    return FlowCommutation(defect < tol, defect)


# -- Figure presets --------------------------------------------------------------

FIG_SEED = np.array([0.2, 0.3, 0.3, math.sqrt(0.78)])  # (q1, p1, q2, p2) on the unit sphere
FIG_SEED.setflags(write=False)


@dataclass(frozen=True, eq=False)
class FigurePreset:
    """One or more flows to integrate; the first is the headline trajectory."""

    name: str
    runs: tuple  # of (label, field, seed, IntegratorConfig)

    def run(self) -> dict[str, Trajectory]:
        return {label: integrate(f, seed, cfg) for label, f, seed, cfg in self.runs}


def figure_preset(name: str, h: float = 1e-3) -> FigurePreset:
    gamma = phase_field(2)
    if name == "fig1":
        runs = (("Y_e3", projective_gradient(SIGMA3, "Y_e3"), FIG_SEED, IntegratorConfig(h, 50.0)),)
    elif name == "fig2":
        runs = (("X_e3", projective_hamiltonian(SIGMA3, "X_e3"), FIG_SEED, IntegratorConfig(h, 30.0, 0.0)),)
    elif name == "fig3":
        runs = (
            ("X_e3", projective_hamiltonian(SIGMA3, "X_e3"), FIG_SEED, IntegratorConfig(h, 30.0, 0.0)),
            ("Gamma", gamma, FIG_SEED, IntegratorConfig(h, 30.0, 0.0)),
        )
    elif name == "fig3b":
        runs = (
            ("Y_e3", projective_gradient(SIGMA3, "Y_e3"), FIG_SEED, IntegratorConfig(h, 50.0)),
            ("Gamma", gamma, np.array([1.0, 0.0, 0.0, 0.0]), IntegratorConfig(h, 2 * math.pi, 0.0)),
        )
    else:
        raise KeyError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    return FigurePreset(name, runs)


FIGURES = ("fig1", "fig2", "fig3", "fig3b")


def named_field(name: str, A=None, n: int | None = None):
    """Field constructors used by the CLI."""
    if name == "hamiltonian":
        return hamiltonian_field(A)
    if name == "gradient":
        return gradient_field(A)
    if name == "projective-hamiltonian":
        return projective_hamiltonian(A)
    if name == "projective-gradient":
        return projective_gradient(A)
    if name == "dilation":
        return dilation_field(n)
    if name == "phase":
        return phase_field(n)
    raise KeyError(f"unknown field kind {name!r}")

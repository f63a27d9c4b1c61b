"""Fixed-step RK4 integration and the :class:`Trajectory` container."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..exceptions import DivergenceError, NumericOverflowError, RejectedInputError
from .systems import system_rhs

__all__ = ["Trajectory", "rk4_step", "integrate", "DIVERGENCE_BOUND"]

DIVERGENCE_BOUND = 1e6


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled multivariate time series.

    ``data`` has shape ``(steps, n_components)`` and is stored read-only.
    ``scaling`` is ``None`` for raw data, otherwise the ``(min, max)`` pair of
    per-component arrays that mapped the raw data onto ``[0, 1]``.
    """

    data: np.ndarray
    dt: float
    lyapunov_exponent: float
    scaling: tuple[np.ndarray, np.ndarray] | None = None
    system: dict | None = None
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.ndim == 1:
            data = data[:, None]
        if data.ndim != 2:
            raise RejectedInputError(f"trajectory data must be 2-D, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise RejectedInputError("trajectory data contains non-finite entries")
        if not self.dt > 0:
            raise RejectedInputError(f"dt must be positive, got {self.dt}")
        if not self.lyapunov_exponent > 0:
            raise RejectedInputError(
                f"Lyapunov exponent must be positive, got {self.lyapunov_exponent}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def __len__(self) -> int:
        return self.data.shape[0]

    @property
    def n_components(self) -> int:
        return self.data.shape[1]

    @property
    def lyapunov_time(self) -> float:
        return 1.0 / self.lyapunov_exponent

    @property
    def steps_per_lt(self) -> float:
        return 1.0 / (self.lyapunov_exponent * self.dt)

    def with_data(self, data, **changes) -> "Trajectory":
        """Copy of this trajectory carrying new samples (metadata kept)."""
        kwargs = dict(
            dt=self.dt,
            lyapunov_exponent=self.lyapunov_exponent,
            scaling=self.scaling,
            system=self.system,
            seed=self.seed,
            meta=dict(self.meta),
        )
        kwargs.update(changes)
        return Trajectory(data, **kwargs)

    def __getitem__(self, item) -> "Trajectory":
        if not isinstance(item, slice):
            raise TypeError("Trajectory supports slicing along time only")
        return self.with_data(self.data[item])


def _as_rhs(system) -> Callable[[np.ndarray], np.ndarray]:
    if callable(system) and not hasattr(system, "rhs"):
        return system
    return lambda x: system_rhs(system, x)


def rk4_step(system, x, dt: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step.

    ``system`` is one of the chaotic systems or any callable ``f(x)``.
    """
    if not dt > 0:
        raise RejectedInputError(f"dt must be positive, got {dt}")
    f = _as_rhs(system)
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = f(x)
        _check_stage(k1, "k1")
        k2 = f(x + 0.5 * dt * k1)
        _check_stage(k2, "k2")
        k3 = f(x + 0.5 * dt * k2)
        _check_stage(k3, "k3")
        k4 = f(x + dt * k3)
        _check_stage(k4, "k4")
        out = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _check_stage(out, "update")
    return out


def _check_stage(value, stage):
    if not np.all(np.isfinite(value)):
        raise NumericOverflowError(f"non-finite value in RK4 stage {stage}")


def integrate(system, x0, steps: int, dt: float | None = None, seed: int | None = None) -> Trajectory:
    """Integrate ``system`` from ``x0`` for ``steps`` RK4 steps.

    Returns ``steps + 1`` samples including the initial state.  For a batch
    of initial states use :func:`integrate_ensemble`.
    """
    if steps < 0:
        raise RejectedInputError(f"steps must be non-negative, got {steps}")
    dt = system.dt if dt is None else dt
    x = np.asarray(x0, dtype=float)
    if x.shape != (system.dim,):
        raise RejectedInputError(
            f"{system.name} initial state must have shape ({system.dim},), got {x.shape}"
        )
    out = integrate_ensemble(system, x[None, :], steps, dt)[:, 0, :]
    return Trajectory(
        out,
        dt=dt,
        lyapunov_exponent=system.lyapunov_exponent,
        system=system.to_dict(),
        seed=seed,
    )


def integrate_ensemble(system, x0, steps: int, dt: float | None = None) -> np.ndarray:
    """Integrate a batch of initial states; returns ``(steps + 1, members, dim)``."""
    dt = system.dt if dt is None else dt
    x = np.array(x0, dtype=float)
    out = np.empty((steps + 1,) + x.shape)
    out[0] = x
    for i in range(steps):
        x = rk4_step(system, x, dt)
        if np.max(np.abs(x)) > DIVERGENCE_BOUND:
            raise DivergenceError(f"{getattr(system, 'name', 'system')} diverged at step {i + 1}", step=i + 1)
        out[i + 1] = x
    return out

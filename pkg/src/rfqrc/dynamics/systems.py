"""Chaotic systems: Lorenz-63, Lorenz-96 and the nine-mode MFE shear flow.

All right-hand sides are vectorised over leading axes, so an ensemble of
states with shape ``(members, dim)`` is advanced in one call.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..exceptions import RejectedInputError

__all__ = ["Lorenz63", "Lorenz96", "MFE", "SYSTEMS", "system_from_dict", "system_rhs"]


@dataclass(frozen=True)
class Lorenz63:
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    lyapunov_exponent: float = 0.9
    dt: float = 0.01

    name = "lorenz63"

    @property
    def dim(self) -> int:
        return 3

    def rhs(self, x: np.ndarray) -> np.ndarray:
        x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
        return np.stack(
            [
                self.sigma * (x2 - x1),
                x1 * (self.rho - x3) - x2,
                x1 * x2 - self.beta * x3,
            ],
            axis=-1,
        )

    def to_dict(self) -> dict:
        return {"name": self.name, "sigma": self.sigma, "rho": self.rho, "beta": self.beta}


@dataclass(frozen=True)
class Lorenz96:
    m: int = 10
    forcing: float = 8.0
    lyapunov_exponent: float = 1.2
    dt: float = 0.01

    name = "lorenz96"

    def __post_init__(self):
        if self.m < 4:
            raise RejectedInputError(f"Lorenz-96 needs m >= 4, got m={self.m}")

    @property
    def dim(self) -> int:
        return self.m

    def rhs(self, x: np.ndarray) -> np.ndarray:
        # periodic stencil x_{i-2}, x_{i-1}, x_{i+1}
        xp1 = np.roll(x, -1, axis=-1)
        xm1 = np.roll(x, 1, axis=-1)
        xm2 = np.roll(x, 2, axis=-1)
        return (xp1 - xm2) * xm1 - x + self.forcing

    def to_dict(self) -> dict:
        return {"name": self.name, "m": self.m, "forcing": self.forcing}


@dataclass(frozen=True)
class MFE:
    """Moehlis-Faisst-Eckhardt nine-mode model of sinusoidally forced shear flow.

    Domain ``Lx x Ly x Lz = 4pi x 2 x 2pi`` with free-slip walls.  The state
    holds the amplitudes ``a_1..a_9`` of the Fourier modes; ``a = e_1`` is the
    stable laminar profile.
    """

    reynolds: float = 400.0
    lx: float = 4.0 * np.pi
    lz: float = 2.0 * np.pi
    lyapunov_exponent: float = 0.0163
    dt: float = 0.25

    name = "mfe"

    @property
    def dim(self) -> int:
        return 9

    @cached_property
    def coefficients(self) -> dict:
        """Named ODE coefficients derived from the domain and Reynolds number."""
        a = 2.0 * np.pi / self.lx
        b = np.pi / 2.0
        g = 2.0 * np.pi / self.lz
        re = self.reynolds
        k_ag = np.sqrt(a**2 + g**2)
        k_bg = np.sqrt(b**2 + g**2)
        k_abg = np.sqrt(a**2 + b**2 + g**2)
        s6 = np.sqrt(6.0)
        s32 = np.sqrt(1.5)
        return {
            # viscous decay rates of each mode
            "decay": np.array(
                [
                    b**2,
                    4.0 * b**2 / 3.0 + g**2,
                    b**2 + g**2,
                    (3.0 * a**2 + 4.0 * b**2) / 3.0,
                    a**2 + b**2,
                    (3.0 * a**2 + 4.0 * b**2 + 3.0 * g**2) / 3.0,
                    a**2 + b**2 + g**2,
                    a**2 + b**2 + g**2,
                    9.0 * b**2,
                ]
            )
            / re,
            "forcing": b**2 / re,
            "c1_68": s32 * b * g / k_abg,
            "c1_23": s32 * b * g / k_bg,
            "c2_46": 5.0 * np.sqrt(2.0) * g**2 / (3.0 * np.sqrt(3.0) * k_ag),
            "c2_57": g**2 / (s6 * k_ag),
            "c2_58": a * b * g / (s6 * k_ag * k_abg),
            "c2_13": s32 * b * g / k_bg,
            "c3_47": 2.0 * a * b * g / (s6 * k_ag * k_bg),
            "c3_48": (b**2 * (3.0 * a**2 + g**2) - 3.0 * g**2 * (a**2 + g**2))
            / (s6 * k_ag * k_bg * k_abg),
            "c4_15": a / s6,
            "c4_26": 10.0 * a**2 / (3.0 * s6 * k_ag),
            "c4_37": s32 * a * b * g / (k_ag * k_bg),
            "c4_38": s32 * a**2 * b**2 / (k_ag * k_bg * k_abg),
            "c5_27": a**2 / (s6 * k_ag),
            "c5_28": a * b * g / (s6 * k_ag * k_abg),
            "c5_36": 2.0 * a * b * g / (s6 * k_ag * k_bg),
            "c6_18": s32 * b * g / k_abg,
            "c6_24": 10.0 * (a**2 - g**2) / (3.0 * s6 * k_ag),
            "c6_35": 2.0 * np.sqrt(2.0 / 3.0) * a * b * g / (k_ag * k_bg),
            "c7_25": (g**2 - a**2) / (s6 * k_ag),
            "c7_34": a * b * g / (s6 * k_ag * k_bg),
            "c8_25": 2.0 * a * b * g / (s6 * k_ag * k_abg),
            "c8_34": g**2 * (3.0 * a**2 - b**2 + 3.0 * g**2) / (s6 * k_ag * k_bg * k_abg),
        }

    def nonlinear(self, x: np.ndarray) -> np.ndarray:
        """Quadratic (advective) part of the right-hand side."""
        c = self.coefficients
        a1, a2, a3, a4, a5, a6, a7, a8, a9 = (x[..., i] for i in range(9))
        s = c["c4_15"]  # alpha / sqrt(6) appears in several equations
        return np.stack(
            [
                -c["c1_68"] * a6 * a8 + c["c1_23"] * a2 * a3,
                c["c2_46"] * a4 * a6
                - c["c2_57"] * a5 * a7
                - c["c2_58"] * a5 * a8
                - c["c2_13"] * (a1 * a3 + a3 * a9),
                c["c3_47"] * (a4 * a7 + a5 * a6) + c["c3_48"] * a4 * a8,
                -s * a1 * a5
                - c["c4_26"] * a2 * a6
                - c["c4_37"] * a3 * a7
                - c["c4_38"] * a3 * a8
                - s * a5 * a9,
                s * a1 * a4
                + c["c5_27"] * a2 * a7
                - c["c5_28"] * a2 * a8
                + s * a4 * a9
                + c["c5_36"] * a3 * a6,
                s * a1 * a7
                + c["c6_18"] * a1 * a8
                + c["c6_24"] * a2 * a4
                - c["c6_35"] * a3 * a5
                + s * a7 * a9
                + c["c6_18"] * a8 * a9,
                -s * (a1 * a6 + a6 * a9) + c["c7_25"] * a2 * a5 + c["c7_34"] * a3 * a4,
                c["c8_25"] * a2 * a5 + c["c8_34"] * a3 * a4,
                c["c1_23"] * a2 * a3 - c["c1_68"] * a6 * a8,
            ],
            axis=-1,
        )

    def rhs(self, x: np.ndarray) -> np.ndarray:
        c = self.coefficients
        out = self.nonlinear(x) - c["decay"] * x
        out[..., 0] += c["forcing"]
        return out

    def laminar_state(self) -> np.ndarray:
        state = np.zeros(9)
        state[0] = 1.0
        return state

    def to_dict(self) -> dict:
        return {"name": self.name, "reynolds": self.reynolds, "lx": self.lx, "lz": self.lz}


SYSTEMS = {"lorenz63": Lorenz63, "lorenz96": Lorenz96, "mfe": MFE}


def system_from_dict(spec) -> Lorenz63 | Lorenz96 | MFE:
    """Build a system from ``{"name": ..., **params}`` or a bare name."""
    if isinstance(spec, str):
        spec = {"name": spec}
    spec = dict(spec)
    name = spec.pop("name", None)
    if name not in SYSTEMS:
        raise RejectedInputError(f"unknown system {name!r}; expected one of {sorted(SYSTEMS)}")
    return SYSTEMS[name](**spec)


def system_rhs(system, x) -> np.ndarray:
    """Time derivative ``dx/dt`` of ``system`` at state ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (system.dim,):
        raise RejectedInputError(
            f"{system.name} state must have dimension {system.dim}, got shape {x.shape}"
        )
    return system.rhs(x)

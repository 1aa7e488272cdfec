import math
from typing import Literal

from pydantic import ConfigDict, Field, model_validator

from ..core.config import settings
from ..model.schemas import ATOM_SYMBOLS, SystemParams
from ..shared.base_schemas import FrozenBase
from ..single_excitation.schemas import PulseSpec

CommandName = Literal["model", "transfer", "decompose", "response", "analytic-state", "master", "multiphoton"]
DriveKind = Literal["vacuum", "single-photon"]

KET_COMMANDS = ("master", "multiphoton")
PULSE_COMMANDS = ("response",)


class ParamsConfig(SystemParams):
    """SystemParams plus the cavity truncation used by the many-body commands."""

    max_cavity_photons: int | None = Field(default=None, ge=0)

    def system_params(self) -> SystemParams:
        return SystemParams(**self.model_dump(exclude={"max_cavity_photons"}))


class SuperpositionConfig(FrozenBase):
    """alpha and beta as [re, im] pairs."""

    alpha: tuple[float, float]
    beta: tuple[float, float]

    @property
    def coefficients(self) -> tuple[complex, complex]:
        return complex(*self.alpha), complex(*self.beta)


class GridConfig(FrozenBase):
    t_min: float | None = None
    t_max: float | None = Field(default=None, gt=0)
    dt: float | None = Field(default=None, gt=0)
    omega_min: float | None = None
    omega_max: float | None = None
    d_omega: float | None = Field(default=None, gt=0)
    multiphoton_step: float | None = Field(default=None, gt=0)
    value_stride: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_order(self) -> "GridConfig":
        if self.omega_min is not None and self.omega_max is not None and self.omega_max <= self.omega_min:
            raise ValueError(f"omega_max={self.omega_max} must exceed omega_min={self.omega_min}")
        if self.t_min is not None and self.t_max is not None and self.t_max <= self.t_min:
            raise ValueError(f"t_max={self.t_max} must exceed t_min={self.t_min}")
        return self


class RunConfig(FrozenBase):
    command: CommandName
    params: ParamsConfig
    pulse: PulseSpec | None = None
    initial_ket: str | None = None
    drive: DriveKind = "vacuum"
    superposition: SuperpositionConfig | None = None
    grid: GridConfig = GridConfig()
    output_dir: str = "results"

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={
            "example": {
                "command": "transfer",
                "params": {
                    "n_atoms": 3,
                    "omega_r": 0.0,
                    "omega": [0.0, 0.0, 0.0],
                    "gamma": [1.0, 1.0, 1.0],
                    "kappa": 1.0,
                },
                "grid": {"omega_min": -5.0, "omega_max": 5.0, "d_omega": 0.001},
                "output_dir": "results/transfer",
            }
        },
    )

    @model_validator(mode="after")
    def check_inputs(self) -> "RunConfig":
        problems: list[str] = []
        if self.initial_ket is not None:
            problems.extend(self._ket_problems(self.initial_ket))
        if self.command in KET_COMMANDS and self.initial_ket is None:
            problems.append(f"initial_ket is required for the {self.command} command")
        if self.command == "analytic-state" and (self.initial_ket is None) == (self.superposition is None):
            problems.append("analytic-state needs exactly one of initial_ket and superposition")
        if self.command in PULSE_COMMANDS and self.pulse is None:
            problems.append(f"pulse is required for the {self.command} command")
        if self.drive == "single-photon" and self.pulse is None:
            problems.append("a single-photon drive needs a pulse")
        if self.drive == "single-photon" and self.command != "master":
            problems.append("the single-photon drive is only available to the master command")
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def _ket_problems(self, ket: str) -> list[str]:
        n_atoms = self.params.n_atoms
        problems = []
        if len(ket) != n_atoms + 1:
            problems.append(f"initial_ket '{ket}' has length {len(ket)}, expected {n_atoms + 1}")
        bad = sorted({symbol for symbol in ket[:-1] if symbol not in ATOM_SYMBOLS})
        if bad:
            problems.append(f"initial_ket '{ket}' has atom symbols {bad}, expected e or g")
        if not ket or not ket[-1].isdigit():
            problems.append(f"initial_ket '{ket}' must end in a photon digit")
        elif self.params.max_cavity_photons is not None and int(ket[-1]) > self.params.max_cavity_photons:
            problems.append(
                f"initial_ket '{ket}' holds {ket[-1]} photons, "
                f"above max_cavity_photons={self.params.max_cavity_photons}"
            )
        return problems

    @property
    def ket_excitations(self) -> int:
        if self.initial_ket is None:
            return 0
        return self.initial_ket[:-1].count("e") + int(self.initial_ket[-1])

    def with_defaults(self) -> "RunConfig":
        """Fill every unset grid entry and the cavity truncation from the settings."""
        params = self.params.system_params()
        scale = 1.0 / params.kappa if params.kappa > 0.0 else 1.0
        span = settings.OMEGA_SPAN * (params.collective_coupling or params.kappa or 1.0)
        grid = self.grid
        t_min = grid.t_min
        if t_min is None:
            driven = self.pulse is not None and self.command in ("response", "master")
            t_min = self.pulse.recommended_start() if driven else 0.0
        filled = GridConfig(
            t_min=t_min,
            t_max=grid.t_max if grid.t_max is not None else settings.T_MAX_KAPPA * scale,
            dt=grid.dt if grid.dt is not None else settings.DT_KAPPA * scale,
            omega_min=grid.omega_min if grid.omega_min is not None else -span,
            omega_max=grid.omega_max if grid.omega_max is not None else span,
            d_omega=grid.d_omega if grid.d_omega is not None else settings.D_OMEGA,
            multiphoton_step=(
                grid.multiphoton_step if grid.multiphoton_step is not None else settings.MULTIPHOTON_STEP_KAPPA * scale
            ),
            value_stride=grid.value_stride,
        )
        max_photons = self.params.max_cavity_photons
        if max_photons is None:
            max_photons = max(self.ket_excitations + (self.drive == "single-photon"), 1)
        return self.model_copy(
            update={
                "grid": filled,
                "params": self.params.model_copy(update={"max_cavity_photons": max_photons}),
            }
        )

    @property
    def system_params(self) -> SystemParams:
        return self.params.system_params()

    @property
    def omega_grid_size(self) -> int:
        grid = self.grid
        return int(math.floor((grid.omega_max - grid.omega_min) / grid.d_omega + 1e-9)) + 1

import logging

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)
load_dotenv()


class Settings(BaseSettings):
    # Project Settings
    PROJECT_NAME: str = "tavis-cummings-sim"
    VERSION: str = "0.1.0"

    # Logging Settings
    LOG_CONFIG: str = Field(
        default="logging.ini",
        description="Path of the logging ini file, relative to the working directory"
    )
    LOG_DIR: str = Field(default="logs", description="Directory for rotating log files")

    # Integrator Settings (all times in units of 1/kappa)
    DT_KAPPA: float = Field(default=0.005, description="Default integrator step times kappa")
    T_MAX_KAPPA: float = Field(default=50.0, description="Default time span times kappa")
    STEADY_T_MAX_KAPPA: float = Field(
        default=200.0,
        description="Longest integration attempted by the steady-state search"
    )
    STEADY_CHUNK_KAPPA: float = Field(
        default=5.0,
        description="Integration chunk between two steady-state residual checks"
    )
    STEADY_RESIDUAL: float = Field(
        default=1e-10,
        description="Max-norm of the generator residual accepted as stationary"
    )
    STEP_HALVING_TOL: float = Field(
        default=1e-5,
        description="Largest population change allowed when the step is halved"
    )
    PROPAGATOR_HALVING_TOL: float = Field(
        default=1e-8,
        description="Largest propagator entry change allowed when the step is halved"
    )
    RECORD_EVERY: int = Field(default=10, description="Integrator steps between stored CLI rows")

    # Linear Analysis Settings
    PBH_RTOL: float = Field(
        default=1e-10,
        description="Singular values below PBH_RTOL * ||A|| count as rank deficiency"
    )
    GROUP_TOL: float = Field(
        default=1e-9,
        description="Absolute tolerance for degenerate atomic frequencies"
    )
    COUPLING_TOL: float = Field(
        default=1e-12,
        description="Couplings with smaller magnitude are treated as zero"
    )
    RESOLVENT_RTOL: float = Field(
        default=1e-12,
        description="Relative distance to an eigenvalue treated as a singular resolvent"
    )
    OMEGA_SPAN: float = Field(
        default=5.0,
        description="Half width of the default frequency grid in units of sqrt(N) * gamma_bar"
    )
    D_OMEGA: float = Field(default=1e-3, description="Default frequency grid step")
    TRANSFER_CHUNK: int = Field(default=4096, description="Frequencies per batched resolvent solve")

    # Response Settings
    RESPONSE_PAD_FACTOR: int = Field(
        default=4,
        description="Zero padding factor applied before the frequency-domain product"
    )
    SPECTRUM_PAD_FACTOR: int = Field(default=16, description="Zero padding for pulse spectra")
    NORM_MIN: float = Field(default=0.999, description="Smallest sampled pulse norm accepted")

    # Multi-photon Settings
    MULTIPHOTON_STEP_KAPPA: float = Field(
        default=0.01,
        description="Default simplex grid step times kappa"
    )
    SIMPLEX_RULE: str = Field(
        default="trapezoid",
        description="Simplex quadrature rule: trapezoid or left"
    )
    MAX_NODES_PAIR: int = Field(
        default=1000,
        description="Largest number of stored time nodes per axis for up to two photons"
    )
    MAX_NODES_TRIPLE: int = Field(
        default=100,
        description="Largest number of stored time nodes per axis for three or more photons"
    )
    CONDITION_LIMIT: float = Field(
        default=1e12,
        description="Largest condition number accepted when inverting a propagator"
    )
    STEADY_CAVITY_TOL: float = Field(
        default=1e-4,
        description="Largest cavity-excited amplitude left in the vacuum sector at steady state"
    )

    # Output Settings
    CSV_FORMAT: str = Field(default="%.16e", description="Float format of CSV cells")
    MANIFEST_NAME: str = Field(default="manifest.json", description="Run manifest file name")
    THREADS: int = Field(default=1, description="Worker threads for grid evaluations")

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_prefix="TC_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()

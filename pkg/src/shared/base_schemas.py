from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


def frozen_array(value: Any, dtype: type = complex) -> np.ndarray:
    """Copy value into a read-only ndarray."""
    array = np.array(value, dtype=dtype)
    array.setflags(write=False)
    return array


# Immutable parameter records
class FrozenBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# Records holding numpy buffers
class ArrayBase(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class TimeGrid(FrozenBase):
    """Uniform grid t_min, t_min + dt, ..., t_max."""

    t_min: float = 0.0
    t_max: float
    dt: float = Field(gt=0)

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={"example": {"t_min": -20.0, "t_max": 80.0, "dt": 0.005}},
    )

    @model_validator(mode="after")
    def check_span(self) -> "TimeGrid":
        if self.t_max < self.t_min:
            raise ValueError("t_max must not be smaller than t_min")
        return self

    @property
    def n_steps(self) -> int:
        return int(round((self.t_max - self.t_min) / self.dt))

    @property
    def times(self) -> np.ndarray:
        return self.t_min + self.dt * np.arange(self.n_steps + 1, dtype=float)

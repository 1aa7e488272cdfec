"""Classical fourth-order Runge-Kutta provider."""
import logging

import numpy as np

from ..interfaces.integrator import IIntegrator, Observable, RightHandSide

logger = logging.getLogger(__name__)


class RK4Integrator(IIntegrator):
    """Fixed-step RK4 on arbitrary complex ndarrays."""

    def integrate(
        self,
        rhs: RightHandSide,
        y0: np.ndarray,
        t0: float,
        dt: float,
        n_steps: int,
        record_every: int = 1,
    ) -> tuple[np.ndarray, np.ndarray]:
        if n_steps < 0:
            raise ValueError("n_steps must be nonnegative")
        if record_every < 1:
            raise ValueError("record_every must be positive")

        y = np.array(y0, dtype=complex)
        recorded_steps = list(range(0, n_steps + 1, record_every))
        if recorded_steps[-1] != n_steps:
            recorded_steps.append(n_steps)

        records = np.empty((len(recorded_steps),) + y.shape, dtype=complex)
        records[0] = y
        slot = 1
        half = 0.5 * dt
        for step in range(1, n_steps + 1):
            t = t0 + (step - 1) * dt
            k1 = rhs(t, y)
            k2 = rhs(t + half, y + half * k1)
            k3 = rhs(t + half, y + half * k2)
            k4 = rhs(t + dt, y + dt * k3)
            y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if slot < len(recorded_steps) and step == recorded_steps[slot]:
                records[slot] = y
                slot += 1

        times = t0 + dt * np.asarray(recorded_steps, dtype=float)
        return times, records

    def integrate_with_halving(
        self,
        rhs: RightHandSide,
        y0: np.ndarray,
        t0: float,
        dt: float,
        n_steps: int,
        observable: Observable,
        record_every: int = 1,
    ) -> tuple[np.ndarray, np.ndarray, float]:
        times, records = self.integrate(rhs, y0, t0, dt, n_steps, record_every)
        # doubled steps and stride keep both runs on the same record times
        _, fine = self.integrate(rhs, y0, t0, 0.5 * dt, 2 * n_steps, 2 * record_every)
        change = float(np.max(np.abs(observable(records) - observable(fine))))
        logger.debug(f"Step halving change {change:.3e} at dt={dt:.3e}")
        return times, records, change

"""Rotary-wing propulsion power model and straight-line flight energy."""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PowerParams:
    """Propulsion constants of a rotary-wing UAV cruising at a fixed speed.

    Defaults match the simulation parameter set used throughout this
    package (small quad-rotor class vehicle at 5 m/s cruise).
    """

    P0: float = 29.4     # blade profile power, W
    Pi: float = 206.5    # induced power, W
    U: float = 96.0      # rotor blade tip speed, m/s
    v0: float = 7.5      # mean rotor induced velocity in hover, m/s
    d0: float = 0.9      # fuselage drag ratio
    rho: float = 1.225   # air density, kg/m^3
    s: float = 0.1       # rotor solidity
    A: float = 0.181     # rotor disc area, m^2
    V: float = 5.0       # cruise speed, m/s

    def __post_init__(self):
        for name in ("P0", "Pi", "U", "v0", "d0", "rho", "s", "A", "V"):
            if not getattr(self, name) > 0:
                raise ValueError(f"PowerParams.{name} must be strictly positive")


def power(params: PowerParams, speed: float) -> float:
    """Mechanical power (W) required to fly at `speed` m/s.

    Sum of blade-profile, induced, and parasite terms.  At speed 0 the
    variable parts vanish and the result is the hover power P0 + Pi.
    The induced-term radicand sqrt(1 + V^4/4v0^4) - V^2/2v0^2 is
    nonnegative for every speed, so the outer square root is safe.
    """
    if speed < 0:
        raise ValueError(f"speed must be nonnegative, got {speed}")
    blade = params.P0 * (1.0 + 3.0 * speed**2 / params.U**2)
    induced = params.Pi * math.sqrt(
        math.sqrt(1.0 + speed**4 / (4.0 * params.v0**4))
        - speed**2 / (2.0 * params.v0**2)
    )
    parasite = 0.5 * params.d0 * params.rho * params.s * params.A * speed**3
    return blade + induced + parasite


def flight_energy(params: PowerParams, dist: float) -> float:
    """Energy (J) to fly `dist` meters at the constant cruise speed.

    With constant speed the power integral collapses to P(V) * dist / V,
    so energy is linear in distance and zero only at zero distance.
    """
    if dist < 0:
        raise ValueError(f"dist must be nonnegative, got {dist}")
    return power(params, params.V) * (dist / params.V)

"""Benchmarked tactile sensor descriptions.

Channel layouts and rates are the data-model contract the rest of the
pipeline builds against; price / friction / force-range entries are carried
as metadata only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SENSOR_MODALITIES = ("resistive", "magnetic", "visual", "acoustic")

#: rate_hz value for sensors polled by an external device rather than free-running
ON_DEMAND = "on_demand"


@dataclass(frozen=True)
class SensorSpec:
    """Static description of one tactile sensor family."""

    name: str
    modality: str
    channel_shape: tuple[int, ...]
    rate_hz: float | str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.modality not in SENSOR_MODALITIES:
            raise ValueError(f"unknown sensor modality '{self.modality}'")
        if self.rate_hz != ON_DEMAND and float(self.rate_hz) <= 0:
            raise ValueError(f"sensor '{self.name}': rate_hz must be positive")

    @property
    def flat_dim(self) -> int:
        d = 1
        for s in self.channel_shape:
            d *= s
        return d


# Daimon channel count is manifest-defined (RGB plus any processed planes),
# so its spec stores the per-plane spatial layout with a placeholder depth.
DAIMON_PLANE_SHAPE = (240, 320)

SENSORS: dict[str, SensorSpec] = {
    "FSR": SensorSpec(
        "FSR",
        "resistive",
        (1,),
        ON_DEMAND,
        {"price_usd": 5, "high_friction": False, "normal_force_n": (0.2, 20.0)},
    ),
    "FlexiTac": SensorSpec(
        "FlexiTac",
        "resistive",
        (12, 32),
        20.0,
        {"price_usd": 35, "high_friction": False, "normal_force_n": (0.2, 10.0)},
    ),
    "eGain": SensorSpec(
        "eGain",
        "resistive",
        (2, 3),
        ON_DEMAND,
        {"price_usd": 5, "high_friction": True, "normal_force_n": (0.0, 27.5)},
    ),
    "eFlesh": SensorSpec(
        "eFlesh",
        "magnetic",
        (5, 3),  # five sensing units, one 3-axis force vector each
        100.0,
        {
            "price_usd": 35,
            "high_friction": True,
            "normal_force_n": (0.0, 30.0),
            "shear_force_n": (0.0, 17.5),
        },
    ),
    "Daimon": SensorSpec(
        "Daimon",
        "visual",
        DAIMON_PLANE_SHAPE + (-1,),  # depth -1: plane count set by the manifest
        60.0,
        {
            "price_usd": 965,
            "high_friction": True,
            "normal_force_n": (0.3, 30.0),
            "shear_force_n": (0.1, 8.0),
        },
    ),
    "ContactMic": SensorSpec(
        "ContactMic",
        "acoustic",
        (1,),
        44100.0,
        {"price_usd": 27, "high_friction": True},
    ),
}


def get_sensor(name: str) -> SensorSpec:
    try:
        return SENSORS[name]
    except KeyError:
        raise KeyError(
            f"unknown sensor '{name}'; known: {sorted(SENSORS)}"
        ) from None


def check_channel_shape(name: str, shape: tuple[int, ...]) -> bool:
    """True when ``shape`` is admissible for sensor ``name``.

    Daimon accepts (240, 320, C) for any positive plane count C.
    """
    spec = get_sensor(name)
    if spec.name == "Daimon":
        return (
            len(shape) == 3
            and shape[:2] == DAIMON_PLANE_SHAPE
            and shape[2] >= 1
        )
    return tuple(shape) == spec.channel_shape

from __future__ import annotations

from dataclasses import dataclass

from .logreal import precision_cap

FORMATS = ("json", "dot", "text")


@dataclass(frozen=True)
class RunConfig:
    radius: int = 6
    element_cap: int = 10**6
    precision: int | None = None  # bits; None defers to PLSIGMA_PRECISION_BITS or 4096
    format: str = "json"

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")
        if self.element_cap <= 0:
            raise ValueError("element cap must be positive")
        if self.precision is not None and self.precision < 64:
            raise ValueError("precision cap must be at least 64 bits")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")

    @property
    def cap(self) -> int:
        return self.precision or precision_cap()

from __future__ import annotations

from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, model_validator


class EngineSettings(BaseModel):
    """Explicit engine configuration. Built from CLI flags, never from the environment."""

    model_config = ConfigDict(frozen=True)

    precision_bits: int = Field(128, ge=32, description="Working precision of enclosures")
    precision_cap: int = Field(4096, ge=32, description="Cap for adaptive precision doubling")
    embedding_precision: int = Field(256, ge=64, description="Precision of root approximations fed to lattice searches")
    lll_height_bound: int = Field(10**6, ge=1, description="Coefficient bound H for conjugate expressions")
    relation_bound: int = Field(20, ge=1, description="Exponent bound B for multiplicative relations")
    lll_delta: float = Field(0.99, gt=0.25, lt=1.0)
    target_width: float = Field(1e-12, gt=0.0)
    sieve_prime_count: int = Field(25, ge=1)
    max_coefficient_bits: int = Field(65536, ge=64, description="Memory budget for exact relation products")
    jobs: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check_precision(self) -> EngineSettings:
        if self.precision_bits > self.precision_cap:
            raise ValueError("precision_bits must not exceed precision_cap")
        if self.embedding_precision > self.precision_cap:
            raise ValueError("embedding_precision must not exceed precision_cap")
        return self

    @property
    def delta(self) -> Fraction:
        return Fraction(str(self.lll_delta))


DEFAULT_SETTINGS = EngineSettings()

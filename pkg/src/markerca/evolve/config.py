from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from enum import Enum


class Algorithm(str, Enum):
    SOGA = "SOGA"
    SOGP = "SOGP"
    LEXGA = "LEXGA"
    LEXGP = "LEXGP"
    NSGA2 = "NSGA2"

    @property
    def is_gp(self) -> bool:
        return self in (Algorithm.SOGP, Algorithm.LEXGP)

    @property
    def is_lexicographic(self) -> bool:
        return self in (Algorithm.LEXGA, Algorithm.LEXGP)


DEFAULT_OPERATORS = ("AND", "OR", "NOT", "ANDN")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    algorithm: Algorithm
    d: int
    omega: int = 3
    population_size: int = 500
    mutation_rate: float = 0.9          # GA: chance of one bit flip per child
    gp_mutation_rate: float = 0.5       # GP: chance of subtree mutation per child
    max_depth: int | None = None        # GP, defaults to d - 1
    operator_set: tuple[str, ...] = field(default=DEFAULT_OPERATORS)
    evaluation_budget: int = 500_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        object.__setattr__(self, "operator_set", tuple(self.operator_set))

    @property
    def depth_limit(self) -> int:
        return self.d - 1 if self.max_depth is None else self.max_depth

    def validate(self) -> "EngineConfig":
        from .gp import ARITY

        if self.d < 2:
            raise ConfigError("d must be at least 2")
        if not 0 <= self.omega < self.d:
            raise ConfigError(f"omega {self.omega} outside 0..{self.d - 1}")
        if self.population_size < 3:
            raise ConfigError("population_size must be at least 3")
        if self.evaluation_budget < self.population_size:
            raise ConfigError("evaluation_budget must cover the initial population")
        for rate in (self.mutation_rate, self.gp_mutation_rate):
            if not 0.0 <= rate <= 1.0:
                raise ConfigError(f"mutation rate {rate} outside [0, 1]")
        if self.algorithm.is_gp:
            if self.depth_limit < 1:
                raise ConfigError("max_depth must be at least 1")
            unknown = set(self.operator_set) - set(ARITY)
            if unknown or not self.operator_set:
                raise ConfigError(f"unknown GP operators: {sorted(unknown)}")
        return self

    def with_seed(self, seed: int) -> "EngineConfig":
        return replace(self, seed=seed)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["algorithm"] = self.algorithm.value
        out["operator_set"] = ",".join(self.operator_set)
        out["max_depth"] = self.depth_limit
        return out

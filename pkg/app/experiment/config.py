"""Validated experiment settings.

ExperimentConfig is built by ExperimentConfigSerializer from a JSON
document; the pipeline and the studies only ever see this dataclass.
"""
from dataclasses import dataclass, field, replace

from sysid.pso import PsoParams
from sysid.recovery import AUTO
from sysid.statespace import RANK_TOLERANCE
from sysid.subspace import cycled_minimum_length


@dataclass(frozen=True)
class NoiseLevel:
    mean: float = 0.0
    std_dev: float = 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    plant: object
    seed: int
    plant_name: str = 'custom'
    period: int = 6
    n_data: int = 3000
    n_val: int = 1000
    input_noise: NoiseLevel = NoiseLevel(0.0, 1.0)
    process_noise: NoiseLevel = NoiseLevel()
    observation_noise: NoiseLevel = NoiseLevel()
    block_rows: int = None
    rank_tolerance: float = RANK_TOLERANCE
    route: str = AUTO
    pso: PsoParams = field(default_factory=PsoParams)
    trials: int = 1
    output_dir: str = ''

    @property
    def order(self):
        return self.plant.n

    def minimum_length(self):
        """Shortest record the cycled identification accepts."""
        return cycled_minimum_length(
            self.period, self.order, self.plant.m, self.plant.q,
            self.block_rows,
        )

    def recommended_length(self):
        """Rule of thumb for reliable vertices: 10 (N n)^2 samples."""
        return 10 * (self.period * self.order) ** 2

    def with_changes(self, **changes):
        return replace(self, **changes)

    def describe(self):
        """Flat dict stored with saved experiments."""
        return {
            'plant': self.plant_name,
            'plant_matrices': self.plant.to_dict(),
            'period': self.period,
            'n_data': self.n_data,
            'n_val': self.n_val,
            'input': vars(self.input_noise),
            'process_noise': vars(self.process_noise),
            'observation_noise': vars(self.observation_noise),
            'identification': {
                'block_rows': self.block_rows,
                'rank_tolerance': self.rank_tolerance,
            },
            'route': self.route,
            'pso': vars(self.pso),
            'trials': self.trials,
            'seed': self.seed,
        }

"""Named plants used as identification targets."""
from sysid.statespace import StateSpaceModel, to_controllable_companion

# Third-order, one input, two outputs, as originally written down
BENCHMARK_ORIGINAL = StateSpaceModel(
    A=[[0.64, 0.33, 0.6],
       [-0.72, -0.34, 0.7],
       [0.5, 0.6, 0.4]],
    B=[[1.0], [2.0], [1.0]],
    C=[[1.0, 0.0, 0.0],
       [0.0, 1.0, 1.0]],
    D=[[0.0], [0.0]],
)

# The same plant in controllable companion form. Identification errors
# are measured against this realization.
BENCHMARK = to_controllable_companion(BENCHMARK_ORIGINAL)

DEFAULT_PRESET = 'paper-true-plant'

PRESETS = {
    DEFAULT_PRESET: BENCHMARK,
    'benchmark': BENCHMARK,
}


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(
            f'unknown plant preset {name!r}, choose from {sorted(PRESETS)}'
        ) from None

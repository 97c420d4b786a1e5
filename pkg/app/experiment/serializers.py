"""Serializers for experiment configs and saved experiments"""
from rest_framework import serializers

from core.models import Experiment, TrialRecord
from experiment.config import ExperimentConfig, NoiseLevel
from sysid.exceptions import IdentificationError
from sysid.plants import DEFAULT_PRESET, PRESETS, get_preset
from sysid.pso import PsoParams
from sysid.recovery import ROUTES
from sysid.statespace import RANK_TOLERANCE, StateSpaceModel


class MatrixField(serializers.ListField):
    """A matrix written as a list of rows of numbers"""
    child = serializers.ListField(child=serializers.FloatField())


class StateSpaceModelSerializer(serializers.Serializer):
    """Serializer for (A, B, C, D) plant matrices"""
    A = MatrixField()
    B = MatrixField()
    C = MatrixField()
    # D is optional, a zero feedthrough is assumed when left out
    D = MatrixField(required=False)

    def validate(self, attrs):
        # The model itself checks dimensions and finiteness, we only
        # translate its error into a validation error.
        try:
            return StateSpaceModel(
                attrs['A'], attrs['B'], attrs['C'], attrs.get('D')
            )
        except IdentificationError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, instance):
        return instance.to_dict()


class PlantField(serializers.Field):
    """Either the name of a preset plant or a dict of matrices"""

    def to_internal_value(self, data):
        if isinstance(data, str):
            try:
                return data, get_preset(data)
            except KeyError as exc:
                raise serializers.ValidationError(exc.args[0])
        serializer = StateSpaceModelSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        return 'custom', serializer.validated_data

    def to_representation(self, value):
        name, model = value
        return name if name in PRESETS else model.to_dict()


class NoiseSerializer(serializers.Serializer):
    """Mean and standard deviation of i.i.d. Gaussian samples"""
    mean = serializers.FloatField(default=0.0)
    std_dev = serializers.FloatField(default=0.0, min_value=0.0)


class IdentificationSerializer(serializers.Serializer):
    """Subspace identification settings"""
    # None lets the identification pick the Hankel depth
    block_rows = serializers.IntegerField(
        required=False, allow_null=True, default=None, min_value=1
    )
    rank_tolerance = serializers.FloatField(
        default=RANK_TOLERANCE, min_value=0.0
    )


class PsoSerializer(serializers.Serializer):
    """Particle swarm settings. The seed is derived per trial."""
    population = serializers.IntegerField(default=50, min_value=2)
    max_iterations = serializers.IntegerField(default=200, min_value=1)
    inertia = serializers.FloatField(default=0.7)
    cognitive = serializers.FloatField(default=2.0)
    social = serializers.FloatField(default=2.0)
    penalty_coefficient = serializers.FloatField(default=1e3)
    max_velocity = serializers.FloatField(
        required=False, allow_null=True, default=None
    )

    def validate(self, attrs):
        try:
            return PsoParams(**attrs)
        except IdentificationError as exc:
            raise serializers.ValidationError(str(exc))


class ExperimentConfigSerializer(serializers.Serializer):
    """Validates a JSON experiment config and builds an ExperimentConfig"""
    plant = PlantField(default=(DEFAULT_PRESET, get_preset(DEFAULT_PRESET)))
    period = serializers.IntegerField(default=6, min_value=1)
    n_data = serializers.IntegerField(default=3000, min_value=1)
    n_val = serializers.IntegerField(default=1000, min_value=2)
    input = NoiseSerializer(required=False)
    process_noise = NoiseSerializer(required=False)
    observation_noise = NoiseSerializer(required=False)
    identification = IdentificationSerializer(required=False)
    route = serializers.ChoiceField(choices=ROUTES, default='auto')
    pso = PsoSerializer(required=False)
    trials = serializers.IntegerField(default=1, min_value=1)
    # There is no default seed. Every experiment must say which one it used.
    seed = serializers.IntegerField(min_value=0)
    output_dir = serializers.CharField(
        required=False, allow_blank=True, default=''
    )

    def validate(self, attrs):
        """Build the config and check the record is long enough"""
        name, plant = attrs['plant']
        identification = attrs.get('identification') or {}
        input_noise = attrs.get('input') or {'mean': 0.0, 'std_dev': 1.0}
        config = ExperimentConfig(
            plant=plant,
            plant_name=name,
            seed=attrs['seed'],
            period=attrs['period'],
            n_data=attrs['n_data'],
            n_val=attrs['n_val'],
            input_noise=NoiseLevel(**input_noise),
            process_noise=NoiseLevel(**(attrs.get('process_noise') or {})),
            observation_noise=NoiseLevel(
                **(attrs.get('observation_noise') or {})
            ),
            block_rows=identification.get('block_rows'),
            rank_tolerance=identification.get(
                'rank_tolerance', RANK_TOLERANCE
            ),
            route=attrs['route'],
            pso=attrs.get('pso') or PsoParams(),
            trials=attrs['trials'],
            output_dir=attrs['output_dir'],
        )
        minimum = config.minimum_length()
        if config.n_data < minimum:
            raise serializers.ValidationError({
                'n_data': f'Period {config.period} with order {config.order} '
                          f'needs at least {minimum} samples.'
            })
        return config


class TrialRecordSerializer(serializers.ModelSerializer):
    """Serializer for one stored trial"""

    class Meta:
        model = TrialRecord
        fields = ['id', 'cell', 'seed', 'status', 'total_error',
                  'fit_conv_mean', 'fit_pso_mean', 'report']
        read_only_fields = fields


class ExperimentSerializer(serializers.ModelSerializer):
    """Serializer for the experiment list"""
    trial_count = serializers.IntegerField(
        source='trials.count', read_only=True
    )

    class Meta:
        model = Experiment
        fields = ['id', 'kind', 'study', 'seed', 'created', 'trial_count']
        read_only_fields = fields


class ExperimentDetailSerializer(ExperimentSerializer):
    """Experiment with its config and every trial"""
    trials = TrialRecordSerializer(many=True, read_only=True)

    class Meta(ExperimentSerializer.Meta):
        fields = ExperimentSerializer.Meta.fields + ['config', 'trials']
        read_only_fields = fields

import math

import numpy as np
from django.conf import settings
from rest_framework import serializers

from completion.masks import MaskMode
from distributions.laws import (SEED_LIMIT, DistributionKind,
                                DistributionSpec, MomentSet,
                                make_distribution)
from edm_lab.exceptions import InvalidParameterError
from theory.bounds import TheoryParams

CLAIMS = ('chernoff', 'coherence', 'rank', 'gramian', 'completion')
COHERENCE_PATHS = ('qr', 'svd', 'both')


def round_significant(value):
    """Число с FLOAT_DIGITS значащими цифрами; inf и nan -> None."""
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f'{value:.{settings.EDM_LAB["FLOAT_DIGITS"]}g}')


class SignificantFloatField(serializers.FloatField):
    """FloatField для отчетов: 12 значащих цифр, null вместо inf/nan."""

    def to_representation(self, value):
        return round_significant(value)


class MetricsField(serializers.Field):
    """Словарь чисел, каждое округляется как SignificantFloatField."""

    def to_representation(self, value):
        return {str(key): (self.to_representation(item)
                           if isinstance(item, dict)
                           else round_significant(item))
                for key, item in value.items()}


class StrictSerializer(serializers.Serializer):
    """Отклоняет ключи, которых нет среди полей."""

    def to_internal_value(self, data):
        unknown = set(data) - set(self.fields)
        if unknown:
            raise serializers.ValidationError(
                {key: 'Неизвестный параметр.' for key in sorted(unknown)}
            )
        return super().to_internal_value(data)


def _seed_field(**kwargs):
    return serializers.IntegerField(min_value=0, max_value=SEED_LIMIT - 1,
                                    **kwargs)


def _as_validation_error(exc):
    return serializers.ValidationError(str(exc))


class DistributionInputSerializer(StrictSerializer):
    """Закон координат: --dist, носитель [a, b] и параметры закона."""
    dist = serializers.ChoiceField(
        choices=[kind.value for kind in DistributionKind],
        default=DistributionKind.UNIFORM.value,
    )
    a = serializers.FloatField(default=-1.0)
    b = serializers.FloatField(default=1.0)
    mu = serializers.FloatField(required=False)
    sigma = serializers.FloatField(required=False)
    shape1 = serializers.FloatField(required=False)
    shape2 = serializers.FloatField(required=False)

    PARAM_NAMES = {'mu': 'mu', 'sigma': 'sigma',
                   'shape1': 'alpha', 'shape2': 'beta'}

    def validate(self, attrs):
        params = {name: attrs[key] for key, name in self.PARAM_NAMES.items()
                  if key in attrs}
        try:
            attrs['spec'] = DistributionSpec(
                kind=attrs['dist'], params=params,
                support=(attrs['a'], attrs['b']),
            )
        except InvalidParameterError as exc:
            raise _as_validation_error(exc)
        return attrs


def _positive_nodes(value):
    if value < 2:
        raise serializers.ValidationError('N must be >= 2')
    return value


class GenSerializer(DistributionInputSerializer):
    n = serializers.IntegerField()
    d = serializers.IntegerField(min_value=1)
    seed = _seed_field(default=0)
    out = serializers.CharField(
        default=lambda: settings.EDM_LAB['OUTPUT_DIR']
    )

    def validate_n(self, value):
        return _positive_nodes(value)


class BoundsSerializer(DistributionInputSerializer):
    m2 = serializers.FloatField(required=False)
    m3 = serializers.FloatField(required=False)
    m4 = serializers.FloatField(required=False)
    c = serializers.FloatField(required=False)
    d = serializers.IntegerField(min_value=1)
    t = serializers.FloatField(default=0.5)
    gamma = serializers.FloatField(default=0.1)
    beta = serializers.FloatField(default=3.0)
    big_c = serializers.FloatField(default=1.0)
    n = serializers.IntegerField(required=False)

    MOMENT_KEYS = ('m2', 'm3', 'm4', 'c')

    def validate_n(self, value):
        return _positive_nodes(value)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        given = [key for key in self.MOMENT_KEYS if key in attrs]
        try:
            if given:
                if len(given) != len(self.MOMENT_KEYS):
                    raise InvalidParameterError(
                        'explicit moments need all of --m2 --m3 --m4 --c'
                    )
                moments = MomentSet(*(attrs[key]
                                      for key in self.MOMENT_KEYS))
            else:
                moments = make_distribution(attrs['spec']).moments
            attrs['params'] = TheoryParams(
                moments=moments, dim=attrs['d'], t=attrs['t'],
                gamma=attrs['gamma'], beta=attrs['beta'],
                big_c=attrs['big_c'],
            )
        except InvalidParameterError as exc:
            raise _as_validation_error(exc)
        return attrs


class CoherenceInputSerializer(DistributionInputSerializer):
    input = serializers.CharField(required=False)
    n = serializers.IntegerField(required=False)
    d = serializers.IntegerField(min_value=1, required=False)
    seed = _seed_field(default=0)
    path = serializers.ChoiceField(choices=COHERENCE_PATHS, default='both')

    def validate_n(self, value):
        return _positive_nodes(value)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        if 'input' not in attrs and not {'n', 'd'} <= set(attrs):
            raise serializers.ValidationError(
                'Укажите --in или параметры генерации --n и --d.'
            )
        return attrs


class VerifySerializer(DistributionInputSerializer):
    claim = serializers.ChoiceField(choices=CLAIMS)
    d = serializers.IntegerField(min_value=1, default=2)
    n = serializers.IntegerField(required=False)
    t = serializers.FloatField(min_value=0, max_value=1, default=0.5)
    gamma = serializers.FloatField(min_value=0, max_value=1, default=0.1)
    trials = serializers.IntegerField(min_value=1, default=200)
    seed = _seed_field(default=0)
    out = serializers.CharField(
        default=lambda: settings.EDM_LAB['OUTPUT_DIR']
    )
    save = serializers.BooleanField(default=False)
    m_grid = serializers.ListField(
        child=serializers.IntegerField(min_value=0),
        default=lambda: [1500, 2500, 3500, 4500],
    )
    seeds = serializers.IntegerField(min_value=1, default=10)
    mode = serializers.ChoiceField(
        choices=[mode.value for mode in MaskMode],
        default=MaskMode.SYMMETRIC_OFFDIAG.value,
    )
    n_grid = serializers.ListField(
        child=serializers.IntegerField(min_value=2),
        default=lambda: [100, 1000, 10000],
    )

    def validate_n(self, value):
        return _positive_nodes(value)


class CompleteSerializer(StrictSerializer):
    input = serializers.CharField()
    m = serializers.IntegerField(min_value=0)
    seed = _seed_field(default=0)
    mode = serializers.ChoiceField(
        choices=[mode.value for mode in MaskMode],
        default=MaskMode.SYMMETRIC_OFFDIAG.value,
    )
    d = serializers.IntegerField(min_value=1, required=False)
    tau = serializers.FloatField(required=False)
    step = serializers.FloatField(required=False)
    max_iter = serializers.IntegerField(min_value=1, required=False)
    tol = serializers.FloatField(required=False)
    out = serializers.CharField(required=False)


class Section4Serializer(StrictSerializer):
    seed = _seed_field(default=0)


class MomentSetSerializer(serializers.Serializer):
    m2 = SignificantFloatField()
    m3 = SignificantFloatField()
    m4 = SignificantFloatField()
    c = SignificantFloatField()


class TheoryBoundsSerializer(serializers.Serializer):
    moments = MomentSetSerializer(source='params.moments')
    d = serializers.IntegerField(source='params.dim')
    t = SignificantFloatField(source='params.t')
    gamma = SignificantFloatField(source='params.gamma')
    R_d = serializers.ListField(
        child=serializers.ListField(child=SignificantFloatField())
    )
    cubic = serializers.ListField(source='cubic.as_tuple',
                                  child=SignificantFloatField())
    cubic_roots = serializers.ListField(child=SignificantFloatField())
    lambda_star = SignificantFloatField()
    theta = SignificantFloatField()
    theta_symmetric = SignificantFloatField(allow_null=True)
    mu0 = SignificantFloatField()
    mu1 = SignificantFloatField()
    N_min = serializers.IntegerField()
    n_nodes = serializers.IntegerField()
    eps_t = SignificantFloatField(source='eps_t.eps')
    m_general = serializers.IntegerField(source='complexity.m_general',
                                         allow_null=True)
    m_improved = serializers.IntegerField(source='complexity.m_improved',
                                          allow_null=True)
    flags = serializers.DictField()


class CoherenceReportSerializer(serializers.Serializer):
    path = serializers.CharField()
    mu_U = SignificantFloatField()
    mu_U_pm = SignificantFloatField()
    mu1_emp = SignificantFloatField()
    sigma_min_sq_A = SignificantFloatField(allow_null=True)
    max_row_norm_sq = SignificantFloatField(allow_null=True)
    bound_chain = SignificantFloatField(allow_null=True)
    n_nodes = serializers.IntegerField()
    dim = serializers.IntegerField()
    effective_rank = serializers.IntegerField()
    eigenvalues = serializers.ListField(child=SignificantFloatField())
    tolerances = MetricsField()


class McReportSerializer(serializers.Serializer):
    claim = serializers.CharField()
    dist = serializers.DictField(source='config.dist.to_dict')
    d = serializers.IntegerField(source='config.dim')
    n_nodes = serializers.IntegerField(source='config.n_nodes')
    t = SignificantFloatField(source='config.t')
    gamma = SignificantFloatField(source='config.gamma')
    master_seed = serializers.IntegerField(source='config.master_seed')
    algorithm = serializers.CharField()
    trials = serializers.IntegerField()
    failures = serializers.IntegerField()
    errors = serializers.IntegerField()
    empirical_rate = SignificantFloatField()
    bound = SignificantFloatField()
    slack = SignificantFloatField()
    vacuous = serializers.BooleanField()
    passed = serializers.BooleanField()
    n_min = serializers.IntegerField(allow_null=True)
    below_n_min = serializers.BooleanField()
    extra = MetricsField()


class GramianRowSerializer(serializers.Serializer):
    n_nodes = serializers.IntegerField()
    seed = serializers.IntegerField()
    max_deviation = SignificantFloatField()
    lambda_min = SignificantFloatField()


class GramianReportSerializer(serializers.Serializer):
    claim = serializers.SerializerMethodField()
    dist_id = serializers.CharField()
    d = serializers.IntegerField(source='dim')
    lambda_star = SignificantFloatField()
    passed = serializers.BooleanField()
    rows = GramianRowSerializer(many=True)

    def get_claim(self, obj):
        return 'gramian'


class SweepPointSerializer(serializers.Serializer):
    m = serializers.IntegerField()
    runs = serializers.IntegerField()
    successes = serializers.IntegerField()
    success_rate = SignificantFloatField()


class CompletionSweepSerializer(serializers.Serializer):
    claim = serializers.SerializerMethodField()
    dist_id = serializers.CharField()
    d = serializers.IntegerField(source='dim')
    n_nodes = serializers.IntegerField()
    mode = serializers.CharField()
    monotone = serializers.BooleanField()
    passed = serializers.BooleanField()
    points = SweepPointSerializer(many=True)

    def get_claim(self, obj):
        return 'completion'


class CompletionResultSerializer(serializers.Serializer):
    iterations = serializers.IntegerField()
    converged = serializers.BooleanField()
    rel_error = SignificantFloatField(allow_null=True)
    final_rank = serializers.IntegerField()
    final_residual = serializers.SerializerMethodField()

    def get_final_residual(self, obj):
        if not obj.residual_history:
            return None
        return round_significant(obj.residual_history[-1])


class Section4ReportSerializer(serializers.Serializer):
    prior_work = MetricsField()
    lambda_min_d2 = SignificantFloatField()
    not_psd_eigenvalues = serializers.ListField(
        child=SignificantFloatField()
    )
    sign_invariance_gap = SignificantFloatField()
    coherence_path_gap = SignificantFloatField()
    passed = serializers.BooleanField()

"""
Serializers for fitted model files.
"""
import json

from django.utils.translation import gettext as _
from rest_framework import serializers

from analytics.distributions import FittedModel
from core.exceptions import InvalidModel


class FittedModelSerializer(serializers.Serializer):
    """Serializer for the delay and chain-length model."""
    a = serializers.FloatField()
    b = serializers.FloatField()
    i_min = serializers.FloatField()
    i_max = serializers.FloatField()
    c = serializers.FloatField(max_value=0)
    d = serializers.FloatField()
    mean_L = serializers.FloatField(min_value=0)
    Z_i = serializers.FloatField(read_only=True)
    Z_l = serializers.FloatField(read_only=True)

    def validate(self, attrs):
        """Check the parameters describe a normalizable model."""
        if not 0 < attrs['i_min'] < attrs['i_max']:
            msg = _('Delay bounds must satisfy 0 < i_min < i_max.')
            raise serializers.ValidationError(msg, code='bounds')
        if attrs['c'] >= 0:
            msg = _('Chain length slope c must be negative.')
            raise serializers.ValidationError(msg, code='divergent')
        return attrs

    def create(self, validated_data):
        """Create and return a model with computed normalizers."""
        try:
            return FittedModel.from_parameters(**validated_data)
        except InvalidModel as exc:
            raise serializers.ValidationError(str(exc)) from exc


def load_model(path):
    """Read and validate a model JSON file."""
    with open(path, encoding='utf-8') as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidModel(f'{path}: not JSON: {exc}') from exc
    serializer = FittedModelSerializer(data=data)
    if not serializer.is_valid():
        raise InvalidModel(f'{path}: {dict(serializer.errors)}')
    return serializer.save()


def dump_model(model, path):
    data = FittedModelSerializer(model).data
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write('\n')

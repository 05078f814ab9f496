"""
Serializers for command options.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from django.utils.translation import gettext as _
from rest_framework import serializers

MODES = ['virtual', 'real']

# inputs each command cannot run without
REQUIRED_INPUTS = {
    'synth_trace': ('topology',),
    'run': ('trace', 'topology'),
    'fit': ('trace',),
    'predict': (),
    'analyze': ('trace', 'topology', 'simlog'),
    'compare': ('trace', 'topology', 'simlog'),
}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    out: Path
    trace: Optional[Path] = None
    topology: Optional[Path] = None
    h: Optional[float] = None
    seed: int = 0
    mode: str = 'virtual'
    accel: float = 1.0
    bins: Optional[int] = None
    sweep: Tuple[float, ...] = ()
    duration: Optional[float] = None
    fetch_latency: float = 0.0
    simlog: Tuple[Path, ...] = ()
    model: Optional[Path] = None
    tolerance: Optional[float] = None

    @property
    def query_gaps(self):
        """The sweep, or the single h."""
        if self.sweep:
            return self.sweep
        return (self.h,) if self.h is not None else ()


def parse_sweep(text):
    """Comma-separated seconds, e.g. '60,300,600'."""
    try:
        values = [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise serializers.ValidationError(
            _('Sweep must be comma-separated numbers.'), code='invalid',
        )
    if not values or any(v <= 0 for v in values):
        raise serializers.ValidationError(
            _('Sweep values must be positive seconds.'), code='invalid',
        )
    return tuple(values)


class RunConfigSerializer(serializers.Serializer):
    """Serializer for the options of one command invocation."""
    subcommand = serializers.ChoiceField(choices=list(REQUIRED_INPUTS))
    out = serializers.CharField(default='.')
    trace = serializers.CharField(required=False, allow_null=True)
    topology = serializers.CharField(required=False, allow_null=True)
    h = serializers.FloatField(required=False, allow_null=True)
    seed = serializers.IntegerField(default=0, min_value=0)
    mode = serializers.ChoiceField(choices=MODES, default='virtual')
    accel = serializers.FloatField(default=1.0, min_value=1)
    bins = serializers.IntegerField(required=False, allow_null=True,
                                    min_value=1)
    sweep = serializers.CharField(required=False, allow_null=True)
    duration = serializers.FloatField(required=False, allow_null=True,
                                      min_value=0)
    fetch_latency = serializers.FloatField(default=0.0, min_value=0)
    simlog = serializers.ListField(child=serializers.CharField(),
                                   required=False, allow_null=True)
    model = serializers.CharField(required=False, allow_null=True)
    tolerance = serializers.FloatField(required=False, allow_null=True,
                                       min_value=0)

    def validate_h(self, value):
        if value is not None and value <= 0:
            raise serializers.ValidationError(
                _('Query gap must be positive seconds.'), code='invalid',
            )
        return value

    def validate_sweep(self, value):
        return parse_sweep(value) if value else ()

    def validate(self, attrs):
        """Check every required input is given and exists."""
        missing = []
        for name in REQUIRED_INPUTS[attrs['subcommand']]:
            if not attrs.get(name):
                missing.append(f'--{name}')
        paths = [attrs.get('trace'), attrs.get('topology'), attrs.get('model')]
        paths += attrs.get('simlog') or []
        missing += [p for p in paths if p and not Path(p).exists()]
        if missing:
            raise serializers.ValidationError(
                {'missing': missing}, code='missing',
            )
        if attrs['subcommand'] in ('run', 'predict') and not (
                attrs.get('h') or attrs.get('sweep')):
            raise serializers.ValidationError(
                {'h': [_('Give --h or --sweep.')]}, code='required',
            )
        return attrs

    def create(self, validated_data):
        """Create and return a RunConfig."""
        data = {k: v for k, v in validated_data.items() if v is not None}
        for name in ('trace', 'topology', 'model', 'out'):
            if name in data:
                data[name] = Path(data[name])
        data['simlog'] = tuple(Path(p) for p in data.get('simlog', ()))
        return RunConfig(**data)

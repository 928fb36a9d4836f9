"""
Marshmallow schemas for run configuration documents.

Every block rejects unknown keys. Experiment blocks are chosen by their
``kind`` field and validated with the matching schema.

Author: Ahmad Yateem
"""

from marshmallow import (
    RAISE, Schema, ValidationError, fields, post_load, pre_load, validate, validates_schema,
)

from utils.exceptions import ValidationError as ParameterError
from utils.validators import is_power_of_two, validate_dyadic

CONFIG_VERSION = 1

MODEL_VARIANTS = (
    'free', 'quintic', 'alpha_truncated', 'd_truncated', 'rescaled_truncated',
    'torus_truncated', 'inhomogeneous',
)
PROFILE_KINDS = ('gaussian', 'sech', 'lorentzian', 'plane_wave')
INIT_KINDS = PROFILE_KINDS + ('file',)
SYMBOL_KINDS = ('identity', 'sharp_low', 'smooth_low', 'dyadic', 'mD', 'mD_rescaled')


def _power_of_two(value):
    if not is_power_of_two(value):
        raise ValidationError("Must be a power of two.")


def _dyadic(value):
    try:
        validate_dyadic(value, 'value')
    except ParameterError:
        raise ValidationError("Must be a power of two.")


def _sorted(values):
    ascending = all(a <= b for a, b in zip(values, values[1:]))
    descending = all(a >= b for a, b in zip(values, values[1:]))
    if not values:
        raise ValidationError("Must be a nonempty list.")
    if not (ascending or descending):
        raise ValidationError("Must be sorted.")


def _relative_name(value):
    if not value or value.startswith(('/', '\\')) or '..' in value.replace('\\', '/').split('/'):
        raise ValidationError("Must be a file name inside the output directory.")


class StrictSchema(Schema):
    class Meta:
        unknown = RAISE


class CoefficientSchema(StrictSchema):
    kind = fields.String(load_default='cosine', validate=validate.OneOf(('constant', 'cosine', 'samples')))
    value = fields.Float(load_default=1.0)
    amplitude = fields.Float(load_default=1.0)
    table = fields.List(fields.Float(), load_default=list)


class SymbolSchema(StrictSchema):
    kind = fields.String(required=True, validate=validate.OneOf(SYMBOL_KINDS))
    N = fields.Float(validate=validate.Range(min=0, min_inclusive=False))
    D = fields.Float(validate=_dyadic)
    K = fields.Float(validate=validate.Range(min=0, min_inclusive=False))


class ModelSchema(StrictSchema):
    variant = fields.String(load_default='quintic', validate=validate.OneOf(MODEL_VARIANTS))
    lam = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    alpha = fields.Float(load_default=1.0, validate=validate.Range(min=0, max=1, min_inclusive=False))
    D = fields.Float(load_default=2.0, validate=_dyadic)
    K = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    n_cut = fields.Float(load_default=None, allow_none=True, validate=_dyadic)
    h = fields.Nested(CoefficientSchema, load_default=None, allow_none=True)
    n = fields.Integer(load_default=1, validate=validate.Range(min=1))
    symbol = fields.Nested(SymbolSchema, load_default=None, allow_none=True)

    @validates_schema
    def check_variant_fields(self, data, **kwargs):
        if data.get('variant') == 'inhomogeneous' and data.get('h') is None:
            raise ValidationError("Required for the inhomogeneous model.", 'h')
        if data.get('variant') == 'torus_truncated' and data.get('n_cut') is None:
            raise ValidationError("Required for the torus_truncated model.", 'n_cut')


class GridSchema(StrictSchema):
    length = fields.Float(load_default=32.0, validate=validate.Range(min=0, min_inclusive=False))
    points = fields.Integer(load_default=512, validate=[validate.Range(min=8), _power_of_two])


class TimeSchema(StrictSchema):
    T = fields.Float(load_default=1.0, validate=validate.Range(min=0))
    dt = fields.Float(load_default=None, allow_none=True, validate=validate.Range(min=0, min_inclusive=False))
    sample_stride = fields.Integer(load_default=None, allow_none=True, validate=validate.Range(min=1))
    scheme = fields.String(load_default=None, allow_none=True,
                           validate=validate.OneOf(('strang_exact', 'lawson_rk4')))


class ProfileSchema(StrictSchema):
    kind = fields.String(load_default='sech', validate=validate.OneOf(PROFILE_KINDS))
    amplitude = fields.Float(load_default=1.0)
    center = fields.Float(load_default=0.0)
    width = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    frequency = fields.Float(load_default=0.0)


class InitSchema(ProfileSchema):
    kind = fields.String(load_default='sech', validate=validate.OneOf(INIT_KINDS))
    path = fields.String(load_default=None, allow_none=True)

    @validates_schema
    def check_path(self, data, **kwargs):
        if data.get('kind') == 'file' and not data.get('path'):
            raise ValidationError("Required when kind is 'file'.", 'path')


class OutputSchema(StrictSchema):
    csv = fields.String(load_default='report.csv', validate=_relative_name)
    json = fields.String(load_default='summary.json', validate=_relative_name)


class HomogenizationBlock(StrictSchema):
    kind = fields.String(required=True)
    n_list = fields.List(fields.Integer(validate=validate.Range(min=1)), required=True, validate=_sorted)
    R = fields.Float(load_default=4.0, validate=validate.Range(min=0, min_inclusive=False))


class TorusApproxBlock(StrictSchema):
    kind = fields.String(required=True)
    M = fields.Float(load_default=1.0, validate=validate.Range(min=0))
    D = fields.Float(load_default=2.0, validate=_dyadic)
    K_list = fields.List(fields.Float(validate=validate.Range(min=0, min_inclusive=False)),
                         required=True, validate=_sorted)
    eps_list = fields.List(fields.Float(validate=validate.Range(min=0, min_inclusive=False)),
                           required=True, validate=_sorted)
    profile = fields.String(load_default='lorentzian', validate=validate.OneOf(('gaussian', 'sech', 'lorentzian')))
    width = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    min_length = fields.Float(load_default=32.0, validate=validate.Range(min=0, min_inclusive=False))

    @validates_schema
    def check_lengths(self, data, **kwargs):
        if len(data.get('K_list', [])) != len(data.get('eps_list', [])):
            raise ValidationError("Must have as many entries as K_list.", 'eps_list')


class WeakLimitBlock(StrictSchema):
    kind = fields.String(required=True)
    x_shift_list = fields.List(fields.Float(), required=True, validate=_sorted)
    M_list = fields.List(fields.Float(validate=validate.Range(min=0, min_inclusive=False)),
                         required=True, validate=_sorted)
    D = fields.Float(load_default=2.0, validate=_dyadic)
    bump = fields.Nested(ProfileSchema, load_default=lambda: {'kind': 'gaussian'})
    functionals = fields.List(fields.Nested(ProfileSchema), required=True,
                              validate=validate.Length(min=1))
    t_list = fields.List(fields.Float(validate=validate.Range(min=0, min_inclusive=False)),
                         required=True, validate=_sorted)

    @validates_schema
    def check_lengths(self, data, **kwargs):
        if len(data.get('x_shift_list', [])) != len(data.get('M_list', [])):
            raise ValidationError("Must have as many entries as x_shift_list.", 'M_list')


class NonsqueezeBlock(StrictSchema):
    kind = fields.String(required=True)
    ell = fields.Nested(ProfileSchema, required=True)
    alpha = fields.List(fields.Float(), load_default=lambda: [0.0, 0.0],
                        validate=validate.Length(equal=2))
    r = fields.Float(required=True, validate=validate.Range(min=0, min_inclusive=False))
    sample_count = fields.Integer(load_default=64, validate=validate.Range(min=1))


class ForcingBlock(StrictSchema):
    amplitude = fields.Float(load_default=1.0)
    center = fields.Float(load_default=0.0)
    width = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    frequency = fields.Float(load_default=1.0)


class StabilityBlock(StrictSchema):
    kind = fields.String(required=True)
    eps_list = fields.List(fields.Float(validate=validate.Range(min=0)), required=True, validate=_sorted)
    mode = fields.String(load_default='forcing', validate=validate.OneOf(('forcing', 'data', 'both')))
    forcing = fields.Nested(ForcingBlock, load_default=dict)
    perturbation = fields.Nested(ProfileSchema, load_default=None, allow_none=True)


class KernelBlock(StrictSchema):
    kind = fields.String(required=True)
    N = fields.Float(required=True, validate=validate.Range(min=0, min_inclusive=False))
    T = fields.Float(required=True, validate=validate.Range(min=0, min_inclusive=False))
    lengths = fields.List(fields.Float(validate=validate.Range(min=0, min_inclusive=False)),
                          required=True, validate=_sorted)
    t_min_list = fields.List(fields.Float(validate=validate.Range(min=0, min_inclusive=False)),
                             load_default=None, allow_none=True)
    t_samples = fields.Integer(load_default=64, validate=validate.Range(min=2))


NESTED_BLOCKS = ('model', 'grid', 'time', 'init', 'outputs')

EXPERIMENT_BLOCKS = {
    'homogenization': HomogenizationBlock,
    'torus_approx': TorusApproxBlock,
    'weak_convergence': WeakLimitBlock,
    'nonsqueezing': NonsqueezeBlock,
    'stability': StabilityBlock,
    'kernel': KernelBlock,
}


class ExperimentField(fields.Dict):
    """Experiment block validated by the schema registered for its ``kind``."""

    def _deserialize(self, value, attr, data, **kwargs):
        value = super()._deserialize(value, attr, data, **kwargs)
        kind = value.get('kind')
        if kind not in EXPERIMENT_BLOCKS:
            raise ValidationError({'kind': [f"Must be one of: {', '.join(EXPERIMENT_BLOCKS)}."]})
        return EXPERIMENT_BLOCKS[kind]().load(value)


class RunConfigSchema(StrictSchema):
    version = fields.Integer(load_default=CONFIG_VERSION, validate=validate.Equal(CONFIG_VERSION))
    seed = fields.Integer(load_default=0, validate=validate.Range(min=0, max=2 ** 64 - 1))
    model = fields.Nested(ModelSchema, load_default=dict)
    grid = fields.Nested(GridSchema, load_default=dict)
    time = fields.Nested(TimeSchema, load_default=dict)
    init = fields.Nested(InitSchema, load_default=dict)
    experiment = ExperimentField(load_default=None, allow_none=True)
    outputs = fields.Nested(OutputSchema, load_default=dict)

    @pre_load
    def fill_blocks(self, data, **kwargs):
        # nested defaults only apply to blocks present in the input
        if isinstance(data, dict):
            data = dict(data)
            for key in NESTED_BLOCKS:
                data.setdefault(key, {})
        return data

    @post_load
    def make_config(self, data, **kwargs):
        from cli_io.config import RunConfig
        return RunConfig(**data)

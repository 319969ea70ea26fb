"""Deterministic weather-streak pixel masks for images and CIFAR-10 batches.

Generates rain, snow and hail masks from an image size alone, applies them
to rasters and dataset batches, and scores classifier prediction files.
"""

from .dataset import (
    CIFAR_DIMS,
    CLASS_NAMES,
    LabeledImage,
    perturb_batch,
    read_cifar_batch,
    write_cifar_batch,
)
from .errors import DimensionMismatch, FakeWeatherError, FormatError
from .image import (
    ImageBuffer,
    ImageFormat,
    apply_mask,
    decode_image,
    encode_image,
    solid_image,
)
from .maskgen import (
    AttackConfig,
    Band,
    ImageDims,
    Mask,
    below_v,
    gen_hail_mask,
    gen_mask,
    gen_rain_mask,
    gen_snow_mask,
    perturbation_budget,
    rain_mask_plan,
    read_mask,
    read_mask_file,
    snow_band,
    write_mask,
    write_mask_file,
)
from .metrics import (
    EvalReport,
    PredictionRecord,
    compute_asr,
    compute_report,
    format_predictions,
    parse_predictions,
)
from .patterns import (
    Pattern,
    PatternKind,
    PixelPerturbation,
    WeatherKind,
    WEATHER_COLORS,
    agglomerate_pattern,
    hail_pattern,
    line_pattern,
    patch_pattern,
    snow_pattern,
)

__version__ = "0.1.0"

__all__ = [
    "AttackConfig",
    "Band",
    "CIFAR_DIMS",
    "CLASS_NAMES",
    "DimensionMismatch",
    "EvalReport",
    "FakeWeatherError",
    "FormatError",
    "ImageBuffer",
    "ImageDims",
    "ImageFormat",
    "LabeledImage",
    "Mask",
    "Pattern",
    "PatternKind",
    "PixelPerturbation",
    "PredictionRecord",
    "WEATHER_COLORS",
    "WeatherKind",
    "agglomerate_pattern",
    "apply_mask",
    "below_v",
    "compute_asr",
    "compute_report",
    "decode_image",
    "encode_image",
    "format_predictions",
    "gen_hail_mask",
    "gen_mask",
    "gen_rain_mask",
    "gen_snow_mask",
    "hail_pattern",
    "line_pattern",
    "parse_predictions",
    "patch_pattern",
    "perturb_batch",
    "perturbation_budget",
    "rain_mask_plan",
    "read_cifar_batch",
    "read_mask",
    "read_mask_file",
    "snow_band",
    "snow_pattern",
    "solid_image",
    "write_cifar_batch",
    "write_mask",
    "write_mask_file",
]

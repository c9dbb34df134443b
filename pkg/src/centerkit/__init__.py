"""Drinfeld-center toolkit for unitary fusion categories."""

from .fusion import (
    FusionCategory,
    FusionDataError,
    ComposeError,
    Morphism,
    ValidationReport,
    word,
    dual_word,
    identity,
    zero,
    compose,
    tensor,
    onb,
    cup,
    cap,
    frobenius_left,
    frobenius_left_inv,
    frobenius_right,
    frobenius_right_inv,
    dual_morphism,
    validate,
)
from .io import builtin, parse_fusion_data, load_fusion_data, serialize_fusion_data, fingerprint

__version__ = "0.1.0"

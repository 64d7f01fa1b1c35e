"""Afterimage color prediction.

The model runs in two stages. Simultaneous contrast between the test
field and its surround shifts the test color toward the opposite of the
inducing color:

    c_mt = alpha * opposite(c_oi) + (1 - alpha) * c_ot

Successive contrast then mixes the opposite of that shifted color with
the new stimulating color to give the perceived afterimage test color,
and the inducing-field afterimage mixes the opposite surround with the
new color directly:

    c_at = beta_t * opposite(c_mt) + (1 - beta_t) * c_n
    c_ai = beta_i * opposite(c_oi) + (1 - beta_i) * c_n

Expanding the first pair gives the closed form actually computed here:

    c_at = beta_t*(1 - alpha)*(1 - c_ot) + beta_t*alpha*c_oi + (1 - beta_t)*c_n

The three coefficients partition 1, so every output is a convex
combination of in-range colors and never needs clamping. Weights and
colors are exact rationals throughout, so the expanded closed form and
the composed two-stage route agree exactly, and with the default
alpha = beta_t = 0.4 the closed-form coefficients come out exactly
(0.24, 0.16, 0.60).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .colors import (
    InducingClass,
    NamedColor,
    Rgb,
    classify_inducing,
    mix,
    opposite,
    scale,
)

WeightLike = Fraction | float | int | str


@dataclass(frozen=True)
class StimulusSpec:
    """One adaptation trial: old test color, old inducing color, new color."""

    c_ot: Rgb
    c_oi: Rgb
    c_n: Rgb

    def __post_init__(self) -> None:
        for name in ("c_ot", "c_oi", "c_n"):
            if not isinstance(getattr(self, name), Rgb):
                raise TypeError(f"{name} must be an Rgb, got {getattr(self, name)!r}")


class ParamProvenance(Enum):
    DEFAULT = "default"
    SPECIAL_RED = "special_red"
    SPECIAL_GREEN = "special_green"
    SPECIAL_BLUE = "special_blue"
    MANUAL = "manual"


def _as_weight(value: WeightLike) -> Fraction:
    # Fraction("0.4") is the decimal 2/5; Fraction(0.4) is the exact binary
    # value of the float. Both keep the coefficient algebra exact.
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    return Fraction(float(value))


@dataclass(frozen=True)
class ModelParams:
    """Model weights (alpha, beta_t, beta_i), each strictly inside (0, 1).

    Stored as exact rationals so that identities over the weights, such
    as the coefficient partition beta_t*(1-alpha) + beta_t*alpha +
    (1-beta_t) = 1, hold exactly rather than to rounding error.
    """

    alpha: Fraction
    beta_t: Fraction
    beta_i: Fraction
    provenance: ParamProvenance = ParamProvenance.MANUAL

    def __post_init__(self) -> None:
        for name, value in (("alpha", self.alpha), ("beta_t", self.beta_t), ("beta_i", self.beta_i)):
            if not isinstance(value, Fraction):
                raise TypeError(f"{name} must be a Fraction; use ModelParams.manual() to coerce")
            if not 0 < value < 1:
                raise ValueError(f"{name}={value} must lie strictly inside (0, 1)")

    @classmethod
    def manual(
        cls,
        alpha: WeightLike,
        beta_t: WeightLike,
        beta_i: WeightLike,
        provenance: ParamProvenance = ParamProvenance.MANUAL,
    ) -> "ModelParams":
        """Build params from floats, decimal strings, or Fractions."""
        return cls(_as_weight(alpha), _as_weight(beta_t), _as_weight(beta_i), provenance)

    def coefficients(self) -> tuple[float, float, float]:
        """Closed-form weights (k_opposite, k_inducing, k_new), rounded once.

        Computed in exact rational arithmetic before the single rounding
        to float, so the defaults give literally (0.24, 0.16, 0.6).
        """
        return (
            float(self.beta_t * (1 - self.alpha)),
            float(self.beta_t * self.alpha),
            float(1 - self.beta_t),
        )

    def coefficient_partition(self) -> Fraction:
        """Exact sum of the three closed-form coefficients (always 1)."""
        return self.beta_t * (1 - self.alpha) + self.beta_t * self.alpha + (1 - self.beta_t)


_DEFAULT_ALPHA = Fraction("0.4")
_DEFAULT_BETA_T = Fraction("0.4")
_BETA_I_WHITE = Fraction("0.1")
_BETA_I_CHROMATIC = Fraction("0.2")

# (alpha, beta_t) overrides when the surround is white and the new color
# repeats the old test color exactly; keyed by that primary.
_SPECIAL_CASES: dict[Rgb, tuple[Fraction, Fraction, ParamProvenance]] = {
    NamedColor.RED.rgb: (Fraction("0.6"), Fraction("0.35"), ParamProvenance.SPECIAL_RED),
    NamedColor.GREEN.rgb: (Fraction("0.75"), Fraction("0.45"), ParamProvenance.SPECIAL_GREEN),
    NamedColor.BLUE.rgb: (Fraction("0.7"), Fraction("0.4"), ParamProvenance.SPECIAL_BLUE),
}


def select_params(spec: StimulusSpec) -> ModelParams:
    """Choose model weights for a stimulus.

    beta_i is 0.1 for a white surround and 0.2 otherwise. alpha/beta_t
    default to 0.4/0.4, except in the repeated-primary special cases
    (white surround, c_n identical to c_ot, c_ot one of red/green/blue),
    which carry their own tuned weights. Matching is exact: near-primary
    inputs fall back to the defaults.
    """
    inducing = classify_inducing(spec.c_oi)
    beta_i = _BETA_I_WHITE if inducing is InducingClass.WHITE else _BETA_I_CHROMATIC
    if inducing is InducingClass.WHITE and spec.c_n == spec.c_ot and spec.c_ot in _SPECIAL_CASES:
        alpha, beta_t, provenance = _SPECIAL_CASES[spec.c_ot]
        return ModelParams(alpha, beta_t, beta_i, provenance)
    return ModelParams(_DEFAULT_ALPHA, _DEFAULT_BETA_T, beta_i, ParamProvenance.DEFAULT)


def modified_test_color(spec: StimulusSpec, params: ModelParams) -> Rgb:
    """Simultaneous-contrast shift of the test color.

    alpha * opposite(c_oi) + (1 - alpha) * c_ot; for a white surround
    this degenerates to (1 - alpha) * c_ot.
    """
    return mix(opposite(spec.c_oi), spec.c_ot, params.alpha)


def afterimage_test_color(spec: StimulusSpec, params: ModelParams) -> Rgb:
    """Predicted afterimage color in the test field (closed form).

    Computed in exact rationals, so it equals the composed two-stage
    route beta_t * opposite(c_mt) + (1 - beta_t) * c_n exactly.
    """
    k_opp = params.beta_t * (1 - params.alpha)
    k_ind = params.beta_t * params.alpha
    k_new = 1 - params.beta_t

    def component(x_ot: Fraction, x_oi: Fraction, x_n: Fraction) -> Fraction:
        return k_opp * (1 - x_ot) + k_ind * x_oi + k_new * x_n

    return Rgb(
        component(spec.c_ot.r, spec.c_oi.r, spec.c_n.r),
        component(spec.c_ot.g, spec.c_oi.g, spec.c_n.g),
        component(spec.c_ot.b, spec.c_oi.b, spec.c_n.b),
    )


def afterimage_inducing_color(spec: StimulusSpec, params: ModelParams) -> Rgb:
    """Predicted afterimage color in the inducing field.

    beta_i * opposite(c_oi) + (1 - beta_i) * c_n; with a white surround
    only the new-color term survives.
    """
    return mix(opposite(spec.c_oi), spec.c_n, params.beta_i)


@dataclass(frozen=True)
class AfterimagePrediction:
    """Complete prediction for one stimulus, with the weights used."""

    c_mt: Rgb
    c_at: Rgb
    c_ai: Rgb
    params: ModelParams


def predict(spec: StimulusSpec, params: ModelParams | None = None) -> AfterimagePrediction:
    """Run the full model on a stimulus.

    With params omitted the weights come from select_params; passing
    explicit ModelParams overrides them (provenance MANUAL by default).
    """
    p = select_params(spec) if params is None else params
    return AfterimagePrediction(
        c_mt=modified_test_color(spec, p),
        c_at=afterimage_test_color(spec, p),
        c_ai=afterimage_inducing_color(spec, p),
        params=p,
    )


class BaselineScheme(Enum):
    """Which complementary-color pairing builds the comparison image S1."""

    GROUP1 = "group1"  # lookup table: red-green, yellow-purple, blue-orange
    GROUP2 = "group2"  # opposite color 1 - c


class UnpairedColorError(ValueError):
    """Group1 complement requested for a color outside its six-hue table."""


_PURPLE = Rgb("0.5", 0, "0.5")
_ORANGE = Rgb(1, "0.5", 0)

_GROUP1_PAIRS: dict[Rgb, Rgb] = {}
for _a, _b in (
    (NamedColor.RED.rgb, NamedColor.GREEN.rgb),
    (NamedColor.YELLOW.rgb, _PURPLE),
    (NamedColor.BLUE.rgb, _ORANGE),
):
    _GROUP1_PAIRS[_a] = _b
    _GROUP1_PAIRS[_b] = _a

BASELINE_DIMMING = Fraction("0.9")


def complement(c: Rgb, scheme: BaselineScheme) -> Rgb:
    """Complementary color under the given pairing scheme."""
    if scheme is BaselineScheme.GROUP2:
        return opposite(c)
    try:
        return _GROUP1_PAIRS[c]
    except KeyError:
        raise UnpairedColorError(
            f"group1 pairing is defined only for red, green, yellow, purple, "
            f"blue and orange; got {c!r}"
        ) from None


def complementary_baseline(spec: StimulusSpec, scheme: BaselineScheme) -> tuple[Rgb, Rgb]:
    """Traditional comparison image S1: complement of c_ot over c_n, dimmed.

    Both fields are multiplied by 0.9. Returns (test color, inducing color).
    """
    c_ct = scale(complement(spec.c_ot, scheme), BASELINE_DIMMING)
    c_ci = scale(spec.c_n, BASELINE_DIMMING)
    return c_ct, c_ci

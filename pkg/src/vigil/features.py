"""Arousal, valence, and dominance ratios from per-window band powers.

All three features are alpha/beta power ratios over fixed frontal and
parietal electrodes, so they are invariant to uniform signal scaling.
Denominators are guarded by ``eps`` instead of raising, which keeps a
streaming run alive when an electrode flat-lines.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dsp import BandPowers
from .errors import VigilError

AROUSAL_CHANNELS = ("AF3", "AF4", "F3", "F4")
DOMINANCE_CHANNELS = ("FC6", "F8", "P8")
REQUIRED_CHANNELS = ("AF3", "AF4", "F3", "F4", "FC6", "F8", "P8")

DEFAULT_EPS = 1e-12


class MissingChannel(VigilError):
    """A required electrode is absent from the band-power map."""

    def __init__(self, channel: str):
        self.channel = channel
        super().__init__(f"required channel {channel!r} missing")


@dataclass(frozen=True)
class FeatureVector:
    arousal: float
    valence: float
    dominance: float
    window_start: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {
            "arousal": self.arousal,
            "valence": self.valence,
            "dominance": self.dominance,
        }


def extract_features(
    bp: BandPowers,
    eps: float = DEFAULT_EPS,
    invert_arousal: bool = False,
) -> FeatureVector:
    """Compute the three drowsiness features for one analysis window.

    arousal   = sum of frontal alpha / sum of frontal beta
    valence   = alpha/beta at F4 minus alpha/beta at F3
    dominance = sum over FC6, F8, P8 of beta/alpha

    ``invert_arousal`` flips arousal to the beta/alpha orientation some
    descriptions use; the default keeps the alpha/beta form.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    for name in REQUIRED_CHANNELS:
        if name not in bp.powers:
            raise MissingChannel(name)

    alpha_sum = sum(bp.powers[c].alpha for c in AROUSAL_CHANNELS)
    beta_sum = sum(bp.powers[c].beta for c in AROUSAL_CHANNELS)
    if invert_arousal:
        arousal = beta_sum / max(alpha_sum, eps)
    else:
        arousal = alpha_sum / max(beta_sum, eps)

    f4, f3 = bp.powers["F4"], bp.powers["F3"]
    valence = f4.alpha / max(f4.beta, eps) - f3.alpha / max(f3.beta, eps)

    dominance = sum(
        bp.powers[c].beta / max(bp.powers[c].alpha, eps) for c in DOMINANCE_CHANNELS
    )
    return FeatureVector(arousal, valence, dominance, bp.window_start)


def smooth_features(vectors: list[FeatureVector], factor: float) -> list[FeatureVector]:
    """Exponential smoothing across windows; ``factor`` 0 disables it.

    smoothed_t = factor * smoothed_{t-1} + (1 - factor) * raw_t
    """
    if not 0 <= factor < 1:
        raise ValueError("smoothing factor must lie in [0, 1)")
    if factor == 0 or not vectors:
        return list(vectors)
    out = [vectors[0]]
    for vec in vectors[1:]:
        prev = out[-1]
        out.append(
            FeatureVector(
                factor * prev.arousal + (1 - factor) * vec.arousal,
                factor * prev.valence + (1 - factor) * vec.valence,
                factor * prev.dominance + (1 - factor) * vec.dominance,
                vec.window_start,
            )
        )
    return out

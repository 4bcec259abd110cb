"""Classifier output shared by every model family."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping


@dataclass(frozen=True)
class Prediction:
    """Winning label plus the per-class scores it was chosen from.

    Higher scores are always better, so distance-based classifiers report
    negated distances. ``margin`` is best minus runner-up.
    """

    label: str
    scores: dict
    margin: float
    neighbors: tuple = ()

    def ranked(self) -> list[tuple[str, float]]:
        return sorted(self.scores.items(), key=lambda kv: (-kv[1], kv[0]))


def argmax_prediction(scores: Mapping[str, float], **extra) -> Prediction:
    """Pick the top-scoring class; equal scores go to the lexicographically first class."""
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    margin = ranked[0][1] - ranked[1][1] if len(ranked) > 1 else 0.0
    return Prediction(ranked[0][0], dict(sorted(scores.items())), margin, **extra)

"""Extractive transcription selection: the reliability-weighted medoid.

Each candidate gets a reliability weight; a candidate's score is its
weight-averaged distance to all others, and weights are refreshed as inverse
scores until they settle or an iteration cap is hit. The returned pick is
always one of the inputs (never a synthesized text): the candidate closest to
the weighted aggregate.

Distances come from the normalized symmetric character rate, so the whole
computation is deterministic and works without annotator identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metrics import sym_char_distance
from .corpus import (
    SourceKind,
    TranscribedLine,
    Transcription,
    TranscriptionSource,
    canonical_transcriptions,
)

#: Guards the inverse-score update when a candidate sits exactly on the
#: aggregate; far below any meaningful distance, so it never changes a pick.
EPSILON = 1e-6

MAX_ITERATIONS = 50
TOLERANCE = 1e-6


@dataclass(frozen=True)
class RasaSelection:
    """Chosen input index plus the final per-candidate reliability weights.

    ``iterations`` counts update steps taken; ``converged`` reports whether
    the weight change dropped below tolerance before the iteration cap.
    Near-degenerate inputs may run to the cap; the selection is still valid.
    """

    index: int
    weights: tuple[float, ...]
    iterations: int
    converged: bool


def distance_matrix(texts: Sequence[str]) -> np.ndarray:
    """Symmetric matrix of normalized character distances, zero diagonal.

    Raises:
        ValueError: if the list is empty.
    """
    if not texts:
        raise ValueError("distance_matrix requires at least one text")
    n = len(texts)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = sym_char_distance(texts[i], texts[j])
            matrix[i, j] = matrix[j, i] = d
    return matrix


def rasa_select(texts: Sequence[str]) -> RasaSelection:
    """Pick the input closest to the reliability-weighted aggregate.

    Weights start uniform; each round scores every candidate by its weighted
    mean distance to the others and resets weights to normalized inverse
    scores. Ties on the final score go to the lowest index.

    Raises:
        ValueError: if the list is empty.
    """
    if not texts:
        raise ValueError("rasa_select requires at least one text")
    n = len(texts)
    if n == 1:
        return RasaSelection(index=0, weights=(1.0,), iterations=0, converged=True)

    matrix = distance_matrix(texts)
    weights = np.full(n, 1.0 / n)
    iterations = 0
    converged = False
    for iterations in range(1, MAX_ITERATIONS + 1):
        scores = matrix @ weights
        updated = 1.0 / (EPSILON + scores)
        updated /= updated.sum()
        delta = float(np.max(np.abs(updated - weights)))
        weights = updated
        if delta < TOLERANCE:
            converged = True
            break

    final_scores = matrix @ weights
    index = int(np.argmin(final_scores))
    return RasaSelection(
        index=index,
        weights=tuple(float(w) for w in weights),
        iterations=iterations,
        converged=converged,
    )


def selected_transcription(line: TranscribedLine) -> Transcription:
    """Pick among a line's human and automatic transcriptions, tagged as an
    aggregate source."""
    texts = [t.text for t in canonical_transcriptions(line)]
    if not texts:
        raise ValueError(f"line {line.line_id!r} has no votable transcriptions")
    pick = rasa_select(texts)
    return Transcription(
        text=texts[pick.index], source=TranscriptionSource(SourceKind.AGGREGATE_RASA)
    )

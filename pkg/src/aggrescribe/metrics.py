"""Edit distance with alignment traceback, plus the CER/WER/symmetric rates.

All functions work on plain Python sequences: character-level callers pass
strings directly (a ``str`` is a sequence of Unicode scalars), word-level
callers pass the lists produced by ``str.split()``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

MATCH = "match"
SUBSTITUTE = "substitute"
DELETE = "delete"
INSERT = "insert"


@dataclass(frozen=True)
class EditAlignment:
    """Minimum unit-cost edit distance together with one optimal alignment.

    ``ops`` is a tuple of ``(kind, i, j)`` steps where ``i`` indexes the
    source sequence and ``j`` the target; the side a step does not consume is
    ``None``. Replaying the steps on the source yields the target, and
    ``distance`` equals the number of non-match steps. When several optimal
    alignments exist the traceback prefers match, then substitute, then
    delete, then insert, so the result is deterministic.
    """

    distance: int
    ops: tuple[tuple[str, int | None, int | None], ...]


def edit_distance(a: Sequence[str], b: Sequence[str]) -> EditAlignment:
    """Align two token sequences with unit costs (Levenshtein).

    Substitutions, insertions and deletions all cost 1. Empty sequences are
    allowed.
    """
    m, n = len(a), len(b)
    dist = [list(range(n + 1))] + [[i] + [0] * n for i in range(1, m + 1)]
    for i in range(1, m + 1):
        row, prev = dist[i], dist[i - 1]
        ai = a[i - 1]
        for j in range(1, n + 1):
            row[j] = min(
                prev[j - 1] + (ai != b[j - 1]),
                prev[j] + 1,
                row[j - 1] + 1,
            )

    ops: list[tuple[str, int | None, int | None]] = []
    i, j = m, n
    while i > 0 or j > 0:
        d = dist[i][j]
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and dist[i - 1][j - 1] == d:
            ops.append((MATCH, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and dist[i - 1][j - 1] + 1 == d:
            ops.append((SUBSTITUTE, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and dist[i - 1][j] + 1 == d:
            ops.append((DELETE, i - 1, None))
            i -= 1
        else:
            ops.append((INSERT, None, j - 1))
            j -= 1
    ops.reverse()
    return EditAlignment(distance=dist[m][n], ops=tuple(ops))


def _distance(a: Sequence[str], b: Sequence[str]) -> int:
    # Two-row Wagner-Fischer; same metric as edit_distance but without the
    # traceback table, used on the hot paths of the rate helpers.
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ai in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, bj in enumerate(b, start=1):
            cur[j] = min(prev[j - 1] + (ai != bj), prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return prev[-1]


def cer(hypothesis: str, reference: str) -> float:
    """Character error rate: edit distance divided by the reference length.

    May exceed 1.0 when the hypothesis is much longer than the reference.

    Raises:
        ValueError: if the reference is empty (the rate is undefined; use
            sym_char_distance when either side may be empty).
    """
    if not reference:
        raise ValueError("cer is undefined for an empty reference; use sym_char_distance")
    return _distance(hypothesis, reference) / len(reference)


def wer(hypothesis: str, reference: str) -> float:
    """Word error rate over whitespace-delimited tokens.

    Raises:
        ValueError: if the reference contains no word token.
    """
    ref_words = reference.split()
    if not ref_words:
        raise ValueError("wer is undefined for a reference with no word tokens")
    return _distance(hypothesis.split(), ref_words) / len(ref_words)


def sym_char_distance(a: str, b: str) -> float:
    """Symmetric character distance, normalized into [0, 1].

    Edit distance divided by the length of the longer string; 0.0 when both
    strings are empty. Equals 0 iff the strings are identical.
    """
    return _distance(a, b) / max(len(a), len(b), 1)

"""Smoothed sentence-level BLEU for short generated summaries.

Higher-order n-gram precisions get add-one smoothing (unigrams stay raw),
which keeps single-sentence scores meaningful where plain BLEU collapses
to zero.  Corpus scores are the arithmetic mean of sentence scores, the
reporting convention of the code-summarization leaderboards.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyCorpus, EmptyReference

# Published Java code-summarization scores for context when reading
# reports produced by the CLI; none of these is a target of this package.
REFERENCE_JAVA_SCORES = {
    "seq2seq": 15.09,
    "transformer": 16.26,
    "roberta": 16.47,
    "codebert": 17.65,
}


@dataclass(frozen=True)
class BleuScore:
    score: float  # 0..100
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    candidate_len: int
    reference_len: int


def bleu_tokens(text: str) -> list[str]:
    """Evaluation tokenization: lowercase, then whitespace split."""
    return text.lower().split()


def sentence_bleu(candidate: Sequence[str], reference: Sequence[str],
                  max_n: int = 4) -> BleuScore:
    """Smoothed BLEU of one candidate against one reference.

    p1 is the raw clipped unigram precision; pn for n >= 2 is
    (matches + 1) / (count + 1), so a candidate shorter than n contributes
    1 for that order.  A candidate with zero unigram overlap scores 0.
    """
    if not reference:
        raise EmptyReference("reference token list is empty")
    candidate = list(candidate)
    reference = list(reference)
    cand_len = len(candidate)
    ref_len = len(reference)

    precisions: list[float] = []
    for n in range(1, max_n + 1):
        count = max(0, cand_len - n + 1)
        cand_grams = Counter(
            tuple(candidate[i:i + n]) for i in range(count)
        )
        ref_grams = Counter(
            tuple(reference[i:i + n]) for i in range(max(0, ref_len - n + 1))
        )
        matches = sum(min(c, ref_grams[g]) for g, c in cand_grams.items())
        if n == 1:
            precisions.append(matches / count if count else 0.0)
        else:
            precisions.append((matches + 1) / (count + 1))

    if cand_len == 0:
        bp = 0.0
    elif cand_len > ref_len:
        bp = 1.0
    else:
        bp = math.exp(1.0 - ref_len / cand_len)

    if precisions[0] == 0.0:
        score = 0.0
    else:
        score = 100.0 * bp * math.exp(
            sum(math.log(p) for p in precisions) / len(precisions)
        )
    return BleuScore(score, tuple(precisions), bp, cand_len, ref_len)


def corpus_bleu(pairs: Sequence[tuple[Sequence[str], Sequence[str]]]) -> float:
    """Mean of per-sentence smoothed scores over (candidate, reference) pairs."""
    if not pairs:
        raise EmptyCorpus("no candidate/reference pairs")
    return sum(sentence_bleu(c, r).score for c, r in pairs) / len(pairs)

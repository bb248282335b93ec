"""Bag-of-words histograms over symbol sequences.

Words are stride-1 sliding windows of symbol tuples; the vocabulary is
the sorted union across the whole corpus so every cycle's histogram
shares one coordinate system. Weights divide raw counts by the cycle's
tick count, which makes the representation invariant to cycle length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import VocabularyMismatch, WordLengthExceedsSequence, WordNotInVocabulary
from .symbolic import SymbolSequence

BOW_METRICS = ("euclidean", "manhattan", "cosine")


@dataclass(frozen=True)
class Vocabulary:
    words: tuple            # lexicographically sorted tuples of symbol indices
    word_length: int
    index: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})

    def __len__(self):
        return len(self.words)

    def labels(self, alphabet_size: int) -> list[str]:
        letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
        if alphabet_size <= len(letters):
            return ["".join(letters[s] for s in w) for w in self.words]
        return ["-".join(str(s) for s in w) for w in self.words]


@dataclass(frozen=True)
class BowVector:
    cycle_id: int
    counts: np.ndarray   # raw word counts, one per vocabulary word
    weights: np.ndarray  # counts / tick_count
    tick_count: int
    vocab: Vocabulary


def _words_of(sequence: SymbolSequence, word_length: int):
    symbols = tuple(int(s) for s in sequence.symbols)
    return [symbols[i : i + word_length]
            for i in range(len(symbols) - word_length + 1)]


def build_vocabulary(sequences: list[SymbolSequence], word_length: int = 1) -> Vocabulary:
    """Sorted union of all sliding-window words across the corpus.

    Sequences shorter than the word length contribute nothing; it is an
    error only if every sequence is too short.
    """
    if word_length < 1:
        raise ValueError("word_length must be >= 1")
    seen = set()
    any_long_enough = False
    for seq in sequences:
        words = _words_of(seq, word_length)
        if words:
            any_long_enough = True
        seen.update(words)
    if not any_long_enough:
        raise WordLengthExceedsSequence(
            f"no sequence has at least {word_length} symbols"
        )
    return Vocabulary(words=tuple(sorted(seen)), word_length=word_length)


def build_bow(sequence: SymbolSequence, vocab: Vocabulary, tick_count: int) -> BowVector:
    """Tally the sequence's words over the vocabulary and normalize by ticks."""
    if tick_count < 1:
        raise ValueError("tick_count must be >= 1")
    counts = np.zeros(len(vocab), dtype=np.float64)
    for word in _words_of(sequence, vocab.word_length):
        if word not in vocab.index:
            raise WordNotInVocabulary(word)
        counts[vocab.index[word]] += 1
    weights = counts / tick_count
    counts.setflags(write=False)
    weights.setflags(write=False)
    return BowVector(cycle_id=sequence.cycle_id, counts=counts,
                     weights=weights, tick_count=tick_count, vocab=vocab)


def bow_distance(x: BowVector, y: BowVector, metric: str = "euclidean") -> float:
    """Distance between two histograms sharing one vocabulary."""
    if x.vocab.words != y.vocab.words:
        raise VocabularyMismatch("vectors come from different vocabularies")
    if metric not in BOW_METRICS:
        raise ValueError(f"metric must be one of {BOW_METRICS}")
    a, b = x.weights, y.weights
    if metric == "euclidean":
        return float(np.sqrt(np.sum((a - b) ** 2)))
    if metric == "manhattan":
        return float(np.sum(np.abs(a - b)))
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0 if na == nb else 1.0
    return float(np.clip(1.0 - np.dot(a, b) / (na * nb), 0.0, 2.0))


def bow_matrix(vectors: list[BowVector]) -> np.ndarray:
    """Stack weights into one matrix, rows = cycles, columns = words."""
    return np.vstack([v.weights for v in vectors])

"""Corpus loading, synthetic generation, and text preprocessing.

A corpus is an ordered collection of labeled documents.  Preprocessing
follows the usual IR pipeline: tokenize to lowercase alphabetic runs,
drop stopwords, Porter-stem the remainder.  Corpus files are JSON lines,
one flat ``{"id", "label", "text"}`` object per line (UTF-8).

The synthetic generator produces labeled corpora with a controllable
mixture of class-private and shared vocabulary plus short recurring
class-specific phrases, so that phrase-sensitive clustering methods have
real signal to find.  Generation is fully deterministic for a fixed seed.
"""

from __future__ import annotations

import json
import logging
import random
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .porter import stem

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[A-Za-z]+")


class CorpusError(ValueError):
    """Raised for malformed corpus files or invalid generator parameters."""


@dataclass(frozen=True)
class RawDocument:
    """A document as read from disk: id, gold class label, raw text."""

    id: str
    label: str
    text: str

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusError("document id must be non-empty")
        if not self.label:
            raise CorpusError(f"document {self.id!r}: label must be non-empty")


@dataclass(frozen=True)
class ProcessedDocument:
    """A document after preprocessing: an ordered sequence of stemmed words."""

    id: str
    label: str
    words: tuple[str, ...]


@dataclass(frozen=True)
class Corpus:
    """Ordered, immutable collection of processed documents.

    The raw documents are retained so a corpus can be re-serialized
    losslessly (stemming is not idempotent on arbitrary text, so the
    processed form alone cannot round-trip).
    """

    documents: tuple[ProcessedDocument, ...]
    raw_documents: tuple[RawDocument, ...]

    def __post_init__(self) -> None:
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise CorpusError(f"duplicate document id {dup!r}")
        if len(self.raw_documents) != len(self.documents):
            raise CorpusError("raw/processed document count mismatch")

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def class_sizes(self) -> dict[str, int]:
        """Class label -> number of documents, sorted by label."""
        counts = Counter(d.label for d in self.documents)
        return {label: counts[label] for label in sorted(counts)}

    def doc_ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.documents)

    def gold_labels(self) -> dict[str, str]:
        return {d.id: d.label for d in self.documents}

    def empty_document_ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.documents if not d.words)


def tokenize(text: str) -> list[str]:
    """Split text into lowercase alphabetic tokens.

    Tokens are maximal runs of ASCII letters; every other character is a
    separator, so digit runs and mixed alphanumerics like "IL-2" yield
    only their alphabetic parts.
    """
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def remove_stopwords(tokens: Iterable[str], stopwords: frozenset[str] | set[str]) -> list[str]:
    return [t for t in tokens if t not in stopwords]


_DEFAULT_STOPWORDS: frozenset[str] | None = None


def default_stopwords() -> frozenset[str]:
    """The bundled English stopword list (SMART-style, ~570 entries)."""
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        text = resources.files("stclust.data").joinpath("stopwords.txt").read_text("utf-8")
        _DEFAULT_STOPWORDS = frozenset(line.strip() for line in text.splitlines() if line.strip())
    return _DEFAULT_STOPWORDS


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Load a stopword file: one lowercase word per line."""
    words = set()
    for line in Path(path).read_text("utf-8").splitlines():
        word = line.strip()
        if word:
            words.add(word.lower())
    return frozenset(words)


def preprocess(text: str, stopwords: frozenset[str] | set[str] | None = None) -> tuple[str, ...]:
    """Tokenize, remove stopwords, and stem."""
    if stopwords is None:
        stopwords = default_stopwords()
    return tuple(stem(t) for t in remove_stopwords(tokenize(text), stopwords))


def load_corpus(
    path: str | Path,
    *,
    stopwords: frozenset[str] | set[str] | None = None,
    fmt: str = "jsonl",
) -> Corpus:
    """Load and preprocess a corpus file.

    Raises :class:`CorpusError` naming the offending line for malformed
    records and the offending id for duplicates.  Documents whose text is
    emptied by preprocessing are kept (their class still counts for
    evaluation) and reported in a warning.
    """
    if fmt != "jsonl":
        raise CorpusError(f"unsupported corpus format {fmt!r}")
    if stopwords is None:
        stopwords = default_stopwords()

    raws: list[RawDocument] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid record: {exc}") from exc
            if not isinstance(record, dict):
                raise CorpusError(f"line {lineno}: record is not an object")
            for field_name in ("id", "label", "text"):
                if field_name not in record:
                    raise CorpusError(f"line {lineno}: missing field {field_name!r}")
                if not isinstance(record[field_name], str):
                    raise CorpusError(f"line {lineno}: field {field_name!r} is not a string")
            doc_id = record["id"]
            if doc_id in seen:
                raise CorpusError(f"line {lineno}: duplicate document id {doc_id!r}")
            seen.add(doc_id)
            try:
                raws.append(RawDocument(doc_id, record["label"], record["text"]))
            except CorpusError as exc:
                raise CorpusError(f"line {lineno}: {exc}") from exc

    documents = tuple(
        ProcessedDocument(r.id, r.label, preprocess(r.text, stopwords)) for r in raws
    )
    corpus = Corpus(documents, tuple(raws))
    empty = corpus.empty_document_ids()
    if empty:
        logger.warning(
            "%d document(s) empty after preprocessing (kept): %s",
            len(empty),
            ", ".join(empty[:10]),
        )
    return corpus


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to the JSON-lines format read by load_corpus."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for raw in corpus.raw_documents:
            record = {"id": raw.id, "label": raw.label, "text": raw.text}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def corpus_from_words(items: Iterable[tuple[str, str, Sequence[str]]]) -> Corpus:
    """Build a corpus from already-processed word sequences.

    ``items`` yields (id, label, words) triples.  Words are taken as-is;
    the raw text is the space-joined word sequence.
    """
    documents = []
    raws = []
    for doc_id, label, words in items:
        words = tuple(words)
        documents.append(ProcessedDocument(doc_id, label, words))
        raws.append(RawDocument(doc_id, label, " ".join(words)))
    return Corpus(tuple(documents), tuple(raws))


# --------------------------------------------------------------------------
# Synthetic corpora
# --------------------------------------------------------------------------

_WORD_CONSONANTS = "bcdfgklmnprstvz"
_WORD_VOWELS = "aeiou"

# Each class gets one length-2 and one length-4 recurring phrase.
_PHRASE_LENGTHS = (2, 4)
_PHRASE_WORD_COUNT = sum(_PHRASE_LENGTHS)


def _candidate_words():
    syllables = [c + v for c in _WORD_CONSONANTS for v in _WORD_VOWELS]
    for a in syllables:
        for b in syllables:
            yield a + b
    for a in syllables:
        for b in syllables:
            for c in syllables:
                yield a + b + c


def _build_vocabulary(count: int, stopwords: frozenset[str]) -> list[str]:
    """First `count` synthetic words, in a fixed enumeration order, that
    survive preprocessing unchanged (non-stopword, Porter fixed point)."""
    out: list[str] = []
    for word in _candidate_words():
        if word in stopwords or stem(word) != word:
            continue
        out.append(word)
        if len(out) == count:
            return out
    raise CorpusError(f"cannot build a synthetic vocabulary of {count} words")


def generate_synthetic(
    num_classes: int,
    docs_per_class: int,
    shared_vocab_size: int,
    class_vocab_size: int,
    doc_length: int,
    overlap_fraction: float,
    seed: int,
) -> Corpus:
    """Generate a labeled synthetic corpus.

    Each document draws ``overlap_fraction`` of its body words from a
    vocabulary shared across classes and the rest from its class's private
    vocabulary, then has the class's two recurring phrases spliced in at
    random positions.  Phrase words are reserved: they never occur as body
    filler, so a class's phrases occur in exactly that class's documents.
    """
    if num_classes <= 0 or docs_per_class <= 0 or shared_vocab_size <= 0:
        raise CorpusError("num_classes, docs_per_class and shared_vocab_size must be positive")
    if class_vocab_size < _PHRASE_WORD_COUNT + 2:
        raise CorpusError(f"class_vocab_size must be at least {_PHRASE_WORD_COUNT + 2}")
    if doc_length < _PHRASE_WORD_COUNT + 2:
        raise CorpusError(f"doc_length must be at least {_PHRASE_WORD_COUNT + 2}")
    if not 0.0 <= overlap_fraction < 1.0:
        raise CorpusError("overlap_fraction must be in [0, 1)")

    rng = random.Random(seed)
    stopwords = default_stopwords()
    vocabulary = _build_vocabulary(
        shared_vocab_size + num_classes * class_vocab_size, stopwords
    )
    shared = vocabulary[:shared_vocab_size]

    items: list[tuple[str, str, tuple[str, ...]]] = []
    body_length = doc_length - _PHRASE_WORD_COUNT
    for ci in range(num_classes):
        start = shared_vocab_size + ci * class_vocab_size
        private = vocabulary[start : start + class_vocab_size]
        phrases = []
        offset = 0
        for plen in _PHRASE_LENGTHS:
            phrases.append(tuple(private[offset : offset + plen]))
            offset += plen
        filler = private[offset:]

        label = f"class{ci:02d}"
        for di in range(docs_per_class):
            body = [
                rng.choice(shared) if rng.random() < overlap_fraction else rng.choice(filler)
                for _ in range(body_length)
            ]
            cuts = sorted(rng.randint(0, body_length) for _ in phrases)
            words: list[str] = []
            prev = 0
            for cut, phrase in zip(cuts, phrases):
                words.extend(body[prev:cut])
                words.extend(phrase)
                prev = cut
            words.extend(body[prev:])
            items.append((f"{label}.d{di:03d}", label, tuple(words)))

    return corpus_from_words(items)


@dataclass(frozen=True)
class SyntheticPreset:
    num_classes: int
    docs_per_class: int
    shared_vocab_size: int
    class_vocab_size: int
    doc_length: int
    overlap_fraction: float
    seed_offset: int


# Shapes sized after the usual desk-scale benchmark subsets (6x150 = 1050
# documents, 3x100 = 300, 6x60 = 360).  The "-b" variants rerun a shape
# with a different seed and a slightly easier class separation.
PRESETS: dict[str, SyntheticPreset] = {
    "ohsumed-style-6x150": SyntheticPreset(6, 150, 400, 120, 48, 0.25, 0),
    "ohsumed-style-3x100": SyntheticPreset(3, 100, 400, 160, 48, 0.25, 1),
    "rcv1-style-6x60": SyntheticPreset(6, 60, 400, 120, 36, 0.25, 2),
    "rcv1-style-3x100": SyntheticPreset(3, 100, 400, 160, 36, 0.25, 3),
    "rcv1-style-6x60-b": SyntheticPreset(6, 60, 400, 120, 36, 0.15, 4),
    "rcv1-style-3x100-b": SyntheticPreset(3, 100, 400, 160, 36, 0.15, 5),
}


def generate_preset(name: str, seed: int = 0) -> Corpus:
    """Generate one of the bundled synthetic presets."""
    try:
        preset = PRESETS[name]
    except KeyError:
        raise CorpusError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    return generate_synthetic(
        preset.num_classes,
        preset.docs_per_class,
        preset.shared_vocab_size,
        preset.class_vocab_size,
        preset.doc_length,
        preset.overlap_fraction,
        seed + 1000 * preset.seed_offset,
    )

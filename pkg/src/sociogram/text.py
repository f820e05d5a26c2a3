"""Tweet tokenization, salience, lexicon sentiment, bigram PMI and risk-factor matching."""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigurationError, Undefined, UndefinedMetricError

__all__ = [
    "BigramStat",
    "LEXICON_NAMES",
    "LexiconSet",
    "RiskCategory",
    "RiskFactorConfig",
    "RiskFactorReport",
    "SentimentRatios",
    "SentimentReport",
    "TokenCorpus",
    "bigram_stats",
    "risk_factor_match",
    "sentiment_ratios",
    "sentiment_scores",
    "term_stats",
    "tokenize",
    "top_words",
]

# alphanumeric runs (unicode aware), optional #/@ sigil, apostrophes only between letters
_TOKEN = re.compile(r"[#@]?[^\W_]+(?:'[^\W_]+)*")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "`": "'"})

LEXICON_NAMES = ("positive", "negative", "anger_mild", "anger_typical", "anger_violent", "calm")

# only used to pick readable group labels; salience itself counts every token
STOPWORDS = frozenset(
    """a an and are as at be been but by can do for from had has have he her his i i'm if in
    is it it's its me my no not of on or our rt she so that the their them there they this to
    too up was we were what when who will with you your""".split()
)


def tokenize(text: str | None) -> list[str]:
    if not text:
        return []
    return _TOKEN.findall(text.lower().translate(_APOSTROPHES))


@dataclass
class TokenCorpus:
    documents: list[list[str]]
    vocabulary: Counter = field(default_factory=Counter)
    total_tokens: int = 0

    def __post_init__(self) -> None:
        if not self.vocabulary:
            for doc in self.documents:
                self.vocabulary.update(doc)
        self.total_tokens = sum(len(d) for d in self.documents)

    @classmethod
    def from_texts(cls, texts: Iterable[str | None]) -> "TokenCorpus":
        return cls([tokenize(t) for t in texts])


def term_stats(corpus: TokenCorpus) -> dict[str, dict[str, float]]:
    """Count and salience (count / total tokens) for every vocabulary entry."""
    if corpus.total_tokens == 0:
        raise UndefinedMetricError("corpus has no tokens")
    total = corpus.total_tokens
    return {w: {"count": c, "salience": c / total} for w, c in sorted(corpus.vocabulary.items())}


def top_words(corpus: TokenCorpus, n: int = 5, stopwords: frozenset[str] = STOPWORDS) -> list[tuple[str, float]]:
    """Most salient non-stopword tokens, ties broken alphabetically."""
    if corpus.total_tokens == 0:
        return []
    ranked = sorted(
        ((w, c) for w, c in corpus.vocabulary.items() if w not in stopwords and not w.startswith("@")),
        key=lambda wc: (-wc[1], wc[0]),
    )
    return [(w, c / corpus.total_tokens) for w, c in ranked[:n]]


class LexiconSet:
    """Six word lists, one per sentiment family, loaded from ``<name>.txt`` files."""

    def __init__(self, words: dict[str, frozenset[str]], source: str = "<memory>") -> None:
        missing = [name for name in LEXICON_NAMES if name not in words]
        if missing:
            raise ConfigurationError(f"lexicon set lacks: {', '.join(missing)}")
        self.words = words
        self.source = source

    @classmethod
    def load(cls, directory: str | Path) -> "LexiconSet":
        directory = Path(directory)
        if not directory.is_dir():
            raise ConfigurationError(f"lexicon directory not found: {directory}")
        words = {}
        for name in LEXICON_NAMES:
            path = directory / f"{name}.txt"
            if not path.is_file():
                raise ConfigurationError(f"lexicon file missing: {path}")
            entries = _read_word_list(path)
            if not entries:
                raise ConfigurationError(f"lexicon file is empty: {path}")
            words[name] = frozenset(entries)
        return cls(words, str(directory))

    @classmethod
    def default(cls) -> "LexiconSet":
        with resources.as_file(resources.files("sociogram") / "data" / "lexicons") as path:
            return cls.load(path)


def _read_word_list(path: Path) -> list[str]:
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line.lower().translate(_APOSTROPHES))
    return out


@dataclass(frozen=True)
class SentimentRatios:
    r_sent: float | Undefined
    r_angr: float | Undefined


@dataclass(frozen=True)
class SentimentReport:
    s_pos: float
    s_neg: float
    s_anger_mild: float
    s_anger_typical: float
    s_anger_violent: float
    s_calm: float
    r_sent: float | Undefined
    r_angr: float | Undefined

    @property
    def s_anger_total(self) -> float:
        return self.s_anger_mild + self.s_anger_typical + self.s_anger_violent


def _log_ratio(num: float, den: float) -> float | Undefined:
    if den <= 0:
        return Undefined("zero_denominator")
    if num <= 0:
        return Undefined("zero_numerator")
    return math.log10(num / den)


def sentiment_ratios(
    s_pos: float,
    s_neg: float,
    s_calm: float = 0.0,
    s_anger_mild: float = 0.0,
    s_anger_typical: float = 0.0,
    s_anger_violent: float = 0.0,
) -> SentimentRatios:
    """log10(pos/neg) and log10(calm/anger); zero denominators give a sentinel, not an error."""
    return SentimentRatios(
        r_sent=_log_ratio(s_pos, s_neg),
        r_angr=_log_ratio(s_calm, s_anger_mild + s_anger_typical + s_anger_violent),
    )


def sentiment_scores(corpus: TokenCorpus, lexicons: LexiconSet) -> SentimentReport:
    """Fraction of corpus tokens falling in each lexicon; lexicons are tallied independently."""
    if corpus.total_tokens == 0:
        raise UndefinedMetricError("corpus has no tokens")
    total = corpus.total_tokens
    frac = {
        name: sum(c for w, c in corpus.vocabulary.items() if w in lexicons.words[name]) / total
        for name in LEXICON_NAMES
    }
    ratios = sentiment_ratios(
        frac["positive"],
        frac["negative"],
        frac["calm"],
        frac["anger_mild"],
        frac["anger_typical"],
        frac["anger_violent"],
    )
    return SentimentReport(
        s_pos=frac["positive"],
        s_neg=frac["negative"],
        s_anger_mild=frac["anger_mild"],
        s_anger_typical=frac["anger_typical"],
        s_anger_violent=frac["anger_violent"],
        s_calm=frac["calm"],
        r_sent=ratios.r_sent,
        r_angr=ratios.r_angr,
    )


@dataclass(frozen=True)
class BigramStat:
    pair: tuple[str, str]
    count: int
    salience: float
    mutual_information: float


def bigram_stats(corpus: TokenCorpus, min_count: int = 1) -> list[BigramStat]:
    """Adjacent in-document bigrams with salience and base-2 PMI.

    p(w1, w2) is the bigram's share of all bigrams, p(w) the unigram's share
    of all tokens. Sorted by count descending, then pair.
    """
    pairs: Counter = Counter()
    for doc in corpus.documents:
        pairs.update(zip(doc, doc[1:]))
    n_bigrams = sum(pairs.values())
    if n_bigrams == 0:
        return []
    total = corpus.total_tokens
    vocab = corpus.vocabulary
    out = []
    for (w1, w2), count in pairs.items():
        if count < min_count:
            continue
        p_joint = count / n_bigrams
        pmi = math.log2(p_joint / ((vocab[w1] / total) * (vocab[w2] / total)))
        out.append(BigramStat((w1, w2), count, p_joint, pmi))
    out.sort(key=lambda b: (-b.count, b.pair))
    return out


@dataclass(frozen=True)
class RiskCategory:
    name: str
    phrases: tuple[tuple[str, ...], ...]


class RiskFactorConfig:
    """Twelve named categories, each a list of identifier phrases."""

    N_CATEGORIES = 12

    def __init__(self, categories: Sequence[tuple[str, Sequence[str]]], source: str = "<memory>") -> None:
        if len(categories) != self.N_CATEGORIES:
            raise ConfigurationError(
                f"{source}: expected {self.N_CATEGORIES} risk categories, found {len(categories)}"
            )
        parsed = []
        for name, phrases in categories:
            toks = tuple(t for t in (tuple(tokenize(p)) for p in phrases) if t)
            if not toks:
                raise ConfigurationError(f"{source}: category {name!r} has no identifier phrases")
            parsed.append(RiskCategory(name, toks))
        self.categories = parsed
        self.source = source

    @classmethod
    def load(cls, path: str | Path) -> "RiskFactorConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigurationError(f"risk factor config not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
        try:
            cats = [(c["name"], list(c["phrases"])) for c in raw["categories"]]
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"{path}: malformed category list ({exc})") from None
        return cls(cats, str(path))

    @classmethod
    def default(cls) -> "RiskFactorConfig":
        with resources.as_file(resources.files("sociogram") / "data" / "risk_factors.json") as path:
            return cls.load(path)


@dataclass(frozen=True)
class RiskFactorRow:
    index: int
    name: str
    matched_tweets: int
    salience: float


@dataclass(frozen=True)
class RiskFactorReport:
    categories: tuple[RiskFactorRow, ...]
    n_documents: int
    total_tokens: int


def _phrase_hits(doc: Sequence[str], phrase: tuple[str, ...]) -> Iterable[int]:
    n = len(phrase)
    first = phrase[0]
    for i in range(len(doc) - n + 1):
        if doc[i] == first and tuple(doc[i : i + n]) == phrase:
            yield i


def match_categories(doc: Sequence[str], config: RiskFactorConfig) -> list[int]:
    """1-based indices of categories with at least one phrase in ``doc``."""
    return [
        k
        for k, cat in enumerate(config.categories, start=1)
        if any(next(iter(_phrase_hits(doc, p)), None) is not None for p in cat.phrases)
    ]


def risk_factor_match(documents: Sequence[Sequence[str]], config: RiskFactorConfig) -> RiskFactorReport:
    """Per category: documents containing any identifier phrase, and salience.

    Salience is the number of token positions covered by the category's
    phrase matches divided by the corpus token count; overlapping phrases in a
    category cover a position once.
    """
    total = sum(len(d) for d in documents)
    rows = []
    for k, cat in enumerate(config.categories, start=1):
        matched = 0
        covered = 0
        for doc in documents:
            positions: set[int] = set()
            for phrase in cat.phrases:
                for i in _phrase_hits(doc, phrase):
                    positions.update(range(i, i + len(phrase)))
            if positions:
                matched += 1
                covered += len(positions)
        rows.append(RiskFactorRow(k, cat.name, matched, covered / total if total else 0.0))
    return RiskFactorReport(tuple(rows), len(documents), total)

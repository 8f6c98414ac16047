"""Text pipeline: tokenization, lemmatization, noun filtering, tf-idf, and
the word-selection procedure that feeds the creation network.

The lemmatizer and noun tagger are deliberately rule-based (irregular-form
lookup plus suffix rules against a bundled lexicon) so results are identical
across platforms and runs. The tagger is a plain callable, so a corpus-specific
tagger can be swapped in without touching the rest of the pipeline.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Literal

from .corpus import Artifact, Reading
from .errors import UndefinedIdf

# A tagger decides whether a lemmatized token is a noun.
NounTagger = Callable[["Token"], bool]

_TOKEN = re.compile(r"\w+(?:['-]\w+)*", re.UNICODE)

# plural -> singular forms the suffix rules get wrong
_IRREGULAR = {
    "children": "child",
    "people": "person",
    "men": "man",
    "women": "woman",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
    "lives": "life",
    "wives": "wife",
    "knives": "knife",
    "leaves": "leaf",
    "shelves": "shelf",
    "selves": "self",
    "halves": "half",
    "wolves": "wolf",
    "analyses": "analysis",
    "crises": "crisis",
    "hypotheses": "hypothesis",
    "theses": "thesis",
    "bases": "basis",
    "criteria": "criterion",
    "phenomena": "phenomenon",
    "curricula": "curriculum",
    "indices": "index",
    "appendices": "appendix",
    "matrices": "matrix",
    "media": "medium",
    "series": "series",
    "species": "species",
    "movies": "movie",
    "lens": "lens",
    "news": "news",
}

_NOUN_SUFFIXES = (
    "tion", "sion", "ment", "ness", "ity", "ship", "ism", "ance",
    "ence", "logy", "graphy", "hood", "dom", "cracy", "itude",
)


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: Literal["noun", "other"]


def load_wordlist(path: str | Path) -> frozenset[str]:
    """Read a one-term-per-line word file (blank lines and '#' comments skipped)."""
    terms = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        term = line.strip().lower()
        if term and not term.startswith("#"):
            terms.add(term)
    return frozenset(terms)


@lru_cache(maxsize=None)
def _bundled(name: str) -> frozenset[str]:
    text = resources.files("aicnet.data").joinpath(name).read_text(encoding="utf-8")
    return frozenset(t.strip().lower() for t in text.splitlines() if t.strip())


def default_stopwords() -> frozenset[str]:
    return _bundled("stopwords.txt")


def default_noun_lexicon() -> frozenset[str]:
    return _bundled("nouns.txt")


def tokenize(text: str) -> list[str]:
    """Split on Unicode word boundaries, lowercase, strip punctuation.

    Internal hyphens and apostrophes are kept ("co-construction"), leading and
    trailing ones are not ("dancers'" -> "dancers"). Order is preserved.
    """
    return [m.group(0) for m in _TOKEN.finditer(text.lower())]


def lemmatize(surface: str, lexicon: frozenset[str] | None = None) -> str:
    """Map a lowercase surface form to its lemma.

    Irregular forms come from a fixed table; plurals fall to suffix rules
    (-ies, -es, -s); -ing/-ed are stripped only when the resulting stem is a
    known word in ``lexicon``. Unchanged when no rule applies.
    """
    if lexicon is None:
        lexicon = default_noun_lexicon()
    if surface in _IRREGULAR:
        return _IRREGULAR[surface]
    if surface in lexicon:
        return surface
    if surface.endswith("ies") and len(surface) > 4:
        return surface[:-3] + "y"
    if surface.endswith(("sses", "shes", "ches", "xes", "zes", "oes")) and len(surface) > 4:
        return surface[:-2]
    if surface.endswith("s") and not surface.endswith(("ss", "us", "is")) and len(surface) > 3:
        return surface[:-1]
    for suffix in ("ing", "ed"):
        if surface.endswith(suffix) and len(surface) > len(suffix) + 2:
            stem = surface[: -len(suffix)]
            for candidate in (stem, stem + "e", stem[:-1] if stem[-1:] == stem[-2:-1] else stem):
                if candidate in lexicon or candidate in _IRREGULAR.values():
                    return candidate
            break
    return surface


def make_default_tagger(
    noun_lexicon: frozenset[str] | None = None,
    stopwords: frozenset[str] | None = None,
) -> NounTagger:
    """Lexicon-plus-suffix tagger. Stopwords are never nouns."""
    nouns = noun_lexicon if noun_lexicon is not None else default_noun_lexicon()
    stops = stopwords if stopwords is not None else default_stopwords()

    def tagger(token: Token) -> bool:
        if token.surface in stops or token.lemma in stops:
            return False
        if token.lemma in nouns:
            return True
        return token.lemma.endswith(_NOUN_SUFFIXES) and len(token.lemma) > 5

    return tagger


def tag_tokens(surfaces: Iterable[str], tagger: NounTagger | None = None,
               lexicon: frozenset[str] | None = None) -> list[Token]:
    """Lemmatize surfaces and attach the tagger's noun/other verdicts."""
    if tagger is None:
        tagger = make_default_tagger()
    tokens = []
    for surface in surfaces:
        probe = Token(surface, lemmatize(surface, lexicon), "other")
        pos: Literal["noun", "other"] = "noun" if tagger(probe) else "other"
        tokens.append(Token(probe.surface, probe.lemma, pos))
    return tokens


def filter_nouns(tokens: list[Token], tagger: NounTagger | None = None) -> list[Token]:
    """Keep only tokens the tagger marks as nouns."""
    if tagger is None:
        return [t for t in tokens if t.pos == "noun"]
    return [t for t in tokens if tagger(t)]


def noun_lemmas(text: str, tagger: NounTagger | None = None,
                extra_stopwords: frozenset[str] = frozenset()) -> list[str]:
    """Full pipeline for one text: noun lemmas in order of appearance."""
    tokens = tag_tokens(tokenize(text), tagger)
    return [t.lemma for t in filter_nouns(tokens) if t.lemma not in extra_stopwords]


# -- tf-idf over a reading ----------------------------------------------------

def _documents(reading: Reading, tagger: NounTagger | None,
               extra_stopwords: frozenset[str] = frozenset()) -> list[tuple[Artifact, Counter]]:
    """Noun-lemma counts per artifact; artifacts with no nouns are not documents."""
    docs = []
    for art in reading.artifacts:
        counts = Counter(noun_lemmas(art.body, tagger, extra_stopwords))
        if counts:
            docs.append((art, counts))
    return docs


def tfidf(lemma: str, artifact: Artifact, reading: Reading,
          tagger: NounTagger | None = None) -> float:
    """Raw term frequency times ln(N / df).

    Documents are the reading's artifacts with at least one noun lemma;
    N is their count and df the number containing ``lemma``. Zero when the
    lemma does not occur in ``artifact``.
    """
    docs = _documents(reading, tagger)
    tf = 0
    for art, counts in docs:
        if art.id == artifact.id:
            tf = counts.get(lemma, 0)
            break
    if tf == 0:
        return 0.0
    df = sum(1 for _, counts in docs if lemma in counts)
    if df == 0:
        raise UndefinedIdf(lemma)
    return tf * math.log(len(docs) / df)


# -- word selection for the creation network -----------------------------------

@dataclass(frozen=True)
class WordSelectionParams:
    """Knobs of the word-selection procedure; defaults are the standard run."""

    min_frequency: int = 5
    drop_lowest: int = 5
    top_k: int = 70
    stopwords: frozenset[str] = frozenset()
    removal_aggregate: Literal["max", "mean"] = "max"

    def __post_init__(self) -> None:
        if self.min_frequency < 1:
            raise ValueError("min_frequency must be >= 1")
        if self.drop_lowest < 0:
            raise ValueError("drop_lowest must be >= 0")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


@dataclass(frozen=True)
class SelectedWord:
    lemma: str
    author_id: str
    score: float


def select_cn_words(reading: Reading, params: WordSelectionParams = WordSelectionParams(),
                    tagger: NounTagger | None = None) -> list[SelectedWord]:
    """Run the full selection: frequency floor, tf-idf scoring, bottom drop,
    top-k ranking, and per-author deduplication.

    Stages, in order:

    1. noun lemmas of every artifact body (annotations and replies alike);
    2. keep lemmas whose reading-wide count >= ``min_frequency``;
    3. score each (lemma, artifact) occurrence with tf-idf;
    4. drop the ``drop_lowest`` lemmas with the smallest aggregate score
       (``removal_aggregate`` over the lemma's artifacts; ties broken by
       lemma, ascending);
    5. rank the surviving (lemma, artifact) pairs by score descending (ties:
       lemma, then artifact id) and keep the first ``top_k``;
    6. map pairs to (lemma, author), keeping the max score per pair.

    All ties are broken by the stated total orders, so the selection is
    independent of artifact iteration order.
    """
    docs = _documents(reading, tagger, params.stopwords)
    n_docs = len(docs)

    totals: Counter = Counter()
    for _, counts in docs:
        totals.update(counts)
    candidates = {lemma for lemma, count in totals.items() if count >= params.min_frequency}
    if not candidates:
        return []

    df: Counter = Counter()
    for _, counts in docs:
        df.update(lemma for lemma in counts if lemma in candidates)

    # (lemma, artifact) scores for every occurrence pair
    pair_scores: dict[tuple[str, str], tuple[float, str]] = {}
    per_lemma: dict[str, list[float]] = {lemma: [] for lemma in candidates}
    for art, counts in docs:
        for lemma in counts:
            if lemma not in candidates:
                continue
            score = counts[lemma] * math.log(n_docs / df[lemma])
            pair_scores[(lemma, art.id)] = (score, art.author_id)
            per_lemma[lemma].append(score)

    if params.removal_aggregate == "max":
        aggregate = {lemma: max(scores) for lemma, scores in per_lemma.items()}
    else:
        aggregate = {lemma: sum(scores) / len(scores) for lemma, scores in per_lemma.items()}
    dropped = {
        lemma
        for lemma, _ in sorted(aggregate.items(), key=lambda kv: (kv[1], kv[0]))[: params.drop_lowest]
    }

    ranked = sorted(
        ((lemma, art_id, score, author) for (lemma, art_id), (score, author) in pair_scores.items()
         if lemma not in dropped),
        key=lambda item: (-item[2], item[0], item[1]),
    )[: params.top_k]

    best: dict[tuple[str, str], float] = {}
    for lemma, _, score, author in ranked:
        key = (lemma, author)
        if key not in best or score > best[key]:
            best[key] = score
    return [
        SelectedWord(lemma, author, score)
        for (lemma, author), score in sorted(best.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))
    ]

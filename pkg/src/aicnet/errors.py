"""Exception types shared across the package.

Every error raised on bad input derives from :class:`AicnetError` so callers
(and the CLI) can distinguish input problems from genuine bugs.
"""

from __future__ import annotations


class AicnetError(Exception):
    """Base class for all input and consistency errors."""


# -- corpus ingestion ---------------------------------------------------------

class ParseError(AicnetError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class EmptyCorpus(AicnetError):
    def __init__(self) -> None:
        super().__init__("corpus file contains no records")


class DanglingParent(AicnetError):
    def __init__(self, artifact_id: str):
        self.artifact_id = artifact_id
        super().__init__(f"reply {artifact_id!r} names a parent that does not exist in its reading")


class MissingQuote(AicnetError):
    def __init__(self, artifact_id: str):
        self.artifact_id = artifact_id
        super().__init__(f"annotation {artifact_id!r} references a quote that does not exist in its reading")


class CyclicThread(AicnetError):
    def __init__(self, artifact_id: str):
        self.artifact_id = artifact_id
        super().__init__(f"reply chain through {artifact_id!r} never reaches an annotation")


class UnknownReading(AicnetError):
    def __init__(self, reading_id: str):
        self.reading_id = reading_id
        super().__init__(f"no reading with id {reading_id!r}")


class UnknownArtifact(AicnetError):
    def __init__(self, artifact_id: str):
        self.artifact_id = artifact_id
        super().__init__(f"no artifact with id {artifact_id!r} in the corpus")


# -- embeddings and similarity ------------------------------------------------

class DimensionMismatch(AicnetError):
    def __init__(self, quote_id: str, expected: int, got: int):
        self.quote_id = quote_id
        self.expected = expected
        self.got = got
        super().__init__(f"vector for {quote_id!r} has {got} components, expected {expected}")


class ZeroVector(AicnetError):
    def __init__(self, quote_id: str = ""):
        self.quote_id = quote_id
        detail = f" for {quote_id!r}" if quote_id else ""
        super().__init__(f"all-zero vector{detail}")


class MissingEmbedding(AicnetError):
    def __init__(self, quote_id: str, detail: str | None = None):
        self.quote_id = quote_id
        super().__init__(detail or f"no embedding stored for quote {quote_id!r}")


class EmptyText(AicnetError):
    def __init__(self) -> None:
        super().__init__("cannot embed empty text")


# -- text pipeline ------------------------------------------------------------

class UndefinedIdf(AicnetError):
    """A lemma occurs in an artifact yet in no document: internal inconsistency."""

    def __init__(self, lemma: str):
        self.lemma = lemma
        super().__init__(f"lemma {lemma!r} has tf > 0 but df = 0")


# -- graphs and metrics -------------------------------------------------------

class UnknownNode(AicnetError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"node {node!r} is not in the graph")


# -- synthetic corpora --------------------------------------------------------

class InfeasibleParams(AicnetError):
    """Synthetic-corpus parameters that cannot be realized."""

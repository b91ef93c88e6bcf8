"""Exception types shared across the package."""


class MirelaxError(Exception):
    """Base class for every error raised by this package."""


class UnbalancedDelimiter(MirelaxError):
    """A ``$`` or ``"`` span in a query string is never closed."""


class EmptyQuery(MirelaxError):
    """Parsing produced neither formula nor keyword terms."""


class MaskShapeMismatch(MirelaxError):
    """Mask bit lengths do not match the query's group sizes."""


class EmptyMask(MirelaxError):
    """A subquery mask with no bit set selects nothing."""


class EmptyGroup(MirelaxError):
    """A terms-only strategy retained a group that has no terms."""


class TooManyTerms(MirelaxError):
    """Too many query terms for exhaustive subquery enumeration."""


class DuplicateDocId(MirelaxError):
    """Two corpus documents share the same doc id."""


class MalformedDocument(MirelaxError):
    """A document body could not be tokenized."""


class EmptySubquery(MirelaxError):
    """Search was invoked with a subquery containing no terms."""


class NoRelevantJudgments(MirelaxError):
    """The topic has no judged-relevant documents."""


class NoEvaluableTopics(MirelaxError):
    """Run and qrels share no topic with relevant judgments."""


class FormatError(MirelaxError):
    """A corpus, topics, qrels, or run file violates its format."""

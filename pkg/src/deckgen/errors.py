"""Exception types shared across modules."""


class DeckgenError(Exception):
    """Base class for all deckgen errors."""


class MalformedInput(DeckgenError):
    """Input file violates the documented JSON schema."""


class EmptyDocument(DeckgenError):
    """Parsed document contains zero sentences."""


class DimensionMismatch(DeckgenError):
    """Embedding file line has the wrong number of values."""


class EmptySentence(DeckgenError):
    """Sentence has no encodable tokens."""


class NonFiniteLoss(DeckgenError):
    """Loss evaluated to NaN or infinity during gradient checking."""


class BadMagic(DeckgenError):
    """Checkpoint file is corrupt or not a deckgen checkpoint."""


class ShapeMismatch(DeckgenError):
    """Checkpoint configuration disagrees with the expected model shape."""


class TooManySentences(DeckgenError):
    """Document exceeds the positional table capacity."""


class LengthMismatch(DeckgenError):
    """Paired vectors have different lengths."""


class ProblemTooLarge(DeckgenError):
    """Knapsack instance exceeds the exact-solver guard."""


class EmptyCorpus(DeckgenError):
    """Training corpus resolves to zero documents."""

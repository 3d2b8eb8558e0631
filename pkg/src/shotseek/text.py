"""Text normalization for indexing and querying."""

import re

# Maximal runs of alphanumeric characters; underscore counts as a separator.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs.

    No stemming, no stop words; never emits an empty token. Idempotent in
    the sense that re-tokenizing the space-joined output changes nothing.
    """
    return _TOKEN_RE.findall(text.lower())

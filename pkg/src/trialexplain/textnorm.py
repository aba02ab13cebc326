"""Term normalization shared by corpus loading, feature matching, and the API."""

from __future__ import annotations

import re

_WS = re.compile(r"\s+")


def normalize_term(text: str) -> str:
    """Lowercase, trim, and collapse internal whitespace runs to one space.

    Idempotent; the single matching key used everywhere a term or query is
    compared against another.
    """
    return _WS.sub(" ", text.strip()).lower()

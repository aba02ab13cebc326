"""The 11-feature vector computed for a (trial, concept, query) triple.

Binary features record presence (0/1); numeric features count occurrences and
are normalized into [0,1] by a saturating linear cap so the downstream
weighted sum stays bounded. Query-dependent features react to the user's
query and the concept's preferred term; query-independent features are fixed
per trial.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple

from .corpus import Concept, TrialRecord
from .errors import ContractViolation
from .textnorm import normalize_term

# Saturation caps for numeric scores: mention counts cap at 3 occurrences,
# publication counts at 5. Linear up to the cap.
MENTION_CAP = 3
PUBLICATION_CAP = 5

RECRUITING_STATUS = "recruiting"


class FeatureKind(str, Enum):
    BINARY = "binary"
    NUMERIC = "numeric"


class FeatureDependency(str, Enum):
    QUERY_DEPENDENT = "query_dependent"
    QUERY_INDEPENDENT = "query_independent"


class FeatureId(str, Enum):
    """All features, in the fixed order used for tie-breaking and summation."""

    QUERY_IN_TITLE = "query_in_title"
    PREFERRED_TERM_IN_TITLE = "preferred_term_in_title"
    QUERY_IN_SUMMARY = "query_in_summary"
    PREFERRED_TERM_IN_SUMMARY = "preferred_term_in_summary"
    QUERY_IN_DETAILED_DESCRIPTION = "query_in_detailed_description"
    PREFERRED_TERM_IN_DETAILED_DESCRIPTION = "preferred_term_in_detailed_description"
    STAGE_AVAILABLE = "stage_available"
    OVERALL_STATUS_AVAILABLE = "overall_status_available"
    IS_RECRUITING = "is_recruiting"
    PRIMARY_PURPOSE_AVAILABLE = "primary_purpose_available"
    PUBLICATION_COUNT = "publication_count"

    @property
    def kind(self) -> FeatureKind:
        return _KIND[self]

    @property
    def dependency(self) -> FeatureDependency:
        return _DEPENDENCY[self]


_BINARY = {
    FeatureId.QUERY_IN_TITLE,
    FeatureId.PREFERRED_TERM_IN_TITLE,
    FeatureId.STAGE_AVAILABLE,
    FeatureId.OVERALL_STATUS_AVAILABLE,
    FeatureId.IS_RECRUITING,
    FeatureId.PRIMARY_PURPOSE_AVAILABLE,
}
_KIND = {f: (FeatureKind.BINARY if f in _BINARY else FeatureKind.NUMERIC) for f in FeatureId}

_DEPENDENT = {
    FeatureId.QUERY_IN_TITLE,
    FeatureId.PREFERRED_TERM_IN_TITLE,
    FeatureId.QUERY_IN_SUMMARY,
    FeatureId.PREFERRED_TERM_IN_SUMMARY,
    FeatureId.QUERY_IN_DETAILED_DESCRIPTION,
    FeatureId.PREFERRED_TERM_IN_DETAILED_DESCRIPTION,
}
_DEPENDENCY = {
    f: (FeatureDependency.QUERY_DEPENDENT if f in _DEPENDENT else FeatureDependency.QUERY_INDEPENDENT)
    for f in FeatureId
}

MENTION_COUNT_FEATURES = {
    FeatureId.QUERY_IN_SUMMARY,
    FeatureId.PREFERRED_TERM_IN_SUMMARY,
    FeatureId.QUERY_IN_DETAILED_DESCRIPTION,
    FeatureId.PREFERRED_TERM_IN_DETAILED_DESCRIPTION,
}

PREFERRED_TERM_FEATURES = {
    FeatureId.PREFERRED_TERM_IN_TITLE,
    FeatureId.PREFERRED_TERM_IN_SUMMARY,
    FeatureId.PREFERRED_TERM_IN_DETAILED_DESCRIPTION,
}


class FeatureValue(NamedTuple):
    raw: int
    score: float


@dataclass(frozen=True)
class FeatureVector:
    """Raw counts and normalized [0,1] scores for every FeatureId."""

    values: dict[FeatureId, FeatureValue]

    def raw(self, feature: FeatureId) -> int:
        return self.values[feature].raw

    def score(self, feature: FeatureId) -> float:
        return self.values[feature].score

    def __iter__(self) -> Iterator[tuple[FeatureId, FeatureValue]]:
        # enumeration order, so every consumer sums in the same order
        return ((f, self.values[f]) for f in FeatureId)

    @classmethod
    def from_raw(cls, raw: dict[FeatureId, int]) -> "FeatureVector":
        return cls({f: FeatureValue(raw[f], normalize_score(f, raw[f])) for f in FeatureId})


def _is_word_char(ch: str) -> bool:
    return ch.isalnum()


def count_mentions(text: str, term: str) -> int:
    """Count non-overlapping whole-word occurrences of term in text.

    Both sides are normalized first; a word boundary is the start/end of the
    text or any non-alphanumeric character.
    """
    needle = normalize_term(term)
    if not needle:
        raise ValueError("term is empty after normalization")
    haystack = normalize_term(text)
    count = 0
    pos = 0
    while True:
        i = haystack.find(needle, pos)
        if i < 0:
            return count
        before_ok = i == 0 or not _is_word_char(haystack[i - 1])
        end = i + len(needle)
        after_ok = end == len(haystack) or not _is_word_char(haystack[end])
        if before_ok and after_ok:
            count += 1
            pos = end
        else:
            pos = i + 1


def normalize_score(feature: FeatureId, raw: int) -> float:
    """Map a raw value into [0,1]: identity for binary, capped linear for numeric."""
    if raw < 0:
        raise ValueError("raw value must be non-negative")
    if feature.kind is FeatureKind.BINARY:
        return float(raw)
    cap = PUBLICATION_CAP if feature is FeatureId.PUBLICATION_COUNT else MENTION_CAP
    return min(raw, cap) / cap


def extract_features(trial: TrialRecord, concept: Concept, query: str) -> FeatureVector:
    """Compute the full feature vector for one trial under one resolved query.

    The caller must have resolved the query to this concept, and the trial
    must be linked to the concept's CUI. When the query IS the preferred term
    (after normalization), the preferred-term features are forced to zero so
    the same textual evidence is not counted twice.
    """
    if concept.cui not in trial.condition_cuis:
        raise ContractViolation(f"trial {trial.nct_id} is not linked to {concept.cui}")
    query_key = normalize_term(query)
    concept_terms = {normalize_term(t) for t in (concept.preferred_term, *concept.synonyms)}
    if query_key not in concept_terms:
        raise ContractViolation(f"query {query!r} does not resolve to concept {concept.cui}")

    preferred = concept.preferred_term
    suppress_preferred = query_key == normalize_term(preferred)

    def present(value: str | None) -> int:
        return 1 if value is not None and value.strip() else 0

    raw: dict[FeatureId, int] = {
        FeatureId.QUERY_IN_TITLE: 1 if count_mentions(trial.title, query) else 0,
        FeatureId.QUERY_IN_SUMMARY: count_mentions(trial.brief_summary, query),
        FeatureId.QUERY_IN_DETAILED_DESCRIPTION: count_mentions(trial.detailed_description, query),
        FeatureId.STAGE_AVAILABLE: present(trial.stage),
        FeatureId.OVERALL_STATUS_AVAILABLE: present(trial.overall_status),
        FeatureId.IS_RECRUITING: 1 if normalize_term(trial.overall_status or "") == RECRUITING_STATUS else 0,
        FeatureId.PRIMARY_PURPOSE_AVAILABLE: present(trial.primary_purpose),
        FeatureId.PUBLICATION_COUNT: trial.publication_count,
    }
    if suppress_preferred:
        raw[FeatureId.PREFERRED_TERM_IN_TITLE] = 0
        raw[FeatureId.PREFERRED_TERM_IN_SUMMARY] = 0
        raw[FeatureId.PREFERRED_TERM_IN_DETAILED_DESCRIPTION] = 0
    else:
        raw[FeatureId.PREFERRED_TERM_IN_TITLE] = 1 if count_mentions(trial.title, preferred) else 0
        raw[FeatureId.PREFERRED_TERM_IN_SUMMARY] = count_mentions(trial.brief_summary, preferred)
        raw[FeatureId.PREFERRED_TERM_IN_DETAILED_DESCRIPTION] = count_mentions(
            trial.detailed_description, preferred
        )
    return FeatureVector.from_raw(raw)

"""Weighted explainability scores and trial ranking.

Each feature contributes e_f = w * f_s. The query-dependent contributions sum
to E_dtc, the query-independent ones to E_it, and E_ct = E_it + E_dtc is the
ranking key. Summation always walks features in enumeration order within each
dependency class, so equal inputs give bitwise-equal outputs and a fully
saturated vector lands exactly on the weight total.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Mapping, Sequence

from .corpus import Concept, TrialCorpus, TrialRecord
from .features import FeatureDependency, FeatureId, FeatureVector, extract_features
from .textnorm import normalize_term
from .weights import WeightTable

if TYPE_CHECKING:  # pragma: no cover
    from .explain import ExplanationSentence


@dataclass(frozen=True)
class ScoredTrial:
    nct_id: str
    title: str
    cui: str
    e_it: float
    e_dtc: float
    e_ct: float
    feature_vector: FeatureVector
    explanations: tuple[ExplanationSentence, ...] = ()

    def with_explanations(self, sentences: Sequence[ExplanationSentence]) -> ScoredTrial:
        return replace(self, explanations=tuple(sentences))

    def without_explanations(self) -> ScoredTrial:
        return replace(self, explanations=())


class EngineVariant(str, Enum):
    """The five presentation variants: ranked or not, explained or not."""

    AMSTERDAM = "amsterdam"  # ranked, with explanations
    BERLIN = "berlin"  # ranked, no explanations
    COPENHAGEN = "copenhagen"  # ingestion order, with explanations
    DUBLIN = "dublin"  # ingestion order, no explanations
    EDINBURGH = "edinburgh"  # alphabetical by title, no explanations

    @property
    def keeps_explanations(self) -> bool:
        return self in (EngineVariant.AMSTERDAM, EngineVariant.COPENHAGEN)


def feature_explainability(w: float, f_s: float) -> float:
    """Single-feature contribution e_f = w * f_s."""
    return w * f_s


def score_trial(fv: FeatureVector, weights: WeightTable) -> tuple[float, float, float]:
    """Return (E_it, E_dtc, E_ct) for one feature vector."""
    e_it = 0.0
    e_dtc = 0.0
    for feature in FeatureId:
        e_f = feature_explainability(weights.weight(feature), fv.score(feature))
        if feature.dependency is FeatureDependency.QUERY_DEPENDENT:
            e_dtc += e_f
        else:
            e_it += e_f
    return e_it, e_dtc, e_it + e_dtc


def score_one(trial: TrialRecord, concept: Concept, query: str, weights: WeightTable) -> ScoredTrial:
    fv = extract_features(trial, concept, query)
    e_it, e_dtc, e_ct = score_trial(fv, weights)
    return ScoredTrial(
        nct_id=trial.nct_id,
        title=trial.title,
        cui=concept.cui,
        e_it=e_it,
        e_dtc=e_dtc,
        e_ct=e_ct,
        feature_vector=fv,
    )


def rank_trials(
    corpus: TrialCorpus, concept: Concept, query: str, weights: WeightTable
) -> list[ScoredTrial]:
    """Score every trial linked to the concept and sort by E_ct descending,
    ties broken by nct_id ascending. No linked trials is an empty result,
    not an error."""
    scored = [score_one(trial, concept, query, weights) for trial in corpus.linked_to(concept.cui)]
    scored.sort(key=lambda st: (-st.e_ct, st.nct_id))
    return scored


def apply_variant(
    ranked: Sequence[ScoredTrial],
    variant: EngineVariant,
    corpus_order: Mapping[str, int],
) -> list[ScoredTrial]:
    """Re-present a ranked list per the engine variant. Always a permutation
    of the input with identities and scores untouched; only the order and the
    presence of explanation sentences change."""
    if variant in (EngineVariant.AMSTERDAM, EngineVariant.BERLIN):
        out = list(ranked)
    elif variant in (EngineVariant.COPENHAGEN, EngineVariant.DUBLIN):
        out = sorted(ranked, key=lambda st: corpus_order[st.nct_id])
    else:
        out = sorted(ranked, key=lambda st: (normalize_term(st.title), st.nct_id))
    if not variant.keeps_explanations:
        out = [st.without_explanations() for st in out]
    return out

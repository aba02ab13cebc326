"""Explanation sentences: eligibility, selection, and template rendering.

At most three sentences accompany a result. A sentence is emitted only when
its feature's evidence actually holds (never describing an absent feature),
sentences follow weight order, and phrasing follows the derived formulation
preferences. Templates live in a JSON catalog so wording can be swapped
without touching code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ContractViolation, LoadError
from .features import (
    FeatureId,
    FeatureKind,
    FeatureVector,
    MENTION_COUNT_FEATURES,
)
from .weights import FormulationPrefs, WeightTable

# Publications become worth a sentence only in the plural.
PUBLICATION_SENTENCE_MIN = 2

MAX_SENTENCES = 3

VARIANT_KEYS = ("factual", "action", "factual_numeric", "action_numeric")

_ENUM_POSITION = {f: i for i, f in enumerate(FeatureId)}

_CONDITION_SLOT = "{condition}"
_COUNT_SLOT = "{count}"


@dataclass(frozen=True)
class ExplanationSentence:
    feature: FeatureId
    text: str
    weight: float


@dataclass(frozen=True)
class TemplateCatalog:
    """Per-feature sentence templates, one text per phrasing variant."""

    variants: dict[FeatureId, dict[str, str]]

    def template(self, feature: FeatureId, prefs: FormulationPrefs) -> str:
        key = prefs.verb_style
        if prefs.numeric_style == "numeric":
            key += "_numeric"
        return self.variants[feature][key]

    def validate(self) -> None:
        for feature in FeatureId:
            entry = self.variants.get(feature)
            if entry is None:
                raise ValueError(f"catalog missing feature {feature.value}")
            for key in VARIANT_KEYS:
                text = entry.get(key)
                if not text or not text.strip():
                    raise ValueError(f"catalog {feature.value}/{key} is empty")
                if text != text.strip() or "\n" in text:
                    raise ValueError(f"catalog {feature.value}/{key} must be a single trimmed line")
                if text.count(_CONDITION_SLOT) > 1:
                    raise ValueError(f"catalog {feature.value}/{key} repeats the condition slot")
                if not key.endswith("_numeric"):
                    if _COUNT_SLOT in text:
                        raise ValueError(f"catalog {feature.value}/{key} uses a count outside numeric style")
                    if any(ch.isdigit() for ch in text):
                        raise ValueError(f"catalog {feature.value}/{key} contains digits outside numeric style")

    @classmethod
    def from_json(cls, text: str, source: str = "<memory>") -> TemplateCatalog:
        try:
            doc = json.loads(text)
            raw = doc["features"]
            variants = {FeatureId(name): dict(entry) for name, entry in raw.items()}
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            raise LoadError(f"malformed template catalog {source}: {exc}") from exc
        catalog = cls(variants)
        try:
            catalog.validate()
        except ValueError as exc:
            raise LoadError(f"invalid template catalog {source}: {exc}") from exc
        return catalog

    @classmethod
    def load(cls, path: str | Path) -> TemplateCatalog:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise LoadError(f"cannot read template catalog {path}: {exc}") from exc
        return cls.from_json(text, source=str(path))

    @classmethod
    def default(cls) -> TemplateCatalog:
        text = resources.files("trialexplain").joinpath("data/templates.json").read_text("utf-8")
        return cls.from_json(text, source="packaged default")


def eligible_features(fv: FeatureVector) -> set[FeatureId]:
    """Features whose evidence is strong enough to state out loud."""
    eligible: set[FeatureId] = set()
    for feature in FeatureId:
        if feature is FeatureId.PUBLICATION_COUNT:
            if fv.raw(feature) >= PUBLICATION_SENTENCE_MIN:
                eligible.add(feature)
        elif feature in MENTION_COUNT_FEATURES:
            if fv.raw(feature) >= 1:
                eligible.add(feature)
        elif feature.kind is FeatureKind.BINARY:
            if fv.score(feature) == 1:
                eligible.add(feature)
    if FeatureId.IS_RECRUITING in eligible:
        # the recruiting sentence already says the status; drop the weaker one
        eligible.discard(FeatureId.OVERALL_STATUS_AVAILABLE)
    return eligible


def select_explanations(
    fv: FeatureVector, weights: WeightTable, k: int = MAX_SENTENCES
) -> list[FeatureId]:
    """Top-k eligible features by weight descending, enumeration order on ties."""
    if k < 1:
        raise ValueError("k must be >= 1")
    chosen = sorted(
        eligible_features(fv),
        key=lambda f: (-weights.weight(f), _ENUM_POSITION[f]),
    )
    return chosen[:k]


def render_sentence(
    feature: FeatureId,
    prefs: FormulationPrefs,
    condition_name: str,
    fv: FeatureVector,
    catalog: TemplateCatalog,
) -> str:
    if feature not in eligible_features(fv):
        raise ContractViolation(f"{feature.value} is not eligible for a sentence")
    text = catalog.template(feature, prefs)
    slot = text.find(_CONDITION_SLOT)
    if slot >= 0:
        if prefs.disease_naming == "specific":
            value = condition_name
        else:
            value = "The condition" if slot == 0 else "the condition"
        text = text.replace(_CONDITION_SLOT, value)
    if _COUNT_SLOT in text:
        text = text.replace(_COUNT_SLOT, str(fv.raw(feature)))
    return text


def explain_trial(
    fv: FeatureVector,
    weights: WeightTable,
    prefs: FormulationPrefs,
    condition_name: str,
    catalog: TemplateCatalog,
    k: int = MAX_SENTENCES,
) -> tuple[ExplanationSentence, ...]:
    """Selection and rendering composed: the sentences a result ships with."""
    return tuple(
        ExplanationSentence(
            feature=feature,
            text=render_sentence(feature, prefs, condition_name, fv, catalog),
            weight=weights.weight(feature),
        )
        for feature in select_explanations(fv, weights, k)
    )

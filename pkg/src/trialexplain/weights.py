"""Feature weights and formulation preferences from Likert-rating datasets.

Seven of the eleven features carry crowd ratings (1..5). Features are sorted
by mean rating, adjacent pairs are compared with a chi-squared test, and a
significant gap (p < 0.05) cuts the ordering into tiers. Unrated features
borrow mean and tier from their closest rated analogue. The final weight is
mean x tier multiplier, normalized to sum to 1.

Formulation preferences pick a sentence style per dimension: when the two
variants' ratings differ significantly the higher-mean variant wins,
otherwise a documented default applies.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TypeVar

from .errors import DegenerateTestError, IncompleteDataError, LoadError, SchemaError
from .features import FeatureDependency, FeatureId
from .stats import chi_square_test

SIGNIFICANCE_THRESHOLD = 0.05

RATING_LEVELS = (1, 2, 3, 4, 5)

# The seven features participants rated directly.
RATED_FEATURES: tuple[FeatureId, ...] = (
    FeatureId.QUERY_IN_TITLE,
    FeatureId.QUERY_IN_SUMMARY,
    FeatureId.QUERY_IN_DETAILED_DESCRIPTION,
    FeatureId.STAGE_AVAILABLE,
    FeatureId.IS_RECRUITING,
    FeatureId.PRIMARY_PURPOSE_AVAILABLE,
    FeatureId.PUBLICATION_COUNT,
)

# Unrated features inherit mean and tier from their closest rated analogue.
PROXY_SOURCES: dict[FeatureId, FeatureId] = {
    FeatureId.PREFERRED_TERM_IN_TITLE: FeatureId.QUERY_IN_TITLE,
    FeatureId.PREFERRED_TERM_IN_SUMMARY: FeatureId.QUERY_IN_SUMMARY,
    FeatureId.PREFERRED_TERM_IN_DETAILED_DESCRIPTION: FeatureId.QUERY_IN_DETAILED_DESCRIPTION,
    FeatureId.OVERALL_STATUS_AVAILABLE: FeatureId.STAGE_AVAILABLE,
}


class Tier(str, Enum):
    HIGH = "high"
    LOW = "low"


DEFAULT_MULTIPLIERS: dict[Tier, float] = {Tier.HIGH: 1.5, Tier.LOW: 1.0}

_ENUM_POSITION = {f: i for i, f in enumerate(FeatureId)}

_K = TypeVar("_K")


@dataclass(frozen=True)
class FeatureRating:
    participant_id: str
    feature: FeatureId
    rating: int


class FormulationDimension(str, Enum):
    NUMERIC_STYLE = "numeric_style"
    VERB_STYLE = "verb_style"
    DISEASE_NAMING = "disease_naming"


# CSV variant letters map to concrete styles per dimension.
VARIANT_MEANING: dict[FormulationDimension, dict[str, str]] = {
    FormulationDimension.NUMERIC_STYLE: {"a": "non_numeric", "b": "numeric"},
    FormulationDimension.VERB_STYLE: {"a": "factual", "b": "action"},
    FormulationDimension.DISEASE_NAMING: {"a": "specific", "b": "generic"},
}

FORMULATION_DEFAULTS: dict[FormulationDimension, str] = {
    FormulationDimension.NUMERIC_STYLE: "non_numeric",
    FormulationDimension.VERB_STYLE: "factual",
    FormulationDimension.DISEASE_NAMING: "generic",
}


@dataclass(frozen=True)
class FormulationRating:
    participant_id: str
    dimension: FormulationDimension
    variant: str  # "a" or "b"
    rating: int


@dataclass(frozen=True)
class FormulationPrefs:
    numeric_style: str = "non_numeric"
    verb_style: str = "factual"
    disease_naming: str = "generic"

    def __post_init__(self) -> None:
        allowed = {
            "numeric_style": {"non_numeric", "numeric"},
            "verb_style": {"factual", "action"},
            "disease_naming": {"generic", "specific"},
        }
        for name, values in allowed.items():
            if getattr(self, name) not in values:
                raise ValueError(f"{name} must be one of {sorted(values)}")

    def as_dict(self) -> dict[str, str]:
        return {
            "numeric_style": self.numeric_style,
            "verb_style": self.verb_style,
            "disease_naming": self.disease_naming,
        }


@dataclass(frozen=True)
class WeightTable:
    """Normalized per-feature weights with their tiering provenance."""

    weights: dict[FeatureId, float]
    tiers: dict[FeatureId, Tier]
    means: dict[FeatureId, float]
    threshold: float = SIGNIFICANCE_THRESHOLD
    multipliers: dict[Tier, float] = field(default_factory=lambda: dict(DEFAULT_MULTIPLIERS))
    warnings: tuple[str, ...] = ()

    def weight(self, feature: FeatureId) -> float:
        return self.weights[feature]

    def validate(self) -> None:
        missing = [f.value for f in FeatureId if f not in self.weights or f not in self.tiers]
        if missing:
            raise ValueError(f"weight table incomplete: missing {missing}")
        if len(self.weights) != len(FeatureId):
            raise ValueError("weight table has extra entries")
        if any(w <= 0.0 for w in self.weights.values()):
            raise ValueError("all weights must be positive")
        total = sum(self.weights[f] for f in FeatureId)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {total!r}, expected 1 within 1e-9")


def histogram(ratings: Iterable[int]) -> list[int]:
    """Counts per rating level 1..5."""
    counts = [0] * len(RATING_LEVELS)
    for r in ratings:
        if r not in RATING_LEVELS:
            raise ValueError(f"rating {r!r} outside 1..5")
        counts[r - 1] += 1
    return counts


def _mean(ratings: Sequence[int]) -> float:
    return sum(ratings) / len(ratings)


def _saturated_total(weights: Mapping[FeatureId, float]) -> float:
    """E_ct of a hypothetical trial scoring 1.0 everywhere, summed exactly as
    the scoring path sums it (dependency class split, enumeration order)."""
    e_dtc = 0.0
    e_it = 0.0
    for f in FeatureId:
        if f.dependency is FeatureDependency.QUERY_DEPENDENT:
            e_dtc += weights[f]
        else:
            e_it += weights[f]
    return e_it + e_dtc


def _normalize(raw: dict[_K, float]) -> dict[_K, float]:
    total = sum(raw.values())
    return {k: v / total for k, v in raw.items()}


def _apply_saturation_guard(weights: dict[FeatureId, float]) -> dict[FeatureId, float]:
    """Shave the largest weight by the float excess so a fully saturated trial
    sums to at most 1.0 exactly; rounding monotonicity then bounds every trial."""
    out = dict(weights)
    for _ in range(64):
        excess = _saturated_total(out) - 1.0
        if excess <= 0.0:
            return out
        top = max(FeatureId, key=lambda f: out[f])
        out[top] -= excess
    raise AssertionError("saturation guard failed to converge")


def tiered_weights(
    means: Mapping[_K, float],
    tiers: Mapping[_K, Tier],
    multipliers: Mapping[Tier, float] = DEFAULT_MULTIPLIERS,
) -> dict[_K, float]:
    """mean x tier multiplier, normalized to sum to 1."""
    raw = {k: means[k] * multipliers[tiers[k]] for k in means}
    return _normalize(raw)


def derive_weights(
    ratings: Sequence[FeatureRating],
    *,
    significance: float = SIGNIFICANCE_THRESHOLD,
    multipliers: Mapping[Tier, float] | None = None,
) -> WeightTable:
    """Derive the full 11-feature WeightTable from ratings of the 7 rated features."""
    mult = dict(DEFAULT_MULTIPLIERS if multipliers is None else multipliers)
    by_feature: dict[FeatureId, list[int]] = {f: [] for f in RATED_FEATURES}
    for rec in ratings:
        if rec.feature not in by_feature:
            raise ValueError(f"{rec.feature.value} is not a rated feature")
        by_feature[rec.feature].append(rec.rating)
    underpowered = [f.value for f in RATED_FEATURES if len(by_feature[f]) < 2]
    if underpowered:
        raise IncompleteDataError(
            "each rated feature needs at least two ratings", missing=underpowered
        )

    means = {f: _mean(by_feature[f]) for f in RATED_FEATURES}
    ordered = sorted(RATED_FEATURES, key=lambda f: (-means[f], _ENUM_POSITION[f]))

    warnings: list[str] = []
    cuts: list[int] = []  # cut after ordered[i]
    for i in range(len(ordered) - 1):
        a, b = ordered[i], ordered[i + 1]
        try:
            result = chi_square_test(histogram(by_feature[a]), histogram(by_feature[b]))
        except DegenerateTestError as exc:
            warnings.append(f"adjacent test {a.value} vs {b.value} degenerate ({exc}); no cut")
            continue
        if result.p_value < significance:
            cuts.append(i)

    tiers: dict[FeatureId, Tier] = {}
    if not cuts:
        for f in ordered:
            tiers[f] = Tier.HIGH
    else:
        last_cut = cuts[-1]
        for i, f in enumerate(ordered):
            tiers[f] = Tier.LOW if i > last_cut else Tier.HIGH

    all_means = dict(means)
    all_tiers = dict(tiers)
    for target, source in PROXY_SOURCES.items():
        all_means[target] = means[source]
        all_tiers[target] = tiers[source]

    weights = _apply_saturation_guard(tiered_weights(all_means, all_tiers, mult))
    table = WeightTable(
        weights=weights,
        tiers=all_tiers,
        means=means,
        threshold=significance,
        multipliers=mult,
        warnings=tuple(warnings),
    )
    table.validate()
    return table


def formulation_prefs(
    ratings: Sequence[FormulationRating],
    *,
    significance: float = SIGNIFICANCE_THRESHOLD,
) -> tuple[FormulationPrefs, tuple[str, ...]]:
    """Pick a style per formulation dimension from paired variant ratings."""
    by_cell: dict[tuple[FormulationDimension, str], list[int]] = {
        (dim, v): [] for dim in FormulationDimension for v in ("a", "b")
    }
    for rec in ratings:
        by_cell[(rec.dimension, rec.variant)].append(rec.rating)
    thin = [f"{dim.value}/{v}" for (dim, v), rows in by_cell.items() if len(rows) < 2]
    if thin:
        raise IncompleteDataError(
            "each formulation variant needs at least two ratings", missing=thin
        )

    warnings: list[str] = []
    chosen: dict[FormulationDimension, str] = {}
    for dim in FormulationDimension:
        ratings_a = by_cell[(dim, "a")]
        ratings_b = by_cell[(dim, "b")]
        default = FORMULATION_DEFAULTS[dim]
        try:
            result = chi_square_test(histogram(ratings_a), histogram(ratings_b))
        except DegenerateTestError as exc:
            warnings.append(f"{dim.value} test degenerate ({exc}); using default")
            chosen[dim] = default
            continue
        if result.p_value < significance:
            mean_a, mean_b = _mean(ratings_a), _mean(ratings_b)
            if mean_a == mean_b:
                chosen[dim] = default
            else:
                winner = "a" if mean_a > mean_b else "b"
                chosen[dim] = VARIANT_MEANING[dim][winner]
        else:
            chosen[dim] = default
    prefs = FormulationPrefs(
        numeric_style=chosen[FormulationDimension.NUMERIC_STYLE],
        verb_style=chosen[FormulationDimension.VERB_STYLE],
        disease_naming=chosen[FormulationDimension.DISEASE_NAMING],
    )
    return prefs, tuple(warnings)


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------

def _read_csv(path: str | Path, expected_header: list[str]) -> list[tuple[int, list[str]]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            rows = [(i, row) for i, row in enumerate(reader, start=1) if row]
    except OSError as exc:
        raise LoadError(f"cannot read ratings file {path}: {exc}") from exc
    if not rows or rows[0][1] != expected_header:
        raise SchemaError(
            f"{path}: expected header {','.join(expected_header)}", rows=[1]
        )
    return rows[1:]


def load_feature_ratings(path: str | Path) -> list[FeatureRating]:
    """Parse a participant_id,feature_id,rating CSV covering the rated features."""
    rated = {f.value: f for f in RATED_FEATURES}
    records: list[FeatureRating] = []
    bad: list[int] = []
    for line_no, row in _read_csv(path, ["participant_id", "feature_id", "rating"]):
        if len(row) != 3 or not row[0].strip() or row[1] not in rated:
            bad.append(line_no)
            continue
        try:
            rating = int(row[2])
        except ValueError:
            bad.append(line_no)
            continue
        if rating not in RATING_LEVELS:
            bad.append(line_no)
            continue
        records.append(FeatureRating(row[0].strip(), rated[row[1]], rating))
    if bad:
        raise SchemaError(f"{path}: malformed rating rows", rows=bad)
    return records


def load_formulation_ratings(path: str | Path) -> list[FormulationRating]:
    """Parse a participant_id,dimension,variant,rating CSV."""
    dims = {d.value: d for d in FormulationDimension}
    records: list[FormulationRating] = []
    bad: list[int] = []
    header = ["participant_id", "dimension", "variant", "rating"]
    for line_no, row in _read_csv(path, header):
        if len(row) != 4 or not row[0].strip() or row[1] not in dims or row[2] not in ("a", "b"):
            bad.append(line_no)
            continue
        try:
            rating = int(row[3])
        except ValueError:
            bad.append(line_no)
            continue
        if rating not in RATING_LEVELS:
            bad.append(line_no)
            continue
        records.append(FormulationRating(row[0].strip(), dims[row[1]], row[2], rating))
    if bad:
        raise SchemaError(f"{path}: malformed rating rows", rows=bad)
    return records


# ---------------------------------------------------------------------------
# Weights document (JSON) round-trip
# ---------------------------------------------------------------------------

DOCUMENT_VERSION = 1


def bundle_to_document(table: WeightTable, prefs: FormulationPrefs) -> dict:
    return {
        "version": DOCUMENT_VERSION,
        "threshold": table.threshold,
        "multipliers": {t.value: m for t, m in table.multipliers.items()},
        "weights": {f.value: table.weights[f] for f in FeatureId},
        "tiers": {f.value: table.tiers[f].value for f in FeatureId},
        "provenance": {
            "means": {f.value: table.means[f] for f in RATED_FEATURES},
            "proxies": {t.value: s.value for t, s in PROXY_SOURCES.items()},
        },
        "formulation": prefs.as_dict(),
        "warnings": list(table.warnings),
    }


def document_to_bundle(doc: dict) -> tuple[WeightTable, FormulationPrefs]:
    try:
        weights = {FeatureId(k): float(v) for k, v in doc["weights"].items()}
        tiers = {FeatureId(k): Tier(v) for k, v in doc["tiers"].items()}
        means = {FeatureId(k): float(v) for k, v in doc["provenance"]["means"].items()}
        multipliers = {Tier(k): float(v) for k, v in doc["multipliers"].items()}
        prefs = FormulationPrefs(**doc["formulation"])
        table = WeightTable(
            weights=weights,
            tiers=tiers,
            means=means,
            threshold=float(doc["threshold"]),
            multipliers=multipliers,
            warnings=tuple(doc.get("warnings", ())),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise LoadError(f"malformed weights document: {exc}") from exc
    try:
        table.validate()
    except ValueError as exc:
        raise LoadError(f"invalid weights document: {exc}") from exc
    guarded = _apply_saturation_guard(table.weights)
    if guarded != table.weights:
        table = WeightTable(
            weights=guarded,
            tiers=table.tiers,
            means=table.means,
            threshold=table.threshold,
            multipliers=table.multipliers,
            warnings=table.warnings + ("weights rescaled to keep a saturated trial at 1.0",),
        )
    return table, prefs


def write_weights_file(path: str | Path, table: WeightTable, prefs: FormulationPrefs) -> None:
    body = json.dumps(bundle_to_document(table, prefs), indent=2, sort_keys=False)
    Path(path).write_text(body + "\n", encoding="utf-8")


def load_weights_file(path: str | Path) -> tuple[WeightTable, FormulationPrefs]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise LoadError(f"cannot read weights file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LoadError(f"weights file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise LoadError(f"weights file {path} must hold a JSON object")
    return document_to_bundle(doc)

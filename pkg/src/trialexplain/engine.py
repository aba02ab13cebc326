"""Search orchestration: resolve the query, rank, present per variant.

The engine owns the immutable corpus/graph/catalog plus a swappable weights
bundle. Every request captures the bundle reference once, so a concurrent
swap never mixes two weight tables inside one response.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .corpus import ConceptGraph, TrialCorpus, load_concepts, load_trials, resolve_query
from .errors import LoadError, UnknownTrialError
from .explain import TemplateCatalog, explain_trial
from .manifest import load_manifest, verify_manifest
from .scoring import EngineVariant, ScoredTrial, apply_variant, rank_trials, score_one
from .textnorm import normalize_term
from .weights import FormulationPrefs, WeightTable, load_weights_file

DEFAULT_LIMIT = 10


@dataclass(frozen=True)
class WeightsBundle:
    table: WeightTable
    prefs: FormulationPrefs


@dataclass(frozen=True)
class SearchOutcome:
    query: str
    cui: str
    condition_name: str
    variant: EngineVariant
    results: list[ScoredTrial]
    total: int


class SearchEngine:
    def __init__(
        self,
        corpus: TrialCorpus,
        graph: ConceptGraph,
        bundle: WeightsBundle,
        catalog: TemplateCatalog,
    ) -> None:
        self.corpus = corpus
        self.graph = graph
        self.catalog = catalog
        self._bundle = bundle
        self._positions = corpus.ingestion_position()

    @property
    def bundle(self) -> WeightsBundle:
        return self._bundle

    def replace_weights(self, bundle: WeightsBundle) -> None:
        """Atomic swap: in-flight requests finish on the bundle they captured."""
        self._bundle = bundle

    def _display_term(self, query: str) -> str:
        hit = self.graph.term_index.get(normalize_term(query))
        return hit[1] if hit else query

    def search(
        self,
        query: str,
        variant: EngineVariant = EngineVariant.AMSTERDAM,
        limit: int = DEFAULT_LIMIT,
    ) -> SearchOutcome:
        if limit < 1:
            raise ValueError("limit must be >= 1")
        bundle = self._bundle
        concept = resolve_query(self.graph, query)
        condition_name = self._display_term(query)
        ranked = rank_trials(self.corpus, concept, query, bundle.table)
        ordered = apply_variant(ranked, variant, self._positions)
        page = ordered[:limit]
        if variant.keeps_explanations:
            page = [
                st.with_explanations(
                    explain_trial(
                        st.feature_vector, bundle.table, bundle.prefs, condition_name, self.catalog
                    )
                )
                for st in page
            ]
        return SearchOutcome(
            query=query,
            cui=concept.cui,
            condition_name=condition_name,
            variant=variant,
            results=page,
            total=len(ranked),
        )

    def trial_detail(self, nct_id: str, query: str) -> ScoredTrial:
        """One trial scored and explained under the resolved query."""
        bundle = self._bundle
        concept = resolve_query(self.graph, query)
        trial = self.corpus.get(nct_id)
        if trial is None:
            raise UnknownTrialError(nct_id)
        if concept.cui not in trial.condition_cuis:
            raise UnknownTrialError(nct_id, linked=False)
        scored = score_one(trial, concept, query, bundle.table)
        return scored.with_explanations(
            explain_trial(
                scored.feature_vector,
                bundle.table,
                bundle.prefs,
                self._display_term(query),
                self.catalog,
            )
        )


def load_engine(
    index_dir: str | Path,
    weights_path: str | Path | None = None,
    templates_path: str | Path | None = None,
) -> SearchEngine:
    """Assemble an engine from a built index directory.

    The manifest's digests are verified before anything is served. Explicit
    weights/templates paths take precedence over manifest-pinned ones; with
    neither available the load fails.
    """
    index_dir = Path(index_dir)
    manifest = load_manifest(index_dir)
    verify_manifest(index_dir, manifest)
    files = manifest["files"]

    corpus = load_trials(index_dir / files["trials"]["path"])
    graph = load_concepts(index_dir / files["concepts"]["path"])

    if weights_path is None:
        if "weights" not in files:
            raise LoadError(
                "no weights available: pass a weights file or build the index with one"
            )
        weights_path = index_dir / files["weights"]["path"]
    table, prefs = load_weights_file(weights_path)

    if templates_path is None and "templates" in files:
        templates_path = index_dir / files["templates"]["path"]
    catalog = (
        TemplateCatalog.default() if templates_path is None else TemplateCatalog.load(templates_path)
    )
    return SearchEngine(corpus, graph, WeightsBundle(table, prefs), catalog)

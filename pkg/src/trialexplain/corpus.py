"""Trial corpus and condition concept graph: file loading and query resolution.

Both input files are newline-delimited JSON, UTF-8, one record per line.
Trials carry the registry fields used for feature extraction plus the CUIs of
the conditions they are linked to; concepts carry a CUI, a preferred term,
synonyms, and parent CUIs. Loading is skip-and-warn: malformed lines never
abort the rest of the file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidQueryError, LoadError, UnknownConditionError
from .textnorm import normalize_term

MAX_SUGGESTIONS = 5


@dataclass(frozen=True)
class TrialRecord:
    """One clinical trial as ingested from a registry dump."""

    nct_id: str
    title: str = ""
    brief_summary: str = ""
    detailed_description: str = ""
    stage: str | None = None
    overall_status: str | None = None
    primary_purpose: str | None = None
    condition_cuis: frozenset[str] = frozenset()
    publication_count: int = 0


@dataclass(frozen=True)
class Concept:
    """A condition: canonical CUI, display name, synonyms, parents."""

    cui: str
    preferred_term: str
    synonyms: tuple[str, ...] = ()
    parent_cuis: tuple[str, ...] = ()


@dataclass
class TrialCorpus:
    """Immutable-after-load set of trials, preserving ingestion order."""

    trials: dict[str, TrialRecord] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    skipped: int = 0

    def __len__(self) -> int:
        return len(self.trials)

    def get(self, nct_id: str) -> TrialRecord | None:
        return self.trials.get(nct_id)

    def ingestion_position(self) -> dict[str, int]:
        return {nct_id: i for i, nct_id in enumerate(self.order)}

    def linked_to(self, cui: str) -> list[TrialRecord]:
        """Trials linked to the CUI, in ingestion order."""
        return [self.trials[n] for n in self.order if cui in self.trials[n].condition_cuis]


@dataclass
class ConceptGraph:
    """Concept store plus an exact-match index over normalized terms."""

    concepts: dict[str, Concept] = field(default_factory=dict)
    # normalized term -> (cui, term as written in the source file)
    term_index: dict[str, tuple[str, str]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def get(self, cui: str) -> Concept | None:
        return self.concepts.get(cui)


def _read_lines(path: str | Path) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc


def _clean_text(value: object) -> str:
    return value if isinstance(value, str) else ""


def load_trials(path: str | Path) -> TrialCorpus:
    """Load a trials file; malformed lines are skipped with a line-numbered warning."""
    corpus = TrialCorpus()
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            corpus.warnings.append(f"line {lineno}: unparseable record ({exc.msg})")
            corpus.skipped += 1
            continue
        record, problem = _parse_trial(raw)
        if record is None:
            corpus.warnings.append(f"line {lineno}: {problem}")
            corpus.skipped += 1
            continue
        if record.nct_id in corpus.trials:
            corpus.warnings.append(f"line {lineno}: duplicate nct_id {record.nct_id}, record rejected")
            continue
        corpus.trials[record.nct_id] = record
        corpus.order.append(record.nct_id)
    return corpus


def _parse_trial(raw: object) -> tuple[TrialRecord | None, str]:
    if not isinstance(raw, dict):
        return None, "record is not an object"
    nct_id = raw.get("nct_id")
    if not isinstance(nct_id, str) or not nct_id.strip():
        return None, "missing or empty nct_id"
    cuis = raw.get("condition_cuis")
    if not isinstance(cuis, list) or not cuis or not all(isinstance(c, str) and c.strip() for c in cuis):
        return None, f"trial {nct_id}: condition_cuis missing or empty, not indexable"
    pubs = raw.get("publication_count", 0)
    if not isinstance(pubs, int) or isinstance(pubs, bool) or pubs < 0:
        return None, f"trial {nct_id}: publication_count must be a non-negative integer"

    def optional(key: str) -> str | None:
        value = raw.get(key)
        return value if isinstance(value, str) and value.strip() else None

    record = TrialRecord(
        nct_id=nct_id.strip(),
        title=_clean_text(raw.get("title")),
        brief_summary=_clean_text(raw.get("brief_summary")),
        detailed_description=_clean_text(raw.get("detailed_description")),
        stage=optional("stage"),
        overall_status=optional("overall_status"),
        primary_purpose=optional("primary_purpose"),
        condition_cuis=frozenset(c.strip() for c in cuis),
        publication_count=pubs,
    )
    return record, ""


def load_concepts(path: str | Path) -> ConceptGraph:
    """Load a concepts file and build the normalized-term index.

    Conflicting term claims keep the first mapping; parent references that do
    not resolve are dropped. Both produce warnings rather than failures.
    """
    graph = ConceptGraph()
    pending_parents: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            graph.warnings.append(f"line {lineno}: unparseable record ({exc.msg})")
            continue
        if not isinstance(raw, dict):
            graph.warnings.append(f"line {lineno}: record is not an object")
            continue
        cui = raw.get("cui")
        preferred = raw.get("preferred_term")
        if not isinstance(cui, str) or not cui.strip():
            graph.warnings.append(f"line {lineno}: missing or empty cui")
            continue
        cui = cui.strip()
        if not isinstance(preferred, str) or not preferred.strip():
            graph.warnings.append(f"line {lineno}: concept {cui}: missing preferred_term")
            continue
        if cui in graph.concepts:
            graph.warnings.append(f"line {lineno}: duplicate cui {cui}, record rejected")
            continue
        preferred = preferred.strip()

        synonyms: list[str] = []
        seen = {normalize_term(preferred)}
        for syn in raw.get("synonyms") or []:
            if not isinstance(syn, str) or not syn.strip():
                graph.warnings.append(f"line {lineno}: concept {cui}: empty synonym dropped")
                continue
            syn = syn.strip()
            key = normalize_term(syn)
            if key in seen:
                # duplicates of the preferred term (or of each other) add nothing
                graph.warnings.append(f"line {lineno}: concept {cui}: synonym {syn!r} duplicates an existing term")
                continue
            seen.add(key)
            synonyms.append(syn)

        parents = tuple(p.strip() for p in raw.get("parent_cuis") or [] if isinstance(p, str) and p.strip())
        concept = Concept(cui=cui, preferred_term=preferred, synonyms=tuple(synonyms))
        pending_parents[cui] = parents
        graph.concepts[cui] = concept

        for term in (preferred, *synonyms):
            key = normalize_term(term)
            if key in graph.term_index and graph.term_index[key][0] != cui:
                graph.warnings.append(
                    f"line {lineno}: term {term!r} already maps to {graph.term_index[key][0]}, "
                    f"mapping for {cui} dropped"
                )
                continue
            graph.term_index.setdefault(key, (cui, term))

    # parent edges resolve only against the fully loaded file
    for cui, parents in pending_parents.items():
        kept = tuple(p for p in parents if p in graph.concepts)
        for p in parents:
            if p not in graph.concepts:
                graph.warnings.append(f"concept {cui}: dangling parent {p}, edge dropped")
        graph.concepts[cui] = Concept(
            cui=cui,
            preferred_term=graph.concepts[cui].preferred_term,
            synonyms=graph.concepts[cui].synonyms,
            parent_cuis=kept,
        )
    return graph


def resolve_query(graph: ConceptGraph, query: str) -> Concept:
    """Resolve a user query to a concept by exact whole-string term match.

    Raises InvalidQueryError for blank input and UnknownConditionError (with
    up to MAX_SUGGESTIONS shared-prefix candidates) when nothing matches.
    """
    key = normalize_term(query)
    if not key:
        raise InvalidQueryError("query is empty")
    hit = graph.term_index.get(key)
    if hit is None:
        raise UnknownConditionError(query, _suggest(graph, key))
    return graph.concepts[hit[0]]


def _suggest(graph: ConceptGraph, key: str) -> list[str]:
    threshold = min(3, len(key))
    scored: list[tuple[int, str]] = []
    for term_key, (_, display) in graph.term_index.items():
        lcp = _common_prefix_len(key, term_key)
        if lcp >= threshold:
            scored.append((-lcp, display))
    return [display for _, display in sorted(scored)[:MAX_SUGGESTIONS]]


def _common_prefix_len(a: str, b: str) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def terms_of(concept: Concept) -> list[str]:
    """Preferred term then synonyms, deduplicated case-insensitively."""
    out: list[str] = []
    seen: set[str] = set()
    for term in (concept.preferred_term, *concept.synonyms):
        key = normalize_term(term)
        if key not in seen:
            seen.add(key)
            out.append(term)
    return out

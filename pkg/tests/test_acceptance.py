"""Acceptance gate: the contractual behaviors of the whole engine, one test
each, from score algebra up to the served HTTP interface.

Each test prints one pass/fail line under pytest -v. Randomized suites use
fixed seeds so failures reproduce.
"""

from __future__ import annotations

import random
import time

import pytest
from fastapi.testclient import TestClient

import fixture_data as fx
from trialexplain.corpus import Concept, TrialRecord, load_concepts, load_trials
from trialexplain.engine import SearchEngine, WeightsBundle, load_engine
from trialexplain.explain import TemplateCatalog, explain_trial, render_sentence
from trialexplain.features import (
    FeatureId,
    FeatureKind,
    FeatureVector,
    extract_features,
)
from trialexplain.manifest import build_index
from trialexplain.scoring import EngineVariant, score_one, score_trial
from trialexplain.service import create_app
from trialexplain.stats import chi_square_p_value, chi_square_test
from trialexplain.textnorm import normalize_term
from trialexplain.weights import (
    RATED_FEATURES,
    FormulationPrefs,
    Tier,
    derive_weights,
    formulation_prefs,
    write_weights_file,
)

FILLER = (
    "randomized controlled study of adult participants receiving standard care "
    "with follow up visits scheduled across sites and outcomes recorded by blinded "
    "assessors over survival months"
).split()


def _sprinkle(rng: random.Random, term: str, count: int) -> str:
    words = [rng.choice(FILLER) for _ in range(rng.randint(4, 10))]
    for _ in range(count):
        words.insert(rng.randint(0, len(words)), term)
    return " ".join(words)


def _random_trial(rng: random.Random, concept: Concept, query: str, nct_id: str) -> TrialRecord:
    terms = [query, concept.preferred_term]
    return TrialRecord(
        nct_id=nct_id,
        title=_sprinkle(rng, rng.choice(terms), rng.randint(0, 2)),
        brief_summary=_sprinkle(rng, rng.choice(terms), rng.randint(0, 4)),
        detailed_description=_sprinkle(rng, rng.choice(terms), rng.randint(0, 4)),
        stage=rng.choice([None, "Phase 1", "Phase 2", "Phase 3"]),
        overall_status=rng.choice([None, "Recruiting", "Completed", "Active, not recruiting"]),
        primary_purpose=rng.choice([None, "Treatment", "Prevention"]),
        condition_cuis=frozenset({concept.cui}),
        publication_count=rng.randint(0, 8),
    )


def test_score_algebra(graph, weight_table):
    concept = graph.concepts[fx.HIV]
    queries = ["HIV", "HIV Infection", "hiv disease"]
    rng = random.Random(20260816)
    started = time.perf_counter()
    for i in range(1000):
        query = rng.choice(queries)
        trial = _random_trial(rng, concept, query, f"NCT{i:08d}")
        fv = extract_features(trial, concept, query)
        e_it, e_dtc, e_ct = score_trial(fv, weight_table)
        assert e_ct == e_it + e_dtc  # bitwise: the sum IS the score, no re-derivation
        assert 0.0 <= e_ct <= 1.0
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"1000 scored fixtures took {elapsed:.3f}s"

    saturated = TrialRecord(
        nct_id="NCT11111111",
        title="HIV Infection outcomes",
        brief_summary=_sprinkle(random.Random(1), "HIV", 3)
        + " "
        + _sprinkle(random.Random(2), "HIV Infection", 3),
        detailed_description=_sprinkle(random.Random(3), "HIV", 3)
        + " "
        + _sprinkle(random.Random(4), "HIV Infection", 3),
        stage="Phase 2",
        overall_status="Recruiting",
        primary_purpose="Treatment",
        condition_cuis=frozenset({fx.HIV}),
        publication_count=5,
    )
    fv = extract_features(saturated, concept, "HIV")
    assert all(value.score == 1.0 for _, value in fv), "fixture must saturate every feature"
    _, _, e_ct = score_trial(fv, weight_table)
    assert e_ct == pytest.approx(1.0, abs=1e-12)
    assert e_ct <= 1.0


def test_query_independence(corpus, graph, weight_table):
    multi = [t for t in corpus.trials.values() if len(t.condition_cuis) >= 2]
    assert len(multi) >= 2, "fixture must contain multi-condition trials"
    for trial in multi:
        observed: set[float] = set()
        for cui in sorted(trial.condition_cuis):
            concept = graph.concepts[cui]
            for query in (concept.preferred_term, *concept.synonyms):
                scored = score_one(trial, concept, query, weight_table)
                observed.add(scored.e_it)
        assert len(observed) == 1, f"{trial.nct_id}: E_it varied across queries: {observed}"


def test_chi_square_correctness():
    result = chi_square_test([10, 20], [20, 10])
    assert result.statistic == pytest.approx(6.667, abs=1e-3)
    assert result.p_value == pytest.approx(0.0098, abs=1e-3)
    assert result.dof == 1
    assert chi_square_p_value(3.841, 1) == pytest.approx(0.05, abs=1e-3)
    assert chi_square_p_value(9.488, 4) == pytest.approx(0.05, abs=1e-3)


def test_tier_recovery():
    started = time.perf_counter()
    table = derive_weights(fx.feature_rating_records())
    elapsed = time.perf_counter() - started
    low_rated = {f for f in RATED_FEATURES if table.tiers[f] is Tier.LOW}
    assert low_rated == {FeatureId.QUERY_IN_TITLE, FeatureId.IS_RECRUITING}
    assert sum(table.weights.values()) == pytest.approx(1.0, abs=1e-9)
    assert elapsed < 1.0, f"derivation took {elapsed:.3f}s"


def test_formulation_decisions():
    prefs, _warnings = formulation_prefs(fx.formulation_rating_records())
    assert prefs.numeric_style == "non_numeric"
    assert prefs.verb_style == "factual"
    assert prefs.disease_naming == "generic"


def _oracle_eligible(fv: FeatureVector) -> set[FeatureId]:
    # re-stated rules, kept independent of the implementation under test
    mention = {
        FeatureId.QUERY_IN_SUMMARY,
        FeatureId.PREFERRED_TERM_IN_SUMMARY,
        FeatureId.QUERY_IN_DETAILED_DESCRIPTION,
        FeatureId.PREFERRED_TERM_IN_DETAILED_DESCRIPTION,
    }
    out = set()
    for f in FeatureId:
        if f is FeatureId.PUBLICATION_COUNT:
            if fv.raw(f) >= 2:
                out.add(f)
        elif f in mention:
            if fv.raw(f) >= 1:
                out.add(f)
        elif fv.score(f) == 1:
            out.add(f)
    if FeatureId.IS_RECRUITING in out:
        out.discard(FeatureId.OVERALL_STATUS_AVAILABLE)
    return out


def test_explanation_rules(weight_table, catalog):
    prefs = FormulationPrefs()  # non_numeric, factual, generic
    rng = random.Random(424242)
    for _ in range(1000):
        raw = {}
        for f in FeatureId:
            if f is FeatureId.PUBLICATION_COUNT:
                raw[f] = rng.randint(0, 8)
            elif f.kind is FeatureKind.NUMERIC:
                raw[f] = rng.randint(0, 6)
            else:
                raw[f] = rng.randint(0, 1)
        fv = FeatureVector.from_raw(raw)
        sentences = explain_trial(fv, weight_table, prefs, "HIV", catalog)
        assert len(sentences) <= 3
        weights = [s.weight for s in sentences]
        assert weights == sorted(weights, reverse=True)
        allowed = _oracle_eligible(fv)
        for s in sentences:
            assert s.feature in allowed, f"sentence for ineligible {s.feature.value}"
            assert not any(ch.isdigit() for ch in s.text)

    fv = FeatureVector.from_raw(
        {f: (3 if f is FeatureId.PUBLICATION_COUNT else 1) for f in FeatureId}
    )
    assert (
        render_sentence(FeatureId.QUERY_IN_TITLE, prefs, "HIV", fv, catalog)
        == "The condition is mentioned in the title"
    )
    assert (
        render_sentence(FeatureId.PUBLICATION_COUNT, prefs, "HIV", fv, catalog)
        == "The clinical trial has multiple publications"
    )
    specific = FormulationPrefs(disease_naming="specific")
    assert (
        render_sentence(FeatureId.QUERY_IN_TITLE, specific, "HIV", fv, catalog)
        == "HIV is mentioned in the title"
    )


def test_ranking_properties(corpus, graph, weight_table):
    from trialexplain.scoring import rank_trials

    ranked = rank_trials(corpus, graph.concepts[fx.HIV], "HIV", weight_table)
    assert sorted(st.nct_id for st in ranked) == sorted(fx.HIV_TRIAL_IDS)
    for a, b in zip(ranked, ranked[1:]):
        assert a.e_ct > b.e_ct or (a.e_ct == b.e_ct and a.nct_id < b.nct_id)

    # monotonicity: bumping one feature of one trial never demotes it
    rng = random.Random(5150)

    def rank_of(vectors: dict[str, FeatureVector], target: str) -> int:
        scored = [(nct, score_trial(fv, weight_table)[2]) for nct, fv in vectors.items()]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return [nct for nct, _ in scored].index(target)

    for _ in range(500):
        vectors = {}
        for i in range(8):
            raw = {}
            for f in FeatureId:
                if f is FeatureId.PUBLICATION_COUNT:
                    raw[f] = rng.randint(0, 6)
                elif f.kind is FeatureKind.NUMERIC:
                    raw[f] = rng.randint(0, 4)
                else:
                    raw[f] = rng.randint(0, 1)
            vectors[f"NCT{i:03d}"] = FeatureVector.from_raw(raw)
        target = f"NCT{rng.randint(0, 7):03d}"
        feature = rng.choice(list(FeatureId))
        before = rank_of(vectors, target)
        raw = {f: vectors[target].raw(f) for f in FeatureId}
        raw[feature] = 1 if feature.kind is FeatureKind.BINARY else raw[feature] + 1
        vectors[target] = FeatureVector.from_raw(raw)
        after = rank_of(vectors, target)
        assert after <= before, f"raising {feature.value} demoted the trial {before}->{after}"


def test_variant_harness(search_engine):
    outcomes = {v: search_engine.search("HIV", v) for v in EngineVariant}
    for outcome in outcomes.values():
        assert outcome.total == 10
        assert len(outcome.results) == 10  # default limit is 10

    amsterdam = [st.nct_id for st in outcomes[EngineVariant.AMSTERDAM].results]
    berlin = [st.nct_id for st in outcomes[EngineVariant.BERLIN].results]
    assert amsterdam == berlin
    assert any(st.explanations for st in outcomes[EngineVariant.AMSTERDAM].results)
    assert all(st.explanations == () for st in outcomes[EngineVariant.BERLIN].results)

    copenhagen = [st.nct_id for st in outcomes[EngineVariant.COPENHAGEN].results]
    dublin = [st.nct_id for st in outcomes[EngineVariant.DUBLIN].results]
    assert copenhagen == fx.HIV_TRIAL_IDS  # ingestion order
    assert dublin == fx.HIV_TRIAL_IDS
    assert any(st.explanations for st in outcomes[EngineVariant.COPENHAGEN].results)
    assert all(st.explanations == () for st in outcomes[EngineVariant.DUBLIN].results)

    edinburgh_titles = [normalize_term(st.title) for st in outcomes[EngineVariant.EDINBURGH].results]
    assert edinburgh_titles == sorted(edinburgh_titles)
    assert all(st.explanations == () for st in outcomes[EngineVariant.EDINBURGH].results)


def test_end_to_end_service(tmp_path, trials_path, concepts_path, weight_table, prefs):
    weights_file = tmp_path / "weights.json"
    write_weights_file(weights_file, weight_table, prefs)
    index_dir = tmp_path / "index"
    build_index(trials_path, concepts_path, index_dir, weights_path=weights_file)

    engine = load_engine(index_dir)
    app = create_app(engine, weights_path=index_dir / "weights.json")

    reference = SearchEngine(
        load_trials(trials_path),
        load_concepts(concepts_path),
        WeightsBundle(weight_table, prefs),
        TemplateCatalog.default(),
    ).search("HIV")

    with TestClient(app) as client:
        body = client.get("/api/search", params={"q": "HIV"}).json()
        assert [row["nct_id"] for row in body["results"]] == [
            st.nct_id for st in reference.results
        ]
        assert [row["score"] for row in body["results"]] == [
            round(st.e_ct, 3) for st in reference.results
        ]
        assert [row["explanations"] for row in body["results"]] == [
            [s.text for s in st.explanations] for st in reference.results
        ]
        assert body["total"] == reference.total

        assert client.get("/api/search", params={"q": ""}).status_code == 400
        assert client.get("/api/search", params={"q": ""}).json()["code"] == "empty_query"
        missing = client.get("/api/search", params={"q": "no such disease"})
        assert missing.status_code == 404
        assert missing.json()["code"] == "unknown_condition"
        assert (
            client.get("/api/search", params={"q": "HIV", "variant": "oslo"}).status_code == 400
        )

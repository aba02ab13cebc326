from __future__ import annotations

from pathlib import Path

import pytest

import fixture_data as fx
from trialexplain.corpus import load_concepts, load_trials
from trialexplain.engine import SearchEngine, WeightsBundle
from trialexplain.explain import TemplateCatalog
from trialexplain.weights import derive_weights, formulation_prefs


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    root = tmp_path_factory.mktemp("fixture-data")
    (root / "trials.ndjson").write_text(fx.ndjson(fx.TRIALS), encoding="utf-8")
    (root / "concepts.ndjson").write_text(fx.ndjson(fx.CONCEPTS), encoding="utf-8")
    (root / "feature_ratings.csv").write_text(fx.feature_ratings_csv(), encoding="utf-8")
    (root / "formulation_ratings.csv").write_text(fx.formulation_ratings_csv(), encoding="utf-8")
    return root


@pytest.fixture(scope="session")
def trials_path(data_dir: Path) -> Path:
    return data_dir / "trials.ndjson"


@pytest.fixture(scope="session")
def concepts_path(data_dir: Path) -> Path:
    return data_dir / "concepts.ndjson"


@pytest.fixture(scope="session")
def corpus(trials_path: Path):
    return load_trials(trials_path)


@pytest.fixture(scope="session")
def graph(concepts_path: Path):
    return load_concepts(concepts_path)


@pytest.fixture(scope="session")
def weight_table():
    return derive_weights(fx.feature_rating_records())


@pytest.fixture(scope="session")
def prefs():
    chosen, _warnings = formulation_prefs(fx.formulation_rating_records())
    return chosen


@pytest.fixture(scope="session")
def catalog():
    return TemplateCatalog.default()


@pytest.fixture(scope="session")
def search_engine(corpus, graph, weight_table, prefs, catalog) -> SearchEngine:
    return SearchEngine(corpus, graph, WeightsBundle(weight_table, prefs), catalog)

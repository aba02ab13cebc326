"""Domain exceptions raised across the search engine."""

from __future__ import annotations


class SearchEngineError(Exception):
    """Base class for all domain errors."""

    code = "error"


class LoadError(SearchEngineError):
    """A data file could not be read or is unusable as a whole."""

    code = "load_error"


class InvalidQueryError(SearchEngineError):
    """Query is empty after trimming."""

    code = "empty_query"


class UnknownConditionError(SearchEngineError):
    """Query does not match any known condition term."""

    code = "unknown_condition"

    def __init__(self, query: str, suggestions: list[str]):
        self.query = query
        self.suggestions = suggestions
        hint = f"; did you mean: {', '.join(suggestions)}" if suggestions else ""
        super().__init__(f"no condition matches {query!r}{hint}")


class DegenerateTestError(SearchEngineError):
    """Contingency table collapsed to a single rating level; test undefined."""

    code = "degenerate_test"


class IncompleteDataError(SearchEngineError):
    """Rating data does not cover everything the derivation needs."""

    code = "incomplete_data"

    def __init__(self, message: str, missing: list[str] | None = None):
        self.missing = missing or []
        super().__init__(message)


class SchemaError(SearchEngineError):
    """A delimited input file violates its documented schema."""

    code = "schema_error"

    def __init__(self, message: str, rows: list[int] | None = None):
        self.rows = rows or []
        super().__init__(message)


class ContractViolation(SearchEngineError):
    """A caller broke a documented precondition (caller bug, not user input)."""

    code = "contract_violation"


class ManifestError(SearchEngineError):
    """Index manifest missing, unparseable, or its digests do not match."""

    code = "manifest_error"


class UnknownTrialError(SearchEngineError):
    """Trial id not in the index, or not linked to the queried condition."""

    code = "unknown_trial"

    def __init__(self, nct_id: str, linked: bool = True):
        self.nct_id = nct_id
        self.linked = linked
        if linked:
            super().__init__(f"no trial with id {nct_id!r}")
        else:
            self.code = "trial_not_linked"
            super().__init__(f"trial {nct_id!r} is not linked to the queried condition")

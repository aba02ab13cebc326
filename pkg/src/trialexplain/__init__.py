"""Explainable clinical-trial search.

Ranks the trials linked to a queried condition by a weighted explainability
score and renders short plain-language sentences saying why each trial was
retrieved. Feature weights are derived from 5-point rating data via pairwise
chi-square tests.
"""

__version__ = "0.1.0"

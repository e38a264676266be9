"""Predict restaurant health-inspection outcomes from review text.

Review text is turned into tf / tf-idf document-term matrices and LDA
topic proportions, which feed naive Bayes and linear SVM classifiers
compared by stratified cross-validation.
"""

from .ingest import Label, LabeledDocument
from .kernels import backend_name
from .pipeline import METHODS, Corpus, PipelineSettings, cross_validate, cross_validate_methods

__version__ = "0.1.0"

__all__ = [
    "Label",
    "LabeledDocument",
    "METHODS",
    "Corpus",
    "PipelineSettings",
    "cross_validate",
    "cross_validate_methods",
    "backend_name",
]

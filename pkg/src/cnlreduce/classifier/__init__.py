"""Reduction-type classification (one-vs-rest hinge-loss SVMs)."""
from .features import FLAG_FEATURES, extract_features
from .svm import (BACKEND, LABELS, Evaluation, Hyper, LabelMetrics, LinearModel, dumps_model,
                  evaluate, evaluate_predictions, load_model, loads_model, predict,
                  predicted_labels, save_model, train)

__all__ = [
    "BACKEND", "FLAG_FEATURES", "LABELS", "Evaluation", "Hyper", "LabelMetrics", "LinearModel",
    "dumps_model", "evaluate", "evaluate_predictions", "extract_features", "load_model",
    "loads_model", "predict", "predicted_labels", "save_model", "train",
]

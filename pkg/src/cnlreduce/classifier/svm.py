"""One-vs-rest linear SVMs for reduction-type classification."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import EmptyDataset, InvalidHyper, ModelFormatError
from . import _kernel_py

if os.environ.get("CNLREDUCE_PURE_PYTHON"):
    _kernel = None
else:
    try:
        from . import _kernel
    except ImportError:  # extension not built
        _kernel = None

BACKEND = "compiled" if _kernel is not None else "python"
LABELS = ("ambiguous", "colloquialism", "jargon", "workaround")
MODEL_MAGIC = "cnlreduce-svm"
MODEL_VERSION = 1


def kernel_for(backend=None):
    """Return the ``hinge_sgd`` implementation for ``backend`` (default: best available)."""
    backend = backend or BACKEND
    if backend == "compiled":
        if _kernel is None:
            raise RuntimeError("compiled kernel is not available")
        return _kernel.hinge_sgd
    if backend == "python":
        return _kernel_py.hinge_sgd
    raise ValueError(f"unknown backend {backend!r}")


@dataclass(frozen=True)
class Hyper:
    epochs: int = 200
    learning_rate: float = 0.1
    lam: float = 1e-3

    def validate(self):
        if not (self.epochs > 0 and self.learning_rate > 0 and self.lam > 0):
            raise InvalidHyper(f"epochs, learning_rate and lambda must be positive: {self}")


@dataclass
class LinearModel:
    features: tuple                     # feature dictionary, index = id
    weights: dict                       # label -> list of floats
    biases: dict                        # label -> float
    hyper: Hyper = field(default_factory=Hyper)
    seed: int = 7

    def __post_init__(self):
        self.features = tuple(self.features)
        self._index = {f: i for i, f in enumerate(self.features)}
        for label in LABELS:
            if len(self.weights[label]) != len(self.features):
                raise ModelFormatError(f"weight vector for {label} has wrong length")

    def vectorize(self, fv: dict):
        """Sparse ``[(id, value)]`` restricted to the frozen dictionary."""
        return [(self._index[f], v) for f, v in fv.items() if f in self._index]

    def score(self, label, fv: dict) -> float:
        w = self.weights[label]
        s = 0.0
        for j, v in sorted(self.vectorize(fv)):
            s += w[j] * v
        return s + self.biases[label]

    def __eq__(self, other):
        if not isinstance(other, LinearModel):
            return NotImplemented
        return (self.features == other.features and self.weights == other.weights
                and self.biases == other.biases and self.hyper == other.hyper
                and self.seed == other.seed)


def _check_labels(labels):
    for lab in labels:
        if lab not in LABELS:
            raise ValueError(f"unknown reduction label {lab!r}")


def epoch_orders(n, epochs, seed):
    rng = np.random.default_rng(seed)
    return np.stack([rng.permutation(n) for _ in range(epochs)]).astype(np.int64)


def train(dataset, hyper: Hyper = None, seed: int = 7, backend=None) -> LinearModel:
    """Train one hinge-loss SVM per label.

    ``dataset`` is a list of ``(feature_dict, label_set)``.  Examples are
    visited in an order drawn per epoch from ``numpy.random.default_rng(seed)``;
    the result is bitwise reproducible for the same inputs.
    """
    hyper = hyper or Hyper()
    hyper.validate()
    dataset = list(dataset)
    if not dataset:
        raise EmptyDataset()
    for _, labels in dataset:
        _check_labels(labels)
    features = tuple(sorted({f for fv, _ in dataset for f in fv}))
    index = {f: i for i, f in enumerate(features)}
    X = np.zeros((len(dataset), len(features)), dtype=np.float64)
    for r, (fv, _) in enumerate(dataset):
        for f, v in fv.items():
            X[r, index[f]] = v
    orders = epoch_orders(len(dataset), hyper.epochs, seed)
    hinge_sgd = kernel_for(backend)
    weights, biases = {}, {}
    for label in LABELS:
        y = np.array([1.0 if label in labels else -1.0 for _, labels in dataset])
        w, b = hinge_sgd(X, y, orders, hyper.learning_rate, hyper.lam)
        weights[label] = [float(v) for v in w]
        biases[label] = float(b)
    return LinearModel(features, weights, biases, hyper, seed)


def predict(model: LinearModel, fv: dict):
    """Scores for all four labels, sorted by label name."""
    return [(label, model.score(label, fv)) for label in LABELS]


def predicted_labels(model: LinearModel, fv: dict) -> frozenset:
    return frozenset(label for label, s in predict(model, fv) if s > 0)


# -- evaluation -------------------------------------------------------------

@dataclass(frozen=True)
class LabelMetrics:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float
    degenerate: tuple = ()     # names of metrics whose denominator was zero


def _metrics(tp, fp, fn, tn):
    degenerate = []
    if tp + fp:
        precision = tp / (tp + fp)
    else:
        precision = 0.0
        degenerate.append("precision")
    if tp + fn:
        recall = tp / (tp + fn)
    else:
        recall = 0.0
        degenerate.append("recall")
    if precision + recall:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = 0.0
        degenerate.append("f1")
    return LabelMetrics(tp, fp, fn, tn, precision, recall, f1, tuple(degenerate))


@dataclass(frozen=True)
class Evaluation:
    per_label: dict
    micro: LabelMetrics


def evaluate_predictions(pairs) -> Evaluation:
    """``pairs`` is a list of ``(predicted_set, gold_set)``."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyDataset()
    per_label = {}
    totals = [0, 0, 0, 0]
    for label in LABELS:
        tp = sum(1 for p, g in pairs if label in p and label in g)
        fp = sum(1 for p, g in pairs if label in p and label not in g)
        fn = sum(1 for p, g in pairs if label not in p and label in g)
        tn = len(pairs) - tp - fp - fn
        per_label[label] = _metrics(tp, fp, fn, tn)
        for k, v in enumerate((tp, fp, fn, tn)):
            totals[k] += v
    return Evaluation(per_label, _metrics(*totals))


def evaluate(model: LinearModel, dataset) -> Evaluation:
    dataset = list(dataset)
    if not dataset:
        raise EmptyDataset()
    return evaluate_predictions((predicted_labels(model, fv), frozenset(g)) for fv, g in dataset)


# -- model file -------------------------------------------------------------

def dumps_model(model: LinearModel) -> str:
    h = model.hyper
    lines = [f"{MODEL_MAGIC} v{MODEL_VERSION} epochs={h.epochs} learning_rate={h.learning_rate!r} "
             f"lambda={h.lam!r} seed={model.seed} features={len(model.features)}"]
    for label in LABELS:
        ws = " ".join(repr(w) for w in model.weights[label])
        lines.append(f"{label} {model.biases[label]!r} {ws}".rstrip())
    lines.extend(f"{i}\t{f}" for i, f in enumerate(model.features))
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> LinearModel:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ModelFormatError("empty model file")
    head = lines[0].split()
    if len(head) < 2 or head[0] != MODEL_MAGIC or head[1] != f"v{MODEL_VERSION}":
        raise ModelFormatError("not a cnlreduce model file (bad header)")
    try:
        meta = dict(kv.split("=", 1) for kv in head[2:])
        hyper = Hyper(int(meta["epochs"]), float(meta["learning_rate"]), float(meta["lambda"]))
        seed = int(meta["seed"])
        n = int(meta["features"])
    except (KeyError, ValueError) as exc:
        raise ModelFormatError(f"bad header: {exc}") from None
    if len(lines) != 1 + len(LABELS) + n:
        raise ModelFormatError("line count does not match header")
    weights, biases = {}, {}
    for label, line in zip(LABELS, lines[1:1 + len(LABELS)]):
        parts = line.split(" ")
        if parts[0] != label:
            raise ModelFormatError(f"expected weights for {label}, got {parts[0]!r}")
        biases[label] = float(parts[1])
        weights[label] = [float(w) for w in parts[2:]]
    features = []
    for k, line in enumerate(lines[1 + len(LABELS):]):
        idx, _, name = line.partition("\t")
        if idx != str(k) or not name:
            raise ModelFormatError(f"bad feature line {line!r}")
        features.append(name)
    return LinearModel(tuple(features), weights, biases, hyper, seed)


def save_model(model: LinearModel, path):
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path) -> LinearModel:
    return loads_model(Path(path).read_text(encoding="utf-8"))

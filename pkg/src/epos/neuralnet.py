"""From-scratch feed-forward binary classifier on numpy: dense layers with
optional batch normalization and dropout, ReLU activations, a logistic head,
Adam, plain and false-positive-weighted cross-entropy, metrics, deterministic
splits, and exact-round-trip checkpoints.

Everything is float64 and every source of randomness is an explicitly seeded
numpy PCG64 generator, so identical configs reproduce identical weights.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError

__all__ = [
    "MLPConfig",
    "TrainConfig",
    "Scaler",
    "standardize_fit",
    "standardize_apply",
    "split_indices",
    "MLPModel",
    "loss_weighted_bce",
    "train",
    "Metrics",
    "metrics_from_probs",
    "evaluate",
    "threshold_for_precision",
    "THRESHOLD_SENTINEL",
    "save_checkpoint",
    "load_checkpoint",
    "Checkpoint",
]

_BN_EPS = 1e-5
_BN_MOMENTUM = 0.1
_PROB_CLAMP = 1e-7
THRESHOLD_SENTINEL = 1.0 + 1e-9  # "predict nothing positive"


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


@dataclass(frozen=True)
class MLPConfig:
    input_dim: int
    hidden: tuple[int, ...] = (256, 128, 64, 32)
    use_batchnorm: bool = True
    dropout_rate: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.input_dim < 1:
            raise ValidationError("input_dim must be positive")
        if not self.hidden or any(h < 1 for h in self.hidden):
            raise ValidationError("hidden sizes must be a nonempty tuple of positives")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValidationError("dropout_rate must lie in [0, 1)")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    batch_size: int = 128
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    loss: str = "cross_entropy"
    fp_weight: float = 1.0
    patience: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.loss not in ("cross_entropy", "weighted_bce"):
            raise ValidationError(f"unknown loss {self.loss!r}")
        if self.fp_weight < 1.0:
            raise ValidationError("fp_weight must be >= 1")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValidationError("epochs and batch_size must be positive")

    @property
    def effective_fp_weight(self) -> float:
        return 1.0 if self.loss == "cross_entropy" else self.fp_weight


# ---------------------------------------------------------------------------
# Standardization and splits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scaler:
    mean: np.ndarray
    std: np.ndarray  # population std; zeros kept as-is, the transform maps those columns to 0


def standardize_fit(X: np.ndarray) -> Scaler:
    X = np.asarray(X, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ValidationError("training features must be finite")
    return Scaler(mean=X.mean(axis=0), std=X.std(axis=0))


def standardize_apply(scaler: Scaler, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    inv = np.where(scaler.std > 0, 1.0 / np.where(scaler.std > 0, scaler.std, 1.0), 0.0)
    return (X - scaler.mean) * inv


def _largest_remainder(total: int, fractions) -> list[int]:
    raw = [f * total for f in fractions]
    counts = [int(math.floor(r)) for r in raw]
    rest = total - sum(counts)
    order = sorted(range(len(fractions)), key=lambda i: (-(raw[i] - counts[i]), i))
    for i in order[:rest]:
        counts[i] += 1
    return counts


def split_indices(y, fractions, stratify: bool, seed: int):
    """Deterministic (train, val, test) index lists. Stratified allocation uses
    largest-remainder rounding per class, so per-split positive counts stay
    within one item of proportional."""
    y = np.asarray(y)
    if len(fractions) != 3 or any(f <= 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise ValidationError("split fractions must be three positives summing to 1")
    rng = np.random.default_rng(seed)
    groups = [np.flatnonzero(y == v) for v in sorted(set(y.tolist()))] if stratify else [np.arange(len(y))]
    splits: list[list[int]] = [[], [], []]
    for group in groups:
        perm = group[rng.permutation(len(group))]
        counts = _largest_remainder(len(group), fractions)
        at = 0
        for s in range(3):
            splits[s].extend(perm[at : at + counts[s]].tolist())
            at += counts[s]
    if any(not s for s in splits):
        raise ValidationError("a split is empty; adjust fractions or dataset size")
    return tuple(sorted(s) for s in splits)


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------

@dataclass
class _Layer:
    W: np.ndarray
    b: np.ndarray
    gamma: np.ndarray | None = None
    beta: np.ndarray | None = None
    run_mean: np.ndarray | None = None
    run_var: np.ndarray | None = None


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class MLPModel:
    cfg: MLPConfig
    layers: list[_Layer] = field(default_factory=list)
    out_W: np.ndarray | None = None
    out_b: np.ndarray | None = None

    @classmethod
    def init(cls, cfg: MLPConfig) -> "MLPModel":
        rng = np.random.default_rng(cfg.seed)
        model = cls(cfg)
        fan_in = cfg.input_dim
        for width in cfg.hidden:
            bound = 1.0 / math.sqrt(fan_in)
            layer = _Layer(
                W=rng.uniform(-bound, bound, size=(fan_in, width)),
                b=np.zeros(width),
            )
            if cfg.use_batchnorm:
                layer.gamma = np.ones(width)
                layer.beta = np.zeros(width)
                layer.run_mean = np.zeros(width)
                layer.run_var = np.ones(width)
            model.layers.append(layer)
            fan_in = width
        bound = 1.0 / math.sqrt(fan_in)
        model.out_W = rng.uniform(-bound, bound, size=(fan_in, 1))
        model.out_b = np.zeros(1)
        return model

    # -- parameter plumbing ------------------------------------------------

    def parameters(self) -> list[np.ndarray]:
        params: list[np.ndarray] = []
        for layer in self.layers:
            params.extend([layer.W, layer.b])
            if layer.gamma is not None:
                params.extend([layer.gamma, layer.beta])
        params.extend([self.out_W, self.out_b])
        return params

    def snapshot(self) -> list[np.ndarray]:
        states = [p.copy() for p in self.parameters()]
        for layer in self.layers:
            if layer.run_mean is not None:
                states.append(layer.run_mean.copy())
                states.append(layer.run_var.copy())
        return states

    def restore(self, states: list[np.ndarray]) -> None:
        params = self.parameters()
        for p, s in zip(params, states[: len(params)]):
            p[...] = s
        extra = states[len(params) :]
        i = 0
        for layer in self.layers:
            if layer.run_mean is not None:
                layer.run_mean[...] = extra[i]
                layer.run_var[...] = extra[i + 1]
                i += 2

    # -- forward / backward --------------------------------------------------

    def _check_width(self, X: np.ndarray) -> None:
        if X.ndim != 2 or X.shape[1] != self.cfg.input_dim:
            raise ValidationError(
                f"input width {X.shape[1] if X.ndim == 2 else X.shape} does not match "
                f"model input_dim {self.cfg.input_dim}"
            )

    def forward(self, X: np.ndarray, train: bool, rng: np.random.Generator | None = None):
        """Per layer: affine -> batchnorm -> ReLU -> dropout (train only); then
        affine head -> sigmoid. Returns (probabilities, cache for backward)."""
        X = np.asarray(X, dtype=float)
        self._check_width(X)
        h = X
        cache: list[dict] = []
        for layer in self.layers:
            entry: dict = {"input": h}
            z = h @ layer.W + layer.b
            if layer.gamma is not None:
                if train:
                    mu = z.mean(axis=0)
                    var = z.var(axis=0)
                    layer.run_mean[...] = (1 - _BN_MOMENTUM) * layer.run_mean + _BN_MOMENTUM * mu
                    layer.run_var[...] = (1 - _BN_MOMENTUM) * layer.run_var + _BN_MOMENTUM * var
                else:
                    mu = layer.run_mean
                    var = layer.run_var
                inv_std = 1.0 / np.sqrt(var + _BN_EPS)
                zhat = (z - mu) * inv_std
                y = layer.gamma * zhat + layer.beta
                entry.update({"zhat": zhat, "inv_std": inv_std, "bn_train": train})
            else:
                y = z
            a = np.maximum(y, 0.0)
            entry["relu_mask"] = y > 0
            if train and self.cfg.dropout_rate > 0.0:
                if rng is None:
                    raise ValidationError("dropout in train mode needs a generator")
                keep = rng.random(a.shape) >= self.cfg.dropout_rate
                a = a * keep / (1.0 - self.cfg.dropout_rate)
                entry["dropout_keep"] = keep
            cache.append(entry)
            h = a
        logit = (h @ self.out_W + self.out_b).ravel()
        probs = _sigmoid(logit)
        cache.append({"head_input": h, "probs": probs})
        return probs, cache

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.forward(X, train=False)[0]

    def backward(self, cache: list[dict], dlogit: np.ndarray):
        """Gradients for every parameter (in parameters() order) plus the input
        gradient, given dLoss/dlogit."""
        head = cache[-1]
        h = head["head_input"]
        dcol = dlogit.reshape(-1, 1)
        grads_out_W = h.T @ dcol
        grads_out_b = dcol.sum(axis=0)
        dh = dcol @ self.out_W.T
        layer_grads: list[list[np.ndarray]] = []
        for layer, entry in zip(reversed(self.layers), reversed(cache[:-1])):
            da = dh
            if "dropout_keep" in entry:
                da = da * entry["dropout_keep"] / (1.0 - self.cfg.dropout_rate)
            dy = da * entry["relu_mask"]
            if layer.gamma is not None:
                zhat = entry["zhat"]
                inv_std = entry["inv_std"]
                dgamma = (dy * zhat).sum(axis=0)
                dbeta = dy.sum(axis=0)
                dzhat = dy * layer.gamma
                if entry["bn_train"]:
                    dz = (
                        dzhat
                        - dzhat.mean(axis=0)
                        - zhat * (dzhat * zhat).mean(axis=0)
                    ) * inv_std
                else:
                    dz = dzhat * inv_std
                this = [None, None, dgamma, dbeta]
            else:
                dz = dy
                this = [None, None]
            x = entry["input"]
            this[0] = x.T @ dz
            this[1] = dz.sum(axis=0)
            dh = dz @ layer.W.T
            layer_grads.append(this)
        grads: list[np.ndarray] = []
        for this in reversed(layer_grads):
            grads.extend(this)
        grads.extend([grads_out_W, grads_out_b])
        return grads, dh

    def input_gradients(self, X: np.ndarray) -> np.ndarray:
        """d(probability)/d(input) per sample, eval mode (rows are independent)."""
        probs, cache = self.forward(X, train=False)
        dlogit = probs * (1.0 - probs)
        _, dX = self.backward(cache, dlogit)
        return dX


# ---------------------------------------------------------------------------
# Losses
# ---------------------------------------------------------------------------

def loss_weighted_bce(probs: np.ndarray, labels: np.ndarray, fp_weight: float) -> float:
    """Mean over the batch of -[y log p + fp_weight (1 - y) log(1 - p)], with the
    probabilities clamped away from 0 and 1."""
    p = np.clip(probs, _PROB_CLAMP, 1.0 - _PROB_CLAMP)
    y = np.asarray(labels, dtype=float)
    terms = -(y * np.log(p) + fp_weight * (1.0 - y) * np.log(1.0 - p))
    return float(terms.mean())


def _dloss_dlogit(probs: np.ndarray, labels: np.ndarray, fp_weight: float) -> np.ndarray:
    y = np.asarray(labels, dtype=float)
    interior = (probs >= _PROB_CLAMP) & (probs <= 1.0 - _PROB_CLAMP)
    grad = (-y * (1.0 - probs) + fp_weight * (1.0 - y) * probs) * interior
    return grad / len(y)


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

class _Adam:
    def __init__(self, params: list[np.ndarray], cfg: TrainConfig) -> None:
        self.cfg = cfg
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        c = self.cfg
        self.t += 1
        bias1 = 1.0 - c.beta1 ** self.t
        bias2 = 1.0 - c.beta2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m[...] = c.beta1 * m + (1.0 - c.beta1) * g
            v[...] = c.beta2 * v + (1.0 - c.beta2) * (g * g)
            p -= c.learning_rate * (m / bias1) / (np.sqrt(v / bias2) + c.epsilon)


def train(X_train, y_train, X_val, y_val, mlp_cfg: MLPConfig, train_cfg: TrainConfig):
    """Mini-batch Adam with early stopping on validation loss; restores the
    best-validation weights. Returns (model, history)."""
    X_train = np.asarray(X_train, dtype=float)
    X_val = np.asarray(X_val, dtype=float)
    y_train = np.asarray(y_train)
    y_val = np.asarray(y_val)
    model = MLPModel.init(mlp_cfg)
    rng = np.random.default_rng(train_cfg.seed)
    adam = _Adam(model.parameters(), train_cfg)
    fp_weight = train_cfg.effective_fp_weight
    best_loss = math.inf
    best_state = model.snapshot()
    since_best = 0
    history: list[dict] = []
    n = len(X_train)
    for epoch in range(1, train_cfg.epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, train_cfg.batch_size):
            rows = order[start : start + train_cfg.batch_size]
            probs, cache = model.forward(X_train[rows], train=True, rng=rng)
            loss = loss_weighted_bce(probs, y_train[rows], fp_weight)
            if not math.isfinite(loss):
                raise DivergenceError(
                    f"non-finite loss at epoch {epoch}, batch starting {start}"
                )
            dlogit = _dloss_dlogit(probs, y_train[rows], fp_weight)
            grads, _ = model.backward(cache, dlogit)
            adam.step(model.parameters(), grads)
            total += loss * len(rows)
        val_probs = model.predict(X_val)
        val_loss = loss_weighted_bce(val_probs, y_val, fp_weight)
        val_metrics = metrics_from_probs(val_probs, y_val, 0.5)
        history.append(
            {
                "epoch": epoch,
                "train_loss": total / n,
                "val_loss": val_loss,
                "val_accuracy": val_metrics.accuracy,
                "val_precision": val_metrics.precision,
                "val_recall": val_metrics.recall,
            }
        )
        if val_loss < best_loss:
            best_loss = val_loss
            best_state = model.snapshot()
            since_best = 0
        else:
            since_best += 1
            if since_best >= train_cfg.patience:
                break
    model.restore(best_state)
    return model, history


# ---------------------------------------------------------------------------
# Metrics and thresholding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {
            "counts": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def _metrics_from_counts(tp: int, fp: int, tn: int, fn: int) -> Metrics:
    total = tp + fp + tn + fn
    accuracy = (tp + tn) / total if total else 0.0
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Metrics(tp, fp, tn, fn, accuracy, precision, recall, f1)


def metrics_from_probs(probs: np.ndarray, labels, threshold: float = 0.5) -> Metrics:
    y = np.asarray(labels).astype(bool)
    pred = np.asarray(probs) >= threshold
    tp = int(np.sum(pred & y))
    fp = int(np.sum(pred & ~y))
    tn = int(np.sum(~pred & ~y))
    fn = int(np.sum(~pred & y))
    return _metrics_from_counts(tp, fp, tn, fn)


def evaluate(model: MLPModel, X, y, threshold: float = 0.5) -> Metrics:
    return metrics_from_probs(model.predict(X), y, threshold)


def threshold_for_precision(probs, labels, target_precision: float) -> float:
    """Smallest threshold among the observed probabilities reaching the target
    precision (predictions are prob >= threshold); recall is then automatically
    maximal because recall is non-increasing in the threshold. Returns the
    above-one sentinel when no threshold qualifies."""
    probs = np.asarray(probs, dtype=float)
    if probs.size == 0:
        raise ValidationError("threshold selection needs a nonempty validation set")
    for t in np.unique(probs):
        m = metrics_from_probs(probs, labels, float(t))
        if m.precision >= target_precision:
            return float(t)
    return THRESHOLD_SENTINEL


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------

CHECKPOINT_VERSION = 1


@dataclass
class Checkpoint:
    model: MLPModel
    scaler: Scaler
    mlp_config: MLPConfig
    train_config: TrainConfig | None
    feature_names: list[str] | None
    threshold: float | None


def _hex_array(a: np.ndarray):
    if a.ndim == 1:
        return [float(x).hex() for x in a]
    return [[float(x).hex() for x in row] for row in a]


def _unhex_array(data) -> np.ndarray:
    if data and isinstance(data[0], list):
        return np.array([[float.fromhex(x) for x in row] for row in data], dtype=float)
    return np.array([float.fromhex(x) for x in data], dtype=float)


def save_checkpoint(
    path,
    model: MLPModel,
    scaler: Scaler,
    train_config: TrainConfig | None = None,
    feature_names: list[str] | None = None,
    threshold: float | None = None,
) -> None:
    layers = []
    for layer in model.layers:
        bn = None
        if layer.gamma is not None:
            bn = {
                "gamma": _hex_array(layer.gamma),
                "beta": _hex_array(layer.beta),
                "run_mean": _hex_array(layer.run_mean),
                "run_var": _hex_array(layer.run_var),
            }
        layers.append({"W": _hex_array(layer.W), "b": _hex_array(layer.b), "bn": bn})
    layers.append({"W": _hex_array(model.out_W), "b": _hex_array(model.out_b), "bn": None})
    obj = {
        "version": CHECKPOINT_VERSION,
        "mlp_config": {
            "input_dim": model.cfg.input_dim,
            "hidden": list(model.cfg.hidden),
            "use_batchnorm": model.cfg.use_batchnorm,
            "dropout_rate": model.cfg.dropout_rate,
            "seed": model.cfg.seed,
        },
        "train_config": None
        if train_config is None
        else {
            "epochs": train_config.epochs,
            "batch_size": train_config.batch_size,
            "learning_rate": train_config.learning_rate,
            "beta1": train_config.beta1,
            "beta2": train_config.beta2,
            "epsilon": train_config.epsilon,
            "loss": train_config.loss,
            "fp_weight": train_config.fp_weight,
            "patience": train_config.patience,
            "seed": train_config.seed,
        },
        "scaler": {"mean": _hex_array(scaler.mean), "std": _hex_array(scaler.std)},
        "feature_names": feature_names,
        "threshold": None if threshold is None else float(threshold).hex(),
        "layers": layers,
    }
    Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def load_checkpoint(path) -> Checkpoint:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: corrupt checkpoint ({exc})") from exc
    if obj.get("version") != CHECKPOINT_VERSION:
        raise ValidationError(
            f"{path}: checkpoint version {obj.get('version')!r} != {CHECKPOINT_VERSION}"
        )
    mc = obj["mlp_config"]
    mlp_cfg = MLPConfig(
        input_dim=int(mc["input_dim"]),
        hidden=tuple(int(h) for h in mc["hidden"]),
        use_batchnorm=bool(mc["use_batchnorm"]),
        dropout_rate=float(mc["dropout_rate"]),
        seed=int(mc["seed"]),
    )
    tc = obj.get("train_config")
    train_cfg = None if tc is None else TrainConfig(**tc)
    model = MLPModel(mlp_cfg)
    *hidden_layers, head = obj["layers"]
    if len(hidden_layers) != len(mlp_cfg.hidden):
        raise ValidationError(f"{path}: layer count does not match config")
    fan_in = mlp_cfg.input_dim
    for spec, width in zip(hidden_layers, mlp_cfg.hidden):
        W = _unhex_array(spec["W"])
        if W.shape != (fan_in, width):
            raise ValidationError(
                f"{path}: layer shape {W.shape} does not chain ({fan_in}, {width})"
            )
        layer = _Layer(W=W, b=_unhex_array(spec["b"]))
        if spec["bn"] is not None:
            layer.gamma = _unhex_array(spec["bn"]["gamma"])
            layer.beta = _unhex_array(spec["bn"]["beta"])
            layer.run_mean = _unhex_array(spec["bn"]["run_mean"])
            layer.run_var = _unhex_array(spec["bn"]["run_var"])
        model.layers.append(layer)
        fan_in = width
    model.out_W = _unhex_array(head["W"])
    model.out_b = _unhex_array(head["b"])
    if model.out_W.shape != (fan_in, 1):
        raise ValidationError(f"{path}: head shape {model.out_W.shape} does not chain")
    scaler = Scaler(
        mean=_unhex_array(obj["scaler"]["mean"]), std=_unhex_array(obj["scaler"]["std"])
    )
    threshold = obj.get("threshold")
    return Checkpoint(
        model=model,
        scaler=scaler,
        mlp_config=mlp_cfg,
        train_config=train_cfg,
        feature_names=obj.get("feature_names"),
        threshold=None if threshold is None else float.fromhex(threshold),
    )

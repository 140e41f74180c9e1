"""The three pair-classification architectures and their training loop.

All three share a convolutional trunk (conv -> ReLU -> conv -> ReLU ->
maxpool -> flatten).  The Siamese variants run the trunk on both words
with one shared set of weights; the 2-channel variant stacks the pair as
channels of a single input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import phoneme
from . import losses, ops
from .adadelta import AdadeltaState, adadelta_step

SIAMESE_EUCLID = "siamese_euclid"
MANHATTAN = "manhattan"
TWO_CHANNEL = "two_channel"
ARCHITECTURES = (SIAMESE_EUCLID, MANHATTAN, TWO_CHANNEL)

CONTRASTIVE = "contrastive"
LOG = "log"


class InvalidSpec(ValueError):
    pass


class EmptyDataset(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    architecture: str
    conv_filters: int = 10
    kernel: tuple[int, int] = (2, 3)
    fc_units: int = 8
    dropout_rate: float = 0.5
    pad_len: int = 10
    pool: tuple[int, int] = (2, 2)

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise InvalidSpec(f"unknown architecture {self.architecture!r}")
        if self.conv_filters < 1 or self.fc_units < 1 or self.pad_len < 1:
            raise InvalidSpec("conv_filters, fc_units, and pad_len must be >= 1")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise InvalidSpec("dropout_rate must be in [0, 1)")

    @property
    def in_channels(self) -> int:
        return 2 if self.architecture == TWO_CHANNEL else 1

    @property
    def loss(self) -> str:
        return CONTRASTIVE if self.architecture == SIAMESE_EUCLID else LOG

    def shape_pipeline(self) -> list[tuple[int, ...] | int]:
        """Intermediate shapes from input to output; raises InvalidSpec."""
        kh, kw = self.kernel
        ph, pw = self.pool
        h, w = self.pad_len, phoneme.N_FEATURES
        shapes: list[tuple[int, ...] | int] = [(h, w, self.in_channels)]
        for _ in range(2):
            h, w = h - kh + 1, w - kw + 1
            if h < 1 or w < 1:
                raise InvalidSpec(f"kernel {self.kernel} exhausts the {self.pad_len}x{phoneme.N_FEATURES} input")
            shapes.append((h, w, self.conv_filters))
        h, w = h // ph, w // pw
        if h < 1 or w < 1:
            raise InvalidSpec(f"pooling {self.pool} exhausts the feature map")
        shapes.append((h, w, self.conv_filters))
        flat = h * w * self.conv_filters
        shapes.append(flat)
        if self.architecture != SIAMESE_EUCLID:
            shapes.append(self.fc_units)
            shapes.append(1)
        return shapes


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 128
    epochs: int = 20
    margin: float = 1.0
    seed: int = 0
    loss: str | None = None  # None: use the architecture's loss

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.margin <= 0:
            raise ValueError("margin must be > 0")


def _glorot(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Model:
    """Parameters plus forward/backward wiring for one architecture."""

    def __init__(self, spec: ModelSpec, seed: int = 0):
        self.spec = spec
        self.shapes = spec.shape_pipeline()
        kh, kw = spec.kernel
        cin = spec.in_channels
        f = spec.conv_filters
        rng = np.random.default_rng(seed)
        params: dict[str, np.ndarray] = {}
        params["conv1_w"] = _glorot(rng, (kh, kw, cin, f), kh * kw * cin, kh * kw * f)
        params["conv1_b"] = np.zeros(f)
        params["conv2_w"] = _glorot(rng, (kh, kw, f, f), kh * kw * f, kh * kw * f)
        params["conv2_b"] = np.zeros(f)
        if spec.architecture != SIAMESE_EUCLID:
            flat = self.flat_dim
            params["fc_w"] = _glorot(rng, (flat, spec.fc_units), flat, spec.fc_units)
            params["fc_b"] = np.zeros(spec.fc_units)
            params["out_w"] = _glorot(rng, (spec.fc_units, 1), spec.fc_units, 1)
            params["out_b"] = np.zeros(1)
        self.params = params

    @property
    def flat_dim(self) -> int:
        return self.shapes[4]

    # trunk: conv -> relu -> conv -> relu -> pool -> flatten

    def _trunk(self, x: np.ndarray):
        p = self.params
        z1, c1 = ops.conv2d(x, p["conv1_w"], p["conv1_b"])
        a1, cr1 = ops.relu(z1)
        z2, c2 = ops.conv2d(a1, p["conv2_w"], p["conv2_b"])
        a2, cr2 = ops.relu(z2)
        pooled, cp = ops.maxpool2(a2, self.spec.pool)
        flat = pooled.reshape(x.shape[0], -1)
        return flat, (c1, cr1, c2, cr2, cp, pooled.shape)

    def _trunk_backward(self, cache, gflat, grads: dict[str, np.ndarray]):
        c1, cr1, c2, cr2, cp, pooled_shape = cache
        g = ops.maxpool2_backward(cp, gflat.reshape(pooled_shape))
        g = ops.relu_backward(cr2, g)
        g, gk2, gb2 = ops.conv2d_backward(c2, g)
        g = ops.relu_backward(cr1, g)
        g, gk1, gb1 = ops.conv2d_backward(c1, g)
        grads["conv1_w"] += gk1
        grads["conv1_b"] += gb1
        grads["conv2_w"] += gk2
        grads["conv2_b"] += gb2
        return g

    def _head(self, h: np.ndarray, training: bool, rng):
        p = self.params
        z1, cfc = ops.dense(h, p["fc_w"], p["fc_b"])
        a1, cr = ops.relu(z1)
        a1d, cdo = ops.dropout(a1, self.spec.dropout_rate, training, rng)
        z2, cout = ops.dense(a1d, p["out_w"], p["out_b"])
        prob, csig = ops.sigmoid(z2[:, 0])
        return prob, (cfc, cr, cdo, cout, csig)

    def _head_backward(self, cache, gprob, grads: dict[str, np.ndarray]):
        cfc, cr, cdo, cout, csig = cache
        gz2 = ops.sigmoid_backward(csig, gprob)[:, None]
        ga1d, gw_out, gb_out = ops.dense_backward(cout, gz2)
        ga1 = ops.dropout_backward(cdo, ga1d)
        gz1 = ops.relu_backward(cr, ga1)
        gh, gw_fc, gb_fc = ops.dense_backward(cfc, gz1)
        grads["fc_w"] += gw_fc
        grads["fc_b"] += gb_fc
        grads["out_w"] += gw_out
        grads["out_b"] += gb_out
        return gh

    def forward(self, xa: np.ndarray, xb: np.ndarray, training: bool = False,
                rng: np.random.Generator | None = None):
        """Score each pair: probability for log-loss heads, distance for Euclid."""
        arch = self.spec.architecture
        if arch == TWO_CHANNEL:
            x = np.stack([xa, xb], axis=-1)
            flat, ct = self._trunk(x)
            prob, ch = self._head(flat, training, rng)
            return prob, (ct, ch)
        fa, ca = self._trunk(xa[..., None])
        fb, cb = self._trunk(xb[..., None])
        if arch == SIAMESE_EUCLID:
            d, cd = ops.euclid(fa, fb)
            return d, (ca, cb, cd)
        h, cabs = ops.abs_diff(fa, fb)
        prob, ch = self._head(h, training, rng)
        return prob, (ca, cb, cabs, ch)

    def loss_and_grads(self, xa: np.ndarray, xb: np.ndarray, y: np.ndarray,
                       margin: float = 1.0, rng: np.random.Generator | None = None,
                       training: bool = True):
        """Mean loss over the batch and gradients for every parameter."""
        arch = self.spec.architecture
        n = xa.shape[0]
        grads = {k: np.zeros_like(v) for k, v in self.params.items()}
        out, cache = self.forward(xa, xb, training=training, rng=rng)
        if arch == SIAMESE_EUCLID:
            ca, cb, cd = cache
            loss = float(losses.contrastive_loss(out, y, margin).mean())
            gd = losses.contrastive_loss_grad(out, y, margin) / n
            gfa, gfb = ops.euclid_backward(cd, gd)
            self._trunk_backward(ca, gfa, grads)
            self._trunk_backward(cb, gfb, grads)
            return loss, grads
        loss = float(losses.log_loss(out, y).mean())
        gp = losses.log_loss_grad(out, y) / n
        if arch == TWO_CHANNEL:
            ct, ch = cache
            gh = self._head_backward(ch, gp, grads)
            self._trunk_backward(ct, gh, grads)
            return loss, grads
        ca, cb, cabs, ch = cache
        gh = self._head_backward(ch, gp, grads)
        gfa, gfb = ops.abs_diff_backward(cabs, gh)
        self._trunk_backward(ca, gfa, grads)
        self._trunk_backward(cb, gfb, grads)
        return loss, grads

    def predict(self, xa: np.ndarray, xb: np.ndarray) -> np.ndarray:
        """Pair scores in [0, 1]; dropout disabled.

        Siamese-Euclid returns exp(-D): a monotone score, not a calibrated
        probability.
        """
        out, _ = self.forward(xa, xb, training=False)
        if self.spec.architecture == SIAMESE_EUCLID:
            return np.exp(-out)
        return out


def build(spec: ModelSpec, seed: int = 0) -> Model:
    """Validate the spec and initialize parameters (Glorot uniform, zero bias)."""
    return Model(spec, seed=seed)


def encode_pairs(pairs, pad_len: int = 10):
    """Render (word_a, word_b, label) triples as matrix arrays.

    Accepts WordPair objects or plain (str, str, label) tuples; returns
    (xa, xb, y) with xa and xb shaped [n, pad_len, 16].
    """
    xa, xb, y = [], [], []
    for item in pairs:
        if hasattr(item, "a"):
            wa, wb, label = item.a.form, item.b.form, item.label
        else:
            wa, wb, label = item
        xa.append(phoneme.word_to_matrix(wa, pad_len).rows)
        xb.append(phoneme.word_to_matrix(wb, pad_len).rows)
        y.append(label)
    if not xa:
        raise EmptyDataset("no pairs to encode")
    return np.array(xa), np.array(xb), np.array(y, dtype=np.float64)


def train(model: Model, pairs, cfg: TrainConfig = TrainConfig()):
    """Mini-batch adadelta training; returns (params, per-epoch mean loss).

    ``pairs`` is (xa, xb, y) from :func:`encode_pairs` or a sequence of
    triples.  A single generator seeded with cfg.seed drives both the
    epoch shuffles and the dropout masks, so runs are reproducible.
    """
    if cfg.loss is not None and cfg.loss != model.spec.loss:
        raise InvalidSpec(
            f"{model.spec.architecture} trains with {model.spec.loss} loss, not {cfg.loss}"
        )
    if (isinstance(pairs, tuple) and len(pairs) == 3
            and all(isinstance(p, np.ndarray) for p in pairs)):
        xa, xb, y = pairs
    else:
        xa, xb, y = encode_pairs(pairs, model.spec.pad_len)
    n = xa.shape[0]
    if n == 0:
        raise EmptyDataset("training set is empty")
    rng = np.random.default_rng(cfg.seed)
    state = AdadeltaState.for_params(model.params)
    history: list[float] = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            loss, grads = model.loss_and_grads(
                xa[batch], xb[batch], y[batch], margin=cfg.margin, rng=rng
            )
            if not np.isfinite(loss):
                raise FloatingPointError(f"non-finite training loss {loss}")
            adadelta_step(model.params, grads, state)
            total += loss * len(batch)
        history.append(total / n)
    return model.params, history


def save_checkpoint(model: Model, path) -> None:
    """Self-describing text checkpoint; floats use repr and round-trip exactly."""
    s = model.spec
    lines = [
        "cognet-checkpoint\t1",
        f"architecture\t{s.architecture}",
        f"conv_filters\t{s.conv_filters}",
        f"kernel\t{s.kernel[0]}\t{s.kernel[1]}",
        f"fc_units\t{s.fc_units}",
        f"dropout_rate\t{s.dropout_rate!r}",
        f"pad_len\t{s.pad_len}",
        f"pool\t{s.pool[0]}\t{s.pool[1]}",
    ]
    for name in sorted(model.params):
        tensor = model.params[name]
        shape = "\t".join(str(d) for d in tensor.shape)
        lines.append(f"tensor\t{name}\t{shape}")
        lines.append("\t".join(repr(float(v)) for v in tensor.ravel()))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_checkpoint(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("cognet-checkpoint"):
        raise ValueError(f"{path}: not a checkpoint file")
    header: dict[str, list[str]] = {}
    i = 1
    while i < len(lines) and not lines[i].startswith("tensor\t"):
        parts = lines[i].split("\t")
        header[parts[0]] = parts[1:]
        i += 1
    spec = ModelSpec(
        architecture=header["architecture"][0],
        conv_filters=int(header["conv_filters"][0]),
        kernel=(int(header["kernel"][0]), int(header["kernel"][1])),
        fc_units=int(header["fc_units"][0]),
        dropout_rate=float(header["dropout_rate"][0]),
        pad_len=int(header["pad_len"][0]),
        pool=(int(header["pool"][0]), int(header["pool"][1])),
    )
    model = Model(spec, seed=0)
    while i < len(lines):
        _, name, *shape = lines[i].split("\t")
        if name not in model.params:
            raise ValueError(f"{path}: unexpected tensor {name!r}")
        values = np.array([float(v) for v in lines[i + 1].split("\t")])
        target = tuple(int(d) for d in shape)
        if target != model.params[name].shape:
            raise ValueError(f"{path}: tensor {name!r} shape {target} does not fit the spec")
        model.params[name] = values.reshape(target)
        i += 2
    return model

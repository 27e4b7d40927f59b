"""Twin embedding network trained on statement pairs, from scratch in numpy.

Architecture: embedding lookup -> conv(width 3, 64 filters, same padding)
-> ReLU -> max pool(2,2) -> conv -> ReLU -> max pool(2,2) -> global max
-> dense(128) -> sigmoid.  Pair similarity is exp(-L1) between the two
embeddings; training minimizes binary cross-entropy with Adam.  All
arithmetic is float64 and fully deterministic given the seed.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field

import numpy as np

from .vectorize import IndexSequence

EMBED_DIM = 100
CONV_FILTERS = 64
KERNEL_WIDTH = 3
DENSE_DIM = 128
LOSS_EPS = 1e-7

MAGIC = b"TSGSIAM1"
FORMAT_VERSION = 1

TENSOR_ORDER = ("embedding", "conv1_w", "conv1_b", "conv2_w", "conv2_b", "dense_w", "dense_b")


class IndexOutOfVocab(ValueError):
    pass


class NoPositivePairs(ValueError):
    pass


class NoNegativePairs(ValueError):
    pass


class SingleClassCorpus(ValueError):
    pass


@dataclass(frozen=True)
class Hyper:
    max_len: int = 64
    seed: int = 0
    learning_rate: float = 1e-3
    epochs: int = 30
    batch_size: int = 32


@dataclass
class SiameseModel:
    params: dict[str, np.ndarray]
    hyper: Hyper
    vocab_size: int
    loss_trace: list[float] = field(default_factory=list)

    def copy(self) -> "SiameseModel":
        return SiameseModel(
            {k: v.copy() for k, v in self.params.items()},
            self.hyper,
            self.vocab_size,
            list(self.loss_trace),
        )


def init_model(vocab_size: int, hyper: Hyper) -> SiameseModel:
    # Two halvings of the position axis need at least 4 positions.
    if hyper.max_len < 4:
        raise ValueError("max_len must be >= 4")
    rng = np.random.default_rng(hyper.seed)

    def u(*shape):
        return rng.uniform(-0.05, 0.05, size=shape)

    params = {
        "embedding": u(vocab_size, EMBED_DIM),
        "conv1_w": u(CONV_FILTERS, KERNEL_WIDTH, EMBED_DIM),
        "conv1_b": u(CONV_FILTERS),
        "conv2_w": u(CONV_FILTERS, KERNEL_WIDTH, CONV_FILTERS),
        "conv2_b": u(CONV_FILTERS),
        "dense_w": u(CONV_FILTERS, DENSE_DIM),
        "dense_b": u(DENSE_DIM),
    }
    return SiameseModel(params, hyper, vocab_size)


def _as_batch(xs: list[IndexSequence]) -> np.ndarray:
    return np.array([x.indices for x in xs], dtype=np.int64)


def _conv_same(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """x: [B, L, C_in], w: [F, K, C_in] -> out [B, L, F]; returns (out, padded x).

    Computed as K shifted matmuls to avoid materializing im2col windows.
    """
    k = w.shape[1]
    pad = (k - 1) // 2
    xp = np.pad(x, ((0, 0), (pad, k - 1 - pad), (0, 0)))
    length = x.shape[1]
    out = np.broadcast_to(b, (x.shape[0], length, w.shape[0])).copy()
    for off in range(k):
        out += xp[:, off : off + length, :] @ w[:, off, :].T
    return out, xp


def _conv_backward(dout, xp, w):
    k = w.shape[1]
    pad = (k - 1) // 2
    bsz, length, nf = dout.shape
    dflat = dout.reshape(bsz * length, nf)
    dw = np.empty_like(w)
    dxp = np.zeros_like(xp)
    for off in range(k):
        xs = xp[:, off : off + length, :].reshape(bsz * length, -1)
        dw[:, off, :] = dflat.T @ xs
        dxp[:, off : off + length, :] += dout @ w[:, off, :]
    db = dflat.sum(axis=0)
    dx = dxp[:, pad : pad + length, :]
    return dx, dw, db


def _pool2(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Max pool width 2 stride 2 over axis 1; odd tails are dropped."""
    bsz, length, ch = x.shape
    length2 = length // 2
    xw = x[:, : length2 * 2, :].reshape(bsz, length2, 2, ch)
    idx = xw.argmax(axis=2)
    return xw.max(axis=2), idx


def _pool2_backward(dout, idx, in_shape):
    bsz, length2, ch = dout.shape
    dx = np.zeros((bsz, length2, 2, ch))
    b_ix, l_ix, c_ix = np.ogrid[:bsz, :length2, :ch]
    dx[b_ix, l_ix, idx, c_ix] = dout
    full = np.zeros(in_shape)
    full[:, : length2 * 2, :] = dx.reshape(bsz, length2 * 2, ch)
    return full


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _forward_batch(model: SiameseModel, xb: np.ndarray, keep: bool = False):
    p = model.params
    if xb.min() < 0 or xb.max() >= model.vocab_size:
        raise IndexOutOfVocab(
            f"index outside [0, {model.vocab_size}) in input batch"
        )
    emb = p["embedding"][xb]  # [B, L, E]
    z1, xp1 = _conv_same(emb, p["conv1_w"], p["conv1_b"])
    a1 = np.maximum(z1, 0.0)
    p1, i1 = _pool2(a1)
    z2, xp2 = _conv_same(p1, p["conv2_w"], p["conv2_b"])
    a2 = np.maximum(z2, 0.0)
    p2, i2 = _pool2(a2)
    gidx = p2.argmax(axis=1)  # [B, F]
    gmax = p2.max(axis=1)
    zd = gmax @ p["dense_w"] + p["dense_b"]
    out = _sigmoid(zd)
    if not keep:
        return out
    cache = dict(
        xb=xb, z1=z1, xp1=xp1, a1=a1, i1=i1, p1=p1, z2=z2, xp2=xp2, a2=a2, i2=i2,
        p2=p2, gidx=gidx, gmax=gmax, out=out,
    )
    return out, cache


def _backward_batch(model: SiameseModel, cache: dict, dout: np.ndarray) -> dict[str, np.ndarray]:
    p = model.params
    out = cache["out"]
    dzd = dout * out * (1.0 - out)
    grads = {
        "dense_w": cache["gmax"].T @ dzd,
        "dense_b": dzd.sum(axis=0),
    }
    dgmax = dzd @ p["dense_w"].T  # [B, F]
    dp2 = np.zeros_like(cache["p2"])
    bsz, nf = dgmax.shape
    b_ix, f_ix = np.ogrid[:bsz, :nf]
    dp2[b_ix, cache["gidx"], f_ix] = dgmax
    da2 = _pool2_backward(dp2, cache["i2"], cache["a2"].shape)
    dz2 = da2 * (cache["z2"] > 0)
    dp1, dw2, db2 = _conv_backward(dz2, cache["xp2"], p["conv2_w"])
    grads["conv2_w"], grads["conv2_b"] = dw2, db2
    da1 = _pool2_backward(dp1, cache["i1"], cache["a1"].shape)
    dz1 = da1 * (cache["z1"] > 0)
    demb, dw1, db1 = _conv_backward(dz1, cache["xp1"], p["conv1_w"])
    grads["conv1_w"], grads["conv1_b"] = dw1, db1
    dembedding = np.zeros_like(p["embedding"])
    np.add.at(dembedding, cache["xb"].reshape(-1), demb.reshape(-1, demb.shape[-1]))
    grads["embedding"] = dembedding
    return grads


@dataclass(frozen=True, eq=False)
class Embedding:
    values: np.ndarray


def embed(model: SiameseModel, x: IndexSequence) -> Embedding:
    out = _forward_batch(model, _as_batch([x]))
    return Embedding(out[0])


def embed_batch(model: SiameseModel, xs: list[IndexSequence]) -> np.ndarray:
    return _forward_batch(model, _as_batch(xs))


def similarity_from_embeddings(ea: np.ndarray, eb: np.ndarray) -> float:
    return float(np.exp(-np.abs(ea - eb).sum()))


def pair_similarity(model: SiameseModel, a: IndexSequence, b: IndexSequence) -> float:
    """exp(-L1 distance) between the twin embeddings; in (0, 1]."""
    return similarity_from_embeddings(embed(model, a).values, embed(model, b).values)


def pair_loss(p: float, y: int) -> float:
    """Binary cross-entropy on the clamped pair probability."""
    pc = min(max(p, LOSS_EPS), 1.0 - LOSS_EPS)
    return -(y * np.log(pc) + (1 - y) * np.log(1.0 - pc))


@dataclass(frozen=True)
class TrainingPair:
    a: IndexSequence
    b: IndexSequence
    label: int


def sample_pairs(
    examples: list[tuple[IndexSequence, str]], seed: int, n_pairs: int
) -> list[TrainingPair]:
    """Balanced positive/negative pairs (within one), uniformly sampled."""
    by_class: dict[str, list[IndexSequence]] = {}
    for x, label in examples:
        by_class.setdefault(label, []).append(x)
    classes = sorted(by_class)
    if len(classes) < 2:
        raise SingleClassCorpus("pair sampling needs at least two classes")
    rng = np.random.default_rng(seed)
    n_pos = (n_pairs + 1) // 2
    pairs: list[TrainingPair] = []
    for _ in range(n_pos):
        c = classes[rng.integers(len(classes))]
        members = by_class[c]
        if len(members) == 1:
            i = j = 0
        else:
            i, j = rng.choice(len(members), size=2, replace=False)
        pairs.append(TrainingPair(members[i], members[j], 1))
    for _ in range(n_pairs - n_pos):
        ca, cb = rng.choice(len(classes), size=2, replace=False)
        a = by_class[classes[ca]]
        b = by_class[classes[cb]]
        pairs.append(
            TrainingPair(a[rng.integers(len(a))], b[rng.integers(len(b))], 0)
        )
    return pairs


def _pair_grads_and_loss(model: SiameseModel, ab, bb, yb):
    out_a, cache_a = _forward_batch(model, ab, keep=True)
    out_b, cache_b = _forward_batch(model, bb, keep=True)
    diff = out_a - out_b
    l1 = np.abs(diff).sum(axis=1)
    p = np.exp(-l1)
    pc = np.clip(p, LOSS_EPS, 1.0 - LOSS_EPS)
    losses = -(yb * np.log(pc) + (1 - yb) * np.log(1.0 - pc))
    # dL/dp is zero where the clamp is active.
    dp = np.where(
        (p > LOSS_EPS) & (p < 1.0 - LOSS_EPS), -yb / pc + (1 - yb) / (1.0 - pc), 0.0
    )
    dl1 = dp * -p
    dout_a = dl1[:, None] * np.sign(diff)
    grads_a = _backward_batch(model, cache_a, dout_a)
    grads_b = _backward_batch(model, cache_b, -dout_a)
    grads = {k: grads_a[k] + grads_b[k] for k in grads_a}
    return grads, losses


def train(
    pairs: list[TrainingPair],
    hyper: Hyper,
    vocab_size: int,
) -> SiameseModel:
    """Adam-trained model; identical (seed, hyper, pairs) give identical bytes."""
    if not any(p.label == 1 for p in pairs):
        raise NoPositivePairs("training needs at least one positive pair")
    if not any(p.label == 0 for p in pairs):
        raise NoNegativePairs("training needs at least one negative pair")
    model = init_model(vocab_size, hyper)
    rng = np.random.default_rng(hyper.seed + 1)
    a_all = _as_batch([p.a for p in pairs])
    b_all = _as_batch([p.b for p in pairs])
    y_all = np.array([p.label for p in pairs], dtype=np.float64)

    beta1, beta2, eps = 0.9, 0.999, 1e-8
    m = {k: np.zeros_like(v) for k, v in model.params.items()}
    v = {k: np.zeros_like(vv) for k, vv in model.params.items()}
    step = 0
    for _ in range(hyper.epochs):
        order = rng.permutation(len(pairs))
        epoch_loss = 0.0
        for at in range(0, len(pairs), hyper.batch_size):
            sel = order[at : at + hyper.batch_size]
            grads, losses = _pair_grads_and_loss(
                model, a_all[sel], b_all[sel], y_all[sel]
            )
            epoch_loss += float(losses.sum())
            step += 1
            for key, g in grads.items():
                g = g / len(sel)
                m[key] = beta1 * m[key] + (1 - beta1) * g
                v[key] = beta2 * v[key] + (1 - beta2) * g * g
                mhat = m[key] / (1 - beta1**step)
                vhat = v[key] / (1 - beta2**step)
                model.params[key] -= (
                    hyper.learning_rate * mhat / (np.sqrt(vhat) + eps)
                )
        model.loss_trace.append(epoch_loss / len(pairs))
    return model


# ---------------------------------------------------------------------------
# Serialization: little-endian float64 tensors in fixed order, plus a
# sha256 content hash so determinism can be checked cheaply.


def save_model(model: SiameseModel, path: str) -> None:
    head = MAGIC + struct.pack(
        "<IQQQdQQ",
        FORMAT_VERSION,
        model.vocab_size,
        model.hyper.max_len,
        model.hyper.seed,
        model.hyper.learning_rate,
        model.hyper.epochs,
        model.hyper.batch_size,
    )
    body = b"".join(
        np.ascontiguousarray(model.params[name], dtype="<f8").tobytes()
        for name in TENSOR_ORDER
    )
    digest = hashlib.sha256(head + body).digest()
    with open(path, "wb") as fh:
        fh.write(head + body + digest)


def model_content_hash(model: SiameseModel) -> str:
    return hashlib.sha256(
        b"".join(
            np.ascontiguousarray(model.params[n], dtype="<f8").tobytes()
            for n in TENSOR_ORDER
        )
    ).hexdigest()


def load_model(path: str) -> SiameseModel:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[: len(MAGIC)] != MAGIC:
        raise ValueError("not a serialized twin-network model")
    off = len(MAGIC)
    version, vocab_size, max_len, seed, lr, epochs, batch = struct.unpack_from(
        "<IQQQdQQ", blob, off
    )
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version}")
    off += struct.calcsize("<IQQQdQQ")
    if hashlib.sha256(blob[:-32]).digest() != blob[-32:]:
        raise ValueError("model file is corrupt (hash mismatch)")
    shapes = {
        "embedding": (vocab_size, EMBED_DIM),
        "conv1_w": (CONV_FILTERS, KERNEL_WIDTH, EMBED_DIM),
        "conv1_b": (CONV_FILTERS,),
        "conv2_w": (CONV_FILTERS, KERNEL_WIDTH, CONV_FILTERS),
        "conv2_b": (CONV_FILTERS,),
        "dense_w": (CONV_FILTERS, DENSE_DIM),
        "dense_b": (DENSE_DIM,),
    }
    params = {}
    for name in TENSOR_ORDER:
        count = int(np.prod(shapes[name]))
        params[name] = (
            np.frombuffer(blob, dtype="<f8", count=count, offset=off)
            .reshape(shapes[name])
            .astype(np.float64)
        )
        off += count * 8
    hyper = Hyper(
        max_len=max_len, seed=seed, learning_rate=lr, epochs=epochs, batch_size=batch
    )
    return SiameseModel(params, hyper, vocab_size)

import json
import math

import numpy as np
import pytest

from conftest import golden_path
from tsgkit.siamese import (
    Hyper,
    IndexOutOfVocab,
    NoNegativePairs,
    NoPositivePairs,
    SingleClassCorpus,
    SiameseModel,
    TrainingPair,
    _as_batch,
    _pair_grads_and_loss,
    embed,
    init_model,
    load_model,
    model_content_hash,
    pair_loss,
    pair_similarity,
    sample_pairs,
    save_model,
    train,
)
from tsgkit.vectorize import IndexSequence


def seq(*indices, max_len=8):
    padded = tuple(indices) + (0,) * (max_len - len(indices))
    return IndexSequence(padded, len(indices))


MINI = Hyper(max_len=8, seed=36)


@pytest.fixture(scope="module")
def mini_model():
    return init_model(10, MINI)


def zero_model(vocab_size=10, hyper=MINI) -> SiameseModel:
    model = init_model(vocab_size, hyper)
    for key in model.params:
        model.params[key][:] = 0.0
    return model


# --- forward pass ------------------------------------------------------------


def test_zero_network_embeds_to_half():
    out = embed(zero_model(), seq(1, 2, 3)).values
    assert out.shape == (128,)
    assert np.allclose(out, 0.5)


def test_embed_deterministic(mini_model):
    x = seq(2, 5, 3)
    a = embed(mini_model, x).values
    b = embed(mini_model, x).values
    assert np.array_equal(a, b)


def test_embed_rejects_out_of_vocab(mini_model):
    with pytest.raises(IndexOutOfVocab):
        embed(mini_model, seq(99))


def test_embed_golden_vector():
    model = init_model(10, Hyper(max_len=8, seed=42))
    got = embed(model, seq(2, 5, 3, 9, 7, 4)).values
    with open(golden_path("embed_seed42.json")) as fh:
        want = np.array([float(v) for v in json.load(fh)])
    assert np.array_equal(got, want)


# --- pair similarity and loss ------------------------------------------------


def test_self_similarity_is_exactly_one(mini_model):
    x = seq(4, 4, 2, 9)
    assert pair_similarity(mini_model, x, x) == 1.0


def test_known_l1_mass_closed_form():
    ea = np.zeros(128)
    eb = np.zeros(128)
    eb[:3] = 1.0  # total L1 mass 3
    from tsgkit.siamese import similarity_from_embeddings

    assert math.isclose(similarity_from_embeddings(ea, eb), math.exp(-3), rel_tol=1e-12)


def test_similarity_matches_independent_sum(mini_model):
    a, b = seq(2, 5, 3), seq(9, 8, 7, 6)
    ea = embed(mini_model, a).values
    eb = embed(mini_model, b).values
    expected = math.exp(-math.fsum(abs(float(x) - float(y)) for x, y in zip(ea, eb)))
    assert math.isclose(pair_similarity(mini_model, a, b), expected, rel_tol=1e-12)


def test_pair_loss_values():
    assert math.isclose(pair_loss(0.5, 1), math.log(2), rel_tol=1e-12)
    assert pair_loss(1.0, 1) < 1e-6
    assert math.isclose(pair_loss(0.9, 0), -math.log(0.1), rel_tol=1e-9)
    assert pair_loss(0.0, 1) > 0  # clamped, not infinite
    assert np.isfinite(pair_loss(1.0, 0))


def test_similarity_properties_randomized():
    rng = np.random.default_rng(11)
    for trial in range(200):
        model = init_model(10, Hyper(max_len=8, seed=int(rng.integers(1 << 30))))
        a = seq(*rng.integers(0, 10, 8))
        b = seq(*rng.integers(0, 10, 8))
        pab = pair_similarity(model, a, b)
        pba = pair_similarity(model, b, a)
        assert abs(pab - pba) <= 1e-12
        assert 0.0 < pab <= 1.0
        assert pair_similarity(model, a, a) == 1.0


# --- gradients ---------------------------------------------------------------


def _grad_fixture():
    rng = np.random.default_rng(36)
    model = init_model(10, MINI)
    a = seq(*(int(v) for v in rng.permutation(8) + 2))
    b = seq(*(int(v) for v in rng.permutation(8) + 2))
    ab, bb = _as_batch([a, a]), _as_batch([b, b])
    yb = np.array([1.0, 0.0])
    return model, ab, bb, yb


def test_gradient_check_against_central_differences():
    model, ab, bb, yb = _grad_fixture()
    analytic, _ = _pair_grads_and_loss(model, ab, bb, yb)

    def total_loss():
        _, losses = _pair_grads_and_loss(model, ab, bb, yb)
        return float(losses.sum())

    h = 1e-5
    for name, tensor in model.params.items():
        flat = tensor.reshape(-1)
        n = flat.size
        if n <= 1200:
            idxs = np.arange(n)
        else:
            idxs = np.sort(np.random.default_rng(3).choice(n, 256, replace=False))
        ga = analytic[name].reshape(-1)[idxs]
        gf = np.empty(len(idxs))
        for j, i in enumerate(idxs):
            orig = flat[i]
            flat[i] = orig + h
            lp = total_loss()
            flat[i] = orig - h
            lm = total_loss()
            flat[i] = orig
            gf[j] = (lp - lm) / (2 * h)
        rel = np.linalg.norm(ga - gf) / max(np.linalg.norm(ga), np.linalg.norm(gf), 1e-12)
        assert rel < 1e-4, f"{name}: relative error {rel:.3e}"


# --- pair sampling -----------------------------------------------------------


def _examples(per_class=2, classes=("a", "b")):
    out = []
    idx = 2
    for c in classes:
        for _ in range(per_class):
            out.append((seq(idx), c))
            idx += 1
    return out


def test_sample_pairs_balance():
    pairs = sample_pairs(_examples(), seed=0, n_pairs=4)
    labels = [p.label for p in pairs]
    assert labels.count(1) == 2 and labels.count(0) == 2


def test_sample_pairs_deterministic():
    a = sample_pairs(_examples(), seed=9, n_pairs=10)
    b = sample_pairs(_examples(), seed=9, n_pairs=10)
    assert a == b


def test_sample_pairs_no_self_pair_unless_singleton():
    for p in sample_pairs(_examples(per_class=3), seed=1, n_pairs=50):
        if p.label == 1:
            assert p.a != p.b
    singleton = [(seq(2), "a"), (seq(3), "b"), (seq(4), "b")]
    pairs = sample_pairs(singleton, seed=1, n_pairs=20)
    selfpairs = [p for p in pairs if p.label == 1 and p.a == p.b]
    # Only the single-member class may pair with itself.
    assert all(p.a == singleton[0][0] for p in selfpairs)


def test_sample_pairs_single_class_rejected():
    with pytest.raises(SingleClassCorpus):
        sample_pairs([(seq(2), "only"), (seq(3), "only")], seed=0, n_pairs=2)


def test_large_sample_balance(corpus, trained):
    _, vocab, _ = trained
    from tsgkit.vectorize import encode

    encoded = [(encode(s, vocab, 32), label) for s, label in corpus.examples]
    pairs = sample_pairs(encoded, seed=3, n_pairs=2000)
    pos = sum(p.label for p in pairs)
    assert abs(pos - (len(pairs) - pos)) <= 1
    assert len(pairs) == 2000


# --- training ----------------------------------------------------------------


def _tiny_pairs():
    pos = TrainingPair(seq(2, 3), seq(2, 4), 1)
    neg = TrainingPair(seq(2, 3), seq(8, 9), 0)
    return [pos, neg, TrainingPair(seq(2, 4), seq(2, 3), 1), TrainingPair(seq(9, 8), seq(2, 4), 0)]


def test_train_requires_both_pair_kinds():
    hyper = Hyper(max_len=8, seed=1, epochs=1)
    with pytest.raises(NoPositivePairs):
        train([TrainingPair(seq(2), seq(3), 0)], hyper, 10)
    with pytest.raises(NoNegativePairs):
        train([TrainingPair(seq(2), seq(3), 1)], hyper, 10)


def test_zero_learning_rate_keeps_initialization():
    hyper = Hyper(max_len=8, seed=7, epochs=3, learning_rate=0.0)
    model = train(_tiny_pairs(), hyper, 10)
    fresh = init_model(10, hyper)
    for key in model.params:
        assert np.array_equal(model.params[key], fresh.params[key])


def test_identical_seeds_identical_bytes(tmp_path):
    hyper = Hyper(max_len=8, seed=5, epochs=2)
    p1, p2 = tmp_path / "m1.bin", tmp_path / "m2.bin"
    save_model(train(_tiny_pairs(), hyper, 10), str(p1))
    save_model(train(_tiny_pairs(), hyper, 10), str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_loss_trace_decreases_on_bundled_corpus(trained):
    model, _, _ = trained
    trace = model.loss_trace
    assert len(trace) == model.hyper.epochs
    assert all(np.isfinite(v) for v in trace)
    assert trace[-1] < trace[0]


def test_model_round_trip(tmp_path):
    hyper = Hyper(max_len=8, seed=5, epochs=1)
    model = train(_tiny_pairs(), hyper, 10)
    path = tmp_path / "m.bin"
    save_model(model, str(path))
    loaded = load_model(str(path))
    assert loaded.vocab_size == model.vocab_size
    assert loaded.hyper == model.hyper
    for key in model.params:
        assert np.array_equal(loaded.params[key], model.params[key])
    assert model_content_hash(loaded) == model_content_hash(model)


def test_corrupt_model_rejected(tmp_path):
    hyper = Hyper(max_len=8, seed=5, epochs=1)
    path = tmp_path / "m.bin"
    save_model(train(_tiny_pairs(), hyper, 10), str(path))
    blob = bytearray(path.read_bytes())
    blob[50] ^= 0xFF
    path.write_bytes(bytes(blob))
    with pytest.raises(ValueError):
        load_model(str(path))

import math
import random

import numpy as np
import pytest

from cognet import phoneme, pmi

import oracles


def expected_pmi(pair_counts: dict[tuple[str, str], int], pseudocount: float = 1.0):
    """Reference PMI from raw aligned-pair counts (both orientations)."""
    n = len(phoneme.INVENTORY)
    idx = phoneme.SYMBOL_INDEX
    counts = [[0.0] * n for _ in range(n)]
    for (x, y), c in pair_counts.items():
        counts[idx[x]][idx[y]] += c
        counts[idx[y]][idx[x]] += c
    total = sum(v + pseudocount for row in counts for v in row)
    joint = [[(v + pseudocount) / total for v in row] for row in counts]
    marg = [sum(row) for row in joint]

    def score(x, y):
        i, j = idx[x], idx[y]
        return math.log2(joint[i][j]) - math.log2(marg[i] * marg[j])

    return score


def test_identical_pairs_prefer_diagonal():
    corpus = [("pt", "pt")] * 6 + [("tp", "tp")] * 4
    m = pmi.estimate_pmi(corpus)
    assert m.converged
    assert m.score("p", "p") > m.score("p", "t")
    assert m.score("t", "t") > m.score("p", "t")
    # identity alignments: each pair contributes one (p,p) and one (t,t)
    ref = expected_pmi({("p", "p"): 10, ("t", "t"): 10})
    assert m.score("p", "p") == pytest.approx(ref("p", "p"), abs=1e-12)
    assert m.score("p", "t") == pytest.approx(ref("p", "t"), abs=1e-12)
    assert m.score("V", "V") == pytest.approx(ref("V", "V"), abs=1e-12)


def test_planted_correspondence_outranks_others():
    corpus = [("pVt", "fVt")] * 10
    m = pmi.estimate_pmi(corpus)
    assert m.converged
    ref = expected_pmi({("p", "f"): 10, ("V", "V"): 10, ("t", "t"): 10})
    assert m.score("p", "f") == pytest.approx(ref("p", "f"), abs=1e-12)
    assert m.score("p", "f") > m.score("p", "t")
    assert m.score("p", "f") > m.score("p", "p")


def test_all_pairs_failing_cutoff_raise():
    with pytest.raises(pmi.EmptySeedSet):
        pmi.estimate_pmi([("pppp", "tttt")])
    with pytest.raises(pmi.EmptySeedSet):
        pmi.estimate_pmi([])


def test_matrix_is_exactly_symmetric():
    rng = random.Random(3)
    corpus = []
    for _ in range(60):
        a = "".join(rng.choice("ptkbdV") for _ in range(rng.randint(2, 6)))
        b = "".join(rng.choice("ptkbdV") for _ in range(rng.randint(2, 6)))
        corpus.append((a, b))
    m = pmi.estimate_pmi(corpus, pmi.PMIConfig(initial_cutoff=1.0))
    assert np.array_equal(m.scores, m.scores.T)
    assert np.isfinite(m.scores).all()


def test_self_similarity_dominates_on_identity_corpus():
    corpus = [("pVk", "pVk")] * 5 + [("tVs", "tVs")] * 5 + [("pVs", "pVs")] * 5
    m = pmi.estimate_pmi(corpus)
    for x in "ptksV":
        for y in "ptksV":
            if x != y:
                assert m.score(x, x) >= m.score(x, y)


def test_estimation_is_deterministic():
    rng = random.Random(8)
    corpus = []
    for _ in range(40):
        w = "".join(rng.choice("ptkV") for _ in range(rng.randint(2, 5)))
        corpus.append((w, w if rng.random() < 0.6 else w[::-1]))
    m1 = pmi.estimate_pmi(corpus)
    m2 = pmi.estimate_pmi(corpus)
    assert np.array_equal(m1.scores, m2.scores)
    assert m1.iterations == m2.iterations


def test_iteration_bookkeeping():
    corpus = [("pVt", "fVt")] * 10
    cfg = pmi.PMIConfig(max_iterations=3, convergence_tol=1e-12)
    m = pmi.estimate_pmi(corpus, cfg)
    assert m.iterations <= 3
    assert m.converged == (m.final_delta < cfg.convergence_tol)


def test_pmi_score_matches_alignment_oracle():
    corpus = [("pVt", "fVt")] * 5 + [("kVs", "kVs")] * 5
    m = pmi.estimate_pmi(corpus)
    sub = lambda x, y: m.scores[phoneme.SYMBOL_INDEX[x], phoneme.SYMBOL_INDEX[y]]
    rng = random.Random(12)
    for _ in range(60):
        a = "".join(rng.choice("pftksV") for _ in range(rng.randint(1, 6)))
        b = "".join(rng.choice("pftksV") for _ in range(rng.randint(1, 6)))
        assert pmi.pmi_score(a, b, m) == pytest.approx(
            oracles.global_memo(a, b, sub, m.gap_penalty))


def test_pmi_score_identity_sums_diagonal():
    scores = np.full((35, 35), -1.0)
    np.fill_diagonal(scores, 2.0)
    m = pmi.PMIMatrix(scores=scores, gap_penalty=-2.5)
    assert pmi.pmi_score("pVt", "pVt", m) == pytest.approx(6.0)
    # two single symbols: substitution beats a double gap
    assert pmi.pmi_score("p", "t", m) == pytest.approx(-1.0)


def test_pmi_features_shape_and_values():
    scores = np.zeros((35, 35))
    m = pmi.PMIMatrix(scores=scores, gap_penalty=-1.0)
    feats = pmi.pmi_features("pVt", "pVtkV", m)
    assert len(feats) == 4
    assert feats[1] == 3.0 and feats[2] == 5.0 and feats[3] == 2.0
    self_feats = pmi.pmi_features("pVt", "pVt", m)
    assert self_feats[1] == self_feats[2] == 3.0 and self_feats[3] == 0.0


def test_config_validation():
    with pytest.raises(ValueError):
        pmi.PMIConfig(initial_cutoff=0.0)
    with pytest.raises(ValueError):
        pmi.PMIConfig(gap_penalty=0.5)
    with pytest.raises(ValueError):
        pmi.PMIConfig(pseudocount=0.0)


def test_matrix_file_round_trip(tmp_path):
    corpus = [("pVt", "fVt")] * 10 + [("kVs", "kVs")] * 5
    m = pmi.estimate_pmi(corpus)
    path = tmp_path / "matrix.tsv"
    pmi.save_matrix(m, path)
    loaded = pmi.load_matrix(path)
    assert np.allclose(loaded.scores, m.scores, rtol=1e-11, atol=0)
    assert loaded.gap_penalty == m.gap_penalty
    # a second save of the loaded matrix is byte-identical
    path2 = tmp_path / "matrix2.tsv"
    pmi.save_matrix(loaded, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_load_matrix_rejects_malformed(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("p\tq\n1\t2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        pmi.load_matrix(path)

"""Pointwise-mutual-information scoring learned by iterated alignment.

Word pairs that survive a normalized edit-distance cutoff are aligned,
aligned symbol pairs are counted, and the counts become a log-odds scoring
matrix.  Realigning with that matrix and recounting is repeated until the
matrix stops moving.  The resulting matrix scores new word pairs through
ordinary global alignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import phoneme, similarity

N = len(phoneme.INVENTORY)

_EDIT_SCHEME = similarity.ScoringScheme(similarity.match_mismatch(0.0, -1.0), gap_open=-1.0)


class EmptySeedSet(ValueError):
    """No word pair passed the initial edit-distance cutoff."""


@dataclass(frozen=True)
class PMIConfig:
    initial_cutoff: float = 0.5
    max_iterations: int = 10
    convergence_tol: float = 1e-4
    pseudocount: float = 1.0
    gap_penalty: float = -2.5

    def __post_init__(self):
        if not 0.0 < self.initial_cutoff <= 1.0:
            raise ValueError("initial_cutoff must be in (0, 1]")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be > 0")
        if self.pseudocount <= 0:
            raise ValueError("pseudocount must be > 0")
        if self.gap_penalty >= 0:
            raise ValueError("gap_penalty must be < 0")


@dataclass(frozen=True, eq=False)
class PMIMatrix:
    """Symmetric 35 x 35 log-odds scores over the inventory, plus gap penalty."""

    scores: np.ndarray
    gap_penalty: float
    iterations: int = 0
    final_delta: float = float("nan")
    converged: bool = False

    def score(self, x: str, y: str) -> float:
        return float(self.scores[phoneme.SYMBOL_INDEX[x], phoneme.SYMBOL_INDEX[y]])

    def scoring_scheme(self) -> similarity.ScoringScheme:
        idx = phoneme.SYMBOL_INDEX
        scores = self.scores
        return similarity.ScoringScheme(
            lambda x, y: scores[idx[x], idx[y]],
            gap_open=self.gap_penalty,
        )


def _counts_to_pmi(counts: np.ndarray, pseudocount: float) -> np.ndarray:
    # smooth every cell, normalize, and take log-odds against the marginals;
    # smoothing keeps both the joint and the marginals strictly positive
    smoothed = counts + pseudocount
    total = smoothed.sum()
    joint = smoothed / total
    marginal = joint.sum(axis=1)
    return np.log2(joint) - np.log2(np.outer(marginal, marginal))


def _count_pairs(alignments: list[list[tuple[str, str]]]) -> np.ndarray:
    idx = phoneme.SYMBOL_INDEX
    counts = np.zeros((N, N), dtype=np.float64)
    for pairs in alignments:
        for x, y in pairs:
            if x != similarity.GAP and y != similarity.GAP:
                counts[idx[x], idx[y]] += 1.0
                counts[idx[y], idx[x]] += 1.0
    return counts


def estimate_pmi(pairs: list[tuple[str, str]], cfg: PMIConfig = PMIConfig()) -> PMIMatrix:
    """Learn a PMI matrix from word pairs by align-count-rescore iteration.

    Seed pairs are those whose edit distance divided by the longer length
    stays within ``cfg.initial_cutoff``; they are first aligned at unit
    edit costs, then repeatedly realigned under the current matrix.  Stops
    when the largest matrix change drops below ``cfg.convergence_tol`` or
    after ``cfg.max_iterations`` realignments.
    """
    seeds = [
        (a, b) for a, b in pairs
        if a and b and similarity.edit_distance(a, b) / max(len(a), len(b)) <= cfg.initial_cutoff
    ]
    if not seeds:
        raise EmptySeedSet(
            f"no pair passed the cutoff {cfg.initial_cutoff} out of {len(pairs)}"
        )

    alignments = [similarity.align(a, b, _EDIT_SCHEME, similarity.GLOBAL)[1] for a, b in seeds]
    scores = _counts_to_pmi(_count_pairs(alignments), cfg.pseudocount)

    iterations = 0
    delta = float("nan")
    converged = False
    idx = phoneme.SYMBOL_INDEX
    for iterations in range(1, cfg.max_iterations + 1):
        scheme = similarity.ScoringScheme(
            lambda x, y: scores[idx[x], idx[y]], gap_open=cfg.gap_penalty
        )
        alignments = [similarity.align(a, b, scheme, similarity.GLOBAL)[1] for a, b in seeds]
        new_scores = _counts_to_pmi(_count_pairs(alignments), cfg.pseudocount)
        delta = float(np.max(np.abs(new_scores - scores)))
        scores = new_scores
        if delta < cfg.convergence_tol:
            converged = True
            break
    return PMIMatrix(
        scores=scores,
        gap_penalty=cfg.gap_penalty,
        iterations=iterations,
        final_delta=delta,
        converged=converged,
    )


def pmi_score(a: str, b: str, matrix: PMIMatrix) -> float:
    """Best global alignment score of two words under the PMI matrix."""
    score, _ = similarity.align(a, b, matrix.scoring_scheme(), similarity.GLOBAL)
    return score


def pmi_features(a: str, b: str, matrix: PMIMatrix) -> list[float]:
    """Feature vector [pmi score, len(a), len(b), |len(a)-len(b)|]."""
    return [pmi_score(a, b, matrix), float(len(a)), float(len(b)), float(abs(len(a) - len(b)))]


def save_matrix(matrix: PMIMatrix, path) -> None:
    """Write the matrix as TSV: symbol header, 35 score rows, GAP line."""
    lines = ["\t".join(phoneme.INVENTORY)]
    for row in matrix.scores:
        lines.append("\t".join(format(v, ".12g") for v in row))
    lines.append(f"GAP\t{format(matrix.gap_penalty, '.12g')}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix(path) -> PMIMatrix:
    """Read a matrix written by :func:`save_matrix`."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if len(lines) != N + 2:
        raise ValueError(f"{path}: expected {N + 2} lines, found {len(lines)}")
    header = lines[0].split("\t")
    if sorted(header) != sorted(phoneme.INVENTORY) or len(header) != N:
        raise ValueError(f"{path}: header must list the {N} inventory symbols")
    raw = np.array([[float(v) for v in ln.split("\t")] for ln in lines[1:-1]])
    if raw.shape != (N, N):
        raise ValueError(f"{path}: expected a {N}x{N} score block")
    # reorder into canonical inventory order in case the header permutes it
    order = [header.index(s) for s in phoneme.INVENTORY]
    scores = raw[np.ix_(order, order)]
    gap_label, gap_value = lines[-1].split("\t")
    if gap_label != "GAP":
        raise ValueError(f"{path}: final line must be 'GAP<TAB>value'")
    return PMIMatrix(scores=scores, gap_penalty=float(gap_value))

"""cognet: pairwise cognate identification toolkit.

Featurizes ASJP transcriptions into binary phonetic-feature matrices,
trains small convolutional pair classifiers and SVM baselines over string
similarity or PMI features, and evaluates them under cross-concept and
cross-family splits.
"""

from . import metrics, neural, phoneme, pmi, similarity, svm, wordlists

__version__ = "0.1.0"

__all__ = [
    "metrics", "neural", "phoneme", "pmi", "similarity", "svm",
    "synthetic", "wordlists", "__version__",
]

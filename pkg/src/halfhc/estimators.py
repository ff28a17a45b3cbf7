"""Scikit-learn style front end for the prefix-code builders.

The codec behaves like a text transformer: ``fit`` learns a code from
training text, ``transform`` encodes documents to bit strings and
``inverse_transform`` decodes them, so it drops into pipelines next to
the usual text vectorizers.
"""

from __future__ import annotations

from typing import Iterable

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .codec import decode, encode, half_huffman
from .distribution import SymbolDistribution


def _as_documents(X) -> list[str]:
    if isinstance(X, str):
        return [X]
    docs = list(X)
    for doc in docs:
        if not isinstance(doc, str):
            raise TypeError(f"expected text documents, got {type(doc).__name__}")
    return docs


class HuffmanCodec(BaseEstimator, TransformerMixin):
    """Prefix-code text transformer with optional ones-rate balancing.

    Parameters
    ----------
    balance : bool, default=True
        Rearrange codewords within each length class so the expected
        ones-rate of the encoded stream is as close to 1/2 as the extreme
        arrangements allow. False keeps the canonical Huffman labeling.
    solver : {"exhaustive", "bisection", "branch_bound"}, default="exhaustive"
        Method used to pick the per-class arrangements.
    epsilon : float, default=1e-12
        Bracket tolerance for the bisection solver; ignored otherwise.

    Attributes
    ----------
    distribution_ : SymbolDistribution
        Empirical per-character distribution of the training text.
    artifact_ : CodecArtifact
        Both code tables plus the arrangement selection.
    codebook_ : Codebook
        The active table (balanced when ``balance`` is set).
    expected_ones_rate_ : float
        Model ones-rate of the active table.

    Examples
    --------
    >>> codec = HuffmanCodec().fit("abracadabra")
    >>> bits = codec.transform(["abra"])
    >>> codec.inverse_transform(bits)
    ['abra']
    """

    def __init__(self, balance: bool = True, solver: str = "exhaustive", epsilon: float = 1e-12):
        self.balance = balance
        self.solver = solver
        self.epsilon = epsilon

    def fit(self, X: str | Iterable[str], y=None) -> "HuffmanCodec":
        corpus = "".join(_as_documents(X))
        self.distribution_ = SymbolDistribution.from_corpus(corpus)
        self.artifact_ = half_huffman(
            self.distribution_, solver=self.solver, epsilon=self.epsilon
        )
        self.codebook_ = self.artifact_.codebook("halfhc" if self.balance else "hc")
        self.expected_ones_rate_ = float(
            self.artifact_.expected_q_half if self.balance else self.artifact_.expected_q_base
        )
        return self

    def transform(self, X: str | Iterable[str]) -> list[str]:
        check_is_fitted(self, "codebook_")
        return [encode(doc, self.codebook_) for doc in _as_documents(X)]

    def inverse_transform(self, X: Iterable[str]) -> list[str]:
        check_is_fitted(self, "codebook_")
        return [decode(bits, self.codebook_) for bits in _as_documents(X)]

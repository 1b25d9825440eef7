"""Exact-match scoring, significance testing, and correspondence statistics.

A predicted role is a true positive iff its label and its exact token-index
set equal a gold role of the same sentence.  Corpus precision/recall/F1 are
micro-averaged from pooled counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import RoleAnnotation
from .errors import ValidationError
from .similarity import UnitSimilarity, full_view


@dataclass(frozen=True)
class SentenceCounts:
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class ScoreReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    per_sentence: tuple[SentenceCounts, ...]

    def to_tsv(self) -> str:
        lines = ["sentence\ttp\tfp\tfn"]
        for k, c in enumerate(self.per_sentence):
            lines.append(f"{k}\t{c.tp}\t{c.fp}\t{c.fn}")
        lines.append(f"total\t{self.tp}\t{self.fp}\t{self.fn}")
        lines.append(f"precision\t{self.precision:.6f}")
        lines.append(f"recall\t{self.recall:.6f}")
        lines.append(f"f1\t{self.f1:.6f}")
        return "\n".join(lines) + "\n"

    def format_text(self) -> str:
        return (
            f"P = {self.precision:.3f}  R = {self.recall:.3f}  F1 = {self.f1:.3f}"
            f"  (tp={self.tp} fp={self.fp} fn={self.fn})"
        )


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def sentence_counts(gold: RoleAnnotation, pred: RoleAnnotation) -> SentenceCounts:
    gold_sets = {label: gold.tokens_of(label) for label, _ in gold.roles}
    pred_sets = {label: pred.tokens_of(label) for label, _ in pred.roles}
    tp = sum(
        1
        for label, toks in pred_sets.items()
        if label in gold_sets and gold_sets[label] == toks
    )
    return SentenceCounts(tp, len(pred_sets) - tp, len(gold_sets) - tp)


def score(gold, pred) -> ScoreReport:
    if len(gold) != len(pred):
        raise ValidationError(
            f"gold and predicted corpora are not parallel ({len(gold)} vs {len(pred)})"
        )
    per = tuple(sentence_counts(g, p) for g, p in zip(gold, pred))
    tp = sum(c.tp for c in per)
    fp = sum(c.fp for c in per)
    fn = sum(c.fn for c in per)
    p, r, f1 = _prf(tp, fp, fn)
    return ScoreReport(tp, fp, fn, p, r, f1, per)


@dataclass(frozen=True)
class SigTestResult:
    observed_delta_f1: float
    p_value: float
    iterations: int
    seed: int

    def format_text(self) -> str:
        return (
            f"observed delta F1 = {self.observed_delta_f1:+.6f}\n"
            f"p = {self.p_value:.6f}  (two-sided, {self.iterations} iterations, "
            f"seed {self.seed})"
        )


def stratified_shuffling(
    gold, pred_a, pred_b, iterations: int, seed: int
) -> SigTestResult:
    """Approximate randomization: swap the two systems per sentence with
    probability 1/2 and recompute the pooled F1 difference.

    Two-sided p-value with the add-one estimator
    (count(|delta| >= |observed|) + 1) / (iterations + 1).
    """
    if not len(gold):
        raise ValidationError("empty corpus")
    if not (len(gold) == len(pred_a) == len(pred_b)):
        raise ValidationError("gold and system corpora are not parallel")
    if iterations < 1:
        raise ValidationError("iterations must be >= 1")

    counts_a = np.array(
        [[c.tp, c.fp, c.fn] for c in (sentence_counts(g, p) for g, p in zip(gold, pred_a))]
    )
    counts_b = np.array(
        [[c.tp, c.fp, c.fn] for c in (sentence_counts(g, p) for g, p in zip(gold, pred_b))]
    )

    def pooled_f1(counts: np.ndarray) -> np.ndarray:
        tp, fp, fn = counts[..., 0], counts[..., 1], counts[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            p = np.where(tp + fp > 0, tp / np.maximum(tp + fp, 1), 0.0)
            r = np.where(tp + fn > 0, tp / np.maximum(tp + fn, 1), 0.0)
            f1 = np.where(p + r > 0, 2 * p * r / np.maximum(p + r, 1e-300), 0.0)
        return f1

    observed = float(pooled_f1(counts_a.sum(0)) - pooled_f1(counts_b.sum(0)))

    rng = np.random.default_rng(seed)
    flips = rng.random((iterations, len(gold))) < 0.5
    keep = ~flips
    sum_a = keep.astype(int) @ counts_a + flips.astype(int) @ counts_b
    sum_b = flips.astype(int) @ counts_a + keep.astype(int) @ counts_b
    deltas = pooled_f1(sum_a) - pooled_f1(sum_b)
    hits = int(np.count_nonzero(np.abs(deltas) >= abs(observed)))
    p_value = (hits + 1) / (iterations + 1)
    return SigTestResult(observed, p_value, iterations, seed)


@dataclass(frozen=True)
class CorrespondenceStats:
    threshold: float
    src_proportions: dict[str, float]  # over {"none", "one", "many"}
    tgt_proportions: dict[str, float]
    src_total: int
    tgt_total: int

    def to_tsv(self) -> str:
        lines = [f"threshold\t{self.threshold}"]
        for side, props, total in (
            ("source", self.src_proportions, self.src_total),
            ("target", self.tgt_proportions, self.tgt_total),
        ):
            for key in ("none", "one", "many"):
                lines.append(f"{side}\t{key}\t{props[key]:.6f}")
            lines.append(f"{side}\tconstituents\t{total}")
        return "\n".join(lines) + "\n"

    def format_text(self) -> str:
        def row(side, props):
            return (
                f"{side}: none {props['none']:.1%}  one {props['one']:.1%}  "
                f"many {props['many']:.1%}"
            )

        return (
            f"correspondence at similarity >= {self.threshold}\n"
            + row("source", self.src_proportions)
            + "\n"
            + row("target", self.tgt_proportions)
        )


def correspondence_stats(corpus, threshold: float = 0.5) -> CorrespondenceStats:
    """Classify each constituent by how many opposite-side constituents it
    corresponds to (similarity >= threshold): none, exactly one, or many."""
    src_counts = {"none": 0, "one": 0, "many": 0}
    tgt_counts = {"none": 0, "one": 0, "many": 0}
    for b in corpus:
        if b.src_tree is None or b.tgt_tree is None:
            raise ValidationError("correspondence statistics need trees on both sides")
        ctx = UnitSimilarity(full_view(b), b.src_tree, b.tgt_tree)
        m = ctx.matrix(list(b.src_tree.node_ids()), list(b.tgt_tree.node_ids()))
        hits = m.sim >= threshold
        for count in hits.sum(axis=1):
            src_counts[_bucket(count)] += 1
        for count in hits.sum(axis=0):
            tgt_counts[_bucket(count)] += 1
    src_total = sum(src_counts.values())
    tgt_total = sum(tgt_counts.values())
    if not src_total or not tgt_total:
        raise ValidationError("empty corpus")
    return CorrespondenceStats(
        threshold,
        {k: v / src_total for k, v in src_counts.items()},
        {k: v / tgt_total for k, v in tgt_counts.items()},
        src_total,
        tgt_total,
    )


def _bucket(count: int) -> str:
    if count == 0:
        return "none"
    if count == 1:
        return "one"
    return "many"

"""The two scoring protocols: sentence-level CSC F1 and edit-level F0.5.

Conventions, stated once because they decide the numbers:
  * CSC is correction-level: a sentence counts as a true positive only when
    the hypothesis equals the reference on a sentence the gold actually
    changed. False positives cover both touched-but-clean sentences and
    wrong fixes on dirty ones.
  * CGC aggregates micro (sum TP/FP/FN over sentences, then P/R/F); the
    macro average is only ever taken across datasets, for CSC F1.
  * Any 0/0 ratio evaluates to 0, never an error, so degenerate systems
    score rather than crash.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alignment import CostScheme, UNIT_COSTS, align
from .edits import EditSet, GoldEditCorpus, MatchCounts, MergePolicy, extract_edits, match_edits
from .errors import UsageError
from .textnorm import UnitSeq


@dataclass(frozen=True)
class ScoreReport:
    """Precision/recall/F_beta plus the raw counts they came from."""

    task: str
    dataset: str
    beta: float
    precision: float
    recall: float
    f_beta: float
    counts: MatchCounts
    n_sentences: int

    def to_json_dict(self) -> dict:
        return {
            "task": self.task,
            "dataset": self.dataset,
            "beta": self.beta,
            "precision": self.precision,
            "recall": self.recall,
            "f_beta": self.f_beta,
            "tp": self.counts.tp,
            "fp": self.counts.fp,
            "fn": self.counts.fn,
            "n_sentences": self.n_sentences,
        }


@dataclass(frozen=True)
class CscSentenceOutcome:
    gold_changed: bool
    hyp_changed: bool
    exact_correct: bool


def f_beta(precision: float, recall: float, beta: float = 0.5) -> float:
    """Weighted harmonic mean of precision and recall.

    beta < 1 prioritizes precision over recall. Returns 0 when the
    denominator vanishes (in particular when P = R = 0).
    """
    if not 0.0 <= precision <= 1.0:
        raise UsageError(f"precision must be in [0, 1], got {precision}")
    if not 0.0 <= recall <= 1.0:
        raise UsageError(f"recall must be in [0, 1], got {recall}")
    if beta <= 0.0:
        raise UsageError(f"beta must be > 0, got {beta}")
    denominator = beta * beta * precision + recall
    if denominator == 0.0:
        return 0.0
    return (1.0 + beta * beta) * precision * recall / denominator


def precision_recall(counts: MatchCounts) -> tuple[float, float]:
    p = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    r = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    return p, r


def macro_average(scores: Sequence[float]) -> float:
    """Unweighted mean of per-dataset scores."""
    if not scores:
        raise UsageError("macro_average needs at least one score")
    for s in scores:
        if not 0.0 <= s <= 1.0:
            raise UsageError(f"scores must be in [0, 1], got {s}")
    return sum(scores) / len(scores)


def csc_outcome(source: UnitSeq, reference: UnitSeq, hypothesis: UnitSeq) -> CscSentenceOutcome:
    return CscSentenceOutcome(
        gold_changed=reference.units != source.units,
        hyp_changed=hypothesis.units != source.units,
        exact_correct=hypothesis.units == reference.units,
    )


def score_csc(
    items: Sequence[tuple[UnitSeq, UnitSeq, UnitSeq]],
    dataset: str = "",
) -> ScoreReport:
    """Sentence-level CSC scoring (beta = 1).

    items are (source, gold reference, hypothesis) triples, one reference per
    sentence and all normalized under the same policy. A sentence is a true
    positive only if the gold changed it and the hypothesis equals the
    reference.
    """
    if not items:
        raise UsageError("score_csc needs at least one sentence")
    tp = fp = fn = 0
    for source, reference, hypothesis in items:
        o = csc_outcome(source, reference, hypothesis)
        if o.gold_changed:
            if o.exact_correct:
                tp += 1
            else:
                fn += 1
                if o.hyp_changed:
                    fp += 1
        elif o.hyp_changed:
            fp += 1
    counts = MatchCounts(tp=tp, fp=fp, fn=fn)
    p, r = precision_recall(counts)
    return ScoreReport(
        task="csc",
        dataset=dataset,
        beta=1.0,
        precision=p,
        recall=r,
        f_beta=f_beta(p, r, 1.0),
        counts=counts,
        n_sentences=len(items),
    )


def sentence_edit_counts(
    source: UnitSeq,
    hypothesis: UnitSeq,
    gold_refs: Sequence[EditSet],
    beta: float = 0.5,
    merge: MergePolicy = MergePolicy.MAXIMAL_RUNS,
    costs: CostScheme = UNIT_COSTS,
) -> MatchCounts:
    """Counts for one sentence against its best-scoring gold reference.

    The hypothesis edit set is extracted from the source/hypothesis
    alignment; the reference maximizing sentence-local F_beta is selected,
    ties going to the lowest ref id.
    """
    if not gold_refs:
        raise UsageError("sentence has no gold references")
    sid = gold_refs[0].source_id
    hyp_set = extract_edits(align(source, hypothesis, costs), merge, source_id=sid)
    best: MatchCounts | None = None
    best_f = -1.0
    for ref in sorted(gold_refs, key=lambda r: r.ref_id):
        counts = match_edits(hyp_set, ref)
        p, r = precision_recall(counts)
        f = f_beta(p, r, beta)
        if f > best_f:
            best, best_f = counts, f
    assert best is not None
    return best


def score_cgc(
    hyp_corpus: Sequence[tuple[UnitSeq, UnitSeq]],
    gold: GoldEditCorpus,
    beta: float = 0.5,
    merge: MergePolicy = MergePolicy.MAXIMAL_RUNS,
    costs: CostScheme = UNIT_COSTS,
    dataset: str = "",
) -> ScoreReport:
    """Edit-level scoring (beta = 0.5 by default) with multi-reference selection.

    hyp_corpus holds (source, hypothesis) pairs; every source must have a
    gold record. Per-sentence counts from the selected reference are
    micro-summed before computing corpus P/R/F_beta.
    """
    if not hyp_corpus:
        raise UsageError("score_cgc needs at least one sentence")
    index = gold.by_source()
    total = MatchCounts()
    for i, (source, hypothesis) in enumerate(hyp_corpus):
        record = index.get(source.text)
        if record is None:
            raise UsageError(f"hypothesis {i} has no gold entry for source {source.text!r}")
        total = total + sentence_edit_counts(
            source, hypothesis, record.refs, beta=beta, merge=merge, costs=costs
        )
    p, r = precision_recall(total)
    return ScoreReport(
        task="cgc",
        dataset=dataset,
        beta=beta,
        precision=p,
        recall=r,
        f_beta=f_beta(p, r, beta),
        counts=total,
        n_sentences=len(hyp_corpus),
    )

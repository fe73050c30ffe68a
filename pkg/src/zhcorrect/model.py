"""Count-based noisy-channel corrector trained in two curriculum stages.

The model scores a target unit with a mixture of two proper distributions:
an add-k character n-gram LM over the decoded prefix and an add-k confusion
channel conditioned on the aligned source unit. Training is count
accumulation: stage 1 fits on alignment-tagged data, stage 2 keeps those
counts and accumulates the joint corpus on top, re-tuning the mixing weight
on a held-out slice by grid search. Decoding is substitution-only beam
search over a per-position candidate lattice.

Reserved units: BOUNDARY pads LM contexts at the sentence start and UNK
absorbs units outside the vocabulary, so every probability stays positive
and every distribution proper.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

from .corpus import Corpus, CorpusTag, ParallelPair, split
from .alignment import OpKind, align
from .errors import ConfigError, FormatError, StructuralError, UsageError
from .textnorm import UnitSeq, join_units

BOUNDARY = ""
UNK = ""

MODEL_FORMAT = "zhcorrect-model"
MODEL_VERSION = 1

DEFAULT_ORDER = 3
DEFAULT_SMOOTHING_K = 0.01
DEFAULT_MIX_GRID: tuple[float, ...] = tuple(i / 20 for i in range(21))


class Stage(str, Enum):
    """Curriculum position of a model's parameters."""

    INITIAL = "initial"
    STAGE1 = "stage1"
    STAGE2 = "stage2"


@dataclass(frozen=True)
class TrainingProvenance:
    """Optimizer settings of the reference system. Recorded only; the
    count-based trainer never reads them."""

    optimizer: str = "adamw"
    learning_rate: float = 2e-5
    warmup_steps: int = 500
    batch_size: int = 128
    epochs: int = 3


@dataclass(frozen=True)
class StageConfig:
    stage: Stage
    expected_tag: CorpusTag
    order: int = DEFAULT_ORDER
    smoothing_k: float = DEFAULT_SMOOTHING_K
    mix_grid: tuple[float, ...] = DEFAULT_MIX_GRID
    heldout_fraction: float = 0.1
    seed: int = 0
    provenance: TrainingProvenance = field(default_factory=TrainingProvenance)

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ConfigError(f"lm order must be >= 1, got {self.order}")
        if self.smoothing_k <= 0.0:
            raise ConfigError(f"smoothing_k must be > 0, got {self.smoothing_k}")
        if not self.mix_grid:
            raise ConfigError("mix_grid must be non-empty")
        for w in self.mix_grid:
            if not 0.0 <= w <= 1.0:
                raise ConfigError(f"mix_grid values must be in [0, 1], got {w}")
        if not 0.0 < self.heldout_fraction < 1.0:
            raise ConfigError(
                f"heldout_fraction must be in (0, 1), got {self.heldout_fraction}"
            )


def stage1_config(**overrides) -> StageConfig:
    return StageConfig(stage=Stage.STAGE1, expected_tag=CorpusTag.ALIGN, **overrides)


def stage2_config(**overrides) -> StageConfig:
    return StageConfig(stage=Stage.STAGE2, expected_tag=CorpusTag.JOINT, **overrides)


@dataclass(frozen=True)
class NgramLM:
    """Add-k n-gram model over units; contexts are the last order-1 units of
    the BOUNDARY-padded prefix, OOV units replaced by UNK."""

    order: int
    smoothing_k: float
    counts: dict[str, Counter]
    context_totals: dict[str, int]
    vocab: frozenset[str]

    def __post_init__(self) -> None:
        if UNK not in self.vocab:
            raise StructuralError("lm vocab must contain the UNK unit")

    def context_key(self, prefix: Sequence[str]) -> str:
        width = self.order - 1
        if width == 0:
            return ""
        mapped = [u if u in self.vocab else UNK for u in prefix]
        padded = [BOUNDARY] * width + mapped
        return "".join(padded[-width:])

    def prob(self, token: str, prefix: Sequence[str]) -> float:
        tok = token if token in self.vocab else UNK
        key = self.context_key(prefix)
        count = self.counts.get(key, {}).get(tok, 0)
        total = self.context_totals.get(key, 0)
        return (count + self.smoothing_k) / (total + self.smoothing_k * len(self.vocab))


@dataclass(frozen=True)
class ConfusionChannel:
    """Add-k emission model keyed by the aligned source unit. A source of
    None (no aligned unit) falls back to the zero-count case, i.e. uniform
    over the vocabulary."""

    smoothing_k: float
    counts: dict[str, Counter]
    totals: dict[str, int]
    vocab: frozenset[str]

    def __post_init__(self) -> None:
        if UNK not in self.vocab:
            raise StructuralError("channel vocab must contain the UNK unit")

    def prob(self, emitted: str, source: str | None) -> float:
        em = emitted if emitted in self.vocab else UNK
        if source is None:
            count, total = 0, 0
        else:
            src = source if source in self.vocab else UNK
            count = self.counts.get(src, {}).get(em, 0)
            total = self.totals.get(src, 0)
        return (count + self.smoothing_k) / (total + self.smoothing_k * len(self.vocab))

    def partners(self, source: str) -> tuple[str, ...]:
        emitted = self.counts.get(source)
        if not emitted:
            return ()
        return tuple(sorted(u for u, c in emitted.items() if c > 0))


@dataclass(frozen=True)
class MixtureCorrectorModel:
    lm: NgramLM
    channel: ConfusionChannel
    mixing_weight: float
    stage: Stage

    def __post_init__(self) -> None:
        if not 0.0 <= self.mixing_weight <= 1.0:
            raise UsageError(
                f"mixing_weight must be in [0, 1], got {self.mixing_weight}"
            )
        if self.lm.vocab != self.channel.vocab:
            raise ConfigError("lm and channel must share one vocabulary")


def initial_model(
    order: int = DEFAULT_ORDER,
    smoothing_k: float = DEFAULT_SMOOTHING_K,
    vocab: Iterable[str] = (),
    mixing_weight: float = 0.5,
) -> MixtureCorrectorModel:
    """Untrained model: empty counts, so every conditional is uniform."""
    units = frozenset(vocab) | {UNK}
    return MixtureCorrectorModel(
        lm=NgramLM(order, smoothing_k, {}, {}, units),
        channel=ConfusionChannel(smoothing_k, {}, {}, units),
        mixing_weight=mixing_weight,
        stage=Stage.INITIAL,
    )


def conditional(
    model: MixtureCorrectorModel,
    prev_context: Sequence[str],
    aligned_src_unit: str | None,
    y_t: str,
) -> float:
    """Mixture probability of emitting y_t after prev_context given the
    aligned source unit; always in (0, 1]."""
    lam = model.mixing_weight
    lm_p = model.lm.prob(y_t, tuple(prev_context))
    ch_p = model.channel.prob(y_t, aligned_src_unit)
    return lam * lm_p + (1.0 - lam) * ch_p


def _aligned_source_units(source: UnitSeq, target: UnitSeq) -> list[str | None]:
    """For each target position, the source unit aligned to it (None for
    insertions), under the deterministic alignment."""
    aligned: list[str | None] = [None] * len(target)
    for op in align(source, target).ops:
        if op.kind in (OpKind.MATCH, OpKind.SUB):
            aligned[op.tgt_index] = source.units[op.src_index]
        elif op.kind is OpKind.INS:
            aligned[op.tgt_index] = None
    return aligned


def nll(model: MixtureCorrectorModel, pair: ParallelPair) -> float:
    """Negative log-likelihood of the pair's first reference, natural log."""
    target = pair.references[0]
    aligned = _aligned_source_units(pair.source, target)
    total = 0.0
    for t, unit in enumerate(target.units):
        total -= math.log(conditional(model, target.units[:t], aligned[t], unit))
    return total


def dataset_objective(model: MixtureCorrectorModel, corpus: Corpus) -> float:
    """Mean per-pair nll over the corpus."""
    if not corpus.pairs:
        raise UsageError("dataset_objective needs a non-empty corpus")
    return sum(nll(model, pair) for pair in corpus.pairs) / len(corpus.pairs)


def _accumulate(
    lm_counts: dict[str, Counter],
    lm_totals: dict[str, int],
    ch_counts: dict[str, Counter],
    ch_totals: dict[str, int],
    vocab: set[str],
    order: int,
    pair: ParallelPair,
) -> None:
    target = pair.references[0]
    vocab.update(pair.source.units)
    vocab.update(target.units)
    width = order - 1
    for t, unit in enumerate(target.units):
        if width == 0:
            key = ""
        else:
            padded = (BOUNDARY,) * width + target.units[:t]
            key = "".join(padded[-width:])
        lm_counts.setdefault(key, Counter())[unit] += 1
        lm_totals[key] = lm_totals.get(key, 0) + 1
    for op in align(pair.source, target).ops:
        if op.kind in (OpKind.MATCH, OpKind.SUB):
            src = pair.source.units[op.src_index]
            ch_counts.setdefault(src, Counter())[target.units[op.tgt_index]] += 1
            ch_totals[src] = ch_totals.get(src, 0) + 1
        # Insertions have no source unit and deletions no emission; the
        # substitution-only channel records neither.


def stage_heldout(corpus: Corpus, config: StageConfig) -> Corpus:
    """The held-out slice fit_stage tunes on, reproducible from the config."""
    if not corpus.pairs:
        raise UsageError("cannot take a heldout slice of an empty corpus")
    return split(corpus, config.heldout_fraction, config.seed)[1]


def fit_stage(
    init: MixtureCorrectorModel, corpus: Corpus, config: StageConfig
) -> MixtureCorrectorModel:
    """One curriculum stage: accumulate corpus counts onto init's, then pick
    the mixing weight minimizing the held-out objective.

    The candidate grid always includes init's weight, so on the slice the
    search runs over the tuned objective cannot exceed init's under the same
    counts. Deterministic for a fixed config seed.
    """
    if config.stage is Stage.INITIAL:
        raise ConfigError("cannot fit toward the initial stage")
    if corpus.tag is not config.expected_tag:
        raise ConfigError(
            f"corpus tagged {corpus.tag.value!r} but stage expects "
            f"{config.expected_tag.value!r}"
        )
    wanted = Stage.INITIAL if config.stage is Stage.STAGE1 else Stage.STAGE1
    if init.stage is not wanted:
        raise ConfigError(
            f"stage {config.stage.value} must start from a {wanted.value} model, "
            f"got {init.stage.value}"
        )
    if init.lm.order != config.order or init.lm.smoothing_k != config.smoothing_k:
        raise ConfigError("config order/smoothing_k must match the init model")
    if not corpus.pairs:
        return replace(init, stage=config.stage)

    train_part, heldout_part = split(corpus, config.heldout_fraction, config.seed)
    lm_counts = {key: Counter(c) for key, c in init.lm.counts.items()}
    lm_totals = dict(init.lm.context_totals)
    ch_counts = {key: Counter(c) for key, c in init.channel.counts.items()}
    ch_totals = dict(init.channel.totals)
    vocab = set(init.lm.vocab)
    for pair in train_part.pairs:
        _accumulate(lm_counts, lm_totals, ch_counts, ch_totals, vocab, config.order, pair)

    lm = NgramLM(config.order, config.smoothing_k, lm_counts, lm_totals, frozenset(vocab))
    channel = ConfusionChannel(config.smoothing_k, ch_counts, ch_totals, frozenset(vocab))
    if not heldout_part.pairs:
        return MixtureCorrectorModel(lm, channel, init.mixing_weight, config.stage)

    best_weight, best_objective = None, math.inf
    for weight in sorted(set(config.mix_grid) | {init.mixing_weight}):
        candidate = MixtureCorrectorModel(lm, channel, weight, config.stage)
        objective = dataset_objective(candidate, heldout_part)
        if objective < best_objective:
            best_weight, best_objective = weight, objective
    assert best_weight is not None
    return MixtureCorrectorModel(lm, channel, best_weight, config.stage)


def decode(
    model: MixtureCorrectorModel,
    src: UnitSeq,
    beam_width: int = 8,
    candidates: ConfusionChannel | None = None,
) -> UnitSeq:
    """Substitution-only beam search.

    At source position i the lattice offers the source unit itself plus
    every unit the candidate channel has seen emitted for it. Beams are
    ranked by summed log conditional; ties break toward the sequence that is
    smallest in unit code-point order. Output length always equals input
    length.
    """
    if beam_width < 1:
        raise UsageError(f"beam_width must be >= 1, got {beam_width}")
    channel = model.channel if candidates is None else candidates
    beams: list[tuple[float, tuple[str, ...]]] = [(0.0, ())]
    for unit in src.units:
        options = sorted({unit, *channel.partners(unit)})
        expanded = [
            (score + math.log(conditional(model, prefix, unit, option)), prefix + (option,))
            for score, prefix in beams
            for option in options
        ]
        expanded.sort(key=lambda beam: (-beam[0], beam[1]))
        beams = expanded[:beam_width]
    return join_units(beams[0][1])


def save_model(model: MixtureCorrectorModel, path: str) -> None:
    """Versioned JSON container; identical models produce identical bytes."""
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "order": model.lm.order,
        "lm_smoothing_k": model.lm.smoothing_k,
        "channel_smoothing_k": model.channel.smoothing_k,
        "mixing_weight": model.mixing_weight,
        "stage": model.stage.value,
        "vocab": sorted(model.lm.vocab),
        "lm_counts": {key: dict(c) for key, c in model.lm.counts.items()},
        "channel_counts": {key: dict(c) for key, c in model.channel.counts.items()},
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, sort_keys=True, ensure_ascii=True, separators=(",", ":"))
        handle.write("\n")


def load_model(path: str) -> MixtureCorrectorModel:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not a model container: {exc}") from None
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise FormatError(f"{path}: not a {MODEL_FORMAT} container")
    if payload.get("version") != MODEL_VERSION:
        raise FormatError(
            f"{path}: container version {payload.get('version')!r} unsupported, "
            f"expected {MODEL_VERSION}"
        )
    try:
        vocab = frozenset(payload["vocab"])
        lm_counts = {key: Counter(c) for key, c in payload["lm_counts"].items()}
        ch_counts = {key: Counter(c) for key, c in payload["channel_counts"].items()}
        lm = NgramLM(
            order=payload["order"],
            smoothing_k=payload["lm_smoothing_k"],
            counts=lm_counts,
            context_totals={key: sum(c.values()) for key, c in lm_counts.items()},
            vocab=vocab,
        )
        channel = ConfusionChannel(
            smoothing_k=payload["channel_smoothing_k"],
            counts=ch_counts,
            totals={key: sum(c.values()) for key, c in ch_counts.items()},
            vocab=vocab,
        )
        return MixtureCorrectorModel(
            lm=lm,
            channel=channel,
            mixing_weight=payload["mixing_weight"],
            stage=Stage(payload["stage"]),
        )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"{path}: malformed model container: {exc}") from None

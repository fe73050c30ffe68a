"""Parallel correction corpora: parsing, serialization, unification, splits.

File formats (external interfaces):
  * Parallel TSV — UTF-8, LF line endings, TAB-separated, no header, no
    quoting. Column 1 is the source, columns 2..k are references. A '#' at
    byte 0 marks a comment line.
  * JSONL — one object per line: {"id": str, "source": str,
    "references": [str, ...]}.
"""

from __future__ import annotations

import json
import logging
import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .errors import ConfigError, FormatError, UsageError
from .textnorm import DEFAULT_POLICY, NormalizePolicy, UnitSeq, units_of

logger = logging.getLogger(__name__)


class CorpusTag(Enum):
    CSC = "csc"
    CGC = "cgc"
    ALIGN = "align"
    JOINT = "joint"
    OTHER = "other"


@dataclass(frozen=True)
class ParallelPair:
    """A source sentence with one or more reference corrections."""

    id: str
    source: UnitSeq
    references: tuple[UnitSeq, ...]

    def __post_init__(self) -> None:
        if not self.references:
            raise UsageError(f"pair {self.id!r} has no references")


@dataclass(frozen=True)
class Corpus:
    """An immutable list of pairs sharing one normalization policy."""

    name: str
    tag: CorpusTag
    pairs: tuple[ParallelPair, ...]
    policy: NormalizePolicy = DEFAULT_POLICY

    def __post_init__(self) -> None:
        ids = [p.id for p in self.pairs]
        if len(set(ids)) != len(ids):
            dupe = next(i for i, c in Counter(ids).items() if c > 1)
            raise UsageError(f"corpus {self.name!r} has duplicate pair id {dupe!r}")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[ParallelPair]:
        return iter(self.pairs)


def _parse_tsv_line(line: str, lineno: int, policy: NormalizePolicy, pair_id: str) -> ParallelPair:
    cols = line.split("\t")
    if len(cols) < 2:
        raise FormatError(
            f"line {lineno}: expected a source and at least one reference "
            f"(got {len(cols)} column{'s' if len(cols) != 1 else ''})"
        )
    return ParallelPair(
        id=pair_id,
        source=units_of(cols[0], policy),
        references=tuple(units_of(c, policy) for c in cols[1:]),
    )


def _parse_jsonl_line(line: str, lineno: int, policy: NormalizePolicy) -> ParallelPair:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"line {lineno}: expected a JSON object")
    try:
        pair_id, source, refs = obj["id"], obj["source"], obj["references"]
    except KeyError as exc:
        raise FormatError(f"line {lineno}: missing key {exc.args[0]!r}") from exc
    if not isinstance(pair_id, str) or not isinstance(source, str):
        raise FormatError(f"line {lineno}: 'id' and 'source' must be strings")
    if not isinstance(refs, list) or not refs or not all(isinstance(r, str) for r in refs):
        raise FormatError(f"line {lineno}: 'references' must be a non-empty list of strings")
    return ParallelPair(
        id=pair_id,
        source=units_of(source, policy),
        references=tuple(units_of(r, policy) for r in refs),
    )


def parse_parallel(
    stream: Iterable[str],
    format: str = "tsv",
    policy: NormalizePolicy = DEFAULT_POLICY,
    name: str = "corpus",
    tag: CorpusTag = CorpusTag.OTHER,
) -> Corpus:
    """Parse a parallel corpus from an iterable of lines.

    Malformed lines raise FormatError with the 1-based line number. An empty
    stream yields an empty corpus (not an error).
    """
    if format not in ("tsv", "jsonl"):
        raise UsageError(f"unknown corpus format {format!r}")
    pairs: list[ParallelPair] = []
    seen_ids: set[str] = set()
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if format == "tsv":
            if line.startswith("#"):
                continue
            pair = _parse_tsv_line(line, lineno, policy, pair_id=str(len(pairs)))
        else:
            pair = _parse_jsonl_line(line, lineno, policy)
        if pair.id in seen_ids:
            raise FormatError(f"line {lineno}: duplicate pair id {pair.id!r}")
        seen_ids.add(pair.id)
        pairs.append(pair)
    return Corpus(name=name, tag=tag, pairs=tuple(pairs), policy=policy)


def serialize_parallel(corpus: Corpus, format: str = "tsv") -> str:
    """Inverse of parse_parallel. TSV drops ids (they are regenerated on parse);
    JSONL round-trips losslessly."""
    if format == "tsv":
        lines = ["\t".join([p.source.text, *(r.text for r in p.references)]) for p in corpus]
    elif format == "jsonl":
        lines = [
            json.dumps(
                {"id": p.id, "source": p.source.text, "references": [r.text for r in p.references]},
                ensure_ascii=False,
            )
            for p in corpus
        ]
    else:
        raise UsageError(f"unknown corpus format {format!r}")
    return "".join(line + "\n" for line in lines)


def exact_duplicate_count(corpus: Corpus) -> int:
    """Number of pairs that are exact (source, references) repeats of an earlier pair."""
    seen: Counter = Counter()
    for p in corpus:
        seen[(p.source.text, tuple(r.text for r in p.references))] += 1
    return sum(c - 1 for c in seen.values())


def unify(parts: Sequence[Corpus], name: str = "joint") -> Corpus:
    """Concatenate corpora into one joint corpus.

    Duplicates across parts are kept: training objectives weight pairs by
    empirical frequency, so deduplication would silently reweight the
    mixture. Exact-duplicate counts are logged, not removed. Pair ids are
    re-namespaced by source corpus name.
    """
    if not parts:
        raise UsageError("unify needs at least one corpus")
    policy = parts[0].policy
    for part in parts[1:]:
        if part.policy != policy:
            raise ConfigError(
                f"corpus {part.name!r} was normalized under a different policy "
                f"than {parts[0].name!r}; unify requires one shared policy"
            )
    # Re-namespace ids; disambiguate repeated part names so ids stay unique.
    name_counts = Counter(part.name for part in parts)
    seen_names: Counter = Counter()
    pairs: list[ParallelPair] = []
    for part in parts:
        ns = part.name
        if name_counts[part.name] > 1:
            ns = f"{part.name}#{seen_names[part.name]}"
        seen_names[part.name] += 1
        for p in part:
            pairs.append(ParallelPair(id=f"{ns}:{p.id}", source=p.source, references=p.references))
    joint = Corpus(name=name, tag=CorpusTag.JOINT, pairs=tuple(pairs), policy=policy)
    dupes = exact_duplicate_count(joint)
    if dupes:
        logger.info("unify(%s): %d exact duplicate pair(s) kept", name, dupes)
    return joint


def split(corpus: Corpus, heldout_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Deterministic disjoint train/heldout partition.

    Heldout size is round(fraction * N); pair order within each part follows
    the original corpus order.
    """
    if not 0.0 < heldout_fraction < 1.0:
        raise UsageError(f"heldout_fraction must be in (0, 1), got {heldout_fraction}")
    if len(corpus) == 0:
        raise UsageError("cannot split an empty corpus")
    n = len(corpus)
    n_heldout = int(n * heldout_fraction + 0.5)
    indices = list(range(n))
    random.Random(seed).shuffle(indices)
    heldout_idx = sorted(indices[:n_heldout])
    train_idx = sorted(indices[n_heldout:])
    train = Corpus(
        name=f"{corpus.name}-train",
        tag=corpus.tag,
        pairs=tuple(corpus.pairs[i] for i in train_idx),
        policy=corpus.policy,
    )
    heldout = Corpus(
        name=f"{corpus.name}-heldout",
        tag=corpus.tag,
        pairs=tuple(corpus.pairs[i] for i in heldout_idx),
        policy=corpus.policy,
    )
    return train, heldout

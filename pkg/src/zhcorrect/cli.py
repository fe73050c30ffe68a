"""Batch commands: score-csc, score-cgc, train, correct, extract-edits.

Every command is deterministic given its inputs, flags, and seed. Whenever
a command writes an artifact via --out it also writes a sidecar
``<out>.manifest.json`` recording the command, a hash of the effective
configuration, sha256 digests of the inputs, the seed, the toolkit version,
and wall time. Exit codes: 0 success, 2 usage or data error, 1 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Callable, Iterable, Sequence, TypeVar

from . import __version__
from .alignment import align
from .corpus import Corpus, CorpusTag, parse_parallel, unify
from .edits import (
    EditSet,
    GoldEditCorpus,
    MatchCounts,
    MergePolicy,
    extract_edits,
    format_edit_records,
    parse_edit_file,
)
from .errors import FormatError, UsageError, ZhcorrectError
from .metrics import ScoreReport, f_beta, macro_average, precision_recall, score_csc, sentence_edit_counts
from .model import (
    decode,
    dataset_objective,
    fit_stage,
    initial_model,
    load_model,
    save_model,
    stage1_config,
    stage2_config,
    stage_heldout,
)
from .textnorm import (
    DEFAULT_POLICY,
    NormalizePolicy,
    RAW_POLICY,
    WIDTHFOLD_POLICY,
    UnitSeq,
    units_of,
)

_POLICIES: dict[str, NormalizePolicy] = {
    "default": DEFAULT_POLICY,
    "none": RAW_POLICY,
    "widthfold": WIDTHFOLD_POLICY,
}

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_hash: str
    inputs: dict[str, str]
    seed: int
    version: str
    wall_time_s: float

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "inputs": self.inputs,
            "seed": self.seed,
            "version": self.version,
            "wall_time_s": self.wall_time_s,
        }


def _sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return "sha256:" + digest.hexdigest()


def _config_hash(options: dict) -> str:
    canon = json.dumps(options, sort_keys=True, ensure_ascii=True, default=str)
    return "sha256:" + hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _write_manifest(
    out_path: str,
    command: str,
    options: dict,
    input_paths: Sequence[str],
    seed: int,
    started: float,
) -> None:
    manifest = RunManifest(
        command=command,
        config_hash=_config_hash(options),
        inputs={p: _sha256_file(p) for p in input_paths},
        seed=seed,
        version=__version__,
        wall_time_s=round(time.perf_counter() - started, 6),
    )
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest.to_json_dict(), handle, sort_keys=True, ensure_ascii=True, indent=2)
        handle.write("\n")


def _options_of(args: argparse.Namespace) -> dict:
    skip = {"func", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _pmap(func: Callable[[T], R], items: Sequence[T], jobs: int) -> list[R]:
    """Order-preserving map, fanned out over processes when jobs > 1."""
    if jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {jobs}")
    if jobs == 1 or len(items) <= 1:
        return [func(item) for item in items]
    chunk = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=chunk))


def _default_jobs() -> int:
    raw = os.environ.get("ZHCORRECT_JOBS", "").strip()
    if not raw:
        return 1
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ZHCORRECT_JOBS must be an integer, got {raw!r}") from None


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path} is not UTF-8: {exc}") from None


def _open_corpus(path: str, fmt: str, policy: NormalizePolicy, tag: CorpusTag, name: str) -> Corpus:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return parse_parallel(handle, format=fmt, policy=policy, name=name, tag=tag)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _table(report: ScoreReport) -> str:
    f_label = f"F{report.beta:g}"
    headers = ("dataset", "n", "precision", "recall", f_label)
    row = (
        report.dataset or "-",
        str(report.n_sentences),
        f"{report.precision:.4f}",
        f"{report.recall:.4f}",
        f"{report.f_beta:.4f}",
    )
    widths = [max(len(h), len(r)) for h, r in zip(headers, row)]
    head = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    body = "  ".join(r.ljust(w) for r, w in zip(row, widths))
    return f"{head}\n{body}\n"


def _report_json(report: ScoreReport) -> str:
    return json.dumps(report.to_json_dict(), sort_keys=True, ensure_ascii=False) + "\n"


def _finish_report(args: argparse.Namespace, report: ScoreReport, inputs: list[str], started: float) -> int:
    sys.stdout.write(_table(report))
    if args.out is None:
        sys.stdout.write(_report_json(report))
    else:
        _emit(_report_json(report), args.out)
        _write_manifest(
            args.out, args.command, _options_of(args), inputs, getattr(args, "seed", 0), started
        )
    return 0


def cmd_score_csc(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    if args.macro:
        values = []
        for path in args.files:
            try:
                with open(path, "r", encoding="utf-8") as handle:
                    payload = json.load(handle)
            except OSError as exc:
                raise UsageError(f"cannot read {path}: {exc}") from None
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}: not a report JSON: {exc}") from None
            if not isinstance(payload, dict) or "f_beta" not in payload:
                raise FormatError(f"{path}: report JSON lacks an f_beta field")
            values.append(payload["f_beta"])
        print(f"Avg. F1 {macro_average(values):.4f}")
        return 0

    if len(args.files) != 2:
        raise UsageError("score-csc takes HYP_FILE GOLD_FILE (or --macro REPORT...)")
    hyp_path, gold_path = args.files
    policy = _POLICIES[args.normalize]
    gold = _open_corpus(gold_path, args.format, policy, CorpusTag.CSC, Path(gold_path).stem)
    hyp_lines = _read_lines(hyp_path)
    if len(hyp_lines) != len(gold.pairs):
        raise UsageError(
            f"line count mismatch: {hyp_path} has {len(hyp_lines)} hypotheses, "
            f"{gold_path} has {len(gold.pairs)} pairs"
        )
    items = [
        (pair.source, pair.references[0], units_of(line, policy))
        for pair, line in zip(gold.pairs, hyp_lines)
    ]
    report = score_csc(items, dataset=args.dataset or gold.name)
    return _finish_report(args, report, [hyp_path, gold_path], started)


def _cgc_sentence(task: tuple[UnitSeq, UnitSeq, tuple[EditSet, ...]], beta: float, merge: MergePolicy) -> MatchCounts:
    source, hypothesis, refs = task
    return sentence_edit_counts(source, hypothesis, refs, beta=beta, merge=merge)


def cmd_score_cgc(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    policy = _POLICIES[args.normalize]
    merge = MergePolicy(args.merge_policy)
    hyp = _open_corpus(args.hyp_file, args.format, policy, CorpusTag.CGC, Path(args.hyp_file).stem)
    with open(args.gold_edits, "r", encoding="utf-8") as handle:
        gold = parse_edit_file(handle)
    index = gold.by_source()
    tasks = []
    for pair in hyp.pairs:
        record = index.get(pair.source.text)
        if record is None:
            raise UsageError(
                f"pair {pair.id}: no gold record for source {pair.source.text!r}"
            )
        tasks.append((pair.source, pair.references[0], record.refs))
    if not tasks:
        raise UsageError(f"{args.hyp_file} holds no sentences")
    counts_per_sentence = _pmap(
        partial(_cgc_sentence, beta=args.beta, merge=merge), tasks, args.jobs
    )
    total = MatchCounts()
    for counts in counts_per_sentence:
        total = total + counts
    p, r = precision_recall(total)
    report = ScoreReport(
        task="cgc",
        dataset=args.dataset or Path(args.gold_edits).stem,
        beta=args.beta,
        precision=p,
        recall=r,
        f_beta=f_beta(p, r, args.beta),
        counts=total,
        n_sentences=len(tasks),
    )
    return _finish_report(args, report, [args.hyp_file, args.gold_edits], started)


def cmd_train(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    policy = _POLICIES[args.normalize]
    stage1_corpus = _open_corpus(
        args.stage1, args.format, policy, CorpusTag.ALIGN, Path(args.stage1).stem
    )
    parts = [
        _open_corpus(path, args.format, policy, CorpusTag.OTHER, Path(path).stem)
        for path in args.stage2
    ]
    joint = unify(parts, name="joint")
    common = dict(
        order=args.order,
        smoothing_k=args.smoothing_k,
        heldout_fraction=args.heldout_fraction,
        seed=args.seed,
    )
    config1 = stage1_config(**common)
    config2 = stage2_config(**common)
    model0 = initial_model(order=args.order, smoothing_k=args.smoothing_k)
    model1 = fit_stage(model0, stage1_corpus, config1)
    model2 = fit_stage(model1, joint, config2)
    obj1 = dataset_objective(model1, stage_heldout(stage1_corpus, config1))
    heldout2 = stage_heldout(joint, config2)
    print(f"stage-1 heldout objective: {obj1:.6f}")
    print(f"stage-2 heldout objective: {dataset_objective(model2, heldout2):.6f}")
    print(f"mixing weight: {model2.mixing_weight:g}")
    save_model(model2, args.out)
    _write_manifest(
        args.out,
        args.command,
        _options_of(args),
        [args.stage1, *args.stage2],
        args.seed,
        started,
    )
    return 0


def _correct_one(line: str, model, beam: int, policy: NormalizePolicy) -> str:
    return decode(model, units_of(line, policy), beam_width=beam).text


def cmd_correct(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    model = load_model(args.model)
    policy = _POLICIES[args.normalize]
    lines = _read_lines(args.input)
    corrected = _pmap(
        partial(_correct_one, model=model, beam=args.beam, policy=policy), lines, args.jobs
    )
    _emit("".join(line + "\n" for line in corrected), args.out)
    if args.out is not None:
        _write_manifest(
            args.out, args.command, _options_of(args), [args.model, args.input],
            getattr(args, "seed", 0), started,
        )
    return 0


def cmd_align(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    policy = _POLICIES[args.normalize]
    path = align(units_of(args.source, policy), units_of(args.target, policy))
    payload = {
        "source": path.src.text,
        "target": path.tgt.text,
        "total_cost": path.total_cost,
        "ops": [
            {"kind": op.kind.value, "src_index": op.src_index, "tgt_index": op.tgt_index}
            for op in path.ops
        ],
    }
    _emit(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", args.out)
    if args.out is not None:
        _write_manifest(
            args.out, args.command, _options_of(args), [], getattr(args, "seed", 0), started
        )
    return 0


def cmd_extract_edits(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    policy = _POLICIES[args.normalize]
    merge = MergePolicy(args.merge_policy)
    corpus = _open_corpus(
        args.parallel, args.format, policy, CorpusTag.OTHER, Path(args.parallel).stem
    )
    records = []
    for pair in corpus.pairs:
        refs = tuple(
            extract_edits(align(pair.source, ref), merge, source_id=pair.id, ref_id=j)
            for j, ref in enumerate(pair.references)
        )
        records.append((pair.source, refs))
    _emit(format_edit_records(records), args.out)
    if args.out is not None:
        _write_manifest(
            args.out, args.command, _options_of(args), [args.parallel],
            getattr(args, "seed", 0), started,
        )
    return 0


def _add_common(
    sub: argparse.ArgumentParser, *, fmt: bool = True, normalize: bool = True, out: bool = True
) -> None:
    if fmt:
        sub.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    if normalize:
        sub.add_argument("--normalize", choices=("default", "none", "widthfold"), default="default")
    if out:
        sub.add_argument("--out", default=None, help="artifact path; adds a .manifest.json sidecar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zhcorrect",
        description="Correction toolkit: scoring, edit extraction, training, decoding.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser(
        "score-csc", help="sentence-level F1 of plain hypothesis lines against a parallel file"
    )
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--macro", action="store_true", help="average f_beta over report JSONs")
    p.add_argument("--dataset", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_score_csc)

    p = commands.add_parser(
        "score-cgc", help="edit-level F0.5 of a source+hypothesis parallel file against gold edits"
    )
    p.add_argument("hyp_file")
    p.add_argument("gold_edits")
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--merge-policy", choices=("maximal-runs", "none"), default="maximal-runs")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--dataset", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_score_cgc)

    p = commands.add_parser("train", help="fit the two curriculum stages and save the model")
    p.add_argument("--stage1", required=True, metavar="FILE")
    p.add_argument("--stage2", required=True, nargs="+", metavar="FILE")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--smoothing-k", type=float, default=0.01)
    p.add_argument("--heldout-fraction", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model path; adds a .manifest.json sidecar")
    _add_common(p, out=False)
    p.set_defaults(func=cmd_train)

    p = commands.add_parser("correct", help="decode plain input lines with a saved model")
    p.add_argument("model")
    p.add_argument("input")
    p.add_argument("--beam", type=int, default=8)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    _add_common(p, fmt=False)
    p.set_defaults(func=cmd_correct)

    p = commands.add_parser("extract-edits", help="turn a parallel file into a gold edit file")
    p.add_argument("parallel")
    p.add_argument("--merge-policy", choices=("maximal-runs", "none"), default="maximal-runs")
    _add_common(p)
    p.set_defaults(func=cmd_extract_edits)

    p = commands.add_parser("align", help="print the alignment between two sentences as JSON")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--costs", choices=("unit",), default="unit")
    _add_common(p, fmt=False)
    p.set_defaults(func=cmd_align)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        return args.func(args)
    except ZhcorrectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


def main_entry() -> None:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(main())

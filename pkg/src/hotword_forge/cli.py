"""Command-line interface.

Subcommands: common, index, filter, gen-train-bias, gen-test-bias, score,
sweep, prompt. Corpora are TSV (utt_id<TAB>text), structured outputs are
JSONL/JSON/CSV. Every command is deterministic given its flags and --seed;
output rows are sorted by utterance id regardless of execution order.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .biasgen import (
    TrainBiasParams,
    build_rare_vocabulary,
    build_test_bias,
    derive_seed,
    sample_train_bias,
)
from .corpus import (
    read_bias_jsonl,
    read_corpus_tsv,
    read_jsonl,
    write_bias_jsonl,
    write_jsonl,
)
from .filtering import (
    SELECTION_MODES,
    VARIANTS,
    FilterConfig,
    FilterResult,
    filter_oracle,
    run_filter,
)
from .harness import CorruptionModel, run_sweep, sweep_to_csv
from .ngram_index import BiasingList, build_index, load_biasing_list
from .prompt import PromptTemplate, render_prompt, render_training_record
from .scoring import INSERTION_ATTRIBUTIONS, ScoreReport, aggregate, score
from .textnorm import compute_common_words, load_common_words, save_common_words


class CliError(Exception):
    """User-facing command failure; message goes to stderr, exit code 1."""


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _parse_rates(text: str) -> list[float]:
    rates = [float(part) for part in text.split(",")]
    if len(rates) != 4:
        raise CliError("--rates needs four comma-separated values: sub,del,ins,word_del")
    return rates


def _pct(rate: float | None) -> float | None:
    return None if rate is None else round(100.0 * rate, 2)


def _pct_str(rate: float | None) -> str:
    return "undefined" if rate is None else f"{100.0 * rate:.2f}"


def _empty_result(variant: str) -> FilterResult:
    # Mirrors what filter_oracle returns for an empty biasing list.
    if variant == "f3":
        return FilterResult(selected=(), scores=(), matched_tokens=())
    return FilterResult(selected=(), scores=())


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_common(args: argparse.Namespace) -> int:
    corpus = read_corpus_tsv(args.corpus)
    common = compute_common_words(corpus, args.k, source_corpus_id=str(args.corpus))
    save_common_words(common, args.output)
    return 0


def cmd_index(args: argparse.Namespace) -> int:
    biasing_list = load_biasing_list(args.bias_list)
    index = build_index(biasing_list)
    payload = {
        "entries": list(biasing_list.surfaces),
        "grams": {gram: sorted(ids) for gram, ids in sorted(index.grams.items())},
    }
    _write_text(args.output, json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    return 0


def cmd_filter(args: argparse.Namespace) -> int:
    utterances = read_corpus_tsv(args.hyps)
    common = load_common_words(args.common) if args.common else None
    cfg = FilterConfig(
        variant=args.variant,
        similarity_threshold=args.threshold,
        top_k=args.top_k,
        common=common,
        selection=args.selection,
    )

    per_utt: dict[str, BiasingList] | None = None
    global_list: BiasingList | None = None
    global_index = None
    if args.bias_list:
        global_list = load_biasing_list(args.bias_list)
        if len(global_list) == 0:
            raise CliError(f"empty biasing list: {args.bias_list}")
        if not args.oracle:
            global_index = build_index(global_list)
    else:
        per_utt = read_bias_jsonl(args.bias_jsonl)
        missing = sorted(u.utt_id for u in utterances if u.utt_id not in per_utt)
        if missing:
            raise CliError(
                "no biasing list for utterance ids: " + " ".join(missing)
            )

    records = []
    for utt in sorted(utterances, key=lambda u: u.utt_id):
        if per_utt is not None:
            biasing_list = per_utt[utt.utt_id]
            if args.oracle:
                result = filter_oracle(utt.tokens, biasing_list, cfg)
            elif len(biasing_list) == 0:
                result = _empty_result(cfg.variant)
            else:
                result = run_filter(utt.tokens, build_index(biasing_list), cfg)
        elif args.oracle:
            assert global_list is not None
            result = filter_oracle(utt.tokens, global_list, cfg)
        else:
            result = run_filter(utt.tokens, global_index, cfg)
        records.append(
            {
                "utt_id": utt.utt_id,
                "variant": cfg.variant,
                "hotwords": list(result.surfaces),
                "scores": None if result.scores is None else list(result.scores),
                "matched_tokens": None
                if result.matched_tokens is None
                else list(result.matched_tokens),
                "prompt": render_prompt(result.surfaces),
            }
        )
    write_jsonl(records, args.output)
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    refs = read_corpus_tsv(args.refs)
    hyps = read_corpus_tsv(args.hyps)
    ref_ids = {u.utt_id for u in refs}
    hyp_ids = {u.utt_id for u in hyps}
    if ref_ids != hyp_ids:
        only_ref = sorted(ref_ids - hyp_ids)
        only_hyp = sorted(hyp_ids - ref_ids)
        raise CliError(
            "reference/hypothesis id mismatch"
            + (f"; only in refs: {' '.join(only_ref)}" if only_ref else "")
            + (f"; only in hyps: {' '.join(only_hyp)}" if only_hyp else "")
        )
    bias_map = read_bias_jsonl(args.bias_jsonl) if args.bias_jsonl else {}
    if args.bias_jsonl:
        missing = sorted(ref_ids - set(bias_map))
        if missing:
            raise CliError("no biasing list for utterance ids: " + " ".join(missing))

    hyp_by_id = {u.utt_id: u for u in hyps}
    ordered = sorted(refs, key=lambda u: u.utt_id)
    reports: list[tuple[str, ScoreReport]] = [
        (
            ref.utt_id,
            score(
                ref,
                hyp_by_id[ref.utt_id],
                bias_map.get(ref.utt_id),
                insertion_attribution=args.insertion_attribution,
            ),
        )
        for ref in ordered
    ]
    agg = aggregate(rep for _, rep in reports)
    payload: dict = {
        "wer": _pct(agg.wer),
        "u_wer": _pct(agg.u_wer),
        "b_wer": _pct(agg.b_wer),
        "counts": agg.counts_dict(),
        "utterances": len(reports),
    }
    if args.per_utt:
        payload["per_utterance"] = [
            {
                "utt_id": utt_id,
                "wer": _pct(rep.wer),
                "u_wer": _pct(rep.u_wer),
                "b_wer": _pct(rep.b_wer),
                "counts": rep.counts_dict(),
            }
            for utt_id, rep in reports
        ]
    _write_text(args.output, json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    print(
        f"WER {_pct_str(agg.wer)} | U-WER {_pct_str(agg.u_wer)} | "
        f"B-WER {_pct_str(agg.b_wer)} ({len(reports)} utterances)",
        file=sys.stderr,
    )
    return 0


def cmd_gen_train_bias(args: argparse.Namespace) -> int:
    corpus = read_corpus_tsv(args.corpus)
    params = TrainBiasParams(
        p_keep=args.p_keep,
        n_phrases=args.n_phrases,
        n_order=args.n_order,
        seed=args.seed,
    )
    rng = random.Random(args.seed)
    records = []
    for start in range(0, len(corpus), args.batch_size):
        batch = corpus[start : start + args.batch_size]
        biasing_list = sample_train_bias(batch, params, rng=rng)
        records.append(
            {
                "batch_index": start // args.batch_size,
                "utt_ids": [u.utt_id for u in batch],
                "hotwords": list(biasing_list.surfaces),
            }
        )
    write_jsonl(records, args.output)
    return 0


def cmd_gen_test_bias(args: argparse.Namespace) -> int:
    refs = read_corpus_tsv(args.refs)
    common = load_common_words(args.common)
    vocab = build_rare_vocabulary(read_corpus_tsv(args.vocab_corpus), common)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for n in args.sizes:
        lists = {
            ref.utt_id: build_test_bias(
                ref, vocab, common, n, derive_seed(args.seed, "bias", ref.utt_id, n)
            )
            for ref in refs
        }
        path = out_dir / f"bias_n{n}.jsonl"
        write_bias_jsonl(lists, path)
        print(path, file=sys.stderr)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    refs = read_corpus_tsv(args.refs)
    common = load_common_words(args.common)
    vocab = build_rare_vocabulary(read_corpus_tsv(args.vocab_corpus), common)
    rates = args.rates
    model = CorruptionModel(
        char_sub_rate=rates[0],
        char_del_rate=rates[1],
        char_ins_rate=rates[2],
        word_del_rate=rates[3],
        seed=args.seed,
    )
    trace_records: list[dict] = []
    report = run_sweep(
        refs,
        vocab,
        common,
        sizes=args.sizes,
        variants=args.variants,
        model=model,
        similarity_threshold=args.threshold,
        top_k=args.top_k,
        selection=args.selection,
        trace_sink=trace_records.append if args.trace else None,
    )
    sweep_to_csv(report, args.output)
    if args.trace:
        write_jsonl(trace_records, args.trace)
    return 0


def cmd_prompt(args: argparse.Namespace) -> int:
    template = PromptTemplate(base=args.base, hotword_clause=args.clause)
    records_in = _read_hotword_records(args.hotwords_jsonl)
    transcripts = None
    if args.transcripts:
        transcripts = {u.utt_id: u for u in read_corpus_tsv(args.transcripts)}
        missing = sorted(
            r["utt_id"] for r in records_in if r["utt_id"] not in transcripts
        )
        if missing:
            raise CliError("no transcript for utterance ids: " + " ".join(missing))
    out = []
    for record in sorted(records_in, key=lambda r: r["utt_id"]):
        prompt = render_prompt(record["hotwords"], template, args.separator)
        row = {"utt_id": record["utt_id"], "prompt": prompt}
        if transcripts is not None:
            row["record"] = render_training_record(
                prompt, transcripts[record["utt_id"]].text
            )
        out.append(row)
    write_jsonl(out, args.output)
    return 0


def _read_hotword_records(path: str) -> list[dict]:
    records = read_jsonl(path)
    for record in records:
        if "utt_id" not in record or "hotwords" not in record:
            raise CliError(f"{path}: records need utt_id and hotwords fields")
    return records


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hotword-forge",
        description="Hotword filtering, biasing-list generation, and "
        "WER/U-WER/B-WER scoring for contextual ASR.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("common", help="compute the common-word list from a corpus")
    p.add_argument("corpus", help="TSV corpus (utt_id<TAB>text)")
    p.add_argument("--k", type=int, default=5000, help="words to keep (default 5000)")
    p.add_argument("-o", "--output", required=True, help="output word list file")
    p.set_defaults(func=cmd_common)

    p = sub.add_parser("index", help="build and dump the 2-gram index")
    p.add_argument("--bias-list", required=True, help="biasing list file, one entry per line")
    p.add_argument("-o", "--output", default=None, help="output JSON (default stdout)")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("filter", help="select hotwords for each coarse-decoded utterance")
    p.add_argument("hyps", help="TSV of coarse decodes")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--bias-list", help="global biasing list file")
    group.add_argument("--bias-jsonl", help="per-utterance lists (utt_id/hotwords JSONL)")
    p.add_argument("--variant", choices=VARIANTS, default="f3")
    p.add_argument("--threshold", type=float, default=0.95)
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--common", help="common-word list file (required for f2/f3)")
    p.add_argument("--selection", choices=SELECTION_MODES, default="union")
    p.add_argument(
        "--oracle",
        action="store_true",
        help="use the brute-force reference pipeline instead of the index",
    )
    p.add_argument("-o", "--output", required=True, help="output JSONL")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("score", help="WER / U-WER / B-WER against references")
    p.add_argument("refs", help="TSV reference corpus")
    p.add_argument("hyps", help="TSV hypothesis corpus")
    p.add_argument("--bias-jsonl", help="per-utterance biasing lists")
    p.add_argument("--per-utt", action="store_true", help="include per-utterance detail")
    p.add_argument(
        "--insertion-attribution",
        choices=INSERTION_ATTRIBUTIONS,
        default="hypothesis",
    )
    p.add_argument("-o", "--output", default=None, help="output JSON (default stdout)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("gen-train-bias", help="sample training biasing lists per batch")
    p.add_argument("corpus", help="TSV training transcripts")
    p.add_argument("--batch-size", type=int, default=4)
    p.add_argument("--p-keep", type=float, default=0.5)
    p.add_argument("--n-phrases", type=int, default=1)
    p.add_argument("--n-order", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="output JSONL")
    p.set_defaults(func=cmd_gen_train_bias)

    p = sub.add_parser("gen-test-bias", help="build per-utterance artificial test lists")
    p.add_argument("refs", help="TSV reference corpus")
    p.add_argument("--common", required=True, help="common-word list file")
    p.add_argument("--vocab-corpus", required=True, help="TSV corpus supplying the rare vocabulary")
    p.add_argument(
        "--sizes",
        type=_parse_int_list,
        default=[100, 500, 1000, 2000],
        help="comma-separated distractor counts (default 100,500,1000,2000)",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True, help="directory for bias_n<N>.jsonl files")
    p.set_defaults(func=cmd_gen_test_bias)

    p = sub.add_parser("sweep", help="corrupt references and report filter recall/precision")
    p.add_argument("refs", help="TSV reference corpus")
    p.add_argument("--common", required=True)
    p.add_argument("--vocab-corpus", required=True)
    p.add_argument("--sizes", type=_parse_int_list, default=[100, 500, 1000, 2000])
    p.add_argument(
        "--variants",
        type=lambda s: [v.strip() for v in s.split(",") if v.strip()],
        default=list(VARIANTS),
    )
    p.add_argument(
        "--rates",
        type=_parse_rates,
        default=[0.05, 0.02, 0.02, 0.0],
        help="char sub,del,ins and word del rates (default 0.05,0.02,0.02,0)",
    )
    p.add_argument("--threshold", type=float, default=0.95)
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--selection", choices=SELECTION_MODES, default="union")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="optional per-utterance JSONL trace")
    p.add_argument("-o", "--output", required=True, help="output CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("prompt", help="render LLM prompts from hotword records")
    p.add_argument("hotwords_jsonl", help="JSONL with utt_id and hotwords fields")
    p.add_argument("--transcripts", help="TSV transcripts; adds full training records")
    p.add_argument("--separator", default=" ")
    p.add_argument("--base", default=PromptTemplate().base)
    p.add_argument("--clause", default=PromptTemplate().hotword_clause)
    p.add_argument("-o", "--output", required=True, help="output JSONL")
    p.set_defaults(func=cmd_prompt)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

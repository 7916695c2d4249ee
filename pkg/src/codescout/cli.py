"""Command-line interface tying the detection pipeline together.

Subcommands::

    profile      compute (or validate) a coset weight profile, emit JSON
    detect-np    fixed-sample decision on a bit stream (read or generated)
    detect-seq   sequential decision on a bit stream (read or generated)
    sample-size  Gaussian-approximation word count for target performance
    curves       detection-vs-M or ROC data as CSV (optional MC overlay)
    table2       fixed-sample vs sequential operating-point comparison table

Exit codes: 0 on success, 2 for configuration errors, 3 when a requested
exhaustive computation exceeds its enumeration limit.  Given a ``--seed``,
every command is deterministic and produces byte-identical output files on
re-runs.  Bit streams are packed big-endian within bytes: stream bit
``i*n + j`` is coordinate ``j`` of word ``i``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .codes import (
    LinearCode,
    build_syndrome_table,
    load_code_config,
    parse_code_spec,
    syndrome,
)
from .coset import (
    CosetWeightProfile,
    export_profile,
    import_profile,
    profile_direct,
    profile_dual_transform,
)
from .errors import CodescoutError, ConfigError, EnumerationLimitError
from .glrt import (
    block_pmf,
    detection_probability,
    np_rule,
    required_codewords,
    word_pmf_alt,
    word_pmf_null,
)
from .sequential import run_sprt, sprt_plan
from .simulate import (
    Hypothesis,
    _noisy_codewords,
    _random_words,
    glrt_statistic,
    run_np_trials,
    trial_rng,
)

_TABLE2_DEFAULT_TARGETS = "0.5787,0.6953,0.7738,0.8980,0.9218,0.9561,0.9962,0.9973"
_SCAN_CAP = 20000

# ---------------------------------------------------------------------------
# Bit-stream files


def write_bit_stream(words, n: int, destination: str | Path) -> None:
    """Pack words into a byte file (stream bit i*n+j = coordinate j of word i)."""
    bits = []
    for w in words:
        value = int(w)
        bits.extend((value >> j) & 1 for j in range(n))
    array = np.array(bits, dtype=np.uint8)
    Path(destination).write_bytes(np.packbits(array).tobytes())


def read_bit_stream(source: str | Path, n: int, count: int | None = None) -> list[int]:
    """Read packed words back; infers the word count from the file size."""
    try:
        data = Path(source).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read stream: {exc}") from exc
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    available = bits.size // n
    if count is None:
        count = available
    if count < 1:
        raise ConfigError(f"stream holds fewer than one {n}-bit word")
    if count > available:
        raise ConfigError(f"stream holds only {available} words, need {count}")
    shaped = bits[: count * n].reshape(count, n).astype(np.uint64)
    weights = (np.uint64(1) << np.arange(n, dtype=np.uint64))
    if n <= 63:
        return [int(v) for v in np.sum(shaped * weights, axis=1, dtype=np.uint64)]
    return [int(sum(int(b) << j for j, b in enumerate(row))) for row in shaped]


# ---------------------------------------------------------------------------
# Shared resolution helpers


def _resolve_code(args) -> LinearCode | None:
    if getattr(args, "code", None) and getattr(args, "code_file", None):
        raise ConfigError("give either --code or --code-file, not both")
    if getattr(args, "code", None):
        return parse_code_spec(args.code)
    if getattr(args, "code_file", None):
        return load_code_config(args.code_file)
    return None


def _require_code(args) -> LinearCode:
    code = _resolve_code(args)
    if code is None:
        raise ConfigError("a code is required: pass --code FAMILY:PARAMS or --code-file PATH")
    return code


def _resolve_profile(args, code: LinearCode | None) -> CosetWeightProfile:
    if getattr(args, "profile", None):
        profile = import_profile(args.profile)
        if code is not None and (profile.n, profile.k) != (code.n, code.k):
            raise ConfigError(
                f"profile describes an ({profile.n},{profile.k}) code but the "
                f"selected code is ({code.n},{code.k})"
            )
        return profile
    if code is None:
        raise ConfigError("need --profile PATH or a code to compute a profile from")
    method = getattr(args, "profile_method", None) or "auto"
    if method == "auto":
        method = "direct" if code.n <= 20 else "dual"
    if method == "direct":
        return profile_direct(code)
    if method == "dual":
        return profile_dual_transform(code)
    raise ConfigError(f"unknown profile method {method!r}")


def _emit_text(text: str, args) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(payload, args) -> None:
    _emit_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", args)


def _emit_rows(rows: list[dict], args, default_format: str = "csv") -> None:
    fmt = getattr(args, "format", None) or default_format
    if fmt == "json":
        _emit_json(rows, args)
        return
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _format_cell(v) for k, v in row.items()})
    _emit_text(buffer.getvalue(), args)


def _format_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _load_words(args, code: LinearCode, default_generate_m: int | None = None) -> tuple[list[int], str | None]:
    """Words for the detect commands, from a stream file or generated."""
    stream, generate = getattr(args, "stream", None), getattr(args, "generate", None)
    if stream and generate:
        raise ConfigError("give either --stream or --generate, not both")
    if stream:
        return read_bit_stream(stream, code.n, args.M), None
    if generate:
        count = args.M if args.M is not None else default_generate_m
        if count is None:
            raise ConfigError("--generate needs --M (number of words to draw)")
        rng = trial_rng(args.seed, 0)
        if Hypothesis(generate) is Hypothesis.H0:
            words = _random_words(code, count, rng)
        else:
            words = _noisy_codewords(code, count, args.p, rng)
        return [int(w) for w in words], generate
    raise ConfigError("supply an input: --stream PATH or --generate h0|h1")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_profile(args) -> int:
    started = time.perf_counter()
    code = _resolve_code(args)
    if getattr(args, "profile", None):
        profile = import_profile(args.profile)
        if code is not None and (profile.n, profile.k) != (code.n, code.k):
            raise ConfigError("profile file does not match the selected code")
        method = "imported"
    else:
        if code is None:
            raise ConfigError("profile needs --code/--code-file (or --profile to validate)")
        method = args.profile_method or "auto"
        if method == "auto":
            method = "direct" if code.n <= 20 else "dual"
        if method == "direct":
            profile = profile_direct(code)
        elif method == "dual":
            profile = profile_dual_transform(code)
        else:
            raise ConfigError(f"unknown profile method {method!r}")
    if (getattr(args, "format", None) or "json") != "json":
        raise ConfigError("profile output is JSON only")
    buffer = io.StringIO()
    export_profile(profile, buffer)
    _emit_text(buffer.getvalue(), args)
    elapsed = time.perf_counter() - started
    occupied = {l: profile.leader_counts[l] for l in profile.occupied_leader_weights()}
    print(
        f"profile ({method}): n={profile.n} k={profile.k} "
        f"leader-weight counts {occupied} "
        f"code weight distribution {_abbreviate(profile.code_weight_distribution)} "
        f"[{elapsed:.3f}s]",
        file=sys.stderr,
    )
    return 0


def _abbreviate(row) -> str:
    nonzero = {i: c for i, c in enumerate(row) if c}
    if len(nonzero) <= 8:
        return str(nonzero)
    head = list(nonzero.items())[:8]
    return "{" + ", ".join(f"{i}: {c}" for i, c in head) + ", ...}"


def cmd_detect_np(args) -> int:
    code = _require_code(args)
    profile = _resolve_profile(args, code)
    words, generated = _load_words(args, code)
    M = len(words)
    q0 = word_pmf_null(profile)
    q1 = word_pmf_alt(profile, args.p)
    rule = np_rule(block_pmf(q0, M), block_pmf(q1, M), args.alpha)
    table = build_syndrome_table(code)
    statistic = glrt_statistic(table, words)
    tie_break = False
    if statistic < rule.threshold:
        decision = "H1"
    elif statistic == rule.threshold and rule.randomization > 0.0:
        tie_break = True
        draw = trial_rng(args.seed, 2**32).random()
        decision = "H1" if draw < rule.randomization else "H0"
    else:
        decision = "H0"
    _emit_json(
        {
            "command": "detect-np",
            "code": code.label,
            "n": code.n,
            "k": code.k,
            "M": M,
            "p": args.p,
            "alpha": args.alpha,
            "generated": generated,
            "statistic": statistic,
            "threshold": rule.threshold,
            "randomization": rule.randomization,
            "alpha_achieved": rule.alpha_achieved,
            "predicted_pd": rule.predicted_pd,
            "tie_break": tie_break,
            "decision": decision,
        },
        args,
    )
    return 0


def cmd_detect_seq(args) -> int:
    code = _require_code(args)
    profile = _resolve_profile(args, code)
    words, generated = _load_words(args, code, default_generate_m=min(args.max_words, 10_000))
    plan = sprt_plan(word_pmf_null(profile), word_pmf_alt(profile, args.p), args.alpha, args.beta)
    table = build_syndrome_table(code)
    distances = [int(table.leader_weight[syndrome(code, w)]) for w in words]
    state = run_sprt(plan, distances, max_words=args.max_words)
    verdict_labels = {
        "accept_h0": "H0",
        "accept_h1": "H1",
        "pending": "undecided (stream exhausted)",
        "undecided": "undecided (word cap reached)",
    }
    _emit_json(
        {
            "command": "detect-seq",
            "code": code.label,
            "n": code.n,
            "k": code.k,
            "p": args.p,
            "alpha": args.alpha,
            "beta": args.beta,
            "generated": generated,
            "words_available": len(words),
            "words_used": state.words_used,
            "log_likelihood": state.log_likelihood,
            "accept_h1_boundary": plan.log_accept_h1,
            "accept_h0_boundary": plan.log_accept_h0,
            "expected_words_h0": plan.expected_words_h0,
            "expected_words_h1": plan.expected_words_h1,
            "verdict": state.verdict,
            "decision": verdict_labels[state.verdict],
        },
        args,
    )
    return 0


def cmd_sample_size(args) -> int:
    code = _resolve_code(args)
    profile = _resolve_profile(args, code)
    q0 = word_pmf_null(profile)
    q1 = word_pmf_alt(profile, args.p)
    value = required_codewords(q0, q1, args.alpha, args.beta)
    _emit_json(
        {
            "command": "sample-size",
            "code": code.label if code else None,
            "n": profile.n,
            "k": profile.k,
            "p": args.p,
            "alpha": args.alpha,
            "beta": args.beta,
            "mean_distance_h0": q0.mean,
            "std_distance_h0": math.sqrt(q0.variance),
            "mean_distance_h1": q1.mean,
            "std_distance_h1": math.sqrt(q1.variance),
            "required_codewords": value,
            "required_codewords_ceil": math.ceil(value),
        },
        args,
    )
    return 0


def cmd_curves(args) -> int:
    code = _resolve_code(args)
    profile = _resolve_profile(args, code)
    if args.M is None or args.M < 1:
        raise ConfigError("curves needs --M (maximum words for pd-vs-m, fixed for roc)")
    q0 = word_pmf_null(profile)
    q1 = word_pmf_alt(profile, args.p)
    if args.trials and code is None:
        raise ConfigError("Monte Carlo overlay needs a code (--code/--code-file)")

    if args.curve == "pd-vs-m":
        rows = []
        null_block = np.array(q0.probs)
        alt_block = np.array(q1.probs)
        for M in range(1, args.M + 1):
            rule = np_rule(null_block, alt_block, args.alpha)
            row = {"M": M, "alpha": args.alpha, "predicted_pd": rule.predicted_pd}
            if args.trials:
                report = run_np_trials(
                    code, profile, M, args.p, args.alpha, args.trials, args.seed, "h1"
                )
                row["empirical_pd"] = report.empirical_rate
                row["empirical_se"] = report.std_error
            rows.append(row)
            null_block = np.convolve(null_block, q0.probs)
            alt_block = np.convolve(alt_block, q1.probs)
        _emit_rows(rows, args)
        return 0

    if args.curve == "roc":
        Q0 = block_pmf(q0, args.M)
        Q1 = block_pmf(q1, args.M)
        rows = [
            {
                "false_alarm": 0.0,
                "detection": 0.0,
                "segment_slope": float("nan"),
                "M": args.M,
            }
        ]
        cumulative_alpha = 0.0
        cumulative_pd = 0.0
        for i in range(Q0.probs.size):
            p0, p1 = float(Q0.probs[i]), float(Q1.probs[i])
            if p0 <= 0.0 and p1 <= 0.0:
                continue
            cumulative_alpha += p0
            cumulative_pd += p1
            row = {
                "false_alarm": cumulative_alpha,
                "detection": cumulative_pd,
                "segment_slope": p1 / p0 if p0 > 0 else float("inf"),
                "M": args.M,
            }
            if args.trials and 0.0 < cumulative_alpha < 1.0:
                report = run_np_trials(
                    code, profile, args.M, args.p, cumulative_alpha,
                    args.trials, args.seed, "h1",
                )
                row["empirical_pd"] = report.empirical_rate
                row["empirical_se"] = report.std_error
            rows.append(row)
            if cumulative_alpha >= 1.0:
                break
        if args.trials:
            for row in rows:
                row.setdefault("empirical_pd", float("nan"))
                row.setdefault("empirical_se", float("nan"))
        _emit_rows(rows, args)
        return 0

    raise ConfigError(f"unknown curve kind {args.curve!r}")


def cmd_table2(args) -> int:
    code = _resolve_code(args)
    profile = _resolve_profile(args, code)
    try:
        targets = [float(x) for x in args.targets.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --targets list: {exc}") from exc
    if not targets or not all(0.0 < t < 1.0 for t in targets):
        raise ConfigError("targets must be detection probabilities in (0, 1)")
    q0 = word_pmf_null(profile)
    q1 = word_pmf_alt(profile, args.p)
    rows = []
    null_block = np.array(q0.probs)
    alt_block = np.array(q1.probs)
    reached: list[tuple[int, float]] = []
    M = 1
    remaining = sorted(targets)
    while remaining and M <= _SCAN_CAP:
        rule = np_rule(null_block, alt_block, args.alpha)
        while remaining and rule.predicted_pd >= remaining[0]:
            reached.append((M, rule.predicted_pd))
            remaining.pop(0)
        if not remaining:
            break
        null_block = np.convolve(null_block, q0.probs)
        alt_block = np.convolve(alt_block, q1.probs)
        M += 1
    if remaining:
        raise ConfigError(
            f"targets {remaining} not reachable within {_SCAN_CAP} words at p={args.p}"
        )
    by_target = dict(zip(sorted(targets), reached))
    for target in targets:
        words_fixed, pd_at_words = by_target[target]
        plan = sprt_plan(q0, q1, args.alpha, target)
        formula = required_codewords(q0, q1, args.alpha, target)
        rows.append(
            {
                "target_detection": target,
                "alpha": args.alpha,
                "p": args.p,
                "words_fixed_sample": words_fixed,
                "predicted_pd_at_words": pd_at_words,
                "words_formula": formula,
                "words_formula_ceil": math.ceil(formula),
                "expected_words_h1": plan.expected_words_h1,
                "expected_words_h0": plan.expected_words_h0,
            }
        )
    _emit_rows(rows, args)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codescout",
        description=(
            "Decide whether a bit stream is pure noise or noisy traffic from a "
            "known binary linear block code."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--code", help="inline code spec, e.g. hamming:4, rm:2,5, bch:15,7")
    common.add_argument("--code-file", help="JSON code configuration file")
    common.add_argument("--profile", help="import a coset profile JSON file")
    common.add_argument(
        "--profile-method",
        "--method",
        choices=("auto", "direct", "dual"),
        default=None,
        help="how to compute the profile when not imported (default: auto)",
    )
    common.add_argument("--p", type=float, default=0.05, help="BSC crossover probability")
    common.add_argument("--alpha", type=float, default=0.05, help="false-alarm budget")
    common.add_argument("--beta", type=float, default=0.997, help="target detection probability")
    common.add_argument("--M", type=int, default=None, help="words per decision")
    common.add_argument("--trials", type=int, default=0, help="Monte Carlo trials (0 = none)")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=0, help="64-bit RNG seed")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    common.add_argument("--out", help="write output to this file instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("profile", parents=[common], help="compute or validate a coset profile")

    p_np = sub.add_parser("detect-np", parents=[common], help="fixed-sample detection")
    p_np.add_argument("--stream", help="packed bit-stream file to test")
    p_np.add_argument("--generate", choices=("h0", "h1"), help="draw a synthetic stream")

    p_seq = sub.add_parser("detect-seq", parents=[common], help="sequential detection")
    p_seq.add_argument("--stream", help="packed bit-stream file to test")
    p_seq.add_argument("--generate", choices=("h0", "h1"), help="draw a synthetic stream")
    p_seq.add_argument(
        "--max-words", type=int, default=1_000_000, help="cap on words consumed"
    )

    sub.add_parser("sample-size", parents=[common], help="approximate words needed")

    p_curves = sub.add_parser("curves", parents=[common], help="performance curve data")
    p_curves.add_argument(
        "--curve",
        choices=("pd-vs-m", "roc"),
        default="pd-vs-m",
        help="detection vs word count, or ROC at fixed word count",
    )

    p_t2 = sub.add_parser(
        "table2", parents=[common], help="fixed-sample vs sequential word counts"
    )
    p_t2.add_argument(
        "--targets",
        default=_TABLE2_DEFAULT_TARGETS,
        help="comma-separated target detection probabilities",
    )
    return parser


_HANDLERS = {
    "profile": cmd_profile,
    "detect-np": cmd_detect_np,
    "detect-seq": cmd_detect_seq,
    "sample-size": cmd_sample_size,
    "curves": cmd_curves,
    "table2": cmd_table2,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except EnumerationLimitError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, CodescoutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

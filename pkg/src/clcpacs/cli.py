"""Command-line front-end: index -> darray -> clcp -> acs / ms, plus verify.

Stages talk to each other only through the files in the index directory.
Each executed stage prints one summary line to stderr; result data goes to
the requested output files (or stdout for the acs table).

Exit codes: 0 success, 1 invalid input or flags, 2 file/stream problems,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import shutil
import sys
import time
from pathlib import Path

from . import acs as acs_mod
from . import streams
from .clcp import compute_clcp, open_matrix
from .darray import build_d_array_for_index
from .errors import (
    InputInconsistencyError,
    StreamError,
    ValidationError,
    VerifyMismatch,
)
from .indexer import build_index
from .model import CollectionManifest
from .oracle import verify_built_index, verify_random
from .streams import IndexPaths, IntReader, IntWriter

EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_MISMATCH = 3


def _stage_line(stage: str, rows: int, peak_elements: int, started: float) -> None:
    elapsed = time.monotonic() - started
    print(
        f"[{stage}] rows={rows} peak_elems={peak_elements} elapsed={elapsed:.3f}s",
        file=sys.stderr,
    )


def _load_manifest(index_dir: str, with_texts: bool = False) -> tuple[IndexPaths, CollectionManifest]:
    paths = IndexPaths(Path(index_dir))
    if not paths.manifest.exists():
        raise ValidationError(f"no manifest at {paths.manifest}; run `index` first")
    texts = None
    if with_texts:
        if not paths.fasta.exists():
            raise ValidationError(f"missing {paths.fasta}; re-run `index` to restore it")
        texts = dict(streams.parse_fasta(paths.fasta.read_text(), alphabet=None))
    return paths, CollectionManifest.load(paths.manifest, texts=texts)


def cmd_index(args: argparse.Namespace) -> int:
    started = time.monotonic()
    data = Path(args.fasta).read_bytes()
    records = streams.records_from_fasta(data, args.chi, alphabet=args.alphabet)
    manifest = build_index(
        records,
        args.out,
        lcp_width=args.lcp_width,
        sigma=len(args.alphabet),
    )
    _stage_line("index", manifest.total_rows, 0, started)
    return 0


def cmd_darray(args: argparse.Namespace) -> int:
    started = time.monotonic()
    paths, manifest = _load_manifest(args.index)
    result = build_d_array_for_index(paths, manifest)
    _stage_line("darray", result.length, result.peak_stack_depth, started)
    return 0


def _ensure_upstream(paths: IndexPaths, manifest: CollectionManifest) -> None:
    if not paths.d.exists():
        started = time.monotonic()
        result = build_d_array_for_index(paths, manifest)
        _stage_line("darray", result.length, result.peak_stack_depth, started)


def _run_clcp_stage(paths, manifest, args, rows_path=None, matrix_copy=None):
    started = time.monotonic()
    rows_writer = None
    on_row = None
    if rows_path is not None:
        rows_writer = IntWriter(rows_path, 8)

        def on_row(row: int, color: int, u: int, l: int) -> None:
            rows_writer.append(row)
            rows_writer.append(color)
            rows_writer.append(u)
            rows_writer.append(l)

    try:
        result = compute_clcp(
            paths, manifest, block_rows=args.block_rows, on_row=on_row
        )
    finally:
        if rows_writer is not None:
            rows_writer.close()
    if matrix_copy is not None:
        shutil.copyfile(paths.clcpchi, matrix_copy)
    _stage_line("clcp", result.rows_processed, result.tracker.peak, started)
    return result


def cmd_clcp(args: argparse.Namespace) -> int:
    paths, manifest = _load_manifest(args.index)
    if not paths.d.exists():
        raise ValidationError(f"missing {paths.d}; run `darray` first")
    _run_clcp_stage(
        paths, manifest, args, rows_path=args.emit_rows, matrix_copy=args.emit_matrix
    )
    return 0


def cmd_acs(args: argparse.Namespace) -> int:
    paths, manifest = _load_manifest(args.index)
    _ensure_upstream(paths, manifest)
    scan = _run_clcp_stage(paths, manifest, args)
    started = time.monotonic()
    matrix = open_matrix(paths, manifest, block_rows=args.block_rows)
    accumulators = acs_mod.AcsAccumulators(
        sum_subject=scan.sum_subject,
        sum_query=acs_mod.accumulate_query_sums(matrix),
    )
    report = acs_mod.finalize(accumulators, manifest, sigma=args.sigma)
    text = report.to_phylip() if args.phylip else report.to_tsv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.plot is not None:
        from .report import render_acs_figure

        plot_path = args.plot
        if plot_path == "":
            if not args.out:
                raise ValidationError("--plot needs a path when no --out file is given")
            plot_path = str(Path(args.out).with_suffix(".png"))
        render_acs_figure(report, plot_path)
    _stage_line("acs", len(report.subjects), scan.tracker.peak, started)
    return 0


def _resolve_color(manifest: CollectionManifest, selector: str) -> int:
    try:
        color = int(selector)
    except ValueError:
        return manifest.record_by_name(selector).color
    if color < 0 or color > manifest.num_subjects:
        raise ValidationError(f"color {color} out of range 0..{manifest.num_subjects}")
    return color


def cmd_ms(args: argparse.Namespace) -> int:
    paths, manifest = _load_manifest(args.index)
    if not paths.pos.exists():
        raise StreamError(f"missing {paths.pos}")
    _ensure_upstream(paths, manifest)
    target = _resolve_color(manifest, args.target)
    versus = _resolve_color(manifest, args.versus) if args.versus else None
    started = time.monotonic()
    if target == 0:
        if versus is None:
            raise ValidationError("--versus <subject> is required when the target is the query")
        if not paths.clcpchi.exists():
            _run_clcp_stage(paths, manifest, args)
    elif versus not in (None, 0):
        raise ValidationError("a subject target is always compared against the query")
    values = acs_mod.ms_for_target(
        paths, manifest, target, versus_color=versus, block_rows=args.block_rows
    )
    out = "\n".join(str(v) for v in values) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    _stage_line("ms", len(values), 0, started)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    started = time.monotonic()
    if args.random:
        if args.index:
            raise ValidationError("--random and --index are mutually exclusive")
        stats = verify_random(
            trials=args.trials,
            seed=args.seed,
            sigma=args.sigma,
            max_len=args.max_len,
            max_m=args.max_m,
            block_rows=args.block_rows,
        )
        _stage_line(f"verify({args.trials} trials)", stats.rows, stats.peak_elements, started)
        return 0
    if not args.index:
        raise ValidationError("verify needs --index <dir> or --random")
    paths, manifest = _load_manifest(args.index, with_texts=True)
    stats = verify_built_index(paths, manifest, block_rows=args.block_rows)
    _stage_line("verify", stats.rows, stats.peak_elements, started)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clcpacs",
        description="Colored-LCP scans and average-common-substring distances "
        "for one query against a collection of subjects.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build the sorted-suffix index files")
    p.add_argument("--fasta", required=True, help="input FASTA file")
    p.add_argument("--chi", required=True, help="name of the query record")
    p.add_argument("--out", required=True, help="index directory to create")
    p.add_argument("--lcp-width", default="auto", choices=["auto", "1", "2", "4", "8"])
    p.add_argument("--alphabet", default="ACGT")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("darray", help="build the colored-interval depth file")
    p.add_argument("--index", required=True)
    p.set_defaults(func=cmd_darray)

    p = sub.add_parser("clcp", help="run the scan and finalize the query matrix")
    p.add_argument("--index", required=True)
    p.add_argument("--block-rows", type=int, default=None)
    p.add_argument("--emit-matrix", default=None, help="also copy the matrix here")
    p.add_argument("--emit-rows", default=None, help="write (row,color,u,l) u64 quads here")
    p.set_defaults(func=cmd_clcp)

    p = sub.add_parser("acs", help="distance table (runs missing stages first)")
    p.add_argument("--index", required=True)
    p.add_argument("--sigma", type=int, default=None)
    p.add_argument("--out", default=None, help="TSV output path (default stdout)")
    p.add_argument("--phylip", action="store_true")
    p.add_argument("--block-rows", type=int, default=None)
    p.add_argument(
        "--plot",
        nargs="?",
        const="",
        default=None,
        help="render a figure (default: the --out path with .png)",
    )
    p.set_defaults(func=cmd_acs)

    p = sub.add_parser("ms", help="matching statistics for one record")
    p.add_argument("--index", required=True)
    p.add_argument("--target", required=True, help="record name or color")
    p.add_argument("--versus", default=None, help="subject to compare the query against")
    p.add_argument("--out", default=None)
    p.add_argument("--block-rows", type=int, default=None)
    p.set_defaults(func=cmd_ms)

    p = sub.add_parser("verify", help="re-derive everything with brute force and diff")
    p.add_argument("--index", default=None)
    p.add_argument("--random", action="store_true")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--sigma", type=int, default=4, choices=[2, 4])
    p.add_argument("--max-len", type=int, default=32)
    p.add_argument("--max-m", type=int, default=6)
    p.add_argument("--block-rows", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (StreamError, InputInconsistencyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except VerifyMismatch as exc:
        print(f"verify mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())

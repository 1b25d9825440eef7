"""Command-line surface: projection runs, evaluation, significance tests,
correspondence statistics, and fixture generation.

Exit codes: 0 success, 1 validation/configuration error, 2 I/O error.
Every projection run writes a JSON manifest next to its output recording
the configuration, input digests, and per-sentence warnings; identical
inputs and configuration produce identical manifests.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass

from . import __version__, fixtures
from .corpus import load_corpus, read_roles_file, roles_file_text
from .errors import OracleSizeError, ToolkitError
from .evaluation import correspondence_stats, score, stratified_shuffling
from .matcher import COST_ATOL, build_graph, solve
from .oracle import brute_force_optimum
from .pipeline import DEFAULT_FILTER_FOR_MODEL, PipelineConfig, run_corpus
from .similarity import DEFAULT_CONTENT_PREFIXES, UnitSimilarity, apply_word_filters

CONFIG_KEYS = {
    "model",
    "filter",
    "fill_gaps",
    "big",
    "content_pos_prefixes",
    "clause_boundary_labels",
}


@dataclass(frozen=True)
class RunManifest:
    tool: str
    version: str
    config: dict
    inputs: dict
    warnings: list

    def to_json(self) -> str:
        payload = {
            "tool": self.tool,
            "version": self.version,
            "config": self.config,
            "inputs": self.inputs,
            "warnings": self.warnings,
        }
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _read_config_file(path) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in CONFIG_KEYS:
                raise ToolkitError(f"{path}:{lineno + 1}: unknown config entry {line!r}")
            values[key] = value
    return values


def _build_pipeline_config(args) -> PipelineConfig:
    file_values = _read_config_file(args.config) if args.config else {}

    model = args.model or file_values.get("model") or "perfect"
    filter_choice = args.filter or file_values.get("filter")
    if filter_choice is None:
        filters = DEFAULT_FILTER_FOR_MODEL[model]
    elif filter_choice == "none":
        filters = frozenset()
    else:
        filters = frozenset(f for f in filter_choice.split(",") if f)

    fill = args.fill_gaps or file_values.get("fill_gaps", "").lower() in ("1", "true", "yes")
    big = float(file_values.get("big", 1e6))
    prefixes = DEFAULT_CONTENT_PREFIXES
    if "content_pos_prefixes" in file_values:
        prefixes = frozenset(
            p for p in file_values["content_pos_prefixes"].split(",") if p
        )
    boundaries = frozenset(
        b for b in file_values.get("clause_boundary_labels", "").split(",") if b
    )
    return PipelineConfig(
        model=model,
        filters=filters,
        fill_gaps=fill,
        big=big,
        content_pos_prefixes=prefixes,
        clause_boundary_labels=boundaries,
    )


def _oracle_check(bisentences, cfg: PipelineConfig) -> int:
    """Re-solve each small graph by brute force; cost gaps are hard failures."""
    checked = 0
    for k, b in enumerate(bisentences):
        if cfg.model == "word" or b.src_tree is None or b.tgt_tree is None:
            continue
        view = apply_word_filters(b, cfg.filters & {"na", "nc"}, cfg.filter_config())
        ctx = UnitSimilarity(view, b.src_tree, b.tgt_tree)
        src_units = list(b.src_tree.node_ids())
        tgt_units = list(b.tgt_tree.node_ids())
        m = ctx.matrix(src_units, tgt_units)
        graph = build_graph(m, cfg.big, cfg.model)
        try:
            reference = brute_force_optimum(graph, cfg.model)
        except OracleSizeError:
            continue
        got = solve(graph, cfg.model)
        if abs(got.cost - reference.cost) > COST_ATOL:
            raise ToolkitError(
                f"sentence {k}: solver cost {got.cost!r} != oracle cost "
                f"{reference.cost!r}"
            )
        checked += 1
    return checked


def cmd_project(args) -> int:
    cfg = _build_pipeline_config(args)
    input_paths = {
        "align": args.align,
        "src_trees": args.src_trees,
        "src_tok": args.src_tok,
        "tgt_trees": args.tgt_trees,
        "tgt_tok": args.tgt_tok,
        "src_roles": args.src_roles,
    }
    if args.src_roles is None:
        raise ToolkitError("--src-roles is required")
    if cfg.model != "word":
        missing = [
            flag
            for flag, path in (("--src-trees", args.src_trees), ("--tgt-trees", args.tgt_trees))
            if path is None
        ]
        if missing:
            raise ToolkitError(
                f"model {cfg.model!r} needs constituent trees on both sides; "
                f"missing {', '.join(missing)}"
            )
    corpus = load_corpus(
        align_path=args.align,
        src_trees_path=args.src_trees,
        src_tok_path=args.src_tok,
        tgt_trees_path=args.tgt_trees,
        tgt_tok_path=args.tgt_tok,
        src_roles_path=args.src_roles,
    )
    if args.oracle:
        checked = _oracle_check(corpus, cfg)
        print(f"oracle check passed on {checked} sentence(s)")

    projected = run_corpus(corpus, cfg, jobs=args.jobs)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(roles_file_text([p.annotation for p in projected]))

    if args.provenance:
        with open(args.provenance, "w", encoding="utf-8") as fh:
            for k, p in enumerate(projected):
                fh.write(json.dumps(p.to_record(k), sort_keys=True, ensure_ascii=False))
                fh.write("\n")

    warnings = [
        {"sentence": k, "warnings": list(p.warnings)}
        for k, p in enumerate(projected)
        if p.warnings
    ]
    manifest = RunManifest(
        tool="roleproj",
        version=__version__,
        config=cfg.to_dict(),
        inputs={
            name: {"path": str(path), "sha256": _sha256(path)}
            for name, path in input_paths.items()
            if path is not None
        },
        warnings=warnings,
    )
    with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
        fh.write(manifest.to_json())
    return 0


def cmd_evaluate(args) -> int:
    gold = read_roles_file(args.gold)
    pred = read_roles_file(args.pred)
    report = score(gold, pred)
    print(report.format_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_tsv())
    return 0


def cmd_sigtest(args) -> int:
    gold = read_roles_file(args.gold)
    pred_a = read_roles_file(args.pred_a)
    pred_b = read_roles_file(args.pred_b)
    result = stratified_shuffling(gold, pred_a, pred_b, args.iterations, args.seed)
    print(result.format_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(
                "observed_delta_f1\tp_value\titerations\tseed\n"
                f"{result.observed_delta_f1:.6f}\t{result.p_value:.6f}"
                f"\t{result.iterations}\t{result.seed}\n"
            )
    return 0


def cmd_stats(args) -> int:
    corpus = load_corpus(
        align_path=args.align,
        src_trees_path=args.src_trees,
        tgt_trees_path=args.tgt_trees,
    )
    stats = correspondence_stats(corpus, args.threshold)
    print(stats.format_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(stats.to_tsv())
    return 0


def cmd_fixtures(args) -> int:
    written = fixtures.emit(args.out_dir)
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roleproj",
        description="Project labeled spans across word-aligned bi-sentences "
        "and evaluate the projections.",
    )
    parser.add_argument("--version", action="version", version=f"roleproj {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project source roles onto the target side")
    p.add_argument("--model", choices=["word", "perfect", "edgecover", "total"])
    p.add_argument("--filter", choices=["none", "na", "nc", "arg", "na,nc"])
    p.add_argument("--fill-gaps", action="store_true", dest="fill_gaps")
    p.add_argument("--src-trees", dest="src_trees")
    p.add_argument("--tgt-trees", dest="tgt_trees")
    p.add_argument("--src-tok", dest="src_tok")
    p.add_argument("--tgt-tok", dest="tgt_tok")
    p.add_argument("--align", required=True)
    p.add_argument("--src-roles", dest="src_roles")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--provenance")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check solver costs against brute force on small graphs")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("evaluate", help="exact-match scoring against gold roles")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sigtest", help="stratified-shuffling significance test")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred-a", dest="pred_a", required=True)
    p.add_argument("--pred-b", dest="pred_b", required=True)
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sigtest)

    p = sub.add_parser("stats", help="constituent correspondence statistics")
    p.add_argument("--src-trees", dest="src_trees", required=True)
    p.add_argument("--tgt-trees", dest="tgt_trees", required=True)
    p.add_argument("--align", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("fixtures", help="emit the bundled example bi-sentence and toy corpus")
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

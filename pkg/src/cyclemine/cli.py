"""Command line entry points.

Subcommands: generate, segment, transform, cluster, compare, run.
Configuration comes from one JSON file (--config) plus flag overrides;
flags win. Exit codes: 0 success, 2 configuration error, 3 data error,
4 numeric degeneracy.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bowr import build_bow, build_vocabulary
from .errors import ConfigError, DataError, NumericError
from .report import PipelineConfig, RunReport, compare_methods, run_pipeline
from .segmentation import KMeansConfig, detect_states, extract_cycles
from .symbolic import SaxConfig, symbolize
from .syngen import ScenarioSpec, three_class_corpus, write_corpus
from .timeseries import ingest_csv, load_schema

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _add_pipeline_flags(p):
    p.add_argument("--config", help="pipeline config JSON")
    p.add_argument("--input", dest="input_path", help="telemetry CSV")
    p.add_argument("--schema", dest="schema_path", help="channel schema JSON")
    p.add_argument("--out", dest="output_dir", help="output directory")
    p.add_argument("--timestamp-format", dest="timestamp_format")
    p.add_argument("--seed", type=int)
    p.add_argument("--features", dest="feature_channels",
                   help="comma-separated feature channels for state detection")
    p.add_argument("--min-length", dest="min_length", type=int)
    p.add_argument("--split-gap", dest="split_gap", type=float)
    p.add_argument("--sax-channel", dest="sax_channel")
    p.add_argument("--chunk-period", dest="chunk_period", type=float)
    p.add_argument("--alphabet-size", dest="alphabet_size", type=int)
    p.add_argument("--word-length", dest="word_length", type=int)
    p.add_argument("--metric", dest="bow_metric",
                   choices=["euclidean", "manhattan", "cosine"])
    p.add_argument("--methods", help="comma-separated linkage methods")
    p.add_argument("--cut-k", dest="cut_k", type=int)
    p.add_argument("--dtw-channel", dest="dtw_channel")
    p.add_argument("--workers", type=int)
    p.add_argument("--dump-intermediates", dest="dump_intermediates",
                   action="store_true", default=None)


def _build_config(args) -> PipelineConfig:
    config = PipelineConfig.from_json(args.config) if args.config else PipelineConfig()
    for name in PipelineConfig.__dataclass_fields__:
        value = getattr(args, name, None)
        if value is None:
            continue
        if name in ("feature_channels", "methods") and isinstance(value, str):
            value = [v for v in value.split(",") if v]
        setattr(config, name, value)
    if not config.input_path or not config.schema_path:
        raise ConfigError("an input CSV and a schema JSON are required")
    return config


def _load_table(config):
    schema = load_schema(config.schema_path)
    return ingest_csv(config.input_path, schema, config.timestamp_format)


def _cycles_of(config, table):
    km = KMeansConfig(k=2, seed=config.seed,
                      feature_channels=tuple(config.feature_channels))
    mask = detect_states(table, km)
    return mask, extract_cycles(mask, min_length=config.min_length,
                                split_gap=config.split_gap)


def cmd_generate(args) -> int:
    if args.scenario:
        with open(args.scenario, encoding="utf-8") as fh:
            raw = json.load(fh)
        from .syngen import CycleTemplate
        raw["cycle_templates"] = tuple(
            CycleTemplate(**t) for t in raw["cycle_templates"])
        for key in ("gap_spec", "off_gap_range"):
            if key in raw:
                raw[key] = tuple(tuple(x) if isinstance(x, list) else x for x in raw[key]) \
                    if key == "gap_spec" else tuple(raw[key])
        spec = ScenarioSpec(**raw)
    else:
        spec = three_class_corpus(seed=args.seed, cycles_per_class=args.cycles_per_class,
                                  noise_sigma=args.noise_sigma)
    paths = write_corpus(spec, args.out)
    print(json.dumps(paths, indent=2))
    return EXIT_OK


def cmd_segment(args) -> int:
    config = _build_config(args)
    table = _load_table(config)
    mask, cycles = _cycles_of(config, table)
    for cyc in cycles:
        print(f"cycle {cyc.cycle_id}: rows {cyc.start}..{cyc.end} "
              f"({cyc.tick_count} ticks)")
    print(f"{len(cycles)} cycle(s), {int(mask.states.sum())} ON tick(s) "
          f"of {len(table)}")
    return EXIT_OK


def cmd_transform(args) -> int:
    config = _build_config(args)
    table = _load_table(config)
    _, cycles = _cycles_of(config, table)
    if not cycles:
        print("no cycles detected")
        return EXIT_OK
    sax = SaxConfig(chunk_period=config.chunk_period,
                    paa_segments_per_chunk=config.paa_segments_per_chunk,
                    alphabet_size=config.alphabet_size,
                    word_length=config.word_length)
    sequences = [symbolize(c, config.sax_channel, sax) for c in cycles]
    vocab = build_vocabulary(sequences, config.word_length)
    for seq, cyc in zip(sequences, cycles):
        bow = build_bow(seq, vocab, cyc.tick_count)
        rendered = seq.to_text() if config.alphabet_size <= 52 else list(seq.symbols)
        print(f"cycle {seq.cycle_id}: {rendered}")
        print(f"  weights: {[round(float(w), 4) for w in bow.weights]}")
    print(f"vocabulary ({len(vocab)}): {vocab.labels(config.alphabet_size)}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    # clustering needs every upstream stage anyway; run the pipeline
    config = _build_config(args)
    report = run_pipeline(config)
    print(json.dumps({"cophenetic": report.cophenetic,
                      "cut_labels": report.cut_labels}, indent=2))
    return EXIT_OK


def cmd_compare(args) -> int:
    with open(args.report, encoding="utf-8") as fh:
        doc = json.load(fh)
    report = RunReport(
        config=doc.get("config", {}), cycles=doc.get("cycles", []),
        vocabulary=doc.get("vocabulary", []), bow_weights=doc.get("bow_weights", []),
        cophenetic=doc.get("cophenetic", {}), cut_labels=doc.get("cut_labels", {}),
        gaps=doc.get("gaps", {}), notes=doc.get("notes", []),
        artifacts=doc.get("artifacts", {}),
    )
    print(json.dumps(compare_methods(report), indent=2))
    return EXIT_OK


def cmd_run(args) -> int:
    config = _build_config(args)
    report = run_pipeline(config)
    print(f"report written to {report.artifacts['report']}")
    for note in report.notes:
        print(f"note: {note}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclemine",
        description="Detect, symbolize and cluster operational cycles in chiller telemetry.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a synthetic labeled corpus")
    p.add_argument("--scenario", help="scenario spec JSON (overrides the defaults)")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--cycles-per-class", type=int, default=5)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    for name, func, help_text in (
        ("segment", cmd_segment, "detect operational cycles"),
        ("transform", cmd_transform, "symbolize cycles and print histograms"),
        ("cluster", cmd_cluster, "full clustering run, print coefficients"),
        ("run", cmd_run, "full pipeline, write report and artifacts"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_pipeline_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("compare", help="rank linkage methods from a report")
    p.add_argument("--report", required=True, help="path to report.json")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

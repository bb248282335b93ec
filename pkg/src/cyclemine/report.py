"""Batch pipeline: segment, symbolize, build histograms, cluster, compare.

One configuration object drives the whole run; the output is a single
JSON report plus CSV sidecars and static SVG dendrograms. Everything is
deterministic for a fixed seed and configuration, independent of the
worker count used for the all-pairs warping distances.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from . import __version__
from .bowr import bow_distance, build_bow, build_vocabulary
from .dtw import DtwConfig, dtw_matrix
from .errors import EmptyReport, ZeroVariance
from .hcluster import (
    DistanceMatrix,
    LINKAGE_METHODS,
    cophenetic_correlation,
    cophenetic_distances,
    cut_tree,
    linkage,
)
from .metrics import EfficiencyBands, cycle_efficiency
from .segmentation import KMeansConfig, detect_states, extract_cycles
from .svg import render_dendrogram
from .symbolic import SaxConfig, symbolize
from .timeseries import DEFAULT_TIMESTAMP_FORMAT, detect_gaps, ingest_csv, load_schema


@dataclass
class PipelineConfig:
    input_path: str = ""
    schema_path: str = ""
    output_dir: str = "out"
    timestamp_format: str = DEFAULT_TIMESTAMP_FORMAT

    # segmentation
    seed: int = 42
    feature_channels: list = field(default_factory=list)
    min_length: int = 3
    split_gap: float | None = None    # seconds; None = 2 * dt
    max_gap: float | None = None      # seconds; None = 2 * dt

    # symbolic transform
    sax_channel: str = "Q7_m3h"
    chunk_period: float = 240.0
    paa_segments_per_chunk: int = 1
    alphabet_size: int = 20
    word_length: int = 1

    # clustering
    bow_metric: str = "euclidean"
    methods: list = field(default_factory=lambda: list(LINKAGE_METHODS))
    cut_k: int = 3

    # warping baseline
    dtw_channel: str = ""             # empty = same as sax_channel
    dtw_window: int | None = None
    dtw_local_cost: str = "absolute"
    dtw_channel_policy: str = "single_channel"

    # efficiency
    good_min: float = 0.50
    bad_max: float = 0.30
    efficiency_convention: str = "inverted"

    workers: int = 1
    dump_intermediates: bool = False

    @classmethod
    def from_json(cls, path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class RunReport:
    config: dict
    cycles: list                       # per-cycle rows: spans, ticks, efficiency
    vocabulary: list                   # word labels
    bow_weights: list                  # rows aligned with cycles
    cophenetic: dict                   # method -> {"bow": x, "dtw": y}
    cut_labels: dict                   # representation -> method -> labels
    gaps: dict
    notes: list
    artifacts: dict
    tool_version: str = __version__

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["generated_at"] = datetime.now(timezone.utc).isoformat()
        return doc


def compare_methods(report: RunReport) -> dict:
    """Rank linkage methods per representation by cophenetic coefficient.

    Ties resolve to the lexicographically first method name. Returns the
    per-representation rankings and the single best pair overall.
    """
    if not report.cophenetic:
        raise EmptyReport("report contains no clustering results")
    rankings = {}
    for rep in ("bow", "dtw"):
        scored = [(m, vals[rep]) for m, vals in report.cophenetic.items()
                  if vals.get(rep) is not None]
        scored.sort(key=lambda mv: (-mv[1], mv[0]))
        rankings[rep] = scored
    candidates = [(rep, m, v) for rep, scored in rankings.items() for m, v in scored]
    if not candidates:
        raise EmptyReport("no finite cophenetic coefficient available")
    best = max(candidates, key=lambda t: (t[2], t[1], t[0]))
    # max() keeps the first maximum; enforce lexicographic preference on ties
    top = [c for c in candidates if c[2] == best[2]]
    top.sort(key=lambda t: (t[1], t[0]))
    best = top[0]
    return {"rankings": rankings,
            "best": {"representation": best[0], "method": best[1], "coefficient": best[2]}}


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cluster_branch(dist: DistanceMatrix, methods, cut_k):
    """linkage + cophenetic + flat cut for every requested method."""
    coph, cuts, trees = {}, {}, {}
    for method in methods:
        tree = linkage(dist, method)
        trees[method] = tree
        try:
            coph[method] = cophenetic_correlation(dist, cophenetic_distances(tree))
        except ZeroVariance:
            coph[method] = None
        k = min(cut_k, dist.n)
        cuts[method] = [int(x) for x in cut_tree(tree, k)]
    return coph, cuts, trees


def run_pipeline(config: PipelineConfig) -> RunReport:
    """Execute the full batch analysis and write all artifacts."""
    os.makedirs(config.output_dir, exist_ok=True)
    notes, artifacts = [], {}

    schema = load_schema(config.schema_path)
    table = ingest_csv(config.input_path, schema, config.timestamp_format)
    max_gap = config.max_gap if config.max_gap is not None else 2 * table.dt
    gap_report = detect_gaps(table, max_gap)

    km = KMeansConfig(k=2, seed=config.seed,
                      feature_channels=tuple(config.feature_channels))
    mask = detect_states(table, km)
    cycles = extract_cycles(mask, min_length=config.min_length,
                            split_gap=config.split_gap)

    cycle_rows = []
    for cyc in cycles:
        row = {"cycle_id": cyc.cycle_id, "start": cyc.start, "end": cyc.end,
               "start_ts": int(cyc.timestamps[0]), "end_ts": int(cyc.timestamps[-1]),
               "ticks": cyc.tick_count}
        try:
            eff = cycle_efficiency(
                cyc, EfficiencyBands(config.good_min, config.bad_max),
                convention=config.efficiency_convention)
            row.update(cop_carnot=eff.cop_carnot, cop_therm=eff.cop_therm,
                       efficiency=eff.efficiency, band=eff.band)
        except Exception as exc:  # metrics are best-effort per cycle
            row.update(cop_carnot=None, cop_therm=None, efficiency=None, band=None)
            notes.append(f"cycle {cyc.cycle_id}: efficiency unavailable ({exc})")
        cycle_rows.append(row)

    report = RunReport(
        config=asdict(config), cycles=cycle_rows, vocabulary=[],
        bow_weights=[], cophenetic={}, cut_labels={},
        gaps={"gaps": gap_report.gaps, "coverage_fraction": gap_report.coverage_fraction},
        notes=notes, artifacts=artifacts,
    )

    if config.dump_intermediates:
        mask_path = os.path.join(config.output_dir, "mask.csv")
        _write_csv(mask_path, ["timestamp", "on"],
                   [(int(t), int(s)) for t, s in zip(table.timestamps, mask.states)])
        artifacts["mask"] = mask_path

    if not cycles:
        notes.append("no operational cycles detected; clustering skipped")
        _finalize(report, config)
        return report

    sax = SaxConfig(chunk_period=config.chunk_period,
                    paa_segments_per_chunk=config.paa_segments_per_chunk,
                    alphabet_size=config.alphabet_size,
                    word_length=config.word_length)
    sequences = [symbolize(c, config.sax_channel, sax) for c in cycles]
    vocab = build_vocabulary(sequences, config.word_length)
    bows = [build_bow(seq, vocab, cyc.tick_count)
            for seq, cyc in zip(sequences, cycles)]
    report.vocabulary = vocab.labels(config.alphabet_size)
    report.bow_weights = [[float(w) for w in b.weights] for b in bows]

    bow_path = os.path.join(config.output_dir, "bow.csv")
    _write_csv(bow_path, ["cycle_id"] + report.vocabulary,
               [[b.cycle_id] + [repr(float(w)) for w in b.weights] for b in bows])
    artifacts["bow"] = bow_path

    if config.dump_intermediates:
        sym_path = os.path.join(config.output_dir, "symbols.json")
        with open(sym_path, "w", encoding="utf-8") as fh:
            json.dump({str(s.cycle_id): [int(x) for x in s.symbols] for s in sequences}, fh)
        artifacts["symbols"] = sym_path

    eff_path = os.path.join(config.output_dir, "efficiency.csv")
    _write_csv(eff_path,
               ["cycle_id", "start", "end", "cop_carnot", "cop_therm", "efficiency", "band"],
               [[r["cycle_id"], r["start"], r["end"], r["cop_carnot"],
                 r["cop_therm"], r["efficiency"], r["band"]] for r in cycle_rows])
    artifacts["efficiency"] = eff_path

    if len(cycles) < 2:
        notes.append("fewer than two cycles; clustering skipped")
        _finalize(report, config)
        return report

    bow_dist = DistanceMatrix.from_points(
        bows, lambda a, b: bow_distance(a, b, config.bow_metric))
    dtw_channel = config.dtw_channel or config.sax_channel
    dtw_cfg = DtwConfig(window=config.dtw_window,
                        channel_policy=config.dtw_channel_policy,
                        local_cost=config.dtw_local_cost)
    dtw_dist = dtw_matrix(cycles, dtw_channel, dtw_cfg, workers=config.workers)

    for rep, dist in (("bow", bow_dist), ("dtw", dtw_dist)):
        path = os.path.join(config.output_dir, f"distances_{rep}.csv")
        _write_csv(path, ["condensed"], [[repr(float(v))] for v in dist.condensed])
        artifacts[f"distances_{rep}"] = path

    coph_bow, cuts_bow, trees_bow = _cluster_branch(bow_dist, config.methods, config.cut_k)
    coph_dtw, cuts_dtw, trees_dtw = _cluster_branch(dtw_dist, config.methods, config.cut_k)
    report.cophenetic = {m: {"bow": coph_bow[m], "dtw": coph_dtw[m]}
                         for m in config.methods}
    report.cut_labels = {"bow": cuts_bow, "dtw": cuts_dtw}

    leaf_labels = [str(c.cycle_id) for c in cycles]
    for rep, trees in (("bow", trees_bow), ("dtw", trees_dtw)):
        for method, tree in trees.items():
            stem = os.path.join(config.output_dir, f"dendrogram_{rep}_{method}")
            with open(stem + ".json", "w", encoding="utf-8") as fh:
                json.dump({"leaf_count": tree.leaf_count,
                           "leaf_order": tree.leaf_order(),
                           "merges": [list(m) for m in tree.merges]}, fh)
            with open(stem + ".svg", "w", encoding="utf-8") as fh:
                fh.write(render_dendrogram(tree, leaf_labels,
                                           title=f"{rep} / {method}"))
            artifacts[f"dendrogram_{rep}_{method}"] = stem + ".json"

    _finalize(report, config)
    return report


def _finalize(report: RunReport, config: PipelineConfig) -> None:
    path = os.path.join(config.output_dir, "report.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2)
    report.artifacts["report"] = path

"""End-to-end analysis: ingest, measure, group, classify, score text, fit, lay out, write."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import shutil
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .centrality import DEFAULT_DAMPING, DEFAULT_MAX_ITER, DEFAULT_TOL, CentralityScores, centrality_scores
from .classify import ArchetypeKind, ClassifierConfig, classify_archetype, features
from .community import cnm_partition
from .errors import (
    ConfigurationError,
    ContractError,
    SingularFitError,
    SociogramError,
    Undefined,
    UndefinedMetricError,
)
from .export import write_dot, write_graphml
from .graphcore import Dedup, EdgeListDocument, Sociogram, build_graph, connected_components, read_edge_csv
from .layout import DEFAULT_ITERATIONS, DEFAULT_REPULSION, LayoutResult, fr_layout
from .metrics import compute_graph_stats, degree_distribution, local_clustering, vertex_asymmetry
from .report import SCHEMA_VERSION, distribution_summary, emit_report
from .statfit import fit_exponential, fit_power_law
from .text import (
    LexiconSet,
    RiskFactorConfig,
    TokenCorpus,
    bigram_stats,
    risk_factor_match,
    sentiment_scores,
    top_words,
)

log = logging.getLogger(__name__)

STAGES = ("ingest", "metrics", "centrality", "community", "classify", "text", "fit", "layout")
ARTIFACTS = ("report", "vertices_csv", "layout_csv", "graphml", "dot")
# the stage after which each artifact has everything it needs
_ARTIFACT_STAGE = {
    "report": "ingest",
    "vertices_csv": "community",
    "layout_csv": "layout",
    "graphml": "community",
    "dot": "community",
}
_FILENAMES = {
    "report": "report.json",
    "vertices_csv": "vertices.csv",
    "layout_csv": "layout.csv",
    "graphml": "graph.graphml",
    "dot": "graph.dot",
}


class StageError(Exception):
    """Wraps a failure with the name of the stage that raised it."""

    def __init__(self, stage: str, cause: Exception) -> None:
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class AnalysisConfig:
    input_edges: Path
    output_dir: Path
    lexicon_dir: Path | None = None
    risk_config: Path | None = None
    classifier_config: Path | None = None
    dedup: Dedup = Dedup.COLLAPSE_PAIRS
    fr_repulsion: float = DEFAULT_REPULSION
    fr_iterations: int = DEFAULT_ITERATIONS
    seed: int = 0
    damping: float = DEFAULT_DAMPING
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    directed_betweenness: bool = False
    emit: tuple[str, ...] = ARTIFACTS
    stage: str = "layout"
    threads: int = 1
    deterministic: bool = False

    def compute_params(self) -> dict:
        """Parameters that influence the numbers (not paths, threads or output choices)."""
        return {
            "dedup": self.dedup.value,
            "layout": {"repulsion": self.fr_repulsion, "iterations": self.fr_iterations, "seed": self.seed},
            "pagerank": {"damping": self.damping, "tol": self.tol, "max_iter": self.max_iter},
            "betweenness_directed": self.directed_betweenness,
            "stage": self.stage,
        }


@dataclass
class Resources:
    lexicons: LexiconSet
    risk: RiskFactorConfig
    classifier: ClassifierConfig
    file_hashes: dict[str, str] = field(default_factory=dict)


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _sha256_tree(path: Path) -> str:
    digest = hashlib.sha256()
    for child in sorted(path.glob("*.txt")):
        digest.update(child.name.encode())
        digest.update(child.read_bytes())
    return digest.hexdigest()


def validate(config: AnalysisConfig) -> Resources:
    """Check every input before any compute; raises ConfigurationError naming the bad path."""
    if config.stage not in STAGES:
        raise ConfigurationError(f"unknown stage {config.stage!r}; choose from {', '.join(STAGES)}")
    for name in config.emit:
        if name not in ARTIFACTS:
            raise ConfigurationError(f"unknown artifact {name!r}")
        if STAGES.index(_ARTIFACT_STAGE[name]) > STAGES.index(config.stage):
            raise ConfigurationError(f"artifact {name} needs stage {_ARTIFACT_STAGE[name]}, run stops at {config.stage}")
    if not Path(config.input_edges).is_file():
        raise ConfigurationError(f"edge file not found: {config.input_edges}")
    if config.threads < 1:
        raise ConfigurationError("--threads must be >= 1")
    hashes = {"edges": _sha256_file(Path(config.input_edges))}
    if config.lexicon_dir is not None:
        lexicons = LexiconSet.load(config.lexicon_dir)
        hashes["lexicons"] = _sha256_tree(Path(config.lexicon_dir))
    else:
        lexicons = LexiconSet.default()
        hashes["lexicons"] = "bundled"
    if config.risk_config is not None:
        risk = RiskFactorConfig.load(config.risk_config)
        hashes["risk"] = _sha256_file(Path(config.risk_config))
    else:
        risk = RiskFactorConfig.default()
        hashes["risk"] = "bundled"
    if config.classifier_config is not None:
        classifier = ClassifierConfig.load(config.classifier_config)
        hashes["classifier"] = _sha256_file(Path(config.classifier_config))
    else:
        classifier = ClassifierConfig.default()
        hashes["classifier"] = "bundled"
    return Resources(lexicons, risk, classifier, hashes)


def _fit_or_undefined(name: str, fn, points, abscissa: str) -> dict:
    try:
        result = fn(points)
    except (ContractError, SingularFitError) as exc:
        reason = "insufficient_points" if "at least" in str(exc) else "singular_fit"
        return {"name": name, "abscissa": abscissa, "result": Undefined(reason)}
    return {
        "name": name,
        "abscissa": abscissa,
        "result": {
            "model": result.model,
            "param_a_or_k": result.param_a_or_k,
            "param_beta_or_alpha": result.param_beta_or_alpha,
            "r_squared": result.r_squared,
            "n_points": result.n_points,
            "log_space": result.log_space,
            "flags": list(result.flags),
        },
    }


class Analysis:
    """Holds intermediate results so a run can stop after any stage."""

    def __init__(self, config: AnalysisConfig, res: Resources) -> None:
        self.config = config
        self.res = res
        self.doc: EdgeListDocument | None = None
        self.graph: Sociogram | None = None
        self.centrality: CentralityScores | None = None
        self.membership: dict[str, int] = {}
        self.layout: LayoutResult | None = None
        self.report: dict = {
            "schema_version": SCHEMA_VERSION,
            "stage": config.stage,
            "graph_stats": None,
            "centrality_summary": None,
            "grouping": None,
            "archetype_frequency": None,
            "sentiment": None,
            "text": None,
            "risk": None,
            "fits": None,
            "layout": None,
        }
        self.groups: list[frozenset[str]] = []

    def run(self) -> dict:
        for stage in STAGES:
            log.info("stage %s", stage)
            try:
                getattr(self, f"_stage_{stage}")()
            except ConfigurationError:
                raise
            except (SociogramError, ValueError, OSError) as exc:
                raise StageError(stage, exc) from exc
            if stage == self.config.stage:
                break
        return self.report

    def _stage_ingest(self) -> None:
        self.doc = read_edge_csv(self.config.input_edges)
        self.graph = build_graph(self.doc, self.config.dedup)
        for line, msg in self.doc.errors:
            log.warning("%s:%d: %s", self.config.input_edges, line, msg)

    def _stage_metrics(self) -> None:
        g = self.graph
        stats = compute_graph_stats(g)
        comps = connected_components(g)
        endpoints = vertex_asymmetry(g) if g.unique_edges else None
        self.report["graph_stats"] = {
            "n_vertices": stats.n_vertices,
            "n_edges": stats.n_edges,
            "total_edges": g.total_edges,
            "duplicate_count": stats.duplicate_count,
            "self_loop_vertices": len(g.self_loops),
            "parse_errors": [{"line": ln, "message": msg} for ln, msg in self.doc.errors],
            "c_global": stats.c_global,
            "rho": stats.rho,
            "diameter_D": stats.diameter_D,
            "d_avg": stats.d_avg,
            "max_edges": stats.max_edges,
            "r_vertex": stats.r_vertex,
            "n_in": stats.n_in,
            "n_out": stats.n_out,
            "n_in_endpoints": endpoints.n_in_endpoints if endpoints else 0,
            "n_out_endpoints": endpoints.n_out_endpoints if endpoints else 0,
            "component_count": len(comps),
            "degree_histograms": {
                mode: {str(d): c for d, c in degree_distribution(g, mode).bins.items()}
                for mode in ("in", "out", "total")
            },
        }

    def _stage_centrality(self) -> None:
        cfg = self.config
        self.centrality = centrality_scores(
            self.graph,
            damping=cfg.damping,
            tol=cfg.tol,
            max_iter=cfg.max_iter,
            directed_betweenness=cfg.directed_betweenness,
            workers=cfg.threads,
        )
        c = self.centrality
        self.report["centrality_summary"] = {
            "betweenness": distribution_summary(c.betweenness),
            "pagerank": distribution_summary(c.pagerank),
            "eigenvector": distribution_summary(c.eigenvector),
            "settings": {
                "betweenness_mode": "directed" if cfg.directed_betweenness else "undirected",
                "betweenness_normalized": False,
                "damping": cfg.damping,
                "tol": cfg.tol,
                "max_iter": cfg.max_iter,
            },
            "pagerank_converged": c.pagerank_converged,
            "eigenvector_converged": c.eigenvector_converged,
            "flags": list(c.flags),
        }

    def _stage_community(self) -> None:
        grouping = cnm_partition(self.graph)
        self.groups = grouping.blocks
        self.membership = grouping.membership()
        stats = self.report["graph_stats"]
        stats["subgroups"] = len(self.groups)
        self.report["grouping"] = {
            "algorithm": "clauset_newman_moore",
            "modularity_Q": grouping.modularity_Q,
            "n_groups": len(self.groups),
            "merges": grouping.merges,
            "groups": [
                {"id": i, "size": len(b), "members": sorted(b), "label": None, "top_words": [],
                 "archetype": None, "features": None}
                for i, b in enumerate(self.groups)
            ],
        }

    def _stage_classify(self) -> None:
        freq = {k.value: 0 for k in ArchetypeKind}
        for entry, block in zip(self.report["grouping"]["groups"], self.groups):
            f = features(self.graph.subgraph(block))
            label = classify_archetype(f, self.res.classifier)
            entry["features"] = f
            entry["archetype"] = {"kind": label.kind, "confidence": label.confidence}
            freq[label.kind.value] += 1
        self.report["archetype_frequency"] = freq

    def _stage_text(self) -> None:
        edges = self.doc.edges
        corpus = TokenCorpus.from_texts(e.text for e in edges if e.text)
        try:
            sentiment = sentiment_scores(corpus, self.res.lexicons)
        except UndefinedMetricError:
            sentiment = Undefined("empty_corpus")
        self.report["sentiment"] = sentiment
        terms = top_words(corpus, n=25)
        self.report["text"] = {
            "documents": len(corpus.documents),
            "total_tokens": corpus.total_tokens,
            "vocabulary_size": len(corpus.vocabulary),
            "top_terms": [{"token": w, "salience": s} for w, s in terms],
            "bigrams": [
                {"pair": list(b.pair), "count": b.count, "salience": b.salience, "mutual_information": b.mutual_information}
                for b in bigram_stats(corpus, min_count=2)[:50]
            ],
            "pmi_base": 2,
        }
        risk = risk_factor_match(corpus.documents, self.res.risk)
        self.report["risk"] = {
            "n_documents": risk.n_documents,
            "total_tokens": risk.total_tokens,
            "categories": [
                {"index": r.index, "name": r.name, "matched_tweets": r.matched_tweets, "salience": r.salience}
                for r in risk.categories
            ],
        }
        # group labels come from tweets authored by group members
        by_source: dict[str, list[str]] = {}
        for e in edges:
            if e.text:
                by_source.setdefault(e.source, []).append(e.text)
        for entry, block in zip(self.report["grouping"]["groups"], self.groups):
            texts = [t for v in sorted(block) for t in by_source.get(v, ())]
            words = top_words(TokenCorpus.from_texts(texts), n=5)
            entry["top_words"] = [{"token": w, "salience": s} for w, s in words]
            entry["label"] = words[0][0] if words else None

    def _stage_fit(self) -> None:
        g = self.graph
        degree_points = degree_distribution(g, "total").points()
        c = self.centrality
        bp_points = [
            (c.pagerank[v], c.betweenness[v]) for v in g.vertex_list if c.betweenness[v] > 0
        ]
        self.report["fits"] = [
            _fit_or_undefined("degree_power_law", fit_power_law, degree_points, "total_degree"),
            _fit_or_undefined("betweenness_vs_pagerank", fit_exponential, bp_points, "pagerank"),
        ]

    def _stage_layout(self) -> None:
        cfg = self.config
        self.layout = fr_layout(self.graph, cfg.fr_repulsion, cfg.fr_iterations, cfg.seed)
        self.report["layout"] = {
            "algorithm": "fruchterman_reingold",
            "repulsion_multiplier": cfg.fr_repulsion,
            "repulsion_interpretation": "multiplicative",
            "iterations": self.layout.iterations_run,
            "seed": cfg.seed,
            "canvas": [1000.0, 1000.0],
            "positions": {v: list(p) for v, p in self.layout.positions.items()},
        }

    def provenance(self) -> dict:
        params = dict(self.config.compute_params())
        params["resources"] = self.res.file_hashes
        config_hash = hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()
        return {
            "tool_version": __version__,
            "config_hash": config_hash,
            "input_hash": self.res.file_hashes["edges"],
            "timestamp": None if self.config.deterministic else datetime.now(timezone.utc).isoformat(),
        }

    def write_vertices_csv(self, path: Path) -> None:
        g = self.graph
        c = self.centrality
        with open(path, "w", newline="", encoding="utf-8") as handle:
            w = csv.writer(handle, lineterminator="\n")
            w.writerow(["vertex", "in", "out", "c_j", "C_B", "pagerank", "eigenvector", "group", "self_loops"])
            for v in g.vertex_list:
                w.writerow([
                    v,
                    len(g.predecessors(v)),
                    len(g.successors(v)),
                    format(local_clustering(g, v), ".12g"),
                    format(c.betweenness[v], ".12g"),
                    format(c.pagerank[v], ".12g"),
                    format(c.eigenvector[v], ".12g"),
                    self.membership.get(v, ""),
                    g.self_loops.get(v, 0),
                ])

    def write_layout_csv(self, path: Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            w = csv.writer(handle, lineterminator="\n")
            w.writerow(["vertex", "x", "y"])
            for v, (x, y) in self.layout.positions.items():
                w.writerow([v, format(x, ".12g"), format(y, ".12g")])

    def write_artifacts(self, out_dir: Path) -> list[Path]:
        """Write into a scratch directory, then move into ``out_dir`` only if all succeed."""
        out_dir.mkdir(parents=True, exist_ok=True)
        scratch = Path(tempfile.mkdtemp(prefix=".sociogram-", dir=out_dir))
        written = []
        try:
            self.report["provenance"] = self.provenance()
            centrality = None
            if self.centrality is not None:
                centrality = {
                    "betweenness": self.centrality.betweenness,
                    "pagerank": self.centrality.pagerank,
                    "eigenvector": self.centrality.eigenvector,
                }
            for name in self.config.emit:
                target = scratch / _FILENAMES[name]
                if name == "report":
                    emit_report(self.report, target)
                elif name == "vertices_csv":
                    self.write_vertices_csv(target)
                elif name == "layout_csv":
                    self.write_layout_csv(target)
                elif name == "graphml":
                    write_graphml(self.graph, target, self.membership, centrality)
                elif name == "dot":
                    write_dot(self.graph, target, self.membership, centrality)
            for name in self.config.emit:
                final = out_dir / _FILENAMES[name]
                (scratch / _FILENAMES[name]).replace(final)
                written.append(final)
        except BaseException:
            for path in written:
                path.unlink(missing_ok=True)
            raise
        finally:
            shutil.rmtree(scratch, ignore_errors=True)
        return written


def run_analyze(config: AnalysisConfig) -> dict:
    """Validate, run every stage up to ``config.stage``, and write the requested artifacts.

    Raises:
        ConfigurationError: bad paths or options (nothing computed or written).
        StageError: a stage failed (nothing written).
    """
    res = validate(config)
    analysis = Analysis(config, res)
    report = analysis.run()
    try:
        analysis.write_artifacts(Path(config.output_dir))
    except OSError as exc:
        raise StageError("write", exc) from exc
    return report

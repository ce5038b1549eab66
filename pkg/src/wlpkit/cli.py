"""Command line front end.

    wlpkit analyze --generator complete:5,minus-edge --whisker --wlp
    wlpkit perazzo --generator star:5
    wlpkit rollercoaster --q 4 --pi "2 3 4"
    wlpkit sweep --max-vertices 5 --min-alpha 3

Reports go to stdout (or ``--out``) as JSON, CSV or text.  The exit code is
0 unless the run itself failed; verdicts only ever appear in the report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import graphs as gr
from .complexes import SimplicialComplex, independence_complex, is_pure, parse_complex
from .graphs import Graph, GraphError, GraphParseError
from .lefschetz import (
    AlgebraError,
    alpha_criterion,
    build_algebra,
    hilbert_function,
    non_surjectivity_witness,
    predicted_hilbert,
    predicted_hilbert_whiskered,
    slp_check,
    whiskered_algebra,
    witness_rank_check,
    wlp_check,
)
from .linalg_exact import is_prime
from .perazzo import (
    apolarity_dims,
    idealization_hilbert,
    perazzo_check,
    perazzo_wlp_predicate,
    simplicial_form,
)
from .rollercoaster import (
    Certificate,
    SequenceError,
    as_permutation,
    certificate_check,
    default_pair_range,
    epsilon_bound,
    pair_order_violations,
    ratio_condition,
    target_sequence,
    tied_pairs,
    upper_range,
)

JOBS_ENV = "WLPKIT_JOBS"
MAX_SWEEP_VERTICES = 7


class UsageError(Exception):
    """Bad input or a refused run; reported with exit code 2."""


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    complex: str | None = None
    generator: str | None = None
    whisker: bool = False
    caps: tuple | None = None
    characteristic: int = 0
    fmt: str = "json"
    jobs: int = 1
    wlp: bool = True
    slp: bool = False
    witness: str | None = None
    force: bool = False
    max_piece: int = 50_000
    q: int | None = None
    pi: tuple | None = None
    sequence: tuple | None = None
    certificate: str | None = None
    max_vertices: int | None = None
    min_alpha: int = 3
    bipartite: bool = False
    apolarity_max_facets: int = 64
    timings: bool = False

    def __post_init__(self):
        if self.characteristic and not is_prime(self.characteristic):
            raise UsageError(f"characteristic {self.characteristic} is neither 0 nor prime")
        if self.jobs < 1:
            raise UsageError("parallelism must be at least 1")


# --- inputs ------------------------------------------------------------------

def parse_generator(spec: str) -> Graph:
    """``family:n[,modifier...]`` with families complete, star, broom and
    modifiers minus-edge ({1,2}) and minus-triangle ({1,2},{1,3},{2,3})."""
    head, *mods = [p.strip() for p in spec.split(",")]
    try:
        family, arg = head.split(":")
        k = int(arg)
    except ValueError:
        raise UsageError(f"bad generator {spec!r}; expected family:n") from None
    makers = {"complete": gr.complete, "star": gr.star, "broom": gr.broom}
    if family not in makers:
        raise UsageError(f"unknown family {family!r}; choose from {sorted(makers)}")
    if k < 1:
        raise UsageError("generator size must be >= 1")
    g = makers[family](k)
    removals = {"minus-edge": [(1, 2)], "minus-triangle": [(1, 2), (1, 3), (2, 3)]}
    for mod in mods:
        if mod not in removals:
            raise UsageError(f"unknown modifier {mod!r}; choose from {sorted(removals)}")
        try:
            g = gr.remove_edges(g, removals[mod])
        except GraphError as exc:
            raise UsageError(f"{spec}: {exc}") from None
    return g


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_graph(cfg: RunConfig) -> Graph:
    if cfg.generator:
        return parse_generator(cfg.generator)
    if cfg.graph:
        try:
            return gr.parse_graph(_read(cfg.graph))
        except GraphParseError as exc:
            raise UsageError(f"{cfg.graph}: {exc}") from None
    raise UsageError("give --graph FILE or --generator SPEC")


def load_complex(cfg: RunConfig) -> SimplicialComplex:
    try:
        return parse_complex(_read(cfg.complex))
    except GraphParseError as exc:
        raise UsageError(f"{cfg.complex}: {exc}") from None


def parse_int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"expected a list of integers, got {text!r}") from None


# --- commands ----------------------------------------------------------------

class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.data: dict = {}
        self._t = time.perf_counter()

    def lap(self, name: str):
        now = time.perf_counter()
        if self.enabled:
            self.data[name] = round(now - self._t, 6)
        self._t = now


_SOURCES = ("graph", "generator")
_CONFIG_KEYS = {
    "analyze": _SOURCES + ("complex", "whisker", "caps", "characteristic", "wlp", "slp",
                           "witness", "force", "max_piece", "jobs"),
    "perazzo": _SOURCES + ("apolarity_max_facets", "force", "max_piece"),
    "rollercoaster": ("q", "pi", "sequence", "certificate"),
    "sweep": ("max_vertices", "min_alpha", "bipartite", "jobs"),
}


def _config_dict(cfg: RunConfig) -> dict:
    """The settings that affect this command's result, for the report."""
    d = asdict(cfg)
    out = {"command": cfg.command, "format": cfg.fmt}
    for k in _CONFIG_KEYS[cfg.command]:
        v = d[k]
        if v is not None:
            out[k] = list(v) if isinstance(v, tuple) else v
    return out


def _guard(hilbert: tuple, cfg: RunConfig) -> None:
    biggest = max(hilbert)
    if biggest > cfg.max_piece and not cfg.force:
        raise UsageError(
            f"largest graded piece is predicted to have {biggest} monomials "
            f"(cap {cfg.max_piece}); rerun with --force to proceed"
        )


def cmd_analyze(cfg: RunConfig) -> dict:
    clock = _Clock(cfg.timings)
    witnesses = []
    if cfg.complex:
        if cfg.whisker or cfg.witness:
            raise UsageError("--whisker and --witness need a graph input")
        c = load_complex(cfg)
        caps = cfg.caps or (2,) * c.m
        if len(caps) != c.m:
            raise UsageError(f"need {c.m} caps, got {len(caps)}")
        if min(caps) < 2:
            raise UsageError("degenerate cap: caps must be >= 2")
        _guard(predicted_hilbert(c, caps), cfg)
        a = build_algebra(c, caps)
        source = {"complex": {"m": c.m, "facets": [sorted(f) for f in c.facets]}}
        g = None
    else:
        g = load_graph(cfg)
        caps = cfg.caps or (2,) * g.n
        if len(caps) != g.n:
            raise UsageError(f"need {g.n} caps, got {len(caps)}")
        if min(caps) < 2:
            raise UsageError("degenerate cap: caps must be >= 2")
        source = {"graph": {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}}
        if cfg.whisker:
            _guard(predicted_hilbert_whiskered(g, caps), cfg)
            a = whiskered_algebra(g, caps)
        else:
            if cfg.witness:
                raise UsageError("--witness needs --whisker")
            c = independence_complex(g)
            _guard(predicted_hilbert(c, caps), cfg)
            a = build_algebra(c, caps)
    clock.lap("build")
    if cfg.slp:
        report = slp_check(a, cfg.characteristic, cfg.jobs)
    else:
        report = wlp_check(a, cfg.characteristic, cfg.jobs)
    clock.lap("ranks")
    verdicts = {"wlp": report.wlp, "slp": report.slp, "field": report.field}
    if g is not None and cfg.whisker and all(d == 2 for d in caps):
        rng = alpha_criterion(g)
        verdicts["alpha_criterion"] = list(rng) if rng else None
    if cfg.witness:
        if any(d != 2 for d in caps):
            raise UsageError("witnesses are defined for caps all equal to 2")
        if cfg.witness == "auto":
            best = max(gr.maximal_independent_sets(g), key=lambda s: (len(s), [-v for v in sorted(s)]))
            C = best
        else:
            C = frozenset(parse_int_list(cfg.witness))
        try:
            w = non_surjectivity_witness(g, C, a)
        except AlgebraError as exc:
            raise UsageError(str(exc)) from None
        rank = witness_rank_check(g, w, a)
        witnesses.append(
            {
                "independent_set": sorted(w.independent_set),
                "degree": w.degree,
                "factors": w.describe(),
                "terms": [[list(m), c] for m, c in sorted(w.terms.items(), reverse=True)],
                "map": {"i": w.degree - 1, "s": 1, "rank": rank.rank, "target_dim": a.dim(w.degree)},
                "not_surjective": rank.rank < a.dim(w.degree),
            }
        )
        clock.lap("witness")
    body = report.to_dict()
    return {
        "input": source,
        "config": _config_dict(cfg),
        "hilbert": body["hilbert"],
        "maps": body["maps"],
        "verdicts": verdicts,
        "witnesses": witnesses,
        "timings": clock.data,
    }


def cmd_perazzo(cfg: RunConfig) -> dict:
    clock = _Clock(cfg.timings)
    g = load_graph(cfg)
    c = independence_complex(gr.whisker(g))
    if not is_pure(c):  # cannot happen for whiskered graphs
        raise UsageError("independence complex is not pure")
    _guard(predicted_hilbert(c), cfg)
    chk = perazzo_check(c)
    ideal = idealization_hilbert(c)
    clock.lap("perazzo")
    apolarity = None
    verdict = perazzo_wlp_predicate(g, cross_check_facets=cfg.apolarity_max_facets)
    if len(c.facets) <= cfg.apolarity_max_facets:
        h = apolarity_dims(simplicial_form(c))
        apolarity = {"h": list(h), "matches_idealization": list(h) == list(ideal.h)}
    clock.lap("apolarity")
    wlp = {"prediction": verdict.summary, "wlp": False if verdict.prediction else None}
    if verdict.prediction:
        wlp["restriction"] = {
            "target_degree": verdict.degree,
            "dims": list(verdict.restriction_dims),
            "rank": verdict.restriction_rank,
        }
        if verdict.gorenstein_deficient is not None:
            wlp["gorenstein_deficient"] = [
                {"i": m.degree, "dims": [m.source_dim, m.target_dim], "rank": m.rank}
                for m in verdict.gorenstein_deficient
            ]
    return {
        "input": {"graph": {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}},
        "config": _config_dict(cfg),
        "perazzo": {
            "facets": chk.facets,
            "vertices": chk.vertices,
            "log_rank": chk.log_rank,
            "map_rank": chk.map_rank,
            "is_perazzo": chk.perazzo,
        },
        "idealization": {"d": ideal.d, "h": list(ideal.h)},
        "apolarity": apolarity,
        "verdicts": wlp,
        "timings": clock.data,
    }


def load_certificate(path: str) -> Certificate:
    try:
        raw = json.loads(_read(path))
        gspec = raw["graph"]
        if isinstance(gspec, str):
            g = gr.parse_graph(_read(gspec))
        else:
            g = Graph.from_edges(int(gspec["n"]), [tuple(e) for e in gspec["edges"]])
        return Certificate(g, Fraction(str(raw["T"])), Fraction(str(raw["epsilon"])))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: malformed certificate ({exc})") from None


def cmd_rollercoaster(cfg: RunConfig) -> dict:
    out: dict = {"config": _config_dict(cfg)}
    try:
        if cfg.sequence:
            a = tuple(cfg.sequence)
            q = len(a)
            pi = as_permutation(q, cfg.pi) if cfg.pi else None
        else:
            if cfg.q is None:
                raise UsageError("give --q (with optional --pi) or --sequence")
            t = target_sequence(cfg.q, cfg.pi)
            a, q, pi = t.a, t.q, t.pi
            out["c"] = t.c
        out["q"] = q
        out["a"] = list(a)
        if pi is not None:
            out["pi"] = {str(k): v for k, v in sorted(pi.items())}
        out["ratio_condition"] = ratio_condition(a)
        try:
            out["epsilon_bound"] = str(epsilon_bound(a))
        except SequenceError as exc:
            out["epsilon_bound"] = None
            out["epsilon_error"] = str(exc)
        out["tied_pairs"] = [list(p) for p in tied_pairs(a)]
        if pi is not None:
            rng = list(default_pair_range(q))
            bad = pair_order_violations(a, pi, rng)
            full_bad = pair_order_violations(a, pi, upper_range(q))
            out["pair_order"] = {
                "range": rng,
                "holds": not bad,
                "violations": [list(p) for p in bad],
                "full_range": {
                    "range": list(upper_range(q)),
                    "holds": not full_bad,
                    "violations": [list(p) for p in full_bad],
                },
            }
        if cfg.certificate:
            cert = load_certificate(cfg.certificate)
            out["certificate"] = {
                "T": str(cert.T),
                "epsilon": str(cert.epsilon),
                "valid": certificate_check(cert, a),
            }
    except SequenceError as exc:
        raise UsageError(str(exc)) from None
    return out


def _sweep_one(g: Graph) -> dict:
    rep = wlp_check(whiskered_algebra(g))
    return {
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
        "alpha": gr.independence_number(g),
        "wlp": rep.wlp,
        "failing": [m.degree for m in rep.failing()],
    }


def cmd_sweep(cfg: RunConfig) -> dict:
    clock = _Clock(cfg.timings)
    bound = cfg.max_vertices
    if bound is None or bound < 1:
        raise UsageError("give --max-vertices N with N >= 1")
    if bound > MAX_SWEEP_VERTICES:
        raise UsageError(f"sweeps are limited to {MAX_SWEEP_VERTICES} vertices")
    candidates = []
    enumerated = 0
    for n in range(1, bound + 1):
        for g in gr.enumerate_graphs(n):
            enumerated += 1
            if cfg.bipartite and not gr.bipartite_check(g):
                continue
            if gr.independence_number(g) >= cfg.min_alpha:
                candidates.append(g)
    clock.lap("enumerate")
    if cfg.jobs > 1 and len(candidates) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_sweep_one, candidates, chunksize=8))
    else:
        results = [_sweep_one(g) for g in candidates]
    clock.lap("wlp")
    holders = [r for r in results if r["wlp"]]
    per_n: dict = {}
    for r in results:
        per_n.setdefault(str(r["n"]), 0)
        per_n[str(r["n"])] += 1
    return {
        "config": _config_dict(cfg),
        "graphs_enumerated": enumerated,
        "graphs_tested": len(results),
        "tested_per_n": per_n,
        "wlp_holders": holders,
        "counterexamples": len(holders),
        "timings": clock.data,
    }


COMMANDS = {
    "analyze": cmd_analyze,
    "perazzo": cmd_perazzo,
    "rollercoaster": cmd_rollercoaster,
    "sweep": cmd_sweep,
}


# --- output ------------------------------------------------------------------

def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if "maps" in report:
            w.writerow(["i", "s", "source_dim", "target_dim", "required", "rank", "status", "failures"])
            for m in report["maps"]:
                w.writerow([m["i"], m["s"], *m["dims"], m["required"], m["rank"], m["status"],
                            ";".join(m["failures"])])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(report):
                w.writerow([k, v])
        return buf.getvalue()
    lines = []
    for k, v in _flatten(report):
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
        for i, x in enumerate(obj):
            yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj) if isinstance(obj, (list, type(None), bool)) else obj


# --- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wlpkit", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--jobs", type=int, default=None,
                        help=f"worker processes (default ${JOBS_ENV} or 1)")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings")

    def graph_inputs(sp):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--graph", help="edge-list file")
        src.add_argument("--generator", help="e.g. complete:5,minus-edge | star:4 | broom:3")
        return src

    a = sub.add_parser("analyze", help="Hilbert function and Lefschetz verdicts")
    src = graph_inputs(a)
    src.add_argument("--complex", help="facet-list file")
    a.add_argument("--whisker", action="store_true", help="use A(w(G), d)")
    a.add_argument("--caps", help="comma separated caps d_i (default all 2)")
    a.add_argument("--char", dest="characteristic", type=int, default=0)
    a.add_argument("--wlp", action="store_true", help="weak Lefschetz maps (default)")
    a.add_argument("--slp", action="store_true", help="all powers L^s")
    a.add_argument("--witness", help="'auto' or an independent set like '2,3,4'")
    a.add_argument("--force", action="store_true")
    a.add_argument("--max-piece", type=int, default=50_000)
    common(a)

    pz = sub.add_parser("perazzo", help="simplicial Perazzo form of Ind(w(G))")
    graph_inputs(pz)
    pz.add_argument("--apolarity-max-facets", type=int, default=64)
    pz.add_argument("--force", action="store_true")
    pz.add_argument("--max-piece", type=int, default=50_000)
    common(pz)

    rc = sub.add_parser("rollercoaster", help="target sequences and certificates")
    rc.add_argument("--q", type=int)
    rc.add_argument("--pi", help="images of ceil(q/2)..q, e.g. '4 2 3'")
    rc.add_argument("--sequence", help="explicit a_1..a_q instead of --q")
    rc.add_argument("--certificate", help="JSON certificate file")
    common(rc)

    sw = sub.add_parser("sweep", help="alpha >= 3 implies no WLP, over all small graphs")
    sw.add_argument("--max-vertices", type=int, required=True)
    sw.add_argument("--min-alpha", type=int, default=3)
    sw.add_argument("--bipartite", action="store_true")
    common(sw)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    jobs = ns.jobs
    if jobs is None:
        env = os.environ.get(JOBS_ENV)
        try:
            jobs = int(env) if env else 1
        except ValueError:
            raise UsageError(f"${JOBS_ENV} must be an integer") from None
    kw = dict(command=ns.command, fmt=ns.fmt, jobs=jobs, timings=ns.timings)
    for name in ("graph", "generator", "complex", "whisker", "characteristic", "witness",
                 "force", "max_piece", "q", "certificate", "max_vertices", "min_alpha",
                 "bipartite", "apolarity_max_facets"):
        if hasattr(ns, name):
            kw[name] = getattr(ns, name)
    if getattr(ns, "caps", None):
        kw["caps"] = parse_int_list(ns.caps)
    if getattr(ns, "pi", None):
        kw["pi"] = parse_int_list(ns.pi)
    if getattr(ns, "sequence", None):
        kw["sequence"] = parse_int_list(ns.sequence)
    if ns.command == "analyze":
        kw["slp"] = ns.slp
        kw["wlp"] = ns.wlp or not ns.slp
    return RunConfig(**kw)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        report = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"wlpkit: error: {exc}", file=sys.stderr)
        return 2
    text = render(report, cfg.fmt)
    if ns.out:
        Path(ns.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

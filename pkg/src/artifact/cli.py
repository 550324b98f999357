"""Command-line interface: ``artifact {define,words,list,check,reproduce,sample-s}``.

Exit codes: 0 all verified (or, for ``reproduce``, all as expected), 1 error,
2 some verdict REFUTED, 3 some verdict UNKNOWN.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction

from . import __version__
from .examples import (
    DENSITY,
    GLOBAL,
    audit_rows,
    build_example,
    list_examples,
    run_manifest,
)
from .ifs_engine import IFS
from .property_lab import (
    EXACT,
    MIXING,
    POINT_TRANSITIVE,
    TOP_TRANSITIVE,
    CheckConfig,
    check,
    estimate_s_density,
    hierarchy_audit,
    markov_sampler,
    replay,
    uniform_sampler,
)
from .shift_core import (
    check_svgl,
    compile_oracle,
    count_words,
    enumerate_words,
    find_synchronizing_word,
    is_irreducible,
    load_spec,
    spec_to_dict,
)
from .state_spaces import (
    FIRSTBIT,
    PREPEND,
    CylinderSpace,
    HarmonicSpace,
    IntervalSpace,
    LineSpace,
    TableSpace,
    TwoSidedSpace,
    doubling_map,
    half_maps,
    identity_map,
    pl_map_from_json,
    reference_pl_pair,
    tripling_map,
)
from .verdict import REFUTED, UNKNOWN, VERIFIED, ArtifactError, to_jsonable

EXIT_OK, EXIT_ERROR, EXIT_REFUTED, EXIT_UNKNOWN = 0, 1, 2, 3

ALIASES = {
    "PT": POINT_TRANSITIVE, "POINT_TRANSITIVE": POINT_TRANSITIVE,
    "TT": TOP_TRANSITIVE, "TOP_TRANSITIVE": TOP_TRANSITIVE,
    "MIXING": MIXING, "MIX": MIXING,
    "EXACT": EXACT,
}

NAMED_MAPS = {
    "doubling": lambda: [doubling_map()],
    "tripling": lambda: [tripling_map()],
    "identity": lambda: [identity_map()],
    "half": lambda: list(half_maps()),
    "pl-pair": lambda: list(reference_pl_pair()[:2]),
}


# ------------------------------------------------------------------ parsing

def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ArtifactError("BAD_CONFIG", f"not a fraction: {text!r}") from exc


def parse_window(text: str) -> tuple:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError as exc:
        raise ArtifactError("BAD_CONFIG", f"mixing window must be LO:HI, got {text!r}") from exc
    if lo < 0 or hi < lo:
        raise ArtifactError("BAD_CONFIG", f"bad mixing window {text!r}")
    return lo, hi


def _load_data(path: str):
    import yaml

    with open(path, "r", encoding="utf8") as fh:
        return yaml.safe_load(fh)


def _parse_steps(maps: str | None, default=(1, -1)) -> tuple:
    if not maps:
        return default
    try:
        return tuple(int(v) for v in maps.split(","))
    except ValueError as exc:
        raise ArtifactError("BAD_CONFIG", f"steps must be integers, got {maps!r}") from exc


def _interval_maps(maps: str | None) -> list:
    if not maps:
        raise ArtifactError("BAD_CONFIG", "interval spaces need --maps")
    if os.path.exists(maps):
        data = _load_data(maps)
        items = data["maps"] if isinstance(data, dict) else data
        return [pl_map_from_json(m["pieces"] if isinstance(m, dict) else m,
                                 m.get("name", f"f{i}") if isinstance(m, dict) else f"f{i}")
                for i, m in enumerate(items)]
    out = []
    for name in maps.split(","):
        if name not in NAMED_MAPS:
            raise ArtifactError("BAD_CONFIG", f"unknown map {name!r}; known: {sorted(NAMED_MAPS)}")
        out.extend(NAMED_MAPS[name]())
    return out


def build_space(space: str, maps: str | None):
    """``line[:N]``, ``harmonic[:N]``, ``interval``, ``cylinder:prepend|firstbit[:depth]``,
    ``twosided[:width]`` or ``table`` (with ``--maps`` a file of tables)."""
    kind, _, rest = space.partition(":")
    args = [a for a in rest.split(":") if a]
    try:
        if kind == "line":
            return LineSpace(int(args[0]) if args else 64, _parse_steps(maps))
        if kind == "harmonic":
            return HarmonicSpace(int(args[0]) if args else 24)
        if kind == "interval":
            return IntervalSpace(_interval_maps(maps))
        if kind == "cylinder":
            fam = {"prepend": PREPEND, "firstbit": FIRSTBIT}[(args[0] if args else "prepend").lower()]
            return CylinderSpace(fam, int(args[1]) if len(args) > 1 else 64)
        if kind == "twosided":
            return TwoSidedSpace(_parse_steps(maps), int(args[0]) if args else 3)
        if kind == "table":
            if not maps:
                raise ArtifactError("BAD_CONFIG", "table spaces need --maps FILE")
            data = _load_data(maps)
            return TableSpace(data["tables"] if isinstance(data, dict) else data)
    except (KeyError, ValueError, IndexError) as exc:
        raise ArtifactError("BAD_CONFIG", f"bad space {space!r}: {exc}") from exc
    raise ArtifactError("BAD_CONFIG", f"unknown space kind {kind!r}")


def _config_overrides(args) -> dict:
    out = {}
    if args.epsilon is not None:
        out["epsilon"] = parse_fraction(args.epsilon)
    if args.word_horizon is not None:
        out["word_horizon"] = args.word_horizon
    if args.run_horizon is not None:
        out["run_horizon"] = args.run_horizon
    if args.depth is not None:
        out["depth"] = args.depth
    if args.mixing_window is not None:
        out["mixing_window"] = parse_window(args.mixing_window)
    if args.seed is not None:
        out["seed"] = args.seed
    return out


def _properties(names) -> list:
    out = []
    for n in names or ["PT", "TT", "MIXING", "EXACT"]:
        key = n.upper().replace("-", "_")
        if key not in ALIASES:
            raise ArtifactError("UNKNOWN_PROPERTY", n)
        out.append(ALIASES[key])
    return out


# ------------------------------------------------------------------ reports

def _result_row(prop, scope, verdict, runtime_ms, citation="", **extra) -> dict:
    row = {
        "property": prop,
        "scope": scope,
        "verdict": verdict.status,
        "label": verdict.label(),
        "bound": verdict.bound,
        "witness": to_jsonable(verdict.witness),
        "evidence": to_jsonable(verdict.evidence),
        "boundary_flag": verdict.boundary,
        "runtime_ms": runtime_ms,
        "citation": citation,
    }
    row.update(extra)
    return row


def _status_exit(statuses) -> int:
    if REFUTED in statuses:
        return EXIT_REFUTED
    if UNKNOWN in statuses:
        return EXIT_UNKNOWN
    return EXIT_OK


def _report(command: str, ident: str, config, results, exit_status: int, **extra) -> dict:
    rep = {
        "tool": "artifact",
        "version": __version__,
        "command": command,
        "id": ident,
        "config": config,
        "results": results,
        "exit_status": exit_status,
    }
    rep.update(extra)
    return rep


def _text(rep: dict) -> str:
    lines = [f"artifact {rep['version']}  {rep['command']}  {rep['id']}"]
    if "error" in rep:
        lines.append(f"  error {rep['error']['code']}: {rep['error']['message']}")
    for r in rep.get("results", []) if rep["command"] != "sample-s" else []:
        head = f"  {r.get('scope', '')}:{r.get('property', '')}"
        if rep["command"] == "list":
            lines.append(f"  {r['id']:22s} {', '.join(r['entries'])}")
        elif "expected" in r:
            mark = "ok" if r.get("match") else "MISMATCH"
            lines.append(f"{head:40s} expected {r['expected']:30s} observed {r['observed']:30s} {mark}")
        else:
            lines.append(f"{head:40s} {r.get('label', r.get('verdict', ''))}"
                         + ("  [boundary]" if r.get("boundary_flag") else ""))
    for k in ("summary", "fractions", "audit"):
        if k in rep:
            lines.append(f"  {k}: {json.dumps(rep[k], sort_keys=True)}")
    lines.append(f"  exit {rep['exit_status']}")
    return "\n".join(lines) + "\n"


def emit(rep: dict, fmt: str, out: str | None):
    if fmt == "text":
        body = _text(rep)
    else:
        body = json.dumps(to_jsonable(rep), sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _ms(t0, args) -> float | None:
    # timings make reports non-reproducible, so they are opt-in
    import time

    return round((time.perf_counter() - t0) * 1000, 1) if args.timings else None


# ----------------------------------------------------------------- commands

def cmd_define(args) -> tuple:
    spec = load_spec(args.spec_file)
    dfa = compile_oracle(spec)
    counts = {n: count_words(dfa, n) for n in range(0, 9)}
    irr = is_irreducible(spec, args.l_max)
    svgl = check_svgl(spec, args.m_max, args.l_max)
    sync = find_synchronizing_word(spec, args.l_max)
    summary = {
        "spec": spec_to_dict(spec),
        "alphabet_size": spec.k,
        "automaton_states": dfa.n_states,
        "language_counts": counts,
        "irreducible": irr.label(),
        "svgl": svgl.label(),
        "synchronizing_word": sync,
    }
    rep = _report("define", spec.name or spec.kind, {"m_max": args.m_max, "l_max": args.l_max}, [], EXIT_OK,
                  summary=summary)
    return rep, EXIT_OK


def cmd_words(args) -> tuple:
    spec = load_spec(args.spec_file)
    words = enumerate_words(compile_oracle(spec), args.n)
    rep = _report("words", spec.name or spec.kind, {"n": args.n}, [], EXIT_OK,
                  summary={"count": len(words), "words": words})
    return rep, EXIT_OK


def cmd_list(args) -> tuple:
    rows = []
    for i in list_examples():
        fx = build_example(i)
        rows.append({"id": i, "citation": fx.citation, "entries": [e.name for e in fx.entries]})
    return _report("list", "catalog", {}, rows, EXIT_OK), EXIT_OK


def _ifs_from_args(args):
    """The IFS, its base config, and manifest entries (when a fixture was named)."""
    if args.example:
        fx = build_example(args.example)
        return fx.ifs, fx.config, fx
    if not (args.spec and args.space):
        raise ArtifactError("BAD_CONFIG", "give --example, or --spec with --space")
    spec = load_spec(args.spec)
    space = build_space(args.space, args.maps)
    return IFS(space, spec, spec.name or "custom"), CheckConfig(), None


def cmd_check(args) -> tuple:
    import time

    ifs, base, fx = _ifs_from_args(args)
    overrides = _config_overrides(args)
    results, verdicts = [], {}
    echo = None
    for prop in _properties(args.properties):
        cfg = base
        citation = ""
        if fx is not None:
            entry = next((e for e in fx.entries if e.scope == GLOBAL and e.prop == prop and not e.variant), None)
            if entry is not None:
                cfg = fx.config_for(entry)
                citation = entry.citation
        cfg = replace(cfg, **overrides) if overrides else cfg
        echo = echo or cfg.echo()
        t0 = time.perf_counter()
        v = check(ifs, prop, cfg)
        extra = {"config": cfg.echo()}
        if args.replay:
            extra["replayed"] = replay(ifs, prop, v, cfg)
        results.append(_result_row(prop, GLOBAL, v, _ms(t0, args), citation, **extra))
        verdicts[prop] = v
    code = _status_exit({r["verdict"] for r in results})
    if args.replay and not all(r["replayed"] for r in results):
        code = EXIT_ERROR
    audit = hierarchy_audit(verdicts)
    rep = _report("check", args.example or ifs.name, echo, results, code,
                  audit={"flags": audit["flags"], "consistent": audit["consistent"]},
                  space=ifs.space.describe(), spec=spec_to_dict(ifs.spec))
    return rep, code


def cmd_reproduce(args) -> tuple:
    fx = build_example(args.example_id)
    only = set(_properties(args.properties)) if args.properties else None
    rows = run_manifest(fx, only)
    results = []
    for r in rows:
        v = r.get("verdict")
        base = {k: r[k] for k in ("property", "scope", "variant", "citation", "expected", "observed", "match")}
        base["runtime_ms"] = r["runtime_ms"] if args.timings else None
        base["config"] = r["config"]
        if v is not None:
            base.update(verdict=v.status, label=v.label(), bound=v.bound, witness=to_jsonable(v.witness),
                        evidence=to_jsonable(v.evidence), boundary_flag=v.boundary)
        if "density" in r:
            base["density"] = to_jsonable(r["density"])
        if "samples" in r:
            base["samples"] = r["samples"]
        results.append(base)
    audit = audit_rows(rows)
    ok = all(r["match"] for r in rows) and audit["consistent"]
    code = EXIT_OK if ok else EXIT_ERROR
    rep = _report("reproduce", fx.id, fx.config.echo(), results, code, audit=audit,
                  summary={"entries": len(rows), "matched": sum(r["match"] for r in rows)},
                  citation=fx.citation, notes=fx.notes)
    return rep, code


def cmd_sample_s(args) -> tuple:
    ifs, base, fx = _ifs_from_args(args)
    cfg = base
    if fx is not None:
        entry = next((e for e in fx.entries if e.scope == DENSITY), None)
        if entry is not None:
            cfg = fx.config_for(entry)
    overrides = _config_overrides(args)
    cfg = replace(cfg, **overrides) if overrides else cfg
    length = cfg.run_horizon
    sampler = uniform_sampler(ifs.spec, length) if args.sampler == "uniform" else markov_sampler(ifs.spec, length)
    res = estimate_s_density(ifs, sampler, args.samples, cfg)
    fractions = {k: str(v) for k, v in res["fractions"].items()}
    rows = [{"property": "S", "scope": "sample", "seed": r["seed"], "verdict": r["status"], "bound": r["bound"],
             "witness": r["certificate"], "boundary_flag": r["boundary"], "runtime_ms": None, "citation": ""}
            for r in res["samples"]]
    rep = _report("sample-s", args.example or ifs.name, cfg.echo(), rows, EXIT_OK,
                  fractions=fractions, sampler=args.sampler, n=args.samples,
                  fraction_verified=float(res["fractions"][VERIFIED]))
    return rep, EXIT_OK


# --------------------------------------------------------------------- main

def _add_common(p):
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of standard output")
    p.add_argument("--timings", action="store_true", help="include runtime_ms (reports stop being byte-stable)")


def _add_ifs(p):
    p.add_argument("--example", default=None, help="fixture id (see `artifact list`)")
    p.add_argument("--spec", default=None, help="shift definition file (YAML or JSON)")
    p.add_argument("--space", default=None, help="line[:N] | harmonic[:N] | interval | cylinder:prepend|firstbit[:depth] | twosided[:width] | table")
    p.add_argument("--maps", default=None, help="steps like 1,-1; named interval maps like doubling,tripling; or a file")
    p.add_argument("--epsilon", default=None, help="mesh width NUM/DEN")
    p.add_argument("--word-horizon", type=int, default=None)
    p.add_argument("--run-horizon", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--mixing-window", default=None, help="LO:HI")
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description="Bounded verification of IFS driven by shift spaces.")
    ap.add_argument("--version", action="version", version=f"artifact {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("define", help="validate a shift definition and summarize its language")
    p.add_argument("spec_file")
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--l-max", type=int, default=6)
    _add_common(p)
    p.set_defaults(func=cmd_define)

    p = sub.add_parser("words", help="list the admissible words of one length")
    p.add_argument("spec_file")
    p.add_argument("-n", type=int, default=4)
    _add_common(p)
    p.set_defaults(func=cmd_words)

    p = sub.add_parser("list", help="list the shipped fixtures")
    _add_common(p)
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("check", help="run property checkers")
    p.add_argument("properties", nargs="*", help="PT TT MIXING EXACT (default: all)")
    p.add_argument("--replay", action="store_true", help="re-check every witness through the engine")
    _add_ifs(p)
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reproduce", help="run a fixture's manifest and compare")
    p.add_argument("example_id")
    p.add_argument("properties", nargs="*")
    _add_common(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sample-s", help="estimate the density of S by sampling driving sequences")
    p.add_argument("--sampler", choices=("uniform", "markov"), default="uniform")
    p.add_argument("--samples", type=int, default=50)
    _add_ifs(p)
    _add_common(p)
    p.set_defaults(func=cmd_sample_s)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep, code = args.func(args)
    except (ArtifactError, OSError) as exc:
        code_name = getattr(exc, "code", type(exc).__name__)
        rep = _report(args.command, "", None, [], EXIT_ERROR, error={"code": code_name, "message": str(exc)})
        emit(rep, getattr(args, "format", "json"), getattr(args, "out", None))
        return EXIT_ERROR
    emit(rep, args.format, args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""The twelve acceptance criteria, each at its stated tolerance and time budget.

Every criterion pairs the fixture's own verdicts with an independent route
(brute-force enumeration or a hand-rolled re-simulation).  Run with pytest or
directly as a script; either way one pass/fail line per criterion is printed.
"""

import random
import sys
import tempfile
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

import finite_cases
import oracles
from artifact.cli import main as cli_main
from artifact.examples import (
    ALONG,
    GLOBAL,
    audit_rows,
    build_example,
    list_examples,
    run_manifest,
)
from artifact.property_lab import MIXING, check_along, replay
from artifact.shift_core import (
    coded_shift,
    compile_oracle,
    enumerate_words,
    forbidden_sft,
    gen_leftdrift_stream,
    golden_shift,
    graph_shift,
    sample_markov,
    sample_walk,
)
from artifact.state_spaces import IntervalSet, pl_image, reference_pl_pair

RESULTS: dict = {}

TITLES = {
    1: "language oracle equivalence",
    2: "ptt-not-tt",
    3: "doubling-sigma",
    4: "shift-inverse",
    5: "coded-0n1n",
    6: "prepend",
    7: "firstbit",
    8: "markov-100-011-000",
    9: "leftdrift-full",
    10: "pl-exact-pair",
    11: "hierarchy audit",
    12: "determinism",
}
BUDGET = {1: 10, 2: 5, 3: 10, 4: 5, 5: 30, 6: 10, 7: 60, 8: 60, 9: 10, 10: 30, 11: 120, 12: None}


def _criterion(num, body):
    t0 = time.perf_counter()
    err = None
    detail = ""
    try:
        detail = body() or ""
    except AssertionError as exc:
        err = exc
        detail = f"assertion failed: {exc}"[:160]
    elapsed = time.perf_counter() - t0
    budget = BUDGET[num]
    in_time = budget is None or elapsed < budget
    ok = err is None and in_time
    limit = "no limit" if budget is None else f"< {budget} s"
    if err is None and not in_time:
        detail = f"over budget; {detail}"
    line = f"[{'PASS' if ok else 'FAIL'}] {num:2d} {TITLES[num]:28s} {elapsed:7.2f} s ({limit})  {detail}"
    RESULTS[num] = line
    print(line)
    return ok, err


def _run(num, body):
    ok, err = _criterion(num, body)
    if err is not None:
        raise err
    assert ok, RESULTS[num]


@lru_cache(maxsize=None)
def _fixture(ex):
    return build_example(ex)


def _rows(ex, only=None):
    fx = _fixture(ex)
    rows = run_manifest(fx, only=only)
    for r in rows:
        assert r["match"], (ex, r["property"], r["scope"], r["expected"], r["observed"])
    return fx, {(r["scope"], r["property"], r["variant"]): r for r in rows}


# ----------------------------------------------------------------- 1

def crit_language():
    specs = {}
    for ex in list_examples():
        fx = _fixture(ex)
        specs[ex] = fx.ifs.spec
        for name, var in fx.variants.items():
            specs[f"{ex}[{name}]"] = var.spec
    specs["sft-3"] = forbidden_sft(3, ["00", "12", "21"])
    specs["sft-len3"] = forbidden_sft(2, ["111", "010"])
    specs["even"] = graph_shift(["a", "b"], [("a", "a", "1"), ("a", "b", "0"), ("b", "a", "0")], 2)
    specs["coded-0n1n-6"] = coded_shift(["0" * n + "1" * n for n in range(1, 7)], 2)
    for name, spec in specs.items():
        dfa = compile_oracle(spec)
        for n in range(9):
            assert enumerate_words(dfa, n) == oracles.language(spec, n), (name, n)
    golden = compile_oracle(golden_shift())
    counts = [len(enumerate_words(golden, n)) for n in range(1, 9)]
    assert counts == [2, 3, 5, 8, 13, 21, 34, 55], counts
    return f"{len(specs)} specs x n<=8; golden {counts}"


# ----------------------------------------------------------------- 2

def crit_ptt_not_tt():
    fx, rows = _rows("ptt-not-tt")
    sp = fx.ifs.space
    half, one = Fraction(1, 2), Fraction(1)
    pt = rows[(GLOBAL, "POINT_TRANSITIVE", None)]["verdict"]
    assert pt.witness["x"] == half
    assert replay(fx.ifs, "POINT_TRANSITIVE", pt, fx.config_for(fx.entries[0]))
    tt = rows[(GLOBAL, "TOP_TRANSITIVE", None)]["verdict"]
    assert (tt.witness["U"], tt.witness["V"]) == ("{1}", "{1/2}") and tt.bound is None
    assert replay(fx.ifs, "TOP_TRANSITIVE", tt, fx.config_for(fx.entries[1]))
    # brute force: forward closure of {1} under all three maps, and the orbit of 1/2
    closure, todo = {one}, [one]
    while todo:
        x = todo.pop()
        for a in range(3):
            y = sp.apply_point(a, x)
            if not isinstance(y, Fraction) or y in closure:
                continue
            closure.add(y)
            todo.append(y)
    assert closure == {one} and half not in closure
    layer, orbit = {half}, {half}
    for _ in range(16):
        layer = {y for x in layer for a in range(3) if isinstance(y := sp.apply_point(a, x), Fraction)} - orbit
        orbit |= layer
    cells = sp.cells(Fraction(1, 16), None)
    for lab, cell in cells:
        assert orbit & set(cell), lab
    return f"x=1/2 reaches {len(cells)} cells; closure of {{1}} = {{1}}"


# ----------------------------------------------------------------- 3

def _half_step(a, x):
    if a == "0":
        return 2 * x if x < Fraction(1, 2) else Fraction(1)
    return Fraction(0) if x < Fraction(1, 2) else 2 * x - 1


def crit_doubling_sigma():
    fx, rows = _rows("doubling-sigma")
    pt = rows[(ALONG, "POINT_TRANSITIVE", None)]["verdict"]
    assert fx.config.epsilon == Fraction(1, 64) and pt.bound is not None and pt.bound <= 5000
    # independent re-simulation: every mesh cell of width 1/64 is visited
    sigma = fx.entries[0].sigma().prefix(pt.bound)
    x = pt.witness["x"]
    seen = set()
    for t in range(pt.bound + 1):
        c = x * 64
        seen.add(min(int(c), 63))
        if c.denominator == 1 and 0 < c:
            seen.add(int(c) - 1)
        if len(seen) == 64:
            break
        if t < pt.bound:
            x = _half_step(sigma[t], x)
    assert len(seen) == 64, len(seen)
    last_visit = t
    tt = rows[(ALONG, "TOP_TRANSITIVE", None)]["verdict"]
    assert (tt.witness["U"], tt.witness["V"]) == ("[1/2,1]", "[0,1/2]")
    f0, _ = fx.ifs.space.maps
    u = IntervalSet.interval(Fraction(1, 2), 1)
    assert sigma[0] == "0" and pl_image(f0, u) == IntervalSet.point(1)
    # {1} is fixed by both maps, so every later image stays away from [0, 1/2]
    assert _half_step("0", Fraction(1)) == 1 == _half_step("1", Fraction(1))
    return f"all 64 cells by step {last_visit}; f_sigma1([1/2,1]) = {{1}}"


# ----------------------------------------------------------------- 4

def _meets(c1, c2):
    pos = {c1.start + i: s for i, s in enumerate(c1.word)}
    return all(pos.get(c2.start + i, s) == s for i, s in enumerate(c2.word))


def crit_shift_inverse():
    fx, rows = _rows("shift-inverse")
    tt = rows[(GLOBAL, "TOP_TRANSITIVE", None)]["verdict"]
    cells = dict(fx.ifs.space.cells())
    steps = fx.ifs.space.steps
    words = [w for n in range(15) for w in oracles.language(fx.ifs.spec, n)]
    shifts = {sum(steps[int(c)] for c in w) for w in words}
    for ul, vl in tt.evidence["refuted_pairs"]:
        u, v = cells[ul], cells[vl]
        for d in shifts:
            moved = type(u)(u.start - d, u.word)
            assert not _meets(moved, v), (ul, vl, d)
    wide = rows[(GLOBAL, "TOP_TRANSITIVE", "with-0")]["verdict"]
    assert wide.bound == 14
    wide_shifts = {sum(steps[int(c)] for c in w)
                   for n in range(15) for w in oracles.language(fx.variants["with-0"].spec, n)}
    for ul, u in cells.items():
        for vl, v in cells.items():
            assert any(_meets(type(u)(u.start - d, u.word), v) for d in wide_shifts), (ul, vl)
    return f"{len(tt.evidence['refuted_pairs'])} pairs empty over {len(words)} words; with-0 bound 14"


# ----------------------------------------------------------------- 5

def crit_coded_0n1n():
    fx, rows = _rows("coded-0n1n")
    sp = fx.ifs.space
    for n in range(1, 7):
        u = "0" * n + "1" * n
        for x in range(-sp.n + n, sp.n - n + 1):
            y = x
            for c in u:
                y += sp.steps[int(c)]
            assert y == x
    tt = rows[(GLOBAL, "TOP_TRANSITIVE", None)]["verdict"]
    assert tt.status == "VERIFIED_UP_TO" and tt.bound == 12
    dens = rows[("density", "S", None)]["density"]
    assert len(dens["samples"]) == 50 and dens["fractions"]["REFUTED"] == 1
    kinds = {s["certificate"] for s in dens["samples"]}
    assert kinds <= {"displacement window", "drift"}, kinds
    return f"identity n<=6; TT bound 12; 50/50 refuted via {sorted(kinds)}"


# ----------------------------------------------------------------- 6

def _prepend_m(u, v):
    """Least M with f_w([u]) meeting [v] for every |w| >= M; hits need n >= |v| or v[n:] ~ u."""
    def hit(n):
        tail = v[n:]
        return n >= len(v) or tail.startswith(u) or u.startswith(tail)
    m = len(v)
    while m > 0 and hit(m - 1):
        m -= 1
    return m


def crit_prepend():
    fx, rows = _rows("prepend")
    mix = rows[(GLOBAL, MIXING, None)]["verdict"]
    M = mix.witness["M"]
    words = [lab[1:-1] for lab, _ in fx.ifs.space.cover_upto(6)]
    assert len(M) == len(words) ** 2
    for u in words:
        for v in words:
            m = M[f"[{u}] -> [{v}]"]
            assert m == _prepend_m(u, v) and m <= len(v), (u, v, m)
    for v in words:
        assert max(M[f"[{u}] -> [{v}]"] for u in words) == len(v)
    entry = fx.entries[1]
    cfg = fx.config_for(entry)
    seeds = [int(s) for s in np.random.default_rng(cfg.seed).integers(0, 2**31 - 1, size=20)]
    for s in seeds:
        sigma = sample_walk(fx.ifs.spec, 200, s)
        v = check_along(fx.ifs, sigma, MIXING, cfg)
        assert v.refuted and v.witness["double_miss"] and v.witness["V"] == "[100]", s
        w = sigma.prefix(200)
        assert not all(w[:n][::-1].startswith("100") for n in range(100, 201))
    return f"{len(M)} pairs, M = brute and max_u M = |v|; 20/20 double misses"


# ----------------------------------------------------------------- 7

def _firstbit_image(a, prefixes):
    """Hand-rolled first-bit step on a set of cylinder prefixes (no canonical form)."""
    out = set()
    for p in prefixes:
        for q in ((p,) if p else ("0", "1")):
            out.add(a + q if q[0] == a else q[1:])
    return out


def _firstbit_point(u, x):
    """Push ``x = (head, c)``, the sequence ``head c c c ...``, through ``f_u``; returns 8 symbols."""
    head, c = x
    for a in u:
        first = head[0] if head else c
        head = a + head if first == a else head[1:]
    return (head + c * 8)[:8]


def _covers(prefixes, stem=""):
    rel = [p for p in prefixes if p.startswith(stem) or stem.startswith(p)]
    if not rel:
        return False
    if any(stem.startswith(p) for p in rel):
        return True
    return _covers(rel, stem + "0") and _covers(rel, stem + "1")


def crit_firstbit():
    fx, rows = _rows("firstbit")
    v = rows[(ALONG, "EXACT", None)]["verdict"]
    t = fx.entries[0].sigma()
    sigma = t.prefix(t.length)
    N = v.witness["N"]
    assert sorted(N, key=lambda s: (len(s), s)) == [lab for lab, _ in fx.ifs.space.cover_upto(3)]
    probe = oracles.all_words(2, 5)
    extensions = [q for d in range(9) for q in oracles.all_words(2, d)]
    for lab, n in N.items():
        w = lab[1:-1]
        s = {w}
        for i in range(n):
            assert not _covers(s), (lab, i)
            s = _firstbit_image(sigma[i], s)
        assert _covers(s), lab
        # second route: explicit points of [w] pushed forward hit every depth-5 cylinder
        hit = {_firstbit_point(sigma[:n], (w + q, e))[:5] for q in extensions for e in "01"}
        assert hit >= set(probe), (lab, len(hit))
    # both maps are onto, so FULL stays FULL for the rest of the prefix
    assert all(_covers(_firstbit_image(a, {""})) for a in "01")
    assert t.length == sum(len(b) for m in (1, 2) for b in _perm_blocks(m))
    return f"14 cylinders reach FULL by step {max(N.values())} of {t.length}"


def _perm_blocks(m):
    from itertools import permutations

    words = oracles.all_words(2, m)
    return ["".join(p) for p in permutations(words)]


# ----------------------------------------------------------------- 8

def crit_markov():
    fx, rows = _rows("markov-100-011-000")
    freq_tol = 3 * 1.5 / 100
    for seed in range(20):
        w = sample_markov(fx.ifs.spec, 10_000, seed).prefix(10_000)
        assert abs(w.count("0") / 10_000 - 2 / 3) <= freq_tol, seed
        assert fx.ifs.oracle.accepts(w[:3000])
    dens = rows[("density", "S", None)]["density"]
    assert dens["fractions"]["VERIFIED_UP_TO"] <= Fraction(1, 20)
    assert rows[("s-membership", "S", None)]["verdict"].verified
    sp = fx.ifs.space
    for k in range(1, 5):
        u = "100" * k + "011" * k
        assert sum(sp.steps[int(c)] for c in u) == 0
        assert max(abs(sum(sp.steps[int(c)] for c in u[:i])) for i in range(len(u) + 1)) <= 2 * k
    return f"0-frequency within {freq_tol:.3f} on 20 seeds; density {dens['fractions']['VERIFIED_UP_TO']}"


# ----------------------------------------------------------------- 9

def crit_leftdrift():
    fx, rows = _rows("leftdrift-full")
    assert rows[("custom", "MAX_INDEX", None)]["verdict"].verified
    parts, i = [], 1
    while sum(map(len, parts)) < 100_000:
        w = "".join(oracles.all_words(2, i))
        parts += ["1" * len(w), w]
        i += 1
    t = "".join(parts)[:100_000]
    assert t == gen_leftdrift_stream().prefix(100_000)
    x = hi = 0
    for c in t:
        x += 1 if c == "0" else -1
        hi = max(hi, x)
    assert hi == 0
    return f"running max 0 over 10^5 steps, final index {x}"


# ----------------------------------------------------------------- 10

def crit_pl_exact_pair():
    fx, rows = _rows("pl-exact-pair")
    f0, f1, params = reference_pl_pair()
    for key in ("CONSTRAINTS", "SINGLE_MAP_EXACT", "SHRINK"):
        assert rows[("custom", key, None)]["verdict"].verified, key
    it = rows[("custom", "SINGLE_MAP_EXACT", None)]["verdict"].witness["iterates"]
    assert max(it.values()) <= 12
    # endpoint evaluation; both maps are affine on I0 and I1
    lo, hi = params["I0"]
    for f, (a, b) in ((f0, params["I0"]), (f1, params["I1"])):
        assert not any(a < x < b for x in f.breakpoints())
    lengths = [hi - lo]
    for _ in range(8):
        for f in (f0, f1):
            y0, y1 = f(lo), f(hi)
            lo, hi = min(y0, y1), max(y0, y1)
        lengths.append(hi - lo)
    ratios = [b / a for a, b in zip(lengths, lengths[1:])]
    assert all(r <= Fraction(9, 16) for r in ratios) and all(b < a for a, b in zip(lengths, lengths[1:]))
    assert rows[(ALONG, "EXACT", None)]["verdict"].refuted
    glob = rows[(GLOBAL, "EXACT", None)]["verdict"]
    assert glob.refuted and replay(fx.ifs, "EXACT", glob, fx.config_for(fx.entries[4]))
    return f"ratios {sorted(set(map(str, ratios)))}; iterates {it}"


# ----------------------------------------------------------------- 11

def crit_audit():
    flagged = 0
    for ex in list_examples():
        fx = _fixture(ex)
        rows = [r for r in run_manifest(fx) if r["scope"] in (GLOBAL, ALONG)]
        audit = audit_rows(rows)
        flagged += len(audit["flags"])
        assert audit["consistent"], (ex, audit["flags"])
    rng = random.Random(2024)
    problems = []
    for i in range(500):
        tables, spec, horizon = finite_cases.random_case(rng)
        res = finite_cases.cross_check(tables, spec, horizon, seed=i)
        problems += res["problems"]
        flagged += len(res["audit"]["flags"])
    assert not problems, problems[:5]
    assert flagged == 0
    return f"{len(list_examples())} fixtures + 500 random instances, 0 flags, 0 brute mismatches"


# ----------------------------------------------------------------- 12

def crit_determinism():
    runs = [["reproduce", ex] for ex in list_examples()]
    runs += [["check", "--example", "ptt-not-tt", "--replay"],
             ["sample-s", "--example", "two-expanding", "--samples", "5", "--seed", "7"],
             ["list"]]
    with tempfile.TemporaryDirectory() as d:
        for argv in runs:
            bodies = []
            for k in range(2):
                out = Path(d) / f"r{k}.json"
                cli_main([*argv, "--out", str(out)])
                bodies.append(out.read_bytes())
            assert bodies[0] == bodies[1], argv
    return f"{len(runs)} reports byte-identical across two runs"


CRITERIA = {
    1: crit_language, 2: crit_ptt_not_tt, 3: crit_doubling_sigma, 4: crit_shift_inverse,
    5: crit_coded_0n1n, 6: crit_prepend, 7: crit_firstbit, 8: crit_markov,
    9: crit_leftdrift, 10: crit_pl_exact_pair, 11: crit_audit, 12: crit_determinism,
}


@pytest.mark.parametrize("num", sorted(CRITERIA), ids=[f"{n:02d}-{TITLES[n]}" for n in sorted(CRITERIA)])
def test_acceptance(num):
    _run(num, CRITERIA[num])


if __name__ == "__main__":
    results = [_criterion(n, CRITERIA[n])[0] for n in sorted(CRITERIA)]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)

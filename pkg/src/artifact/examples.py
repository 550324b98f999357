"""Named fixtures: an IFS, a default configuration and an expected-verdict manifest.

Each manifest entry names a property, the scope it is checked in, the
expected status and a short citation of the example it reproduces.
:func:`run_manifest` runs every entry and reports expected vs observed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .ifs_engine import IFS, apply_word, run_along
from .property_lab import (
    EXACT,
    MIXING,
    POINT_TRANSITIVE,
    TOP_TRANSITIVE,
    CheckConfig,
    check,
    check_along,
    drift_certificate,
    estimate_s_density,
    hierarchy_audit,
    markov_sampler,
    s_membership,
    uniform_sampler,
)
from .shift_core import (
    SigmaStream,
    check_svgl,
    coded_shift,
    connect_words,
    find_synchronizing_word,
    full_shift,
    gen_leftdrift_stream,
    gen_permutation_stream,
    gen_sigma0,
    golden_shift,
    graph_shift,
    periodic_stream,
    sample_markov,
    sample_walk,
)
from .state_spaces import (
    BOUNDARY,
    FIRSTBIT,
    PREPEND,
    CylinderSet,
    CylinderSpace,
    HarmonicSpace,
    IntervalSet,
    IntervalSpace,
    LineSpace,
    TwoSidedSpace,
    doubling_map,
    half_maps,
    pl_image,
    reference_pl_pair,
    tripling_map,
    verify_pl_constraints,
)
from .verdict import REFUTED, UNKNOWN, VERIFIED, ArtifactError, Verdict, refuted, unknown, verified

GLOBAL = "global"
ALONG = "along"
ALONG_SAMPLED = "along-sampled"
S_MEMBERSHIP = "s-membership"
DENSITY = "density"
CUSTOM = "custom"


@dataclass
class Entry:
    """One manifest line.

    ``config`` holds overrides of the fixture's default :class:`CheckConfig`.
    Density entries compare ``fractions[status] op value`` instead of a
    single status; ``fn`` computes custom entries.
    """

    prop: str
    scope: str
    expected: str
    citation: str
    config: dict = field(default_factory=dict)
    sigma: Callable[[], SigmaStream] | None = None
    variant: str | None = None
    sampler: tuple | None = None  # (kind, length, n)
    fraction: tuple | None = None  # (status, op, value)
    fn: Callable | None = None
    note: str = ""

    @property
    def name(self) -> str:
        return f"{self.scope}:{self.prop}" + (f"[{self.variant}]" if self.variant else "")


@dataclass
class Fixture:
    id: str
    ifs: IFS
    config: CheckConfig
    entries: list
    citation: str
    notes: str = ""
    variants: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def ifs_for(self, entry: Entry) -> IFS:
        return self.variants[entry.variant] if entry.variant else self.ifs

    def config_for(self, entry: Entry) -> CheckConfig:
        return replace(self.config, **entry.config) if entry.config else self.config


# ----------------------------------------------------------- stream helpers

def champernowne_stream() -> SigmaStream:
    """``0`` followed by the binary expansions of 1, 2, 3, ... concatenated."""

    def chunks():
        yield "0"
        n = 1
        while True:
            yield format(n, "b")
            n += 1

    return SigmaStream("champernowne", chunks, params={"base": 2})


def itinerary_point(stream: SigmaStream, digits: int) -> Fraction:
    """The dyadic rational whose first ``digits`` binary digits are the stream's prefix."""
    w = stream.prefix(digits)
    return Fraction(int(w, 2), 2 ** digits)


# --------------------------------------------------------- custom checkers

def _identity_on_words(ifs: IFS, words) -> Verdict:
    """``f_u(x) = x`` for every listed word and every point whose run stays inside."""
    sp = ifs.space
    checked = 0
    for u in words:
        for x in sp.points():
            y = apply_word(ifs, u, x)
            if y == BOUNDARY:
                continue
            checked += 1
            if y != x:
                return refuted({"word": u, "x": x, "image": y})
    return verified(None, {"words": list(words)}, checks=checked)


def _oracle_verdict(ifs: IFS, rejected, accepted) -> Verdict:
    bad = [w for w in rejected if ifs.oracle.accepts(w)]
    bad += [w for w in accepted if not ifs.oracle.accepts(w)]
    if bad:
        return refuted({"misclassified": bad})
    return verified(None, {"rejected": list(rejected), "accepted": list(accepted)})


def _max_index_never_exceeds_start(space: LineSpace, sigma: SigmaStream, horizon: int) -> Verdict:
    ifs = IFS(space, full_shift(2))
    run = run_along(ifs, sigma, 0, horizon)
    if run.boundary:
        return unknown(True, reason="run left the truncated line", steps=run.length)
    hi = run.stats["max_index"]
    if hi > 0:
        t = run.trajectory.index(hi)
        return refuted({"time": t, "index": hi})
    return verified(None, {"start": 0, "max_index": hi, "min_index": run.stats["min_index"]}, steps=run.length)


def _drift_verdict(space: LineSpace, sigma: SigmaStream, horizon: int, block: int) -> Verdict:
    cert, strong = drift_certificate(space.steps, sigma.prefix(horizon), block)
    if strong:
        return refuted(cert, certificate="drift", horizon=horizon)
    return unknown(drift=cert)


def _symbol_frequency(spec, symbol: str, target: Fraction, length: int, seeds, sigmas: float) -> Verdict:
    """Frequency of ``symbol`` in Parry samples within ``sigmas`` standard errors of ``target``."""
    tol = sigmas * 1.5 / np.sqrt(length)
    freqs = []
    for seed in seeds:
        w = sample_markov(spec, length, seed).prefix(length)
        freqs.append(w.count(symbol) / length)
    worst = max(abs(f - float(target)) for f in freqs)
    ev = {"target": str(target), "tolerance": tol, "frequencies": [round(f, 6) for f in freqs]}
    if worst <= tol:
        return verified(None, {"max_deviation": round(worst, 6)}, **ev)
    return refuted({"max_deviation": round(worst, 6)}, **ev)


def _desk_scale_exact(maps, eps: Fraction, limit: int) -> Verdict:
    """Each single map blows every mesh interval up to ``[0, 1]`` within ``limit`` iterates."""
    unit = IntervalSet.unit()
    worst = {}
    m = int(1 / eps)
    for f in maps:
        need = 0
        for j in range(m):
            s = IntervalSet.interval(j * eps, (j + 1) * eps)
            n = 0
            while s != unit and n < limit:
                s = pl_image(f, s)
                n += 1
            if s != unit:
                return refuted({"map": f.name, "cell": j, "iterates": n})
            need = max(need, n)
        worst[f.name] = need
    return verified(None, {"iterates": worst}, limit=limit)


def _shrink_along_period(maps, start: IntervalSet, word: str, periods: int, ratio: Fraction) -> Verdict:
    """Length of the image shrinks by at least ``ratio`` per period of ``word``."""
    s = start
    lengths = [s.length()]
    for _ in range(periods):
        for c in word:
            s = pl_image(maps[int(c)], s)
        lengths.append(s.length())
    ratios = [lengths[i + 1] / lengths[i] for i in range(periods)]
    ev = {"lengths": [str(x) for x in lengths], "ratios": [str(r) for r in ratios]}
    if all(r <= ratio for r in ratios) and all(lengths[i + 1] < lengths[i] for i in range(periods)):
        return verified(None, {"max_ratio": str(max(ratios))}, **ev)
    return refuted({"ratios": [str(r) for r in ratios]}, **ev)


# ------------------------------------------------------------------ catalog

def _golden_robot() -> Fixture:
    ifs = IFS(LineSpace(64, (1, -1)), golden_shift(), "golden-robot")
    cite = "robot-arm example: forbidden set {11}"
    entries = [
        Entry("LANGUAGE", CUSTOM, VERIFIED, cite,
              fn=lambda fx, cfg: _oracle_verdict(fx.ifs, ["11", "011", "110"], ["0", "1", "10", "01", "00", "0101"])),
        Entry(POINT_TRANSITIVE, GLOBAL, VERIFIED, cite + "; arm r0 alone moves every point up"),
        Entry(TOP_TRANSITIVE, GLOBAL, REFUTED, cite + "; r1 never twice in a row bounds leftward travel"),
    ]
    return Fixture("golden-robot", ifs, CheckConfig(), entries, cite,
                   notes="Arms act as +1 / -1 moves on the truncated line.")


def _ptt_not_tt() -> Fixture:
    ifs = IFS(HarmonicSpace(24), full_shift(3), "ptt-not-tt")
    cite = "point transitive but not topologically transitive: f_u({1}) misses {1/2}"
    one, half = Fraction(1), Fraction(1, 2)
    pair = [(("{1}", frozenset([one])), ("{1/2}", frozenset([half])))]
    cfg = CheckConfig(word_horizon=16, epsilon=Fraction(1, 16))
    entries = [
        Entry(POINT_TRANSITIVE, GLOBAL, VERIFIED, cite + "; the orbit of 1/2 is dense", config={"points": [half]}),
        Entry(TOP_TRANSITIVE, GLOBAL, REFUTED, cite, config={"pairs": pair}),
        Entry(MIXING, GLOBAL, REFUTED, cite, config={"pairs": pair}),
        Entry(EXACT, GLOBAL, REFUTED, cite + "; 1 is a common fixed point", config={"cover": [pair[0][0]]}),
    ]
    return Fixture("ptt-not-tt", ifs, cfg, entries, cite,
                   notes="The printed formula for the third map at 1/3 is taken as printed.")


def _doubling_sigma() -> Fixture:
    f0, f1 = half_maps()
    ifs = IFS(IntervalSpace([f0, f1]), full_shift(2), "doubling-sigma")
    cite = "f(x)=2x mod 1 split into two half maps: point transitive along sigma but not topologically"
    H = 5000
    z = itinerary_point(champernowne_stream(), H + 64)
    upper = ("[1/2,1]", IntervalSet.interval(Fraction(1, 2), 1))
    lower = ("[0,1/2]", IntervalSet.interval(0, Fraction(1, 2)))
    entries = [
        Entry(POINT_TRANSITIVE, ALONG, VERIFIED, cite + "; x has itinerary sigma", sigma=champernowne_stream,
              config={"points": [z]}),
        Entry(TOP_TRANSITIVE, ALONG, REFUTED, cite + "; f_{sigma_1}(U) = {1}", sigma=champernowne_stream,
              config={"pairs": [(upper, lower), (lower, upper)]}),
    ]
    return Fixture("doubling-sigma", ifs, CheckConfig(run_horizon=H), entries, cite,
                   notes="sigma is 0 followed by the binary Champernowne word; x is the point with that itinerary.",
                   params={"x": z, "digits": H + 64})


def _shift_inverse() -> Fixture:
    space = TwoSidedSpace((1, -1), 3)
    ifs = IFS(space, coded_shift(["01", "10"]), "shift-inverse")
    wide = IFS(space, coded_shift(["01", "10", "0"]), "shift-inverse+0")
    cite = "shift and its inverse driven by the coded shift of {01, 10}: f_w^{-1}(W) misses V"
    entries = [
        Entry(TOP_TRANSITIVE, GLOBAL, REFUTED, cite),
        Entry(POINT_TRANSITIVE, GLOBAL, REFUTED, cite + "; orbits shift by at most two places"),
        Entry(MIXING, GLOBAL, REFUTED, cite),
        Entry(EXACT, GLOBAL, REFUTED, cite),
        Entry(TOP_TRANSITIVE, GLOBAL, VERIFIED, "adding the word 0 to the generators restores transitivity",
              variant="with-0"),
    ]
    return Fixture("shift-inverse", ifs, CheckConfig(word_horizon=14), entries, cite,
                   notes="Transitivity is evaluated on indexed cylinders; two-sided points are not materialized.",
                   variants={"with-0": wide})


def _line_basic() -> Fixture:
    ifs = IFS(LineSpace(64, (1, -1)), full_shift(2), "line-basic")
    cite = "line example driven by w0 w1 w1 w0 w0 w0 ... with w0=0, w1=1"
    sig = lambda: gen_sigma0("0", "1")  # noqa: E731
    entries = [
        Entry(POINT_TRANSITIVE, ALONG, VERIFIED, cite, sigma=sig),
        Entry("S", S_MEMBERSHIP, VERIFIED, cite + "; sigma0 lies in S", sigma=sig),
        Entry(POINT_TRANSITIVE, GLOBAL, VERIFIED, cite),
        Entry(TOP_TRANSITIVE, GLOBAL, VERIFIED, cite),
        Entry("IDENTITY", CUSTOM, VERIFIED, cite + "; f_{0^n 1^n} is the identity",
              fn=lambda fx, cfg: _identity_on_words(fx.ifs, ["0" * n + "1" * n for n in range(1, 7)])),
    ]
    return Fixture("line-basic", ifs, CheckConfig(), entries, cite)


CODED_0N1N_MAX = 12


def _coded_0n1n() -> Fixture:
    gens = ["0" * n + "1" * n for n in range(1, CODED_0N1N_MAX + 1)]
    ifs = IFS(LineSpace(64, (1, -1)), coded_shift(gens, 2), "coded-0n1n")
    cite = "coded shift of {0^n 1^n}: f_{0^n 1^n} is the identity, transitive but not along any sigma"
    fine = {"epsilon": Fraction(1, 2 ** 16), "run_horizon": 2000}
    entries = [
        Entry("IDENTITY", CUSTOM, VERIFIED, cite,
              fn=lambda fx, cfg: _identity_on_words(fx.ifs, gens[:6])),
        Entry(TOP_TRANSITIVE, GLOBAL, VERIFIED, cite),
        Entry(POINT_TRANSITIVE, GLOBAL, VERIFIED, cite),
        Entry("S", DENSITY, "", cite + "; no sigma admits a dense orbit", config=fine,
              sampler=("uniform", 2000, 50), fraction=(REFUTED, "==", Fraction(1))),
    ]
    return Fixture("coded-0n1n", ifs, CheckConfig(), entries, cite,
                   notes=f"Generators truncated at n <= {CODED_0N1N_MAX}; S-membership uses a 2^-16 mesh.",
                   params={"n_max": CODED_0N1N_MAX})


def _two_expanding() -> Fixture:
    ifs = IFS(IntervalSpace([doubling_map(), tripling_map()]), full_shift(2), "two-expanding")
    cite = "f0(x)=2x mod 1 and f1(x)=3x mod 1: S may be all of Sigma"
    entries = [
        # the maps commute, so words of length <= L reach only (L+1)(L+2)/2 points
        Entry(POINT_TRANSITIVE, GLOBAL, VERIFIED, cite, config={"word_horizon": 24}),
        Entry(TOP_TRANSITIVE, GLOBAL, VERIFIED, cite),
        Entry(MIXING, GLOBAL, VERIFIED, cite),
        Entry(EXACT, GLOBAL, VERIFIED, cite),
        Entry("S", DENSITY, "", cite, config={"run_horizon": 2000},
              sampler=("uniform", 2000, 50), fraction=(VERIFIED, "==", Fraction(1))),
    ]
    return Fixture("two-expanding", ifs, CheckConfig(), entries, cite)


NONSVGL_ELL_MAX = 6


def nonsvgl_generators(ell_max: int = NONSVGL_ELL_MAX, w0: str = "010", w1: str = "101", u0: str = "000"):
    sig = gen_sigma0(w0, w1).prefix(ell_max)
    return [u0 + w0 * ell + sig[:ell] + w0 * ell + u0 for ell in range(1, ell_max + 1)]


def nonsvgl_head(ell: int, w0: str = "010", w1: str = "101", u0: str = "000") -> str:
    """``u0 w0^l sigma0_1..sigma0_l``: the part of the l-th generator that fixes l."""
    return u0 + w0 * ell + gen_sigma0(w0, w1).prefix(ell)


def _gap_growth(spec, ells) -> dict:
    """Shortest connector from the head of the l-th generator to the next ``u0``, per ``l``."""
    out = {}
    for ell in ells:
        w = connect_words(spec, nonsvgl_head(ell), "000", 8 * ell + 8)
        out[ell] = None if w is None else len(w)
    return out


def _nonsvgl() -> Fixture:
    gens = nonsvgl_generators()
    spec = coded_shift(gens, 2, name="nonsvgl")
    ifs = IFS(LineSpace(64, (1, -1)), spec, "nonsvgl")
    cite = "synchronized shift that is not SVGL: u0 w0^l sigma0_1..sigma0_l w0^l u0"

    def svgl(fx, cfg):
        v = check_svgl(fx.ifs.spec, 4, 12)
        v.evidence["u0_gap_growth"] = _gap_growth(fx.ifs.spec, range(1, NONSVGL_ELL_MAX + 1))
        return v

    def no_short_connector(fx, cfg):
        w = connect_words(fx.ifs.oracle, nonsvgl_head(2), "000", 4)
        return verified(None, {"M_max": 4}) if w is None else refuted({"connector": w})

    def sync(fx, cfg):
        w = find_synchronizing_word(fx.ifs.spec, 8)
        return verified(None, {"word": w}) if w is not None else unknown(reason="none within 8")

    block = lambda: periodic_stream("".join(gens))  # noqa: E731
    entries = [
        Entry("SVGL", CUSTOM, UNKNOWN, cite + "; gaps between u0 occurrences grow with l", fn=svgl),
        Entry("CONNECT", CUSTOM, VERIFIED, cite + "; no connector of length <= 4 from u0 w0^2 sigma0_1 sigma0_2 to u0",
              fn=no_short_connector),
        Entry("SYNC", CUSTOM, VERIFIED, cite + "; a synchronizing word exists", fn=sync),
        Entry("S", S_MEMBERSHIP, REFUTED, cite + "; sigma in [u0] is not in S", sigma=block),
    ]
    return Fixture("nonsvgl", ifs, CheckConfig(), entries, cite,
                   notes=f"Generators truncated at l <= {NONSVGL_ELL_MAX}.", params={"ell_max": NONSVGL_ELL_MAX})


LEFTDRIFT_H = 100_000


def _leftdrift_full() -> Fixture:
    space = LineSpace(2 * LEFTDRIFT_H, (1, -1))
    ifs = IFS(space, full_shift(2), "leftdrift-full")
    cite = "transitive t = 1^|w1| w1 1^|w2| w2 ... keeps 1 out of the orbit closure"
    entries = [
        Entry("MAX_INDEX", CUSTOM, VERIFIED, cite,
              fn=lambda fx, cfg: _max_index_never_exceeds_start(fx.ifs.space, gen_leftdrift_stream(), LEFTDRIFT_H)),
        Entry("DRIFT", CUSTOM, REFUTED, cite + "; t is not in S",
              fn=lambda fx, cfg: _drift_verdict(fx.ifs.space, gen_leftdrift_stream(), LEFTDRIFT_H, cfg.drift_block)),
    ]
    return Fixture("leftdrift-full", ifs, CheckConfig(run_horizon=LEFTDRIFT_H), entries, cite,
                   notes="The line is widened so that the run never reaches the truncation.")


MARKOV_K = 8


def _markov() -> Fixture:
    w0, w1, w2 = "100", "011", "000"
    spec = coded_shift([w0, w1, w2], 2, name="W")
    ifs = IFS(LineSpace(64, (1, -1)), spec, "markov-100-011-000")
    sub_gens = [g for k in range(1, MARKOV_K + 1) for g in (w0 * k + w1 * k, w1 * k + w0 * k)]
    sub = IFS(LineSpace(64, (1, -1)), coded_shift(sub_gens, 2, name="W'"), "markov-W'")
    cite = "SFT generated by {100, 011, 000}: S is dense but not residual"
    sig = lambda: gen_sigma0(w0, w1)  # noqa: E731
    sub_point = lambda: periodic_stream("".join(w0 * k + w1 * k + w1 * k + w0 * k for k in range(1, MARKOV_K + 1)))  # noqa: E731
    entries = [
        Entry("FREQUENCY", CUSTOM, VERIFIED, cite + "; Parry samples have 0-frequency 2/3",
              fn=lambda fx, cfg: _symbol_frequency(fx.ifs.spec, "0", Fraction(2, 3), 10_000, range(20), 3.0)),
        Entry("S", DENSITY, "", cite + "; S has measure zero", config={"run_horizon": 1000},
              sampler=("markov", 1000, 200), fraction=(VERIFIED, "<=", Fraction(1, 20))),
        Entry("S", S_MEMBERSHIP, VERIFIED, cite + "; sigma0 lies in S", sigma=sig),
        Entry("IDENTITY", CUSTOM, VERIFIED, cite + "; f_{w0^k w1^k} is the identity",
              fn=lambda fx, cfg: _identity_on_words(fx.ifs, [w0 * k + w1 * k for k in range(1, 5)])),
        Entry("S", S_MEMBERSHIP, VERIFIED, cite + "; points of the W' subsystem lie in S", sigma=sub_point,
              variant="W'"),
    ]
    return Fixture("markov-100-011-000", ifs, CheckConfig(), entries, cite,
                   notes=f"The W' subsystem is truncated at k <= {MARKOV_K}.", variants={"W'": sub},
                   params={"k_max": MARKOV_K})


def _prepend() -> Fixture:
    space = CylinderSpace(PREPEND, max_depth=4096)
    ifs = IFS(space, full_shift(2), "prepend")
    cite = "f_i(xi) = i xi on {0,1}^N: mixing, but not mixing along any orbit"
    cover = space.cover_upto(6)
    full = ("FULL", CylinderSet.full())
    v100 = ("[100]", CylinderSet.of("100"))
    entries = [
        Entry(MIXING, GLOBAL, VERIFIED, cite + "; M = |v| for the pair ([u], [v])",
              config={"cover": cover, "mixing_window": (0, 12)}),
        Entry(MIXING, ALONG_SAMPLED, REFUTED, cite + "; w0 and w1 force a double miss of [100]",
              config={"pairs": [(full, v100)], "run_horizon": 200}, sampler=("uniform", 200, 20)),
    ]
    return Fixture("prepend", ifs, CheckConfig(), entries, cite)


def _firstbit() -> Fixture:
    space = CylinderSpace(FIRSTBIT, max_depth=64)
    ifs = IFS(space, full_shift(2), "firstbit")
    cite = "first-bit maps: exact along a transitive point built from permutation blocks"
    stream = lambda: gen_permutation_stream(2)  # noqa: E731
    entries = [
        Entry(EXACT, ALONG, VERIFIED, cite, sigma=stream,
              config={"cover": space.cover_upto(3), "run_horizon": stream().length, "tail_fraction": Fraction(1, 4)}),
    ]
    return Fixture("firstbit", ifs, CheckConfig(), entries, cite,
                   notes="The stream is materialized through permutation blocks of words of length <= 2.")


def _pl_exact_pair() -> Fixture:
    f0, f1, params = reference_pl_pair()
    spec = graph_shift(["a", "b"], [("a", "b", "0"), ("b", "a", "1")], 2, name="alternating")
    ifs = IFS(IntervalSpace([f0, f1]), spec, "pl-exact-pair")
    cite = "each map exact but the pair shrinks I0 to a point along (01)^infinity"
    x0 = params["x0"]
    trap = (f"[{x0 - Fraction(1, 256)},{x0}]", IntervalSet.interval(x0 - Fraction(1, 256), x0))
    i0 = IntervalSet.interval(*params["I0"])
    c0 = params["c0"]
    entries = [
        Entry("CONSTRAINTS", CUSTOM, VERIFIED, cite,
              fn=lambda fx, cfg: (verified(None, verify_pl_constraints(f0, f1, params))
                                  if verify_pl_constraints(f0, f1, params)["pass"]
                                  else refuted(verify_pl_constraints(f0, f1, params)))),
        Entry("SINGLE_MAP_EXACT", CUSTOM, VERIFIED, cite + "; each map alone is exact",
              fn=lambda fx, cfg: _desk_scale_exact([f0, f1], Fraction(1, 64), 12)),
        Entry("SHRINK", CUSTOM, VERIFIED, cite,
              fn=lambda fx, cfg: _shrink_along_period([f0, f1], i0, "01", 8, c0 * c0)),
        Entry(EXACT, ALONG, REFUTED, cite, sigma=lambda: periodic_stream("01"),
              config={"cover": [("I0", i0)], "run_horizon": 64}),
        Entry(EXACT, GLOBAL, REFUTED, cite, config={"cover": [trap], "word_horizon": 14}),
    ]
    return Fixture("pl-exact-pair", ifs, CheckConfig(), entries, cite, params={k: str(v) for k, v in params.items()})


CATALOG = {
    "golden-robot": _golden_robot,
    "ptt-not-tt": _ptt_not_tt,
    "doubling-sigma": _doubling_sigma,
    "shift-inverse": _shift_inverse,
    "line-basic": _line_basic,
    "coded-0n1n": _coded_0n1n,
    "two-expanding": _two_expanding,
    "nonsvgl": _nonsvgl,
    "leftdrift-full": _leftdrift_full,
    "markov-100-011-000": _markov,
    "prepend": _prepend,
    "firstbit": _firstbit,
    "pl-exact-pair": _pl_exact_pair,
}


def list_examples() -> list:
    return list(CATALOG)


def build_example(example_id: str) -> Fixture:
    try:
        return CATALOG[example_id]()
    except KeyError:
        raise ArtifactError("UNKNOWN_ID", repr(example_id)) from None


# ------------------------------------------------------------------ running

_OPS = {"==": lambda a, b: a == b, "<=": lambda a, b: a <= b, ">=": lambda a, b: a >= b}


def _sampler(entry: Entry, spec):
    kind, length, _ = entry.sampler
    return uniform_sampler(spec, length) if kind == "uniform" else markov_sampler(spec, length)


def run_entry(fx: Fixture, entry: Entry) -> dict:
    """Run one manifest entry; returns expected vs observed with the verdict."""
    ifs = fx.ifs_for(entry)
    cfg = fx.config_for(entry)
    t0 = time.perf_counter()
    row = {"property": entry.prop, "scope": entry.scope, "variant": entry.variant, "citation": entry.citation}
    if entry.scope == DENSITY:
        status, op, value = entry.fraction
        res = estimate_s_density(ifs, _sampler(entry, ifs.spec), entry.sampler[2], cfg)
        got = res["fractions"][status]
        row.update(expected=f"fraction[{status}] {op} {value}", observed=f"fraction[{status}] = {got}",
                   match=_OPS[op](got, value), verdict=None, density=res)
    elif entry.scope == ALONG_SAMPLED:
        rng = np.random.default_rng(cfg.seed)
        seeds = [int(s) for s in rng.integers(0, 2**31 - 1, size=entry.sampler[2])]
        verdicts = [check_along(ifs, sample_walk(ifs.spec, entry.sampler[1], s), entry.prop, cfg) for s in seeds]
        statuses = sorted({v.status for v in verdicts})
        row.update(expected=entry.expected, observed=statuses[0] if len(statuses) == 1 else "MIXED",
                   verdict=verdicts[0], samples=[{"seed": s, "status": v.status} for s, v in zip(seeds, verdicts)])
        row["match"] = row["observed"] == entry.expected
    else:
        if entry.scope == GLOBAL:
            v = check(ifs, entry.prop, cfg)
        elif entry.scope == ALONG:
            v = check_along(ifs, entry.sigma(), entry.prop, cfg)
        elif entry.scope == S_MEMBERSHIP:
            v = s_membership(ifs, entry.sigma(), cfg)
        elif entry.scope == CUSTOM:
            v = entry.fn(fx, cfg)
        else:
            raise ArtifactError("BAD_CONFIG", f"unknown scope {entry.scope}")
        row.update(expected=entry.expected, observed=v.status, match=v.status == entry.expected, verdict=v)
    row["runtime_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    row["config"] = cfg.echo()
    return row


def run_manifest(fx: Fixture, only=None) -> list:
    """Every manifest entry (or those whose name or property is in ``only``)."""
    rows = []
    for e in fx.entries:
        if only and e.prop not in only and e.name not in only:
            continue
        rows.append(run_entry(fx, e))
    return rows


def audit_rows(rows: list) -> dict:
    """Hierarchy audit over the global and along verdicts of one fixture run, per IFS variant."""
    groups: dict = {}
    for r in rows:
        if r.get("verdict") is None or r["scope"] not in (GLOBAL, ALONG):
            continue
        g = groups.setdefault(r["variant"], ({}, {}))
        (g[0] if r["scope"] == GLOBAL else g[1])[r["property"]] = r["verdict"]
    flags = []
    for variant, (glob, along) in groups.items():
        res = hierarchy_audit(glob, along)
        flags.extend({**f, "variant": variant} for f in res["flags"])
    return {"flags": flags, "consistent": not flags}

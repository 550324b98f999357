from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from artifact import _kernels
from artifact.ifs_engine import (
    IFS,
    apply_word,
    backward_orbit,
    check_factor,
    forward_orbit,
    full_orbit,
    image_word,
    preimage_word,
    run_along,
)
from artifact.shift_core import (
    SlidingBlockCode,
    coded_shift,
    full_shift,
    gen_leftdrift_stream,
    golden_shift,
    identity_code,
    sample_walk,
)
from artifact.state_spaces import (
    BOUNDARY,
    FIRSTBIT,
    PREPEND,
    CylinderSet,
    CylinderSpace,
    HarmonicSpace,
    IntervalSpace,
    LineSpace,
    TableSpace,
    doubling_map,
    tripling_map,
)
from artifact.verdict import ArtifactError

Q = Fraction


def _line(spec=None, n=30):
    return IFS(LineSpace(n), spec or full_shift(2))


def _interval():
    return IFS(IntervalSpace([doubling_map(), tripling_map()]), full_shift(2))


@st.composite
def table_ifs(draw):
    k = draw(st.integers(1, 3))
    size = draw(st.integers(1, 6))
    tables = [draw(st.lists(st.integers(0, size - 1), min_size=size, max_size=size)) for _ in range(k)]
    spec = full_shift(k) if k == 1 else draw(st.sampled_from([full_shift(k), coded_shift(["01", "0"], k)]))
    return IFS(TableSpace(tables), spec)


def test_map_count_must_match_alphabet():
    with pytest.raises(ArtifactError) as e:
        IFS(HarmonicSpace(8), full_shift(2))
    assert e.value.code == "MAP_COUNT_MISMATCH"


def test_inadmissible_words_are_rejected():
    ifs = _line(golden_shift())
    with pytest.raises(ArtifactError) as e:
        apply_word(ifs, "0110", 0)
    assert e.value.code == "INADMISSIBLE_WORD"
    assert apply_word(ifs, "0101", 0) == 0


@given(st.integers(-10, 10), st.text(alphabet="01", max_size=10), st.text(alphabet="01", max_size=10))
def test_composition_law_line(x, u, v):
    ifs = _line()
    y = apply_word(ifs, u, x)
    assume(y != BOUNDARY)
    assert apply_word(ifs, v, y) == apply_word(ifs, u + v, x)


@given(st.integers(0, 1000), st.text(alphabet="01", max_size=8), st.text(alphabet="01", max_size=8))
def test_composition_law_interval(i, u, v):
    ifs = _interval()
    x = Q(i, 1009)
    assert apply_word(ifs, v, apply_word(ifs, u, x)) == apply_word(ifs, u + v, x)
    # the first symbol acts first
    if u:
        f = [doubling_map(), tripling_map()][int(u[0])]
        assert apply_word(ifs, u, x) == apply_word(ifs, u[1:], f(x))


@given(st.text(alphabet="01", max_size=8), st.text(alphabet="01", min_size=1, max_size=4))
def test_composition_law_cylinders(u, p):
    ifs = IFS(CylinderSpace(FIRSTBIT, 32), full_shift(2))
    s = CylinderSet.of(p)
    a, _ = image_word(ifs, u[:3], s)
    b, _ = image_word(ifs, u[3:], a)
    assert b == image_word(ifs, u, s)[0]


@given(table_ifs(), st.integers(1, 6))
def test_forward_orbit_matches_enumeration(ifs, horizon):
    lang = oracles.language_table(ifs.spec, horizon)
    for x in ifs.space.points():
        orb = forward_orbit(ifs, x, horizon)
        brute = {x}
        for w in oracles.walk_words(lang, ifs.k, horizon):
            brute.add(apply_word(ifs, w, x, check=False))
        assert orb.values == brute
        for y, w in orb.witnesses.items():
            assert apply_word(ifs, w, x) == y
        bigger = forward_orbit(ifs, x, horizon + 1)
        assert orb.values <= bigger.values


@given(table_ifs(), st.integers(0, 5), st.integers(0, 2**31))
def test_image_preimage_adjunction(ifs, n, seed):
    u = sample_walk(ifs.spec, n, seed).prefix(n)
    for x in ifs.space.points():
        for y in ifs.space.points():
            img, _ = image_word(ifs, u, frozenset([x]))
            assert (y in img) == (x in preimage_word(ifs, u, frozenset([y])))


@given(table_ifs(), st.integers(1, 4))
def test_backward_orbit_by_enumeration(ifs, horizon):
    lang = oracles.language_table(ifs.spec, horizon)
    pts = ifs.space.points()
    for x in pts:
        brute = {x} | {y for y in pts for w in oracles.walk_words(lang, ifs.k, horizon)
                       if apply_word(ifs, w, y, check=False) == x}
        assert backward_orbit(ifs, x, horizon) == brute
        assert full_orbit(ifs, x, horizon) == brute | forward_orbit(ifs, x, horizon).values


def test_forward_orbit_of_sets_and_boundary():
    ifs = IFS(CylinderSpace(PREPEND, 16), full_shift(2))
    orb = forward_orbit(ifs, CylinderSet.full(), 3)
    assert CylinderSet.of("01") in orb.values and len(orb.values) == 1 + 2 + 4 + 8
    edge = forward_orbit(_line(n=2), 1, 5)
    assert edge.boundary and edge.exhausted


@given(st.integers(-5, 5), st.integers(0, 2**31), st.integers(0, 200))
def test_run_along_matches_apply_word(x, seed, n):
    ifs = _line(n=40)
    sigma = sample_walk(full_shift(2), n, seed)
    run = run_along(ifs, sigma, x, n)
    w = sigma.prefix(n)
    for t, y in enumerate(run.trajectory):
        assert apply_word(ifs, w[:t], x) == y
    if run.boundary:
        assert apply_word(ifs, w[: run.length + 1], x) == BOUNDARY
    else:
        assert run.length == n


@given(st.integers(0, 1000), st.integers(0, 2**31))
def test_run_along_interval(i, seed):
    ifs = _interval()
    sigma = sample_walk(full_shift(2), 40, seed)
    x = Q(i, 1013)
    run = run_along(ifs, sigma, x, 40)
    w = sigma.prefix(40)
    assert len(run.trajectory) == 41
    assert all(run.trajectory[t] == apply_word(ifs, w[:t], x) for t in (0, 1, 7, 40))


def test_run_along_long_line():
    ifs = IFS(LineSpace(200_000), full_shift(2))
    run = run_along(ifs, gen_leftdrift_stream(), 0, 100_000)
    assert run.length == 100_000 and not run.boundary
    assert run.stats["max_index"] == 0


def test_check_factor_identity_and_refutation():
    a = IFS(TableSpace([[1, 2, 0], [0, 1, 2]]), full_shift(2))
    b = IFS(TableSpace([[1, 0], [0, 1]]), full_shift(2))
    phi = {0: 0, 1: 1, 2: 0}
    assert check_factor(a, a, {0: 0, 1: 1, 2: 2}, identity_code(2), horizon=5).verified
    v = check_factor(a, b, phi, identity_code(2), horizon=5)
    assert v.refuted
    w = v.witness
    i = w["index"] - 1
    x = w["x"]
    c = w["prefix"][i]
    assert phi[a.space.apply_point(int(c), x)] != b.space.apply_point(int(c), phi[x])


def test_check_factor_swapped_symbols():
    # phi(x) = x mod 2 turns the +1 / -1 line into a parity flip for both symbols
    a = IFS(TableSpace([[1, 2, 3, 0], [3, 0, 1, 2]]), full_shift(2))
    b = IFS(TableSpace([[1, 0], [1, 0]]), full_shift(2))
    swap = SlidingBlockCode(0, 0, {"0": "1", "1": "0"})
    assert check_factor(a, b, lambda x: x % 2, swap, horizon=6).verified


def test_check_factor_errors():
    a = IFS(TableSpace([[1, 0], [0, 1]]), full_shift(2))
    c = IFS(TableSpace([[0, 1, 2], [0, 1, 2]]), full_shift(2))
    with pytest.raises(ArtifactError) as e:
        check_factor(a, c, {0: 0, 1: 1}, identity_code(2))
    assert e.value.code == "PHI_NOT_SURJECTIVE"
    bad = SlidingBlockCode(0, 0, {"0": "5", "1": "0"})
    with pytest.raises(ArtifactError) as e:
        check_factor(a, a, {0: 0, 1: 1}, bad)
    assert e.value.code == "CODE_RANGE_ERROR"


# ----------------------------------------------------------------- kernels

@given(st.lists(st.integers(0, 1), max_size=300), st.integers(-20, 20), st.integers(1, 40))
def test_line_walk_kernels_agree(symbols, start, limit):
    steps = np.array([1, -1])
    syms = np.array(symbols, dtype=np.int64)
    assume(abs(start) <= limit)
    p1, n1 = _kernels.line_walk(steps, syms, start, limit, use_numba=True)
    p2, n2 = _kernels.line_walk(steps, syms, start, limit, use_numba=False)
    assert n1 == n2
    assert np.array_equal(p1[:n1], p2[:n2])
    # plain loop reference
    x, ref = start, [start]
    for s in symbols:
        x += int(steps[s])
        if abs(x) > limit:
            break
        ref.append(x)
    assert list(p2[:n2]) == ref


@given(st.lists(st.integers(0, 2), max_size=300))
def test_displacement_kernels_agree(symbols):
    steps = np.array([2, -1, 0])
    syms = np.array(symbols, dtype=np.int64)
    a = _kernels.displacement(steps, syms, use_numba=True)
    b = _kernels.displacement(steps, syms, use_numba=False)
    assert np.array_equal(a, b)
    assert int(a[-1]) == sum(int(steps[s]) for s in symbols)


@given(st.integers(0, 2**31), st.integers(1, 500))
def test_markov_walk_kernels_agree(seed, n):
    offsets = np.array([0, 2, 3])
    cum = np.array([0.3, 1.0, 1.0])
    targets = np.array([0, 1, 0])
    labels = np.array([0, 1, 1])
    u = np.random.default_rng(seed).random(n)
    a = _kernels.markov_walk(offsets, cum, targets, labels, 0, u, use_numba=True)
    b = _kernels.markov_walk(offsets, cum, targets, labels, 0, u, use_numba=False)
    assert np.array_equal(a, b)


def test_no_numba_switch_selects_numpy_path():
    import os
    import subprocess
    import sys

    code = "from artifact import _kernels, examples; print(_kernels.USE_NUMBA);" \
           "fx = examples.build_example('leftdrift-full'); print(examples.run_manifest(fx)[0]['observed'])"
    env = {**os.environ, "ARTIFACT_NO_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert out.split() == ["False", "VERIFIED_UP_TO"]

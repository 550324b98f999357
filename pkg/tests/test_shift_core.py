import math

import pytest
from hypothesis import given, strategies as st

import oracles
from artifact.shift_core import (
    ShiftSpec,
    SlidingBlockCode,
    apply_sliding_block,
    block_projection,
    check_svgl,
    coded_shift,
    compile_oracle,
    connect_words,
    count_words,
    entropy_estimate,
    enumerate_words,
    find_synchronizing_word,
    forbidden_sft,
    full_shift,
    gen_leftdrift_stream,
    gen_permutation_stream,
    gen_sigma0,
    gen_transitive_stream,
    golden_shift,
    graph_shift,
    higher_block,
    identity_code,
    is_admissible,
    is_irreducible,
    load_spec,
    periodic_stream,
    permutation_blocks,
    reverse_word,
    sample_markov,
    sample_walk,
    spec_from_dict,
    spec_to_dict,
    weight_range,
    words_up_to,
)
from artifact.verdict import ArtifactError

SPECS = {
    "full2": full_shift(2),
    "full3": full_shift(3),
    "golden": golden_shift(),
    "coded-100-011-000": coded_shift(["100", "011", "000"], 2),
    "sft-increasing": forbidden_sft(2, ["10"]),
    "sft-deadend": forbidden_sft(2, ["00", "01"]),
    "sft-3": forbidden_sft(3, ["00", "12", "21"]),
    "sft-len3": forbidden_sft(2, ["111", "010"]),
    "coded-01-10": coded_shift(["01", "10"]),
    "coded-01-10-0": coded_shift(["01", "10", "0"]),
    "coded-0n1n": coded_shift(["0" * n + "1" * n for n in range(1, 7)], 2),
    "even": graph_shift(["a", "b"], [("a", "a", "1"), ("a", "b", "0"), ("b", "a", "0")], 2),
    "alternating": graph_shift(["a", "b"], [("a", "b", "0"), ("b", "a", "1")], 2),
    "three-cycle": graph_shift(["a", "b", "c"], [("a", "b", "0"), ("b", "c", "1"), ("c", "a", "2"), ("a", "a", "1")], 3),
}


@pytest.mark.parametrize("name", sorted(SPECS))
def test_enumeration_matches_brute_force(name):
    spec = SPECS[name]
    dfa = compile_oracle(spec)
    for n in range(9):
        words = enumerate_words(dfa, n)
        assert words == oracles.language(spec, n)
        assert count_words(dfa, n) == len(words)


def test_golden_counts_are_fibonacci():
    dfa = compile_oracle(golden_shift())
    assert [count_words(dfa, n) for n in range(1, 11)] == [2, 3, 5, 8, 13, 21, 34, 55, 89, 144]


def test_automaton_is_minimal_for_known_cases():
    assert compile_oracle(full_shift(3)).n_states == 1
    assert compile_oracle(golden_shift()).n_states == 2
    # the dead-end SFT is just 1*
    dfa = compile_oracle(SPECS["sft-deadend"])
    assert dfa.n_states == 1 and enumerate_words(dfa, 3) == ["111"]


@pytest.mark.parametrize("name", sorted(SPECS))
def test_every_accepted_word_extends_right(name):
    dfa = compile_oracle(SPECS[name])
    for q in range(dfa.n_states):
        assert dfa.successors(q), f"state {q} is a dead end"


@given(st.sampled_from(sorted(SPECS)), st.integers(0, 2**32 - 1), st.integers(1, 30))
def test_factor_closed(name, seed, length):
    spec = SPECS[name]
    w = sample_walk(spec, length, seed).prefix(length)
    assert is_admissible(spec, w)
    for i in range(len(w)):
        for j in range(i, len(w) + 1):
            assert is_admissible(spec, w[i:j])


@given(st.text(alphabet="012", max_size=20))
def test_reversal_is_an_involution(u):
    assert reverse_word(reverse_word(u)) == u


@given(st.text(alphabet="01", max_size=10), st.text(alphabet="01", max_size=10))
def test_reversal_of_concatenation(u, v):
    assert reverse_word(u + v) == reverse_word(v) + reverse_word(u)


@pytest.mark.parametrize("name", ["golden", "full2", "coded-100-011-000", "coded-01-10", "even", "sft-3"])
@pytest.mark.parametrize("n_block", [2, 3])
def test_higher_block_round_trip(name, n_block):
    spec = SPECS[name]
    hb = higher_block(spec, n_block)
    project = block_projection(spec, n_block)
    hdfa = compile_oracle(hb)
    for length in range(n_block, 9):
        projected = sorted(project(w) for w in enumerate_words(hdfa, length - n_block + 1))
        assert projected == oracles.language(spec, length)


def test_higher_block_symbols_are_lexicographic_blocks():
    hb = higher_block(golden_shift(), 2)
    assert hb.k == 3  # 00, 01, 10
    project = block_projection(golden_shift(), 2)
    assert [project(c) for c in "012"] == ["00", "01", "10"]


def test_spec_validation_errors():
    with pytest.raises(ArtifactError) as e:
        forbidden_sft(2, [""])
    assert e.value.code == "MALFORMED_SPEC"
    with pytest.raises(ArtifactError):
        coded_shift(["01", ""])
    with pytest.raises(ArtifactError):
        forbidden_sft(2, ["02"])
    with pytest.raises(ArtifactError):
        graph_shift(["a", "b"], [("a", "a", "0")], 2)  # b is stranded
    with pytest.raises(ArtifactError):
        ShiftSpec("bogus", 2)


@pytest.mark.parametrize("name", sorted(SPECS))
def test_spec_dict_round_trip(name):
    spec = SPECS[name]
    assert spec_from_dict(spec_to_dict(spec)) == spec


def test_load_spec_yaml(tmp_path):
    p = tmp_path / "golden.yaml"
    p.write_text("kind: sft\nalphabet_size: 2\nforbidden: ['11']\nname: golden\n")
    assert load_spec(str(p)) == golden_shift()
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: sft\nforbidden: ['']\n")
    with pytest.raises(ArtifactError):
        load_spec(str(bad))


def test_connectors():
    g = golden_shift()
    assert connect_words(g, "1", "1", 3) == "0"
    assert connect_words(g, "0", "1", 3) == ""
    alt = SPECS["alternating"]
    assert connect_words(alt, "0", "0", 3) == "1"
    assert connect_words(SPECS["sft-increasing"], "1", "0", 6) is None


@given(st.sampled_from(["golden", "coded-100-011-000", "coded-01-10", "even", "sft-3"]),
       st.integers(0, 2**31), st.integers(0, 2**31), st.integers(1, 5), st.integers(1, 5))
def test_connector_is_shortest_and_admissible(name, s1, s2, n1, n2):
    spec = SPECS[name]
    u = sample_walk(spec, n1, s1).prefix(n1)
    v = sample_walk(spec, n2, s2).prefix(n2)
    w = connect_words(spec, u, v, 6)
    assert w is not None  # every listed spec is irreducible with small gaps
    assert is_admissible(spec, u + w + v)
    dfa = compile_oracle(spec)
    for shorter in range(len(w)):
        assert not any(dfa.accepts(u + c + v) for c in oracles.all_words(spec.k, shorter))


def test_svgl_and_irreducibility():
    assert check_svgl(golden_shift(), 2, 4).verified
    assert check_svgl(SPECS["sft-increasing"], 4, 4).refuted
    assert is_irreducible(SPECS["even"], 4).exact
    assert is_irreducible(SPECS["sft-increasing"], 4).refuted
    reducible = graph_shift(["a", "b"], [("a", "a", "0"), ("a", "b", "1"), ("b", "b", "0"), ("b", "a", "1")], 2)
    assert is_irreducible(reducible, 4).verified


def test_synchronizing_words():
    assert find_synchronizing_word(golden_shift(), 4) == "0"
    assert find_synchronizing_word(full_shift(2), 4) == ""
    # in the even shift "1" resets the parity of the 0-run
    assert find_synchronizing_word(SPECS["even"], 4) == "1"


def test_weight_range():
    assert weight_range(compile_oracle(full_shift(2)), (1, -1)) == (None, None)
    assert weight_range(compile_oracle(coded_shift(["01", "10"])), (1, -1)) == (-2, 2)  # "0110" has factor "11"
    assert weight_range(compile_oracle(golden_shift()), (1, -1)) == (-1, None)


@given(st.sampled_from(["coded-01-10", "coded-0n1n", "sft-deadend"]), st.integers(1, 10))
def test_weight_range_bounds_every_word(name, n):
    dfa = compile_oracle(SPECS[name])
    lo, hi = weight_range(dfa, (1, -1))
    for w in words_up_to(dfa, n):
        d = w.count("0") - w.count("1")
        assert (lo is None or d >= lo) and (hi is None or d <= hi)


def test_sliding_block_codes():
    code = SlidingBlockCode(0, 1, {"00": "0", "01": "1", "10": "1", "11": "0"})
    assert apply_sliding_block(code, "0110") == "101"
    assert apply_sliding_block(identity_code(2), "0110") == "0110"
    with pytest.raises(ArtifactError):
        apply_sliding_block(code, "0")
    golden_code = SlidingBlockCode(0, 1, {"00": "0", "01": "1", "10": "1"}, source=golden_shift())
    with pytest.raises(ArtifactError):
        apply_sliding_block(golden_code, "0110")


def test_sigma0_prefix():
    assert gen_sigma0("0", "1").prefix(10) == "0110001111"
    assert gen_sigma0("100", "011").prefix(9) == "100011011"
    with pytest.raises(ArtifactError):
        gen_sigma0("0", "11")


def test_streams_are_consistent_prefixes():
    s = gen_sigma0("0", "1")
    a = s.prefix(50)
    assert s.prefix(20) == a[:20]
    assert periodic_stream("01").prefix(7) == "0101010"
    p = gen_permutation_stream(2)
    assert p.length == 2 * 2 + 24 * 8
    assert p.prefix(p.length).startswith("01" + "10")
    with pytest.raises(ArtifactError):
        p.prefix(p.length + 1)


def test_permutation_blocks_cover_all_orderings():
    blocks = list(permutation_blocks(2))
    assert len(blocks) == math.factorial(4) == len(set(blocks))
    assert all(sorted(b[i:i + 2] for i in range(0, 8, 2)) == ["00", "01", "10", "11"] for b in blocks)


def test_leftdrift_stream_layout():
    assert gen_leftdrift_stream().prefix(2 + 2 + 8 + 8) == "11" + "01" + "1" * 8 + "00011011"


@pytest.mark.parametrize("name", ["golden", "full2", "coded-100-011-000", "coded-01-10", "even"])
def test_transitive_stream_revisits_every_short_word(name):
    spec = SPECS[name]
    dfa = compile_oracle(spec)
    # the chunks for lengths n and n + 1 each contain every word of length n,
    # so H(w) = total length of the chunks up to length |w| + 1
    for n in range(1, 5):
        stream = gen_transitive_stream(spec, l_max=n + 1)
        body = "".join(stream._factory())
        for w in enumerate_words(dfa, n):
            first = body.find(w)
            assert first >= 0 and body.find(w, first + 1) >= 0, w
        assert is_admissible(spec, body)


@given(st.integers(0, 2**31), st.integers(1, 200))
def test_seeded_samplers_are_reproducible(seed, length):
    spec = SPECS["coded-100-011-000"]
    assert sample_markov(spec, length, seed).prefix(length) == sample_markov(spec, length, seed).prefix(length)
    assert sample_walk(spec, length, seed).prefix(length) == sample_walk(spec, length, seed).prefix(length)
    assert is_admissible(spec, sample_markov(spec, length, seed).prefix(length))


def test_markov_zero_frequency():
    spec = SPECS["coded-100-011-000"]
    n = 10_000
    delta = 1.5 / math.sqrt(n)
    for seed in range(20):
        w = sample_markov(spec, n, seed).prefix(n)
        assert abs(w.count("0") / n - 2 / 3) <= 3 * delta


def test_markov_numba_and_numpy_agree():
    spec = SPECS["coded-100-011-000"]
    a = sample_markov(spec, 3000, 7, use_numba=True).prefix(3000)
    b = sample_markov(spec, 3000, 7, use_numba=False).prefix(3000)
    assert a == b


def test_entropy_estimate():
    assert entropy_estimate(compile_oracle(full_shift(2)), 8) == 1.0
    golden = entropy_estimate(compile_oracle(golden_shift()), 20)
    assert abs(golden - math.log2((1 + 5 ** 0.5) / 2)) < 0.05

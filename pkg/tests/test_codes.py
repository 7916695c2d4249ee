"""Code constructions, encoding, syndromes, and distance scans."""

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from codescout import (
    BitWord,
    ConfigError,
    EnumerationLimitError,
    LinearCode,
    build_hamming,
    build_reed_muller,
    build_repetition,
    build_syndrome_table,
    codewords,
    cyclic_code_from_polynomial,
    encode,
    from_generator,
    load_code_config,
    minimum_distance,
    parse_code_spec,
    profile_direct,
    syndrome,
    weight_distribution,
)


def test_hamming_columns_count_upward():
    for m in (3, 4):
        code = build_hamming(m)
        n = (1 << m) - 1
        assert (code.n, code.k) == (n, n - m)
        h = code.parity_check
        for j in range(n):
            column = sum(((h.rows[i] >> j) & 1) << i for i in range(m))
            assert column == j + 1


def test_every_codeword_has_zero_syndrome(hamming74):
    for message in range(1 << hamming74.k):
        assert syndrome(hamming74, encode(hamming74, message)) == 0


@given(st.integers(0, 15), st.integers(0, 15))
def test_encoding_is_linear(m1, m2):
    code = build_hamming(3)
    combined = encode(code, m1 ^ m2)
    assert combined.value == encode(code, m1).value ^ encode(code, m2).value


def test_encode_and_syndrome_accept_bitwords(hamming74):
    message = BitWord(4, 0b1010)
    word = encode(hamming74, message)
    assert isinstance(word, BitWord) and word.n == 7
    assert syndrome(hamming74, word) == 0
    with pytest.raises(ValueError):
        encode(hamming74, BitWord(7, 0))  # message must have k bits
    with pytest.raises(ValueError):
        syndrome(hamming74, 1 << 7)  # word must fit in n bits


def test_codeword_enumeration_is_the_full_subspace(hamming74):
    words = list(codewords(hamming74))
    assert len(words) == 1 << hamming74.k
    assert len(set(words)) == len(words)
    assert 0 in words
    sample = words[:8]
    for a in sample:
        for b in sample:
            assert a ^ b in set(words)


@pytest.mark.parametrize(
    "build, expected",
    [
        (lambda: build_hamming(3), 3),
        (lambda: build_hamming(4), 3),
        (lambda: build_repetition(5), 5),
        (lambda: build_reed_muller(1, 3), 4),
        (lambda: parse_code_spec("bch:15,7"), 5),
    ],
)
def test_minimum_distances(build, expected):
    assert minimum_distance(build()) == expected


def test_weight_distribution_hamming74(hamming74):
    assert weight_distribution(hamming74) == [1, 0, 0, 7, 7, 0, 0, 1]


def test_syndrome_table_of_a_perfect_code(hamming1511):
    table = build_syndrome_table(hamming1511)
    weights = table.leader_weight
    assert weights[0] == 0
    assert (weights[1:] == 1).all()  # single-error-correcting and perfect


def test_syndrome_table_agrees_with_profile(bch157, bch157_profile):
    table = build_syndrome_table(bch157)
    histogram = np.bincount(table.leader_weight, minlength=bch157.n + 1)
    assert tuple(histogram) == bch157_profile.leader_counts
    assert int(table.leader_weight.max()) == 3  # covering radius of this code


def test_syndrome_table_entries_are_coset_minima(hamming74):
    table = build_syndrome_table(hamming74)
    minima = {}
    for word in range(1 << hamming74.n):
        s = syndrome(hamming74, word)
        w = bin(word).count("1")
        minima[s] = min(w, minima.get(s, hamming74.n + 1))
    for s, weight in minima.items():
        assert table.leader_weight[s] == weight


def test_reed_muller_parameters():
    code = build_reed_muller(1, 3)
    assert (code.n, code.k) == (8, 4)
    code = build_reed_muller(2, 5)
    assert (code.n, code.k) == (32, 16)


def test_repetition_code():
    code = build_repetition(3)
    assert (code.n, code.k) == (3, 1)
    assert sorted(codewords(code)) == [0, 0b111]


def test_cyclic_construction_yields_hamming_equivalent():
    code = cyclic_code_from_polynomial(7, 0b1011, "cyclic(7,4)")
    assert (code.n, code.k) == (7, 4)
    assert minimum_distance(code) == 3
    assert weight_distribution(code) == [1, 0, 0, 7, 7, 0, 0, 1]


def test_cyclic_construction_rejects_bad_polynomials():
    with pytest.raises(ConfigError):
        cyclic_code_from_polynomial(7, 0b111, "x^2+x+1")  # does not divide x^7+1
    with pytest.raises(ConfigError):
        cyclic_code_from_polynomial(7, 0b10, "x")  # zero constant term
    with pytest.raises(ConfigError):
        cyclic_code_from_polynomial(7, 1, "1")  # degree 0
    with pytest.raises(ConfigError):
        cyclic_code_from_polynomial(4, 0b10011, "degree too high")


def test_from_generator_rejects_rank_deficiency():
    with pytest.raises(ConfigError):
        from_generator([0b011, 0b011], "dup rows", n=3)


def test_parse_code_spec_variants():
    assert parse_code_spec("hamming:3").n == 7
    assert parse_code_spec("reed_muller:1,3").n == 8
    assert parse_code_spec("reed-muller:1,3").n == 8
    assert parse_code_spec("rm:1,3").n == 8
    assert parse_code_spec("rep:5").n == 5
    assert parse_code_spec("repetition:5").n == 5
    bch = parse_code_spec("bch:15,7")
    assert (bch.n, bch.k) == (15, 7)
    assert bch.label == "BCH(15,7)"
    big = parse_code_spec("bch:31,16")
    assert (big.n, big.k) == (31, 16)


@pytest.mark.parametrize(
    "spec",
    ["hamming", "hamming:1", "rm:3,3", "rm:2", "bch:9,9", "nosuch:1", "hamming:x"],
)
def test_parse_code_spec_rejects(spec):
    with pytest.raises(ConfigError):
        parse_code_spec(spec)


def test_load_code_config_families(tmp_path):
    assert load_code_config({"family": "hamming", "m": 3}).n == 7
    assert load_code_config({"family": "reed_muller", "r": 1, "m": 3}).n == 8

    generator = {
        "family": "generator",
        "label": "lifted",
        "n": 3,
        "rows": ["7"],  # single row 111 in hex
    }
    code = load_code_config(generator)
    assert (code.n, code.k, code.label) == (3, 1, "lifted")

    path = tmp_path / "code.json"
    path.write_text(json.dumps({"family": "generator", "n": 7,
                                "generator_polynomial": "1011",
                                "minimum_distance": 3}))
    assert load_code_config(path).k == 4


def test_load_code_config_rejects():
    with pytest.raises(ConfigError):
        load_code_config({"family": "nosuch"})
    with pytest.raises(ConfigError):
        load_code_config({"family": "hamming"})  # missing m
    with pytest.raises(ConfigError):
        load_code_config({"family": "generator", "n": 7})
    with pytest.raises(ConfigError):
        load_code_config("/nonexistent/code.json")
    with pytest.raises(ConfigError):
        # Declared distance contradicts the exhaustive scan.
        load_code_config({"family": "generator", "n": 7,
                          "generator_polynomial": "1011",
                          "minimum_distance": 4})


def test_linear_code_validates_structure(hamming74):
    with pytest.raises(ValueError):
        LinearCode(7, 4, hamming74.generator, hamming74.generator, "bad shapes")
    with pytest.raises(ValueError):
        LinearCode(7, 7, hamming74.generator, hamming74.parity_check, "k = n")


def test_enumeration_limits():
    wide = build_hamming(6)  # k = 57 > exhaustive-scan limit
    with pytest.raises(EnumerationLimitError):
        minimum_distance(wide)
    with pytest.raises(EnumerationLimitError):
        weight_distribution(wide)
    long_rep = build_repetition(40)  # 2^39 syndromes
    with pytest.raises(EnumerationLimitError):
        build_syndrome_table(long_rep)


def test_profile_direct_connects_to_weight_distribution(hamming74, hamming74_profile):
    assert list(hamming74_profile.code_weight_distribution) == weight_distribution(hamming74)

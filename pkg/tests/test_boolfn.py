from collections import Counter
from itertools import product
from math import comb

import numpy as np
import pytest
from scipy.stats import binom, norm

from boolann.boolfn import (
    AnfForm,
    BooleanFunction,
    anf_from_truth_table,
    evaluate,
    format_anf,
    parse_anf,
    parse_truth_table,
    random_balanced,
    random_of_weight,
    truth_table_from_anf,
)


def anf_oracle(bits, n):
    """ANF coefficients by direct subset sums: a_m = XOR of f(x) over x subset of m."""
    return [sum(bits[x] for x in range(1 << n) if x & m == x) & 1 for m in range(1 << n)]


def test_evaluate_examples():
    assert evaluate(BooleanFunction.constant(3, 1), 5) == 1
    f = BooleanFunction.from_int(2, 0x8)
    assert evaluate(f, 3) == 1
    assert evaluate(f, 2) == 0


def test_evaluate_out_of_range():
    with pytest.raises(ValueError):
        evaluate(BooleanFunction.constant(3, 0), 8)


def test_anf_examples():
    assert anf_from_truth_table(BooleanFunction.constant(4, 0)).is_zero()
    assert anf_from_truth_table(BooleanFunction.from_int(2, 0x8)).masks() == [0b11]
    assert truth_table_from_anf(AnfForm.zero(3)) == BooleanFunction.constant(3, 0)
    assert truth_table_from_anf(AnfForm.from_masks(3, [0])) == BooleanFunction.constant(3, 1)
    xor = truth_table_from_anf(parse_anf("x1 + x2", 2))
    assert list(xor.bits()) == [0, 1, 1, 0]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mobius_exhaustive(n):
    for value in range(1 << (1 << n)):
        f = BooleanFunction.from_int(n, value)
        anf = anf_from_truth_table(f)
        assert list(anf.bits()) == anf_oracle(list(f.bits()), n)
        assert truth_table_from_anf(anf) == f


def test_mobius_random_roundtrip_n6():
    rng = np.random.default_rng(6)
    for _ in range(1000):
        f = BooleanFunction.from_bits(rng.integers(0, 2, 64))
        assert truth_table_from_anf(anf_from_truth_table(f)) == f


@pytest.mark.parametrize("n", [7, 9, 12])
def test_mobius_multiword_against_oracle(n):
    rng = np.random.default_rng(n)
    bits = rng.integers(0, 2, 1 << n)
    f = BooleanFunction.from_bits(bits)
    anf = anf_from_truth_table(f)
    probe = rng.integers(0, 1 << n, 40)
    for m in probe:
        sub = [x for x in range(1 << n) if x & m == x]
        assert anf.bit(int(m)) == int(bits[sub].sum()) & 1
    assert truth_table_from_anf(anf) == f


def test_degree():
    assert AnfForm.zero(4).degree == -1
    assert parse_anf("1", 4).degree == 0
    assert parse_anf("x1*x3 + x2", 4).degree == 2
    full = AnfForm.from_masks(4, [0b1111])
    assert full.degree == 4


def test_balanced_functions_have_degree_below_n():
    for seed in range(200):
        f = random_balanced(5, seed)
        anf = anf_from_truth_table(f)
        assert anf.degree <= 4
        assert anf.bit(0b11111) == 0


def test_top_coefficient_is_parity():
    rng = np.random.default_rng(1)
    for _ in range(100):
        f = BooleanFunction.from_bits(rng.integers(0, 2, 32))
        anf = anf_from_truth_table(f)
        assert anf.bit(31) == f.weight % 2
        assert (anf.degree == 5) == (f.weight % 2 == 1)


def test_random_of_weight_contract():
    f = random_of_weight(5, 16, 11)
    assert f.weight == 16 and f.is_balanced()
    assert random_of_weight(5, 0, 11) == BooleanFunction.constant(5, 0)
    assert random_of_weight(5, 32, 11) == BooleanFunction.constant(5, 1)
    assert random_of_weight(7, 40, 99) == random_of_weight(7, 40, 99)
    assert random_of_weight(7, 40, 99) != random_of_weight(7, 40, 100)
    assert random_balanced(6, 3).weight == 32
    assert random_balanced(8, 3).weight == 128
    with pytest.raises(ValueError):
        random_of_weight(4, 17, 0)


def test_random_balanced_uniform_n4():
    draws = 100_000
    classes = comb(16, 8)
    counts = Counter(random_balanced(4, seed).to_int() for seed in range(draws))
    assert all(bin(v).count("1") == 8 for v in counts)
    mean = draws / classes
    # per-class counts are Binomial(draws, 1/classes); bound the largest one by
    # the exact tail at the 5-sigma level, corrected for the number of classes
    ceiling = binom.isf(norm.sf(5) / classes, draws, 1 / classes)
    assert max(counts.values()) <= ceiling
    observed = np.array(list(counts.values()) + [0] * (classes - len(counts)), dtype=float)
    chi2 = ((observed - mean) ** 2 / mean).sum()
    df = classes - 1
    assert abs(chi2 - df) < 5 * (2 * df) ** 0.5


def test_truth_table_text_roundtrip():
    f = BooleanFunction.from_int(2, 0x8)
    assert f.to_text() == "n:2;tt:8"
    assert parse_truth_table("n:2;tt:8") == f
    assert parse_truth_table("8", n=2) == f
    g = random_balanced(7, 5)
    text = g.to_text()
    assert text.startswith("n:7;tt:") and len(text.split(":")[-1]) == 32
    assert parse_truth_table(text) == g
    with pytest.raises(ValueError):
        parse_truth_table("n:2;tt:1ff")
    with pytest.raises(ValueError):
        parse_truth_table("zz")


def test_anf_text_roundtrip():
    g = parse_anf("1 + x1 + x2*x3", 3)
    assert format_anf(g) == "1 + x1 + x2*x3"
    assert format_anf(parse_anf("x3*x2 + x1 + 1", 3)) == "1 + x1 + x2*x3"
    assert format_anf(parse_anf("x1 + x1", 3)) == "0"
    assert format_anf(AnfForm.zero(3)) == "0"
    for n in (3, 5):
        for bits in product([0, 1], repeat=1 << min(n, 3)):
            anf = AnfForm.from_masks(n, [m for m, b in enumerate(bits) if b])
            assert parse_anf(format_anf(anf), n) == anf
    with pytest.raises(ValueError):
        parse_anf("x4", 3)
    with pytest.raises(ValueError):
        parse_anf("x1 + y2", 3)


def test_immutable_and_hashable():
    f = random_balanced(6, 1)
    with pytest.raises(AttributeError):
        f.n = 3
    with pytest.raises(ValueError):
        f.words[0] = 0
    assert len({f, random_balanced(6, 1)}) == 1

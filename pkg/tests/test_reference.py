import random

import pytest

from rlelcs.reference import (
    ParameterError,
    ResourceLimitError,
    brute_lcs,
    brute_lrs,
    plant_instance,
    random_rle,
)
from rlelcs.rle import decode, encode


def test_brute_lcs_worked_example():
    res = brute_lcs(encode(b"abcdbbbbccccc"), encode(b"abcd@bbbbcc"))
    assert res.length == 6
    a = decode(encode(b"abcdbbbbccccc"))
    assert a[res.start_a - 1 : res.start_a - 1 + 6] == b"bbbbcc"
    assert res.encoded_length == 2


def test_brute_lcs_identical_and_disjoint():
    s = encode(b"aabbacc")
    same = brute_lcs(s, s)
    assert same.length == s.total
    assert brute_lcs(encode(b"aaab"), encode(b"cc")).length == 0


def test_brute_lcs_symmetry():
    rng = random.Random(0)
    for _ in range(25):
        a = random_rle(rng, rng.randint(0, 12) or 1)
        b = random_rle(rng, rng.randint(0, 12) or 1)
        assert brute_lcs(a, b).length == brute_lcs(b, a).length


def test_brute_lcs_matches_naive_scan():
    rng = random.Random(1)
    for _ in range(40):
        a = decode(random_rle(rng, rng.randint(1, 6), max_len=4))
        b = decode(random_rle(rng, rng.randint(1, 6), max_len=4))
        naive = 0
        for i in range(len(a)):
            for j in range(i, len(a)):
                if a[i : j + 1] in b:
                    naive = max(naive, j - i + 1)
        assert brute_lcs(encode(a), encode(b)).length == naive


def test_brute_lcs_resource_bound():
    big = encode(bytes([97 + (i % 2) for i in range(4000)]))
    with pytest.raises(ResourceLimitError):
        brute_lcs(big, big, bound=10_000)


def test_brute_lrs_examples():
    assert brute_lrs(encode(b"abcabc")).length == 3
    res = brute_lrs(encode(b"aaaa"))
    assert res.length == 3
    assert (res.start_1, res.start_2) == (1, 2)
    assert brute_lrs(encode(b"ab")).length == 0


def test_brute_lrs_matches_naive():
    rng = random.Random(2)
    for _ in range(40):
        s = decode(random_rle(rng, rng.randint(1, 7), max_len=3))
        naive = 0
        for i in range(len(s)):
            for j in range(i + 1, len(s)):
                l = 0
                while j + l < len(s) and s[i + l] == s[j + l]:
                    l += 1
                naive = max(naive, l)
        assert brute_lrs(encode(s)).length == naive


def test_plant_instance_reconfirmed_by_brute():
    for seed in range(20):
        inst = plant_instance(20, 6, 15, seed)
        assert inst.verified
        assert inst.d_tilde >= 15
        assert brute_lcs(inst.a, inst.b).length == inst.d_tilde


def test_plant_instance_degenerate_and_deterministic():
    inst = plant_instance(6, 6, 6, 3)
    assert inst.d_tilde >= 6
    again = plant_instance(20, 6, 15, 11)
    twice = plant_instance(20, 6, 15, 11)
    assert again.a == twice.a and again.b == twice.b


def test_plant_instance_parameter_errors():
    with pytest.raises(ParameterError):
        plant_instance(5, 6, 3, 0)
    with pytest.raises(ParameterError):
        plant_instance(8, 2, 100, 0)

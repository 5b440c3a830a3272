import pytest
from hypothesis import given, strategies as st

from rectsupport.generators import HANDCRAFTED, KINDS, generate, handcrafted
from rectsupport.geometry import is_nonpiercing_family, validate_general_position


@given(st.sampled_from(KINDS), st.integers(0, 80), st.integers(0, 30), st.integers(0, 1 << 30))
def test_every_kind_is_in_general_position(kind, n, m, seed):
    inst = generate(kind, n, m, seed)
    assert validate_general_position(inst) == []


@given(st.sampled_from(["squares", "filtered", "grid"]), st.integers(0, 80), st.integers(0, 30), st.integers(0, 1 << 30))
def test_nonpiercing_kinds(kind, n, m, seed):
    assert is_nonpiercing_family(generate(kind, n, m, seed).rects) is None


@pytest.mark.parametrize("kind", ["squares", "filtered", "random"])
def test_sizes_are_exact(kind):
    inst = generate(kind, 50, 20, 4)
    assert (inst.n, inst.m) == (50, 20)


def test_generation_is_seeded():
    assert generate("squares", 30, 10, 9) == generate("squares", 30, 10, 9)
    assert generate("squares", 30, 10, 9) != generate("squares", 30, 10, 10)


def test_chain_has_k_rects_and_witnesses():
    inst = generate("piercing-chain", 0, 5)
    assert inst.m == 5 and inst.n == 20
    assert generate("piercing-chain", 50, 5, 1).n == 50


def test_unknown_kind_and_negative_sizes():
    with pytest.raises(ValueError):
        generate("hexagons", 1, 1)
    with pytest.raises(ValueError):
        generate("squares", -1, 1)


@pytest.mark.parametrize("name", sorted(HANDCRAFTED))
def test_handcrafted_are_clean(name):
    inst = handcrafted(name)
    assert validate_general_position(inst) == []
    assert is_nonpiercing_family(inst.rects) is None

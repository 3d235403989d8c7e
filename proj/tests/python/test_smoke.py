import pathlib

import pytest

import incmatch

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def sample():
    return incmatch.parse_instance((DATA / "sample.txt").read_text())


def test_parse_and_round_trip(sample):
    assert sample.agents == ["a", "b", "c", "d"]
    assert sample.k == 2
    assert sample.m1 == [("a", "c"), ("b", "d")]
    assert incmatch.parse_instance(str(sample)) == sample


def test_solve_matches_oracle(sample):
    auto = incmatch.solve(sample)
    oracle = incmatch.solve(sample, algorithm="oracle")
    assert auto["symmetric_difference"] == oracle["symmetric_difference"] == 4
    assert auto["feasible"] is False
    assert auto["matching"] == [("a", "d"), ("b", "c")]
    assert incmatch.is_stable(sample, auto["matching"])
    assert incmatch.symmetric_difference(sample, sample.m1) == 0


def test_enumerate(sample):
    assert incmatch.enumerate_stable(sample) == [[("a", "d"), ("b", "c")]]


def test_errors(sample):
    with pytest.raises(ValueError, match="line 3"):
        incmatch.parse_instance("agents: a b\nprofile P1:\na: q\n")
    with pytest.raises(incmatch.ResourceLimit):
        incmatch.solve(sample, algorithm="oracle", limit=2)
    with pytest.raises(ValueError):
        incmatch.solve(sample, algorithm="nonsense")


def test_gadgets(sample):
    g = incmatch.gen_isr_from_clique((DATA / "k22.graph").read_text())
    assert len(g) == 60
    assert g.k == 38
    assert g.swap_distance == 4
    forbidden = incmatch.apply_forbidden_pairs_gadget(sample, [("a", "d")])
    assert forbidden.k == 22
    assert "algorithms" in dir(incmatch) and "outliers" in incmatch.algorithms()

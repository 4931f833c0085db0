import itertools
import json
import math

import pytest
from hypothesis import given

import oracles
from conftest import distributions
from pidlattice import distribution as D
from pidlattice.distribution import (
    JointDistribution,
    MalformedInputError,
    PMFInvariantError,
    Source,
    ZeroProbabilityError,
)

LOG3 = math.log2(3)


def test_marginal_target_of_xor_is_uniform(xor):
    m = D.marginal(xor, [0])
    assert m.variable_names == ("S",)
    assert m.pmf == pytest.approx({(0,): 0.5, (1,): 0.5})


def test_marginal_over_everything_is_identity(three_outcome):
    assert D.marginal(three_outcome, [0, 1, 2]) == three_outcome


def test_marginal_target_three_outcome_uniform_ternary(three_outcome):
    assert D.marginal(three_outcome, ["S"]).pmf == pytest.approx({(s,): 1 / 3 for s in range(3)})


@pytest.mark.parametrize("bad", [[], [3], [-1]])
def test_marginal_rejects_bad_positions(three_outcome, bad):
    with pytest.raises((ValueError, IndexError)):
        D.marginal(three_outcome, bad)


def test_conditional_prob_examples(three_outcome, xor):
    assert D.conditional_prob(three_outcome, {1: 1}, {0: 2}) == pytest.approx(1.0)
    assert D.conditional_prob(xor, {1: 0, 2: 0}, {0: 0}) == pytest.approx(1.0)
    indep = D.from_outcomes(list(itertools.product((0, 1), repeat=2)))
    assert D.conditional_prob(indep, {1: 1}, {0: 0}) == pytest.approx(0.5)


def test_conditional_prob_zero_event_raises(three_outcome):
    with pytest.raises(ZeroProbabilityError):
        D.conditional_prob(three_outcome, {1: 1, 2: 1}, {0: 0})


def test_entropy_examples(three_outcome):
    coin = D.from_outcomes([(0,), (1,)])
    assert D.entropy(coin, [0]) == pytest.approx(1.0)
    const = D.from_outcomes([(1, 0), (1, 1)])
    assert D.entropy(const, [0]) == 0.0
    assert D.entropy(three_outcome, [0]) == pytest.approx(LOG3, abs=1e-12)


def test_mutual_information_examples(three_outcome, xor):
    expected = -(1 / 3) * math.log2(1 / 3) - (2 / 3) * math.log2(2 / 3)
    assert D.mutual_information(three_outcome, 1) == pytest.approx(expected, abs=1e-12)
    assert D.mutual_information(three_outcome, 2) == pytest.approx(expected, abs=1e-12)
    assert D.mutual_information(xor, 1) == pytest.approx(0.0, abs=1e-12)
    assert D.mutual_information(xor, (1, 2)) == pytest.approx(1.0, abs=1e-12)


def test_specific_information_examples(three_outcome):
    assert D.specific_information(three_outcome, 2, 1) == pytest.approx(LOG3, abs=1e-12)
    assert D.specific_information(three_outcome, 0, 1) == pytest.approx(LOG3 - 1, abs=1e-12)
    indep = D.from_outcomes(list(itertools.product((0, 1), repeat=2)))
    for s in (0, 1):
        assert D.specific_information(indep, s, 1) == pytest.approx(0.0, abs=1e-12)


def test_specific_information_outside_support_raises():
    d = JointDistribution(["S", "R1"], [[0, 1, 2], [0, 1]], {(0, 0): 0.5, (1, 1): 0.5})
    with pytest.raises(ZeroProbabilityError):
        D.specific_information(d, 2, 1)


def test_response_specific_examples(three_outcome, copies):
    for r in (0, 1):
        assert D.response_specific_information(copies, r, 1) == pytest.approx(1.0)
    indep = D.from_outcomes(list(itertools.product((0, 1), repeat=2)))
    assert D.response_specific_information(indep, 0, 1) == pytest.approx(0.0, abs=1e-12)
    assert D.response_specific_information(three_outcome, 1, 1) == pytest.approx(LOG3, abs=1e-12)
    with pytest.raises(ZeroProbabilityError):
        D.response_specific_information(three_outcome, (1, 1), (1, 2))


def test_response_specific_can_be_negative():
    # r=1 leaves S uniform over three values, more uncertain than the prior.
    d = D.from_outcomes([(0, 0), (0, 0), (0, 0), (0, 0), (1, 1), (2, 1), (0, 1)])
    assert D.response_specific_information(d, 1, 1) < 0


def test_stimulus_specific_examples(three_outcome, copies):
    for s in (0, 1):
        assert D.stimulus_specific_information(copies, s, 1) == pytest.approx(1.0)
    indep = D.from_outcomes(list(itertools.product((0, 1), repeat=2)))
    assert D.stimulus_specific_information(indep, 1, 1) == pytest.approx(0.0, abs=1e-12)
    assert D.stimulus_specific_information(three_outcome, 0, 1) == pytest.approx(LOG3 - 1, abs=1e-12)


@given(distributions(max_predictors=3))
def test_averages_of_specific_measures_equal_mi(d):
    for k in range(1, d.num_predictors + 1):
        for src in itertools.combinations(range(1, d.num_predictors + 1), k):
            mi = D.mutual_information(d, src)
            support = d.target_support()
            ps = D.marginal_pmf(d, [0])
            pr = D.marginal_pmf(d, src)
            via_spec = sum(ps[(s,)] * D.specific_information(d, s, src) for s in support)
            via_stim = sum(ps[(s,)] * D.stimulus_specific_information(d, s, src) for s in support)
            via_resp = sum(p * D.response_specific_information(d, r, src) for r, p in pr.items())
            assert via_spec == pytest.approx(mi, abs=1e-9)
            assert via_stim == pytest.approx(mi, abs=1e-9)
            assert via_resp == pytest.approx(mi, abs=1e-9)


@given(distributions(max_predictors=3))
def test_specific_information_is_a_kl_divergence(d):
    pmf = d.pmf
    for k in range(1, d.num_predictors + 1):
        for src in itertools.combinations(range(1, d.num_predictors + 1), k):
            for s in d.target_support():
                value = D.specific_information(d, s, src)
                assert value >= 0
                assert value == pytest.approx(oracles.specific_info_kl(pmf, s, src), abs=1e-9)


@given(distributions(min_predictors=2, max_predictors=4, max_alphabet=2))
def test_specific_information_monotone_in_source(d):
    k = d.num_predictors
    subsets = [frozenset(c) for r in range(1, k + 1) for c in itertools.combinations(range(1, k + 1), r)]
    for s in d.target_support():
        vals = {A: D.specific_information(d, s, A) for A in subsets}
        for A in subsets:
            for B in subsets:
                if A < B:
                    assert vals[A] <= vals[B] + 1e-9


# ----------------------------------------------------------------------
# construction and file formats


def test_invariants_enforced():
    with pytest.raises(PMFInvariantError):
        JointDistribution(["S"], [[0, 1]], {(0,): 0.5, (1,): 0.6})
    with pytest.raises(PMFInvariantError):
        JointDistribution(["S"], [[0, 1]], {(0,): 1.5, (1,): -0.5})
    with pytest.raises(PMFInvariantError):
        JointDistribution(["S"], [[0, 1]], {(2,): 1.0})
    with pytest.raises(PMFInvariantError):
        JointDistribution(["S", "R1"], [[0, 1], [0]], {(0,): 1.0})


def test_tiny_entries_are_structural_zeros():
    d = JointDistribution(["S"], [[0, 1]], {(0,): 1.0 - 1e-13, (1,): 1e-13})
    assert d.target_support() == [0]


def test_source_validation():
    assert Source([2, 1, 2]).indices == (1, 2)
    assert str(Source([1, 3])) == "{13}"
    with pytest.raises(ValueError):
        Source([])
    with pytest.raises(ValueError):
        Source([0])


def test_json_round_trip(three_outcome, tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps(three_outcome.to_json_dict("test")))
    assert D.load(path) == three_outcome


def test_csv_loading(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("S,R1,R2,p\n0,0,0,0.25\n1,0,1,0.25\n1,1,0,0.25\n0,1,1,0.25\n")
    d = D.load(path)
    assert d.variable_names == ("S", "R1", "R2")
    assert D.mutual_information(d, (1, 2)) == pytest.approx(1.0)


def test_csv_with_symbols(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("stim,resp,p\na,x,0.5\nb,y,0.5\n")
    d = D.load(path)
    assert set(d.alphabets[0]) == {"a", "b"}
    assert D.mutual_information(d, 1) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"variables": ["S"], "states": [[0, 1]]}',
        '{"variables": ["S"], "states": [[0, 1]], "probs": [{"outcome": [0]}]}',
        '{"variables": ["S"], "states": [[0, 1]], "probs": [{"outcome": [0], "p": "x"}]}',
    ],
)
def test_malformed_json(text):
    with pytest.raises(MalformedInputError):
        D.loads_json(text)


def test_reorder_and_with_target(three_outcome):
    d = three_outcome.with_target("R1")
    assert d.variable_names == ("R1", "S", "R2")
    assert D.entropy(d, [0]) == pytest.approx(D.entropy(three_outcome, [1]))


def test_condition_keeps_variables(three_outcome):
    c = D.condition(three_outcome, {1: 0})
    assert c.pmf == pytest.approx({(0, 0, 0): 0.5, (1, 0, 1): 0.5})


def test_search_equiprobable_supports_finds_xor():
    def is_xor_like(d):
        singles = max(D.mutual_information(d, 1), D.mutual_information(d, 2))
        return singles < 1e-12 and D.mutual_information(d, (1, 2)) > 1 - 1e-12

    found = list(D.search_equiprobable_supports(((0, 1), (0, 1), (0, 1)), is_xor_like, sizes=[4]))
    assert {frozenset(d.pmf) for d in found} == {
        frozenset({(0, 0, 0), (1, 0, 1), (1, 1, 0), (0, 1, 1)}),
        frozenset({(1, 0, 0), (0, 0, 1), (0, 1, 0), (1, 1, 1)}),
    }

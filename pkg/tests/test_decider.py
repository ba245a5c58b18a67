import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cjslab.decider import (
    AXIOMS,
    EnumerationCursor,
    canonical_form,
    decide,
    decide_restricted_dcjs,
    enumerate_structures,
    generated_models,
    random_formula,
    random_structure,
    small_corpus,
)
from cjslab.logic import eval_formula, parse_formula, variables
from cjslab.standard import family_cjs, fixture_pr2nn, PR2NN_FAMILY
from cjslab.structures import check_contact_axioms, is_cjs, is_dcjs, make_structure
from conftest import two_element
from strategies import raw_structures


def permuted(S, perm):
    """Copy of S with inner elements renamed/reordered by ``perm`` (0 and 1 kept first/last)."""
    n = len(S)
    inner = [i for i in range(n) if i not in (S.zero, S.one)]
    order = [S.zero] + [inner[p] for p in perm] + ([S.one] if S.one != S.zero else [])
    pos = {old: new for new, old in enumerate(order)}
    table = [[pos[S.join[order[a]][order[b]]] for b in range(len(order))] for a in range(len(order))]
    contact = [(pos[a], pos[b]) for a, b in S.contact]
    return make_structure([f"e{k}" for k in range(len(order))], 0, pos[S.one], table, contact)


# -- canonical form ----------------------------------------------------------------


@settings(max_examples=60)
@given(raw_structures(max_size=6), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(S, rnd):
    inner = list(range(len(S) - 2)) if len(S) > 1 else []
    rnd.shuffle(inner)
    assert canonical_form(permuted(S, inner)) == canonical_form(S)


def test_two_element_contacts_distinguished():
    assert canonical_form(two_element(True)) != canonical_form(two_element(False))


def test_fixture_relabellings_share_one_form():
    forms = set()
    for perm in permutations([1, 2, 3, 4]):
        fam = [tuple(perm[p - 1] for p in b) for b in PR2NN_FAMILY]
        forms.add(canonical_form(family_cjs([1, 2, 3, 4], fam)))
    S = fixture_pr2nn()
    for perm in list(permutations(range(5)))[::17]:
        forms.add(canonical_form(permuted(S, perm)))
    assert len(forms) == 1


# -- enumeration -------------------------------------------------------------------


def test_size_one():
    (S,) = enumerate_structures(1, "cjs")
    assert len(S) == 1


def test_size_two():
    two = list(enumerate_structures(2, "cjs", exact=True))
    raw = list(enumerate_structures(2, "raw-semilattice", exact=True))
    # both contact choices are base structures; empty contact cannot separate 1 from 0
    assert len(raw) == 2
    assert [sorted(S.contact) for S in two] == [[(1, 1)]]


def test_dcjs_contained_in_cjs():
    for k in range(1, 6):
        d = {canonical_form(S) for S in enumerate_structures(k, "dcjs", exact=True)}
        c = {canonical_form(S) for S in enumerate_structures(k, "cjs", exact=True)}
        assert d <= c


def test_enumeration_is_deterministic_and_reduced():
    a = [S.to_dict() for S in enumerate_structures(EnumerationCursor(5, "cjs"))]
    b = [S.to_dict() for S in enumerate_structures(5, "cjs")]
    assert a == b
    forms = [canonical_form(S) for S in enumerate_structures(5, "cjs")]
    assert len(forms) == len(set(forms))
    assert sum(1 for _ in enumerate_structures(5, "dcjs")) == 10


def test_enumeration_rejects_bad_bounds():
    with pytest.raises(ValueError):
        list(enumerate_structures(0))
    with pytest.raises(ValueError):
        list(enumerate_structures(2, "lattice"))


def test_random_structure():
    assert len(random_structure(2, 5, "cjs")) == 2
    assert random_structure(4, 11) == random_structure(4, 11)
    for seed in range(5):
        assert is_dcjs(random_structure(5, seed, "dcjs"))
        assert check_contact_axioms(random_structure(5, seed, "raw-semilattice"), ("no-zero-contact", "symmetry")).ok


# -- deciding ----------------------------------------------------------------------


@pytest.mark.parametrize("text", ["x C y -> y C x", "x C (y+z) -> x C y | x C z"])
def test_valid_examples(text):
    assert decide(text).verdict == "valid"
    assert decide_restricted_dcjs(text).verdict == "valid"


def assert_counterexample(text, res):
    f = parse_formula(text)
    cx = res.counterexample
    assert res.verdict == "invalid" and cx is not None
    assert not eval_formula(cx.structure, cx.valuation, f)
    assert is_cjs(cx.structure)


def test_non_contact_of_comparables():
    text = "x <= y -> x C y"
    for mode in ("reference", "generated"):
        res = decide(text, mode=mode)
        assert_counterexample(text, res)
        # canonically first is the degenerate one-element structure
        assert len(res.counterexample.structure) == 1
        assert decide_restricted_dcjs(text, mode=mode).verdict == "invalid"
    assert not eval_formula(two_element(), {"x": "0", "y": "1"}, parse_formula(text))


def test_incomparable_overlap():
    text = "x C y -> x <= y | y <= x"
    res = decide(text)
    assert_counterexample(text, res)
    assert len(res.counterexample.structure) <= 5


def test_axioms_valid():
    for key, text in AXIOMS.items():
        assert decide(text).verdict == "valid", key


def test_caps_are_inconclusive():
    res = decide("x C y -> y C x", mode="reference", max_work=3)
    assert res.verdict == "inconclusive" and res.counterexample is None
    res = decide("x C y & z C x -> x C z | x <= y", mode="reference", max_reference_size=7)
    assert res.verdict == "inconclusive"


def test_three_variables_generated():
    res = decide("x C (y + z) & ~(x C y) -> x C z")
    assert res.mode == "generated" and res.verdict == "valid"
    res = decide("x C y & y C z -> x C z")
    assert_counterexample("x C y & y C z -> x C z", res)


def test_generated_models_are_generated():
    for M in generated_models(2):
        S = M.structure
        reach = {S.zero, S.one} | set(M.values) | {S.join[M.values[0]][M.values[1]]}
        assert reach == set(range(len(S)))
        assert len(S) <= 5 and is_cjs(S)


def test_corpus_mode_agreement_sample():
    rng = random.Random(7)
    corpus = small_corpus()[::9] + [random_formula(rng) for _ in range(20)]
    for f in corpus:
        r, g = decide(f, mode="reference"), decide(f, mode="generated")
        assert r.verdict == g.verdict
        if r.verdict == "invalid":
            for res in (r, g):
                cx = res.counterexample
                assert not eval_formula(cx.structure, cx.valuation, f)
        assert decide_restricted_dcjs(f).verdict == r.verdict


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_formula_soundness(seed):
    f = random_formula(random.Random(seed))
    res = decide(f)
    if res.verdict == "invalid":
        cx = res.counterexample
        assert not eval_formula(cx.structure, cx.valuation, f)
        assert is_cjs(cx.structure)
        assert set(cx.valuation) == set(variables(f))

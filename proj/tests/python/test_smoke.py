import json
from fractions import Fraction

import pytest

import diastasis as d


def test_calabi_instances():
    v = d.inducibility(d.builtin_potential("fs:2", 4), 4)
    assert v["class"] == "ConsistentUpTo"
    assert v["rank_lower_bound"] == 2

    q = d.inducibility(d.builtin_potential("perturbed_quartic", 3), 3)
    assert q["class"] == "NotInduced"
    assert q["value"] == Fraction(-1, 12)
    assert q["witness"][3] == (Fraction(1), Fraction(0))


def test_flat_calabi_matrix_is_inverse_factorials():
    m = d.calabi_matrix(d.builtin_potential("flat:1", 4), 4)
    assert [m[k][k][0] for k in range(5)] == [0, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]


def test_terms_and_rational_arguments():
    phi = d.from_terms(1, 2, [([1], [1], 1), ([2], [2], "-1/4")])
    assert phi == d.builtin_potential("perturbed_quartic", 2)
    assert phi.coeff([2], [2]) == (Fraction(-1, 4), Fraction(0))
    assert d.builtin_potential("fs:1", 3).scaled(Fraction(1, 2)) == d.builtin_potential("fs:1:1/2", 3)


def test_round_trip():
    for name in d.corpus_names():
        s = d.builtin_potential(name, 4)
        assert d.parse_potential_text(s.serialize(), 4) == s


def test_cone_and_homothety():
    half = d.builtin_potential("fs:1:1/2", 4)
    assert d.find_inducing_multiple(half, 4, 4) == 2
    assert d.cone_inducibility(half, 1, 4, 4)["class"] == "NotInduced"
    assert d.cone_inducibility(half, 2, 4, 4)["class"] == "ConsistentUpTo"
    assert d.flatness_witness(d.builtin_potential("fs:1", 4), 1, 4)


def test_curvature():
    assert d.einstein_constant(d.builtin_potential("fs:2", 5), 4) == 6
    assert d.einstein_constant(d.builtin_potential("hyp:1", 5), 4) == -4
    assert d.einstein_constant(d.builtin_potential("perturbed_quartic", 5), 4) is None
    assert d.cone_ricci_flat(d.builtin_potential("fs:1", 5), 1, 4)
    b = d.sasaki_einstein_bridge(d.builtin_potential("fs:1", 5), 1, 4)
    assert b["lambda_base"] == 4 and b["cone_ricci_flat"] and b["consistent"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(d.ParseError):
        d.builtin_potential("nope:1", 3)
    with pytest.raises(d.DomainError):
        d.inducibility(d.builtin_potential("zero:1", 3), 3)
    with pytest.raises(ValueError):
        d.epsilon_submatrix(d.builtin_potential("fs:1", 3), Fraction(1, 2), Fraction(1, 10), 3)


def test_cli(tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = d.run_cli(["analyze", "--potential", "perturbed_quartic", "--order", "3", "--json", str(out)])
    assert code == 1
    assert "NotInduced(3)" in stdout
    report = json.loads(out.read_text())
    assert report["result"]["verdict"]["witness"]["value"] == "-1/12"
    assert d.run_cli(["analyze"])[0] == 2


def test_acceptance_criterion_one():
    assert d.acceptance_count() == 8
    assert d.acceptance(1)["passed"]

from __future__ import annotations

import json

import pytest

from hopf import HElement
from lie import (AffineAlgebra, LieSpecError, Mode, VirasoroAlgebra, builtin_names, load_lie_algebra,
                 spec_from_document)
from modp import FieldError

SL2_BAD_FORM = {
    "basis": ["e", "h", "f"],
    "brackets": [["e", "f", "h", 1], ["h", "e", "e", 2], ["h", "f", "f", -2]],
    "form": [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
}


def test_builtins_load():
    assert builtin_names() == ["abelian1", "sl2"]
    sl2 = load_lie_algebra("sl2", 5)
    assert sl2.basis == ("e", "h", "f")
    assert sl2.bracket({0: 1}, {2: 1}) == {1: 1}
    assert sl2.bracket({2: 1}, {0: 1}) == {1: 4}


def test_invariance_failure_names_a_witness():
    with pytest.raises(LieSpecError) as info:
        spec_from_document(SL2_BAD_FORM, 5)
    assert info.value.axiom == "invariance"
    assert info.value.witness == ("e", "f", "h")


def test_inconsistent_antisymmetry_is_rejected():
    doc = {"basis": ["x", "y"], "brackets": [["x", "y", "x", 1], ["y", "x", "x", 1]],
           "form": [[0, 0], [0, 0]]}
    with pytest.raises(LieSpecError) as info:
        spec_from_document(doc, 5)
    assert info.value.axiom == "antisymmetry"


@pytest.mark.parametrize("doc", [
    {"basis": ["a"], "form": [[1]]},
    {"p": 5, "basis": [], "form": []},
    {"p": 5, "basis": ["a", "a"], "form": [[1, 0], [0, 1]]},
    {"p": 5, "basis": ["a"], "brackets": [["a", "b", "a", 1]], "form": [[1]]},
    {"p": 5, "basis": ["a"], "form": [[1, 0]]},
])
def test_malformed_documents(doc):
    with pytest.raises(LieSpecError):
        spec_from_document(doc)


def test_document_modulus_must_agree_and_be_prime():
    with pytest.raises(LieSpecError):
        spec_from_document({"p": 7, "basis": ["a"], "form": [[1]]}, 5)
    with pytest.raises(FieldError):
        spec_from_document({"p": 9, "basis": ["a"], "form": [[1]]})


def test_load_from_file(tmp_path):
    path = tmp_path / "heis.json"
    path.write_text(json.dumps({"p": 5, "basis": ["a"], "brackets": [], "form": [[2]]}))
    spec = load_lie_algebra(str(path))
    assert spec.name == "heis"
    assert spec.form == [[2]]
    with pytest.raises(LieSpecError):
        load_lie_algebra(str(tmp_path / "missing.json"), 5)


def test_to_document_reloads_to_the_same_brackets():
    sl2 = load_lie_algebra("sl2", 7)
    again = spec_from_document(sl2.to_document())
    assert again.brackets == sl2.brackets


def test_affine_brackets():
    sl2 = AffineAlgebra(load_lie_algebra("sl2", 5))
    e1, f_1 = sl2.element({Mode(0, 1): 1}), sl2.element({Mode(2, -1): 1})
    assert sl2.bracket(e1, f_1) == sl2.element({Mode(1, 0): 1}, central=1)
    heis = AffineAlgebra(load_lie_algebra("abelian1", 5))
    a2, a_2 = heis.element({Mode(0, 2): 1}), heis.element({Mode(0, -2): 1})
    assert heis.bracket(a2, a_2) == heis.element({}, central=2)
    assert sl2.mode_name(Mode(0, -1)) == "e(-1)"


def test_virasoro_brackets():
    vir = VirasoroAlgebra(7)
    L = lambda n: vir.element({Mode(0, n): 1})
    assert vir.bracket(L(2), L(-2)) == vir.element({Mode(0, 0): 4}, central=4)
    assert vir.bracket(L(1), L(-1)) == vir.element({Mode(0, 0): 2})
    assert vir.bracket(L(3), L(1)) == vir.element({Mode(0, 4): 2})
    assert vir.mode_name(Mode(0, -2)) == "L(-2)"


def test_h_action_on_modes():
    vir = VirasoroAlgebra(7)
    assert vir.h_action_generator("D", 1, vir.element({Mode(0, -2): 1})) == vir.element({Mode(0, -3): 1})
    heis = AffineAlgebra(load_lie_algebra("abelian1", 5))
    assert heis.h_action_generator("E", 2, heis.element({Mode(0, -3): 1})) == heis.element({Mode(0, -1): 3})
    assert heis.h_action_generator("H", 1, heis.element({}, central=3)).is_zero()
    assert heis.h_action(HElement.one(5), heis.element({}, central=3)) == heis.element({}, central=3)


def test_h_acts_by_derivations_on_the_affine_algebra():
    sl2 = AffineAlgebra(load_lie_algebra("sl2", 5))
    modes = [sl2.element({Mode(g, n): 1}) for g in range(3) for n in range(-2, 3)]
    for kind in "DHE":
        for x in modes:
            for y in modes:
                lhs = sl2.h_action_generator(kind, 1, sl2.bracket(x, y))
                rhs = (sl2.bracket(sl2.h_action_generator(kind, 1, x), y)
                       + sl2.bracket(x, sl2.h_action_generator(kind, 1, y)))
                assert lhs == rhs

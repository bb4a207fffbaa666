"""Borcherds-Cartan datum validation, pairings, and root-lattice helpers."""

import pytest

from qbozec.cartan import (
    BorcherdsCartanDatum,
    DatumError,
    root_add,
    root_height,
    root_sub,
    simple_root,
    weights_up_to_height,
)


def mixed():
    return BorcherdsCartanDatum(("i", "j"), ((2, -1), (-1, 0)), (1, 1))


def test_classification():
    d = mixed()
    assert d.is_real(0) and not d.is_imaginary(0) and not d.is_isotropic(0)
    assert d.is_imaginary(1) and d.is_isotropic(1)
    e = BorcherdsCartanDatum(("i",), ((-2,),), (3,))
    assert e.is_imaginary(0) and not e.is_isotropic(0)
    assert d.real_indices() == [0]
    assert d.imaginary_indices() == [1]


def test_validation_rejects_bad_data():
    with pytest.raises(DatumError):
        BorcherdsCartanDatum(("i",), ((1,),), (1,))  # odd diagonal
    with pytest.raises(DatumError):
        BorcherdsCartanDatum(("i",), ((3,),), (1,))
    with pytest.raises(DatumError):
        BorcherdsCartanDatum(("i", "j"), ((2, 1), (1, 2)), (1, 1))  # positive offdiag
    with pytest.raises(DatumError):
        BorcherdsCartanDatum(("i", "j"), ((2, -1), (-2, 2)), (1, 1))  # not symmetrizable
    with pytest.raises(DatumError):
        BorcherdsCartanDatum(("i", "i"), ((2, -1), (-1, 2)), (1, 1))  # repeated name
    with pytest.raises(DatumError):
        BorcherdsCartanDatum(("i",), ((2,),), (0,))  # nonpositive symmetrizer
    with pytest.raises(DatumError):
        BorcherdsCartanDatum(("i", "j"), ((2,), (-1, 2)), (1, 1))  # ragged matrix


def test_symmetrized_pairing():
    d = BorcherdsCartanDatum(("i", "j"), ((2, -2), (-1, 2)), (1, 2))
    assert d.pairing_roots(0, 1) == -2
    assert d.pairing_roots(1, 0) == -2
    assert d.pairing_roots(0, 0) == 2
    assert d.pairing_roots(1, 1) == 4
    assert d.pairing((1, 1), (1, 0)) == 0  # (a_i + a_j, a_i) = 2 - 2


def test_q_exponents():
    d = mixed()
    assert d.q_index_exponent(0) == 1
    assert d.q_paren_exponent(0) == 1
    assert d.q_paren_exponent(1) == 0
    e = BorcherdsCartanDatum(("i",), ((-2,),), (1,))
    assert e.q_paren_exponent(0) == -1


def test_coroot_pairing():
    d = mixed()
    # <h_i, alpha_i + 2 alpha_j> = 2 - 2 = 0
    assert d.coroot_pairing(0, (1, 2)) == 0
    assert d.coroot_pairing(1, (1, 0)) == -1


def test_max_level():
    d = mixed()
    assert d.max_level(0) == 1
    assert d.max_level(1) is None


def test_json_roundtrip():
    d = BorcherdsCartanDatum(("i", "j"), ((2, -2), (-1, 0)), (1, 2))
    assert BorcherdsCartanDatum.from_json(d.to_json()) == d
    assert d.to_json() == BorcherdsCartanDatum.from_json(d.to_json()).to_json()


def test_root_helpers():
    assert root_add((1, 2), (0, 3)) == (1, 5)
    assert root_sub((1, 2), (0, 1)) == (1, 1)
    assert root_height((2, 3)) == 5
    assert simple_root(3, 1, 4) == (0, 4, 0)


def test_weights_up_to_height():
    ws = weights_up_to_height(2, 2)
    assert set(ws) == {(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}
    # ordered by height, deterministic within height
    heights = [root_height(w) for w in ws]
    assert heights == sorted(heights)
    assert ws == weights_up_to_height(2, 2)
    assert len(weights_up_to_height(3, 4)) == len(
        {w for w in weights_up_to_height(3, 4)}
    )

import numpy as np
import pytest

import golden
from ebk.exceptions import DimensionOrderError, InvalidInputError
from ebk.verify import verify_basis
from ebk.weyl import WeylOp, meb, weyl_matrix
from oracles import same_up_to_phase


def test_bell_basis():
    vecs = meb(2, 2).vectors()
    for pos, ref in enumerate(golden.bell()):
        assert same_up_to_phase(vecs[golden.BELL_ORDER[pos]], ref)


def test_six_state_meb_in_2x3():
    b = meb(2, 3)
    assert b.family == "meb" and len(b) == 6
    vecs = b.vectors()
    for pos, ref in enumerate(golden.meb_2x3()):
        assert same_up_to_phase(vecs[golden.MEB_2X3_ORDER[pos]], ref)


@pytest.mark.parametrize("d", range(1, 6))
@pytest.mark.parametrize("extra", range(0, 3))
def test_meb_verifies(d, extra):
    b = meb(d, d + extra)
    report = verify_basis(b)
    assert report.classification == ("pb" if d == 1 else "meb")


@pytest.mark.parametrize("variant", ["check", "hat"])
def test_weyl_operators_are_unitary(variant):
    for m in range(4):
        for n in range(4):
            w = weyl_matrix(WeylOp(variant, m, n, 4))
            assert np.allclose(w.conj().T @ w, np.eye(4), atol=1e-14)


def test_check_and_hat_differ_by_a_global_phase():
    for m in range(3):
        for n in range(3):
            a = weyl_matrix(WeylOp("check", m, n, 3))
            b = weyl_matrix(WeylOp("hat", m, n, 3))
            ratio = a[np.nonzero(b)] / b[np.nonzero(b)]
            assert np.allclose(ratio, ratio[0])


def test_check_variant_also_gives_meb():
    assert verify_basis(meb(3, 3, "check")).classification == "meb"


def test_tilde_shift_is_mod_dprime():
    op = WeylOp("tilde", 1, 2, 5, 3)
    w = weyl_matrix(op)
    assert w[(0 - 2) % 5, 0] == 1


def test_meb_rejects_d_greater_than_dprime():
    with pytest.raises(DimensionOrderError):
        meb(3, 2)
    with pytest.raises(InvalidInputError):
        meb(2, 3, "hat")


@pytest.mark.parametrize(
    "args",
    [("nope", 0, 0, 2), ("hat", 2, 0, 2), ("hat", 0, 2, 2), ("hat", 0, 0, 3, 2), ("tilde", 0, 0, 2, 3)],
)
def test_weyl_op_validation(args):
    with pytest.raises(InvalidInputError):
        WeylOp(*args)

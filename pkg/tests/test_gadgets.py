from itertools import combinations

import pytest

from permcirc.errors import BadBetaProduct
from permcirc.gadgets import (
    GadgetSet,
    faulty_gadgets,
    gadget_cubic,
    gadget_quadratic,
    gadget_unary,
)
from permcirc.matrix import IntMatrix
from permcirc.permanent import per_naive


def _nonempty_subsets(slots):
    for size in range(1, len(slots) + 1):
        yield from combinations(slots, size)


@pytest.mark.parametrize("template", [gadget_unary(), gadget_quadratic(), gadget_cubic()])
def test_gadget_alone_weighs_minus_one(template):
    assert per_naive(template.block) == -1


@pytest.mark.parametrize("template", [gadget_quadratic(), gadget_cubic(), gadget_cubic((1, -1, 2))])
def test_covered_slots_weigh_plus_one(template):
    for covered in _nonempty_subsets(template.slots):
        assert per_naive(template.block.delete(covered)) == 1


def test_quadratic_layout():
    template = gadget_quadratic()
    assert template.slots == (0, 1)
    assert template.block.delete([0]) == IntMatrix.from_rows([[0, 1], [1, 1]])


def test_cubic_single_deletion():
    template = gadget_cubic()
    assert template.block.delete([1]) == IntMatrix.from_rows([[1, 0], [1, 1]])


def test_bad_beta_product():
    with pytest.raises(BadBetaProduct):
        gadget_cubic((1, 1, 1))


def test_quadratic_transit_cancels():
    # quadratic block plus a vertex t with t -> slot 0 and slot 1 -> t
    matrix = IntMatrix.from_rows(
        [[0, -1, 1, 0], [-1, 0, 1, 1], [1, 1, 1, 0], [1, 0, 0, 0]]
    )
    assert per_naive(matrix) == 0


def test_gadget_set_by_degree():
    gadgets = GadgetSet.standard()
    assert [gadgets.for_degree(d).size for d in (1, 2, 3)] == [1, 3, 3]


def test_faulty_set_breaks_the_lone_gadget():
    broken = faulty_gadgets().quadratic
    assert per_naive(broken.block) == -3
    assert per_naive(broken.block.delete([0, 1])) == -1

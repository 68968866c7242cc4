"""Clause gadgets: small weighted digraphs whose permanent is -1 when no
external edge touches them and +1 once any connection slot is covered
externally."""

from dataclasses import dataclass

from .config import DEFAULTS
from .errors import BadBetaProduct
from .matrix import IntMatrix


@dataclass(frozen=True)
class GadgetTemplate:
    block: IntMatrix
    slots: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.block.n


def gadget_quadratic() -> GadgetTemplate:
    # vertex 2 is internal: it carries the two-step path that cancels transits
    block = IntMatrix.from_rows([[0, -1, 1], [-1, 0, 1], [1, 1, 1]])
    return GadgetTemplate(block, (0, 1))


def gadget_cubic(betas: tuple[int, int, int] = DEFAULTS.betas) -> GadgetTemplate:
    """Three-slot gadget for x*y*z; the betas must multiply to -2."""
    b1, b2, b3 = betas
    if b1 * b2 * b3 != -2:
        raise BadBetaProduct(f"beta product must be -2, got {b1 * b2 * b3}")
    block = IntMatrix.from_rows([[1, b1, 0], [0, 1, b2], [b3, 0, 1]])
    return GadgetTemplate(block, (0, 1, 2))


def gadget_unary() -> GadgetTemplate:
    """Single vertex with self-loop -1; the external loop adds 1 so the diagonal is 0."""
    return GadgetTemplate(IntMatrix.from_rows([[-1]]), (0,))


@dataclass(frozen=True)
class GadgetSet:
    """Templates the encoder instantiates, indexed by clause degree."""

    unary: GadgetTemplate
    quadratic: GadgetTemplate
    cubic: GadgetTemplate

    @classmethod
    def standard(cls, betas: tuple[int, int, int] = DEFAULTS.betas) -> "GadgetSet":
        return cls(gadget_unary(), gadget_quadratic(), gadget_cubic(betas))

    def for_degree(self, degree: int) -> GadgetTemplate:
        return {1: self.unary, 2: self.quadratic, 3: self.cubic}[degree]


def faulty_gadgets() -> GadgetSet:
    """Standard set with the internal self-loop of the quadratic gadget
    negated; used to check that the verification sweep notices a broken
    encoder."""
    block = IntMatrix.from_rows([[0, -1, 1], [-1, 0, 1], [1, 1, -1]])
    return GadgetSet(gadget_unary(), GadgetTemplate(block, (0, 1)), gadget_cubic())

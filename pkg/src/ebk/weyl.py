"""Weyl shift-and-phase operators and the maximally entangled bases they generate."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionOrderError, InvalidInputError
from .model import BipartiteState, EntangledBasis
from .numerics import root_of_unity

VARIANTS = ("check", "hat", "tilde")


@dataclass(frozen=True)
class WeylOp:
    """Shift-and-phase unitary on ``C^dim``.

    ``check``: ``|i> -> xi^{m(i-n)} |i-n>``; ``hat`` and ``tilde``:
    ``|i> -> xi^{m i} |i-n>``, with ``xi = exp(2 pi i / phase_dim)`` and the
    shift taken mod ``dim``. For ``check`` and ``hat`` the two dimensions
    coincide; ``tilde`` acts on the larger factor ``C^d'`` with phases from
    ``C^d``.
    """

    variant: str
    m: int
    n: int
    dim: int
    phase_dim: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidInputError(f"unknown Weyl variant {self.variant!r}")
        if self.phase_dim is None:
            object.__setattr__(self, "phase_dim", self.dim)
        if self.variant != "tilde" and self.phase_dim != self.dim:
            raise InvalidInputError("check/hat operators use phase_dim == dim")
        if self.dim < 1 or self.phase_dim < 1 or self.phase_dim > self.dim:
            raise InvalidInputError(f"bad dimensions dim={self.dim}, phase_dim={self.phase_dim}")
        if not 0 <= self.m < self.phase_dim:
            raise InvalidInputError(f"phase index m={self.m} outside [0, {self.phase_dim})")
        if not 0 <= self.n < self.dim:
            raise InvalidInputError(f"shift index n={self.n} outside [0, {self.dim})")

    def phase(self, i: int) -> complex:
        exponent = self.m * (i - self.n) if self.variant == "check" else self.m * i
        return root_of_unity(self.phase_dim, exponent)


def weyl_matrix(op: WeylOp) -> np.ndarray:
    w = np.zeros((op.dim, op.dim), dtype=np.complex128)
    for i in range(op.dim):
        w[(i - op.n) % op.dim, i] = op.phase(i)
    return w


def meb(d: int, dprime: int, variant: str | None = None) -> EntangledBasis:
    """Maximally entangled basis of ``C^d (x) C^d'`` from the seed ``sum_i |i>|i'>/sqrt(d)``.

    For ``d == d'`` the operator acts on the first factor (``hat`` by default,
    ``check`` on request); for ``d < d'`` the ``tilde`` operator acts on the
    second factor. State ``(m, n)`` is stored at index ``m + d * n``.
    """
    if d > dprime:
        raise DimensionOrderError(f"meb needs d <= d', got {d} > {dprime}")
    if d < 1:
        raise InvalidInputError("dimensions must be positive")
    if variant is None:
        variant = "hat" if d == dprime else "tilde"
    if d < dprime and variant != "tilde":
        raise InvalidInputError("for d < d' only the tilde variant applies")
    if d == dprime and variant == "tilde":
        variant = "hat"
    amp = 1.0 / np.sqrt(d)
    states = []
    for n in range(dprime):
        for m in range(d):
            if variant == "tilde":
                op = WeylOp("tilde", m, n, dprime, d)
                entries = [(i, (i - n) % dprime, amp * op.phase(i)) for i in range(d)]
            else:
                op = WeylOp(variant, m, n, d)
                entries = [((i - n) % d, i, amp * op.phase(i)) for i in range(d)]
            states.append(BipartiteState(d, dprime, tuple(entries)))
    provenance = {
        "construction": "weyl",
        "variant": variant,
        "ordering": "index = m + d*n",
    }
    return EntangledBasis((d, dprime), d, tuple(states), "meb", provenance)

"""Weight systems: the commutative semirings idag edges are weighted in.

Three systems are supported. BOOL is {0, 1} with saturating addition
(1 + 1 = 1), NAT is the natural numbers, INT is the integers. Only INT has
additive inverses, so only INT enables the antipode generator. Edges store
nonzero weights; zero means "no edge", which is why addition that cancels to
zero must drop the edge entirely (see core.concat).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AntipodeWeight, InvalidWeight, ZeroWeight


@dataclass(frozen=True, slots=True)
class WeightSystem:
    """One of the three edge-weight semirings, as a value object.

    Use the module singletons BOOL, NAT, INT; identity of these objects is
    what mode checks compare.
    """

    name: str

    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        if self.name == "bool":
            return 1 if (a or b) else 0
        return a + b

    def mul(self, a: int, b: int) -> int:
        if self.name == "bool":
            return 1 if (a and b) else 0
        return a * b

    def is_zero(self, a: int) -> bool:
        return a == 0

    @property
    def antipode_enabled(self) -> bool:
        return self.name == "int"

    def check_edge_weight(self, w: int) -> None:
        """Validate w as a stored (necessarily nonzero) edge weight."""
        if not isinstance(w, int) or isinstance(w, bool):
            raise InvalidWeight(f"weight {w!r} is not an integer")
        if w == 0:
            raise ZeroWeight("zero weight: omit the edge instead")
        if w < 0 and not self.antipode_enabled:
            raise AntipodeWeight(f"negative weight {w} requires int mode")
        if self.name == "bool" and w != 1:
            raise InvalidWeight(f"bool mode admits only weight 1, got {w}")

    def check_value(self, w: int) -> None:
        """Validate w as a matrix entry (zero allowed)."""
        if not isinstance(w, int) or isinstance(w, bool):
            raise InvalidWeight(f"entry {w!r} is not an integer")
        if w < 0 and not self.antipode_enabled:
            raise AntipodeWeight(f"negative entry {w} requires int mode")
        if self.name == "bool" and w not in (0, 1):
            raise InvalidWeight(f"bool mode admits only entries 0 and 1, got {w}")

    def __repr__(self) -> str:
        return self.name.upper()


BOOL = WeightSystem("bool")
NAT = WeightSystem("nat")
INT = WeightSystem("int")

BY_NAME: dict[str, WeightSystem] = {"bool": BOOL, "nat": NAT, "int": INT}

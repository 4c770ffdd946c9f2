"""
Finite abelian group presentations, normal forms, subgroups and cosets
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Protocol, Tuple

from config import Config
from exceptions import InputError, ResourceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbelianPresentation:
    """⟨σ_0⟩ ⊕ ... ⊕ ⟨σ_m⟩ with σ_i of order n_i"""

    orders: Tuple[int, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if any(n < 1 for n in orders):
            raise InputError(f"generator orders must be >= 1, got {orders}")
        labels = tuple(self.labels) if self.labels else tuple(f"σ{i}" for i in range(len(orders)))
        if len(labels) != len(orders):
            raise InputError(f"{len(labels)} labels for {len(orders)} generators")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def parse(cls, text: str) -> "AbelianPresentation":
        """Parse "4x2" (an empty string is the trivial group)"""
        text = text.strip()
        if not text:
            return cls(())
        try:
            return cls(tuple(int(part) for part in text.lower().split("x")))
        except ValueError:
            raise InputError(f"cannot parse group presentation {text!r}")

    def encode(self) -> str:
        return "x".join(str(n) for n in self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def ambient(self) -> "AbelianPresentation":
        return self

    def element(self, exponents) -> "GroupElement":
        exponents = tuple(int(a) for a in exponents)
        if len(exponents) != self.rank:
            raise InputError(f"expected {self.rank} exponents, got {len(exponents)}")
        return GroupElement(self, tuple(a % n for a, n in zip(exponents, self.orders)))

    def parse_element(self, text: str) -> "GroupElement":
        text = text.strip()
        if not text:
            return self.element(())
        try:
            return self.element(int(part) for part in text.split(","))
        except ValueError:
            raise InputError(f"cannot parse group element {text!r}")

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generator(self, i: int) -> "GroupElement":
        exponents = [0] * self.rank
        exponents[i] = 1
        return self.element(exponents)

    def generators(self) -> Tuple["GroupElement", ...]:
        return tuple(self.generator(i) for i in range(self.rank))

    def elements(self) -> Tuple["GroupElement", ...]:
        return enumerate_group(self)

    def contains(self, g: "GroupElement") -> bool:
        return g.presentation == self

    def _check(self, g: "GroupElement") -> None:
        if g.presentation != self:
            raise InputError(f"element {g} does not belong to presentation {self.encode()}")

    def compose(self, g: "GroupElement", h: "GroupElement") -> "GroupElement":
        self._check(g)
        self._check(h)
        return GroupElement(self, tuple((a + b) % n for a, b, n in zip(g.exponents, h.exponents, self.orders)))

    def invert(self, g: "GroupElement") -> "GroupElement":
        self._check(g)
        return GroupElement(self, tuple((-a) % n for a, n in zip(g.exponents, self.orders)))

    def power(self, g: "GroupElement", k: int) -> "GroupElement":
        self._check(g)
        return GroupElement(self, tuple((a * k) % n for a, n in zip(g.exponents, self.orders)))

    def element_order(self, g: "GroupElement") -> int:
        self._check(g)
        result = 1
        for a, n in zip(g.exponents, self.orders):
            result = math.lcm(result, n // math.gcd(a, n))
        return result


@dataclass(frozen=True)
class GroupElement:
    presentation: AbelianPresentation
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != self.presentation.rank:
            raise InputError(f"expected {self.presentation.rank} exponents, got {self.exponents}")
        for a, n in zip(self.exponents, self.presentation.orders):
            if not 0 <= a < n:
                raise InputError(f"exponent {a} not reduced modulo {n}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.presentation.compose(self, other)

    def __pow__(self, k: int) -> "GroupElement":
        return self.presentation.power(self, k)

    def inverse(self) -> "GroupElement":
        return self.presentation.invert(self)

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def encode(self) -> str:
        return ",".join(str(a) for a in self.exponents)

    def __str__(self) -> str:
        parts = []
        for a, label in zip(self.exponents, self.presentation.labels):
            if a == 1:
                parts.append(label)
            elif a:
                parts.append(f"{label}^{a}")
        return "·".join(parts) if parts else "e"


def group_arith(g: GroupElement, h: Optional[GroupElement] = None, op: str = "compose",
                k: int = 1) -> GroupElement:
    """compose(g, h), invert(g) or power(g, k), reduced to normal form"""
    G = g.presentation
    if op == "compose":
        if h is None:
            raise InputError("compose needs two elements")
        return G.compose(g, h)
    if op == "invert":
        return G.invert(g)
    if op == "power":
        return G.power(g, k)
    raise InputError(f"unknown group operation {op!r}")


@lru_cache(maxsize=64)
def _lexicographic_elements(G: AbelianPresentation) -> Tuple[GroupElement, ...]:
    return tuple(GroupElement(G, exps) for exps in itertools.product(*(range(n) for n in G.orders)))


def enumerate_group(G: AbelianPresentation, bound: Optional[int] = None) -> Tuple[GroupElement, ...]:
    """All elements of G in lexicographic order of exponent vectors"""
    if bound is None:
        bound = Config().MAX_GROUP_ORDER
    if G.order > bound:
        raise ResourceError(f"group of order {G.order} exceeds enumeration bound {bound}")
    return _lexicographic_elements(G)


class FiniteGroup(Protocol):
    """What cochains need from a group: AbelianPresentation, SubgroupSpec or QuotientGroup"""

    @property
    def ambient(self) -> AbelianPresentation: ...

    @property
    def order(self) -> int: ...

    def elements(self) -> Tuple[GroupElement, ...]: ...

    def identity(self) -> GroupElement: ...

    def compose(self, g: GroupElement, h: GroupElement) -> GroupElement: ...

    def invert(self, g: GroupElement) -> GroupElement: ...

    def contains(self, g: GroupElement) -> bool: ...


@dataclass(frozen=True)
class SubgroupSpec:
    ambient: AbelianPresentation
    generators: Tuple[GroupElement, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if g.presentation != self.ambient:
                raise InputError(f"generator {g} is not an element of {self.ambient.encode()}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def trivial(cls, G: AbelianPresentation) -> "SubgroupSpec":
        return cls(G, ())

    @classmethod
    def whole(cls, G: AbelianPresentation) -> "SubgroupSpec":
        return cls(G, G.generators())

    @property
    def order(self) -> int:
        return len(self.elements())

    def elements(self) -> Tuple[GroupElement, ...]:
        return _subgroup_closure(self)

    def contains(self, g: GroupElement) -> bool:
        return g in _subgroup_members(self)

    def identity(self) -> GroupElement:
        return self.ambient.identity()

    def compose(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.ambient.compose(g, h)

    def invert(self, g: GroupElement) -> GroupElement:
        return self.ambient.invert(g)

    def is_cyclic(self) -> bool:
        return len(self.generators) <= 1

    def powers(self) -> Tuple[GroupElement, ...]:
        """σ^0, ..., σ^{d-1} for a cyclic spec ⟨σ⟩ with d the order of σ"""
        if not self.is_cyclic():
            raise InputError("powers() needs a single-generator subgroup")
        if not self.generators:
            return (self.identity(),)
        s = self.generators[0]
        return tuple(self.ambient.power(s, k) for k in range(self.ambient.element_order(s)))


@lru_cache(maxsize=256)
def _subgroup_closure(H: SubgroupSpec) -> Tuple[GroupElement, ...]:
    G = H.ambient
    seen = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for g in frontier:
            for s in H.generators:
                gs = G.compose(g, s)
                if gs not in seen:
                    seen.add(gs)
                    nxt.append(gs)
        frontier = nxt
    return tuple(sorted(seen, key=lambda x: x.exponents))


@lru_cache(maxsize=256)
def _subgroup_members(H: SubgroupSpec) -> frozenset:
    return frozenset(_subgroup_closure(H))


@dataclass(frozen=True)
class CosetData:
    representatives: Tuple[GroupElement, ...]
    index: Dict[GroupElement, GroupElement]

    def representative(self, g: GroupElement) -> GroupElement:
        return self.index[g]


@lru_cache(maxsize=128)
def coset_data(G: AbelianPresentation, H: SubgroupSpec) -> CosetData:
    """Representatives of G/H, each the lexicographically least member of its coset"""
    if H.ambient != G:
        raise InputError("subgroup is not generated by elements of G")
    index: Dict[GroupElement, GroupElement] = {}
    representatives = []
    members = H.elements()
    for g in enumerate_group(G):
        if g in index:
            continue
        representatives.append(g)
        for h in members:
            index[G.compose(g, h)] = g
    logger.debug(f"{len(representatives)} cosets of a subgroup of order {len(members)} in {G.encode()}")
    return CosetData(tuple(representatives), index)


@dataclass(frozen=True)
class QuotientGroup:
    """G/H realized on coset representatives"""

    ambient: AbelianPresentation
    kernel: SubgroupSpec

    def __post_init__(self):
        if self.kernel.ambient != self.ambient:
            raise InputError("kernel must be a subgroup of the ambient presentation")

    @property
    def data(self) -> CosetData:
        return coset_data(self.ambient, self.kernel)

    @property
    def order(self) -> int:
        return len(self.data.representatives)

    def elements(self) -> Tuple[GroupElement, ...]:
        return self.data.representatives

    def representative(self, g: GroupElement) -> GroupElement:
        return self.data.representative(g)

    def contains(self, g: GroupElement) -> bool:
        return self.data.index.get(g) == g

    def identity(self) -> GroupElement:
        return self.ambient.identity()

    def compose(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.representative(self.ambient.compose(g, h))

    def invert(self, g: GroupElement) -> GroupElement:
        return self.representative(self.ambient.invert(g))

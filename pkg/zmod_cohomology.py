"""
Brute-force group cohomology over finite (or exact Z) coefficient modules and
the explicit dimension-shift, inflation-restriction and generator-change maps
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from config import Config
from exceptions import (ContractViolationError, H1NonzeroError, InputError, LemmaViolationError,
                        PropositionViolationError, ResourceError, RestrictionNontrivialError)
from groups import (AbelianPresentation, FiniteGroup, GroupElement, QuotientGroup, SubgroupSpec,
                    coset_data)
from linalg import as_matrix, solve_linear, subquotient

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


class FiniteGModule:
    """⊕_j Z/d_j (d_j = 0 meaning Z) with one action matrix per generator of `group`"""

    def __init__(self, group: AbelianPresentation, factors: Sequence[int],
                 actions: Optional[Sequence] = None, validate: bool = True):
        self.group = group
        self.factors: Tuple[int, ...] = tuple(int(d) for d in factors)
        if any(d < 0 for d in self.factors):
            raise InputError(f"module factors must be >= 0, got {self.factors}")
        r = len(self.factors)
        if actions is None:
            actions = [np.eye(r, dtype=object) for _ in range(group.rank)]
        if len(actions) != group.rank:
            raise InputError(f"{len(actions)} action matrices for {group.rank} generators")
        self.actions: Tuple[np.ndarray, ...] = tuple(self._reduce_matrix(as_matrix(M, (r, r)).reshape(r, r))
                                                      for M in actions)
        self._cache: Dict[GroupElement, Tuple[Tuple[int, ...], ...]] = {}
        if validate:
            self._validate()

    @classmethod
    def trivial(cls, group: AbelianPresentation, factors: Sequence[int]) -> "FiniteGModule":
        return cls(group, factors)

    @classmethod
    def cyclic(cls, group: AbelianPresentation, modulus: int, multipliers: Sequence[int]) -> "FiniteGModule":
        """Z/modulus with generator i acting by multiplication by multipliers[i]"""
        return cls(group, [modulus], [[[m]] for m in multipliers])

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_exact(self) -> bool:
        return all(d == 0 for d in self.factors)

    @property
    def is_finite(self) -> bool:
        return all(self.factors)

    @property
    def order(self) -> Optional[int]:
        return math.prod(self.factors) if self.is_finite else None

    def _key(self):
        return (type(self).__name__, self.group, self.factors,
                tuple(tuple(tuple(row) for row in M) for M in self.actions))

    def __eq__(self, other):
        return isinstance(other, FiniteGModule) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"{type(self).__name__}(group={self.group.encode()!r}, factors={list(self.factors)})"

    def _reduce_matrix(self, M: np.ndarray) -> np.ndarray:
        M = M.astype(object).copy()
        for j, d in enumerate(self.factors):
            if d:
                M[j] %= d
        return M

    def _same_map(self, X: np.ndarray, Y: np.ndarray) -> bool:
        return (self._reduce_matrix(X - Y) == 0).all()

    def _validate(self) -> None:
        d = self.factors
        r = self.rank
        for i, M in enumerate(self.actions):
            for j in range(r):
                for k in range(r):
                    if d[j] and (M[j, k] * d[k]) % d[j]:
                        raise InputError(f"action of generator {i} is not well defined at entry ({j},{k})")
                    if not d[j] and d[k] and M[j, k]:
                        raise InputError(f"action of generator {i} maps torsion into Z at entry ({j},{k})")
            power = np.eye(r, dtype=object)
            for _ in range(self.group.orders[i]):
                power = self._reduce_matrix(power @ M)
            if not self._same_map(power, np.eye(r, dtype=object)):
                raise InputError(f"action of generator {i} does not have order dividing {self.group.orders[i]}")
        for a, b in itertools.combinations(range(len(self.actions)), 2):
            Ma, Mb = self.actions[a], self.actions[b]
            if not self._same_map(Ma @ Mb, Mb @ Ma):
                raise InputError(f"actions of generators {a} and {b} do not commute")

    def matrix(self, g: GroupElement) -> Tuple[Tuple[int, ...], ...]:
        cached = self._cache.get(g)
        if cached is not None:
            return cached
        r = self.rank
        M = np.eye(r, dtype=object)
        for a, A in zip(g.exponents, self.actions):
            for _ in range(a):
                M = self._reduce_matrix(A @ M)
        rows = tuple(tuple(int(v) for v in row) for row in M)
        self._cache[g] = rows
        return rows

    def reduce(self, x: Sequence[int]) -> Vector:
        return tuple(int(v) % d if d else int(v) for v, d in zip(x, self.factors))

    def zero(self) -> Vector:
        return (0,) * self.rank

    def act(self, g: GroupElement, x: Vector) -> Vector:
        M = self.matrix(g)
        return self.reduce(sum(a * b for a, b in zip(row, x)) for row in M)

    def add(self, x: Vector, y: Vector) -> Vector:
        return self.reduce(a + b for a, b in zip(x, y))

    def sub(self, x: Vector, y: Vector) -> Vector:
        return self.reduce(a - b for a, b in zip(x, y))

    def neg(self, x: Vector) -> Vector:
        return self.reduce(-a for a in x)

    def scale(self, k: int, x: Vector) -> Vector:
        return self.reduce(k * a for a in x)

    def random_element(self, rng: random.Random, spread: int = 5) -> Vector:
        return tuple(rng.randrange(d) if d else rng.randint(-spread, spread) for d in self.factors)


class InducedModule(FiniteGModule):
    """Hom_Z(Z[G], A) ("full", basis g) or Hom_Z(I_G, A) ("augmentation", basis g-1, g != e)

    Coordinates are the base coordinates of φ(x) concatenated over the basis.
    The action is (g·φ)(x) = g·φ(g^{-1}x).
    """

    def __init__(self, base: FiniteGModule, flavor: str = "augmentation"):
        if flavor not in ("full", "augmentation"):
            raise InputError(f"unknown induced module flavor {flavor!r}")
        G = base.group
        self.base = base
        self.flavor = flavor
        elements = G.elements()
        self.basis: Tuple[GroupElement, ...] = elements if flavor == "full" else elements[1:]
        self._position = {x: i for i, x in enumerate(self.basis)}
        r = base.rank
        size = len(self.basis) * r
        actions = []
        for s in G.generators():
            s_inv = G.invert(s)
            Ms = np.array(base.matrix(s), dtype=object).reshape(r, r)
            M = np.zeros((size, size), dtype=object)
            for y in self.basis:
                row = self._position[y] * r
                if flavor == "full":
                    col = self._position[G.compose(s_inv, y)] * r
                    M[row:row + r, col:col + r] += Ms
                else:
                    target = G.compose(s_inv, y)
                    if not target.is_identity():
                        col = self._position[target] * r
                        M[row:row + r, col:col + r] += Ms
                    if not s_inv.is_identity():
                        col = self._position[s_inv] * r
                        M[row:row + r, col:col + r] -= Ms
            actions.append(M)
        super().__init__(G, base.factors * len(self.basis), actions, validate=False)

    def _key(self):
        return (type(self).__name__, self.flavor, self.base._key())

    def evaluate(self, phi: Vector, x: GroupElement) -> Vector:
        """φ(x) (full) or φ(x - 1) (augmentation; zero at x = e)"""
        if self.flavor == "augmentation" and x.is_identity():
            return self.base.zero()
        r = self.base.rank
        i = self._position[x] * r
        return tuple(phi[i:i + r])

    def from_function(self, fn: Callable[[GroupElement], Vector]) -> Vector:
        values: List[int] = []
        for x in self.basis:
            values.extend(self.base.reduce(fn(x)))
        return tuple(values)

    def embed(self, a: Vector) -> Vector:
        """A -> Hom_Z(Z[G], A), a to the constant function"""
        if self.flavor != "full":
            raise InputError("embedding targets the full induced module")
        return self.from_function(lambda x: a)

    def restrict_to_augmentation(self, phi: Vector) -> Vector:
        """Hom_Z(Z[G], A) -> Hom_Z(I_G, A), φ to (g - 1 ↦ φ(g) - φ(e))"""
        if self.flavor != "full":
            raise InputError("restriction starts from the full induced module")
        G = self.group
        at_e = self.evaluate(phi, G.identity())
        return tuple(v for g in G.elements()[1:] for v in self.base.sub(self.evaluate(phi, g), at_e))

    def check_action_law(self, rng: random.Random, samples: int = 20) -> bool:
        G = self.group
        elements = G.elements()
        A = self.base
        for _ in range(samples):
            g = rng.choice(elements)
            phi = self.random_element(rng)
            moved = self.act(g, phi)
            g_inv = G.invert(g)
            for y in self.basis:
                if self.flavor == "full":
                    expected = A.act(g, self.evaluate(phi, G.compose(g_inv, y)))
                else:
                    expected = A.act(g, A.sub(self.evaluate(phi, G.compose(g_inv, y)),
                                              self.evaluate(phi, g_inv)))
                if self.evaluate(moved, y) != expected:
                    logger.error(f"action law fails at g={g}, basis element {y}")
                    return False
        return True


def check_dimension_shift_sequence(base: FiniteGModule, rng: random.Random, samples: int = 20) -> bool:
    """0 -> A -> Hom(Z[G],A) -> Hom(I_G,A) -> 0 on random samples"""
    full = InducedModule(base, "full")
    aug = InducedModule(base, "augmentation")
    G = base.group
    elements = G.elements()
    for _ in range(samples):
        a = base.random_element(rng)
        g = rng.choice(elements)
        image = full.embed(a)
        if any(aug.reduce(full.restrict_to_augmentation(image))):
            return False
        if a != base.zero() and image == full.zero():
            return False
        if full.act(g, image) != full.embed(base.act(g, a)):
            return False
        phi = full.random_element(rng)
        if aug.act(g, full.restrict_to_augmentation(phi)) != full.restrict_to_augmentation(full.act(g, phi)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class Cochain:
    """Total table (g_1, ..., g_degree) -> module element"""

    group: FiniteGroup
    module: FiniteGModule
    degree: int
    values: Dict[Tuple[GroupElement, ...], Vector]

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise InputError(f"cochains of degree {self.degree} are not supported")
        expected = self.group.order ** self.degree
        if len(self.values) != expected:
            raise InputError(f"cochain table has {len(self.values)} entries, expected {expected}")

    def __call__(self, *gs: GroupElement) -> Vector:
        return self.values[gs]

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.degree == other.degree and self.module == other.module
                and self.values == other.values)

    @classmethod
    def from_function(cls, group: FiniteGroup, module: FiniteGModule, degree: int,
                      fn: Callable[..., Sequence[int]]) -> "Cochain":
        elements = group.elements()
        values = {gs: module.reduce(fn(*gs)) for gs in itertools.product(elements, repeat=degree)}
        return cls(group, module, degree, values)

    @classmethod
    def zero(cls, group: FiniteGroup, module: FiniteGModule, degree: int) -> "Cochain":
        return cls.from_function(group, module, degree, lambda *gs: module.zero())

    def _combine(self, other: "Cochain", op) -> "Cochain":
        if other.degree != self.degree or other.module != self.module:
            raise InputError("cochains live in different cochain groups")
        return Cochain(self.group, self.module, self.degree,
                       {k: op(v, other.values[k]) for k, v in self.values.items()})

    def __add__(self, other: "Cochain") -> "Cochain":
        return self._combine(other, self.module.add)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self._combine(other, self.module.sub)

    def __neg__(self) -> "Cochain":
        return Cochain(self.group, self.module, self.degree,
                       {k: self.module.neg(v) for k, v in self.values.items()})

    def scale(self, k: int) -> "Cochain":
        return Cochain(self.group, self.module, self.degree,
                       {key: self.module.scale(k, v) for key, v in self.values.items()})

    def is_zero(self) -> bool:
        zero = self.module.zero()
        return all(v == zero for v in self.values.values())

    def to_vector(self) -> List[int]:
        out: List[int] = []
        for gs in itertools.product(self.group.elements(), repeat=self.degree):
            out.extend(self.values[gs])
        return out

    @classmethod
    def from_vector(cls, group: FiniteGroup, module: FiniteGModule, degree: int,
                    vector: Sequence[int]) -> "Cochain":
        r = module.rank
        values = {}
        for i, gs in enumerate(itertools.product(group.elements(), repeat=degree)):
            values[gs] = module.reduce(vector[i * r:(i + 1) * r])
        return cls(group, module, degree, values)


@dataclass
class CocycleCheck:
    ok: bool
    witness: Optional[Tuple[GroupElement, ...]]
    checked: int


@dataclass
class CohomologyDescriptor:
    degree: int
    invariant_factors: List[int]
    elementary_divisors: List[int]
    free_rank: int
    representatives: List[Cochain] = field(default_factory=list)

    @property
    def order(self) -> Optional[int]:
        return None if self.free_rank else math.prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors


def coboundary(c: Cochain) -> Cochain:
    """Bar-resolution differential in degrees 0 and 1"""
    G, A = c.group, c.module
    if c.degree == 0:
        b = c()
        return Cochain.from_function(G, A, 1, lambda g: A.sub(A.act(g, b), b))
    if c.degree == 1:
        return Cochain.from_function(
            G, A, 2, lambda g, h: A.add(A.sub(A.act(g, c(h)), c(G.compose(g, h))), c(g)))
    raise InputError(f"coboundary of a degree-{c.degree} cochain is not supported")


def _cocycle_defect(c: Cochain, gs: Tuple[GroupElement, ...]) -> Vector:
    G, A = c.group, c.module
    if c.degree == 1:
        g, h = gs
        return A.add(A.sub(A.act(g, c(h)), c(G.compose(g, h))), c(g))
    g, h, k = gs
    value = A.sub(A.act(g, c(h, k)), c(G.compose(g, h), k))
    return A.sub(A.add(value, c(g, G.compose(h, k))), c(g, h))


def is_cocycle(c: Cochain) -> CocycleCheck:
    """Sweep every (degree + 1)-tuple; the witness is the first failure in lexicographic order"""
    if c.degree not in (1, 2):
        raise InputError(f"cocycle test needs degree 1 or 2, got {c.degree}")
    zero = c.module.zero()
    checked = 0
    witness = None
    for gs in itertools.product(c.group.elements(), repeat=c.degree + 1):
        checked += 1
        if _cocycle_defect(c, gs) != zero:
            witness = gs
            break
    return CocycleCheck(witness is None, witness, checked)


def _require_cocycle(c: Cochain, what: str) -> None:
    check = is_cocycle(c)
    if not check.ok:
        raise ContractViolationError(f"{what}: input is not a cocycle, fails at "
                                     f"{tuple(str(g) for g in check.witness)}")


def _check_bounds(group: FiniteGroup, module: Optional[FiniteGModule] = None) -> None:
    config = Config()
    if group.order > config.MAX_BRUTE_GROUP:
        raise ResourceError(f"group of order {group.order} exceeds brute-force bound {config.MAX_BRUTE_GROUP}")
    if module is not None and module.is_finite and module.order > config.MAX_MODULE_ORDER:
        raise ResourceError(f"module of order {module.order} exceeds brute-force bound {config.MAX_MODULE_ORDER}")


def differential_matrix(group: FiniteGroup, module: FiniteGModule, n: int) -> np.ndarray:
    """Matrix of d: C^n -> C^{n+1} on lexicographic tuple coordinates"""
    elements = group.elements()
    position = {g: i for i, g in enumerate(elements)}
    size = len(elements)
    r = module.rank
    identity = np.eye(r, dtype=object)
    rows = size ** (n + 1) * r
    cols = size ** n * r
    D = np.zeros((rows, cols), dtype=object)

    def col_of(gs) -> int:
        index = 0
        for g in gs:
            index = index * size + position[g]
        return index * r

    for row_index, gs in enumerate(itertools.product(elements, repeat=n + 1)):
        row = row_index * r
        g = gs[0]
        Mg = np.array(module.matrix(g), dtype=object).reshape(r, r)
        terms = [(gs[1:], Mg)]
        for i in range(n):
            merged = gs[:i] + (group.compose(gs[i], gs[i + 1]),) + gs[i + 2:]
            terms.append((merged, identity * (-1) ** (i + 1)))
        terms.append((gs[:n], identity * (-1) ** (n + 1)))
        for key, block in terms:
            col = col_of(key)
            D[row:row + r, col:col + r] += block
    return D


def _kernel_generators(group: FiniteGroup) -> Tuple[GroupElement, ...]:
    return group.kernel.generators if isinstance(group, QuotientGroup) else ()


def _invariance_rows(group: FiniteGroup, module: FiniteGModule, n: int) -> np.ndarray:
    """Rows (h - 1) on every block of C^n, one set per kernel generator h of a quotient group"""
    gens = _kernel_generators(group)
    r = module.rank
    blocks = group.order ** n
    out = np.zeros((len(gens) * blocks * r, blocks * r), dtype=object)
    for s, h in enumerate(gens):
        Mh = np.array(module.matrix(h), dtype=object).reshape(r, r) - np.eye(r, dtype=object)
        for b in range(blocks):
            row = (s * blocks + b) * r
            out[row:row + r, b * r:(b + 1) * r] = Mh
    return out


def invariant_generators(module: FiniteGModule, H: SubgroupSpec) -> List[Vector]:
    """Generators of A^H"""
    r = module.rank
    rows = [np.array(module.matrix(h), dtype=object).reshape(r, r) - np.eye(r, dtype=object)
            for h in H.generators]
    if not rows:
        return [tuple(int(i == j) for j in range(r)) for i in range(r)]
    A = np.vstack(rows)
    sq = subquotient(A, list(module.factors) * len(rows), np.zeros((r, 0), dtype=object), module.factors)
    return [module.reduce(v) for v in sq.generators]


def _moduli(group: FiniteGroup, module: FiniteGModule, n: int) -> List[int]:
    return list(module.factors) * (group.order ** n)


def solve_coboundary(c: Cochain) -> Optional[Cochain]:
    """b with db = c (degree 1 or 2), or None; over G/H the unknowns live in A^H"""
    if c.degree not in (1, 2):
        raise InputError(f"solve_coboundary needs degree 1 or 2, got {c.degree}")
    G, A = c.group, c.module
    _check_bounds(G)
    n = c.degree - 1
    system = differential_matrix(G, A, n)
    rhs = list(c.to_vector())
    row_moduli = _moduli(G, A, n + 1)
    invariance = _invariance_rows(G, A, n)
    if invariance.shape[0]:
        system = np.vstack([system, invariance])
        rhs += [0] * invariance.shape[0]
        row_moduli += list(A.factors) * (invariance.shape[0] // A.rank)
    x = solve_linear(system, rhs, row_moduli)
    if x is None:
        return None
    return Cochain.from_vector(G, A, n, list(x))


def _cohomology(G: FiniteGroup, A: FiniteGModule, n: int) -> CohomologyDescriptor:
    _check_bounds(G, A)
    if not (A.is_finite or A.is_exact):
        raise InputError("the cohomology oracle needs an all-finite or all-Z module")
    cycles = differential_matrix(G, A, n)
    cycle_moduli = _moduli(G, A, n + 1)
    invariance = _invariance_rows(G, A, n)
    if invariance.shape[0]:
        cycles = np.vstack([cycles, invariance])
        cycle_moduli += list(A.factors) * (invariance.shape[0] // A.rank)
    boundaries = differential_matrix(G, A, n - 1)
    if isinstance(G, QuotientGroup):
        # boundaries of A^H-valued cochains only
        gens = invariant_generators(A, G.kernel)
        blocks = G.order ** (n - 1)
        P = np.zeros((blocks * A.rank, blocks * len(gens)), dtype=object)
        for b in range(blocks):
            for s, v in enumerate(gens):
                P[b * A.rank:(b + 1) * A.rank, b * len(gens) + s] = np.array(v, dtype=object)
        boundaries = boundaries @ P
    sq = subquotient(cycles, cycle_moduli, boundaries, _moduli(G, A, n))
    torsion = [d for d in sq.invariant_factors if d]
    elementary = sorted(p ** k for d in torsion for p, k in factorint(d).items())
    representatives = [Cochain.from_vector(G, A, n, list(v)) for v in sq.generators]
    logger.debug(f"H^{n} over a group of order {G.order} with factors {list(A.factors)}: {sq.invariant_factors}")
    return CohomologyDescriptor(n, torsion, elementary, len(sq.invariant_factors) - len(torsion),
                                representatives)


def h1_bruteforce(G: FiniteGroup, A: FiniteGModule) -> CohomologyDescriptor:
    return _cohomology(G, A, 1)


def h2_bruteforce(G: FiniteGroup, A: FiniteGModule) -> CohomologyDescriptor:
    return _cohomology(G, A, 2)


def restrict(c: Cochain, H: SubgroupSpec) -> Cochain:
    if H.ambient != c.group.ambient:
        raise InputError("subgroup does not live in the cochain's group")
    return Cochain.from_function(H, c.module, c.degree, lambda *gs: c(*gs))


def inflate(c: Cochain) -> Cochain:
    """Cochain over G/H pulled back to G through the coset representatives"""
    Q = c.group
    if not isinstance(Q, QuotientGroup):
        raise InputError("inflation starts from a cochain over a quotient group")
    return Cochain.from_function(Q.ambient, c.module, c.degree,
                                 lambda *gs: c(*(Q.representative(g) for g in gs)))


def normalize_cocycle(c: Cochain) -> Cochain:
    """c - d(constant c(e,e)), which vanishes at (e, e)"""
    if c.degree != 2:
        raise InputError("normalization applies to 2-cochains")
    e = c.group.identity()
    a = c(e, e)
    constant = Cochain.from_function(c.group, c.module, 1, lambda g: a)
    return c - coboundary(constant)


def cyclic_chi(n: int, k: int = 1, modulus: int = 0) -> Cochain:
    """χ_k(σ^{ki}, σ^{kj}) = ⌊(i + j)/n⌋ over Z (or the proxy Z/modulus)"""
    if n < 1:
        raise InputError(f"cyclic order must be >= 1, got {n}")
    if math.gcd(k, n) != 1:
        raise InputError(f"k={k} is not coprime to n={n}")
    G = AbelianPresentation((n,))
    A = FiniteGModule.trivial(G, [modulus])
    k_inv = pow(k, -1, n) if n > 1 else 0

    def value(g, h):
        i = g.exponents[0] * k_inv % n
        j = h.exponents[0] * k_inv % n
        return ((i + j) // n,)

    return Cochain.from_function(G, A, 2, value)


def cup_h2_hminus2(c: Cochain, s: GroupElement) -> Vector:
    """Σ_{g∈H} c(g, s) for a cocycle over the cyclic group H = ⟨s⟩"""
    if c.degree != 2:
        raise InputError("cup product evaluation needs a 2-cochain")
    _require_cocycle(c, "cup product")
    A = c.module
    total = A.zero()
    for g in c.group.elements():
        total = A.add(total, c(g, s))
    return total


def genchange_witness(n: int, k: int) -> Cochain:
    """b with χ - k·χ_k = db over Z"""
    chi = cyclic_chi(n, 1)
    chi_k = cyclic_chi(n, k)
    difference = chi - chi_k.scale(k)
    b = solve_coboundary(difference)
    if b is None:
        raise LemmaViolationError(f"χ - {k}χ_{k} is not a coboundary for n={n}")
    return b


def dim_shift_forward(c1: Cochain) -> Cochain:
    """(g, g') ↦ g·c1(g')(g^{-1} - 1)"""
    M = c1.module
    if not isinstance(M, InducedModule) or M.flavor != "augmentation" or c1.degree != 1:
        raise InputError("dimension shift starts from a 1-cochain in Hom(I_G, A)")
    _require_cocycle(c1, "dim_shift_forward")
    G, A = M.group, M.base
    return Cochain.from_function(G, A, 2, lambda g, g2: A.act(g, M.evaluate(c1(g2), G.invert(g))))


def dim_shift_backward(c2: Cochain) -> Cochain:
    """g ↦ ((g' - 1) ↦ g'·c2(g'^{-1}, g)) on the normalized representative of c2

    A cocycle with c2(e,e) != 0 is first replaced by normalize_cocycle(c2), so
    dim_shift_forward of the result equals c2 exactly only when c2 was normalized.
    """
    if c2.degree != 2 or not isinstance(c2.group, AbelianPresentation):
        raise InputError("dimension shift starts from a 2-cochain over a presentation")
    _require_cocycle(c2, "dim_shift_backward")
    G, A = c2.group, c2.module
    e = G.identity()
    if c2(e, e) != A.zero():
        logger.debug(f"normalizing a cocycle with c(e,e) = {c2(e, e)} before the dimension shift")
        c2 = normalize_cocycle(c2)
    M = InducedModule(A, "augmentation")
    return Cochain.from_function(
        G, M, 1, lambda g: M.from_function(lambda x: A.act(x, c2(G.invert(x), g))))


def _random_value(A: FiniteGModule, rng: random.Random, generators: Optional[List[Vector]]) -> Vector:
    if generators is None:
        return A.random_element(rng)
    value = A.zero()
    for v in generators:
        value = A.add(value, A.scale(rng.randrange(max(A.factors) or 7), v))
    return value


def random_cocycle(G: FiniteGroup, A: FiniteGModule, rng: random.Random, normalized: bool = True,
                   descriptor: Optional[CohomologyDescriptor] = None) -> Cochain:
    """Random coboundary plus a random combination of H^2 representatives"""
    generators = invariant_generators(A, G.kernel) if isinstance(G, QuotientGroup) else None
    b = Cochain.from_function(G, A, 1, lambda g: _random_value(A, rng, generators))
    c = coboundary(b)
    if descriptor is None:
        descriptor = h2_bruteforce(G, A)
    for rep, d in zip(descriptor.representatives, descriptor.invariant_factors):
        c = c + rep.scale(rng.randrange(d))
    return normalize_cocycle(c) if normalized else c


def random_cochain(G: FiniteGroup, A: FiniteGModule, degree: int, rng: random.Random) -> Cochain:
    generators = invariant_generators(A, G.kernel) if isinstance(G, QuotientGroup) else None
    return Cochain.from_function(G, A, degree, lambda *gs: _random_value(A, rng, generators))


@dataclass
class InfResResult:
    b: Dict[GroupElement, Vector]
    eta: Dict[GroupElement, Vector]
    u: Cochain
    normalized: Cochain


def _solve_b(G: AbelianPresentation, H: SubgroupSpec, A: FiniteGModule, c2: Cochain) -> Dict[GroupElement, Vector]:
    """b_e = 0 and c2(g,h) = b_g + g·b_h - b_{gh} for g ∈ G, h ∈ H"""
    elements = G.elements()
    position = {g: i for i, g in enumerate(elements)}
    r = A.rank
    identity = np.eye(r, dtype=object)
    rows, rhs = [], []
    for g in elements:
        Mg = np.array(A.matrix(g), dtype=object).reshape(r, r)
        for h in H.elements():
            block = np.zeros((r, len(elements) * r), dtype=object)
            block[:, position[g] * r:(position[g] + 1) * r] += identity
            block[:, position[h] * r:(position[h] + 1) * r] += Mg
            gh = G.compose(g, h)
            block[:, position[gh] * r:(position[gh] + 1) * r] -= identity
            rows.append(block)
            rhs.extend(c2(g, h))
    pin = np.zeros((r, len(elements) * r), dtype=object)
    pin[:, :r] = identity
    rows.append(pin)
    rhs.extend([0] * r)
    system = np.vstack(rows)
    x = solve_linear(system, rhs, list(A.factors) * (system.shape[0] // r))
    if x is None:
        raise PropositionViolationError("no b with b_e = 0 solves c2(g,h) = b_g + g b_h - b_gh")
    return {g: A.reduce(x[i * r:(i + 1) * r]) for i, g in enumerate(elements)}


def _solve_eta(G: AbelianPresentation, H: SubgroupSpec, A: FiniteGModule,
               c_prime: Cochain) -> Dict[GroupElement, Vector]:
    """(h - 1)η = c'(h, g) for every g in a coset, one unknown per coset; η = 0 on H"""
    data = coset_data(G, H)
    r = A.rank
    identity = np.eye(r, dtype=object)
    eta = {G.identity(): A.zero()}
    members = H.elements()
    for rep in data.representatives[1:]:
        rows, rhs = [], []
        for h in members:
            Mh = np.array(A.matrix(h), dtype=object).reshape(r, r) - identity
            for t in members:
                g = G.compose(rep, t)
                rows.append(Mh)
                rhs.extend(c_prime(h, g))
        system = np.vstack(rows)
        x = solve_linear(system, rhs, list(A.factors) * len(rows))
        if x is None:
            raise PropositionViolationError(f"no η solves the coset equations at {rep}")
        eta[rep] = A.reduce(x)
    return eta


def infres_invert(G: AbelianPresentation, H: SubgroupSpec, A: FiniteGModule, c2: Cochain) -> InfResResult:
    """Write a class with trivial restriction to H as the inflation of a class over G/H"""
    if c2.degree != 2 or c2.group != G:
        raise InputError("infres_invert needs a 2-cochain over G")
    _require_cocycle(c2, "infres_invert")
    if not h1_bruteforce(H, A).is_trivial:
        raise H1NonzeroError("H^1(H, A) does not vanish")
    if solve_coboundary(restrict(c2, H)) is None:
        raise RestrictionNontrivialError("restriction of the class to H is not a coboundary")

    c = normalize_cocycle(c2)
    b = _solve_b(G, H, A, c)
    b_cochain = Cochain(G, A, 1, {(g,): v for g, v in b.items()})
    c_prime = c - coboundary(b_cochain)

    data = coset_data(G, H)
    eta = _solve_eta(G, H, A, c_prime)
    eta_cochain = Cochain.from_function(G, A, 1, lambda g: eta[data.representative(g)])
    full_u = c_prime - coboundary(eta_cochain)

    Q = QuotientGroup(G, H)
    for g, g2 in itertools.product(G.elements(), repeat=2):
        if full_u(g, g2) != full_u(data.representative(g), data.representative(g2)):
            raise PropositionViolationError(f"u is not constant on cosets at ({g}, {g2})")
    u = Cochain.from_function(Q, A, 2, lambda g, g2: full_u(g, g2))
    for value in u.values.values():
        if any(A.act(h, value) != value for h in H.generators):
            raise PropositionViolationError("u takes values outside A^H")
    check = is_cocycle(u)
    if not check.ok:
        raise PropositionViolationError(f"u is not a cocycle over G/H at {check.witness}")
    if solve_coboundary(inflate(u) - c) is None:
        raise PropositionViolationError("inflation of u is not cohomologous to c2")
    logger.debug(f"inf-res inversion over {len(data.representatives)} cosets succeeded")
    return InfResResult(b=b, eta=eta, u=u, normalized=c)


def infres_b_via_dimshift(G: AbelianPresentation, H: SubgroupSpec, A: FiniteGModule,
                          c2: Cochain) -> Dict[GroupElement, Vector]:
    """b_g = -g·b_0(g^{-1} - 1) from Res_H δ^{-1}c2 = d b_0"""
    c = normalize_cocycle(c2)
    c1 = dim_shift_backward(c)
    M = c1.module
    b0 = solve_coboundary(restrict(c1, H))
    if b0 is None:
        raise RestrictionNontrivialError("restriction of δ^{-1}c2 to H is not a coboundary")
    phi = b0()
    b = {g: A.neg(A.act(g, M.evaluate(phi, G.invert(g)))) for g in G.elements()}
    for g in G.elements():
        for h in H.elements():
            lhs = c(g, h)
            rhs = A.sub(A.add(b[g], A.act(g, b[h])), b[G.compose(g, h)])
            if lhs != rhs:
                raise PropositionViolationError(f"b from the dimension shift fails at ({g}, {h})")
    return b

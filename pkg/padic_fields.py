"""
Finite-precision arithmetic in two-layer p-adic towers: an unramified layer
followed by a tame Kummer or a prime-power cyclotomic layer
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Poly, cyclotomic_poly, factorint, isprime, primitive_root, symbols, totient
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_compose_mod, gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem

from config import Config
from exceptions import (InputError, InternalError, NoConvergenceError, ObstructionError, PrecisionError,
                        ResourceError, ValuationUndeterminedError)
from groups import AbelianPresentation, GroupElement, SubgroupSpec

logger = logging.getLogger(__name__)

Grid = Tuple[Tuple[int, ...], ...]


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _is_primitive(f: List[int], p: int, k: int) -> bool:
    """f (high to low, monic, degree k) irreducible with X of order p^k - 1"""
    if not gf_irreducible_p(f, p, ZZ):
        return False
    order = p ** k - 1
    for r in factorint(order):
        if gf_pow_mod([1, 0], order // r, f, p, ZZ) == [1]:
            return False
    return True


@lru_cache(maxsize=None)
def least_primitive_polynomial(p: int, k: int) -> Tuple[int, ...]:
    """X - g for the least primitive root g when k = 1; otherwise the first
    primitive monic polynomial ordered by Σ c_j p^j (high-to-low coefficients)"""
    if k == 1:
        return (1, (-int(primitive_root(p))) % p)
    for index in range(p ** k):
        low = [(index // p ** j) % p for j in range(k)]
        f = [1] + low[::-1]
        if low[0] and _is_primitive(f, p, k):
            return tuple(f)
    raise InternalError(f"no primitive polynomial of degree {k} mod {p}")


class PadicField:
    """Q_p(t)(Y): t a Teichmüller root of unity generating the degree-d unramified
    layer, Y a root of an Eisenstein polynomial (tame Y^e = u·p, or ζ - 1 for
    ζ a primitive p^ν-th root of unity); elements are carried modulo p^N"""

    def __init__(self, p: int, d: int = 1, ramified: str = "none", e: int = 1, nu: int = 0,
                 unit: int = 1, precision: int = 32, zeta_level: Optional[int] = None,
                 modulus: Optional[Sequence[int]] = None):
        if not isprime(p):
            raise InputError(f"p must be prime, got {p}")
        if d < 1 or precision < 1:
            raise InputError("degree and precision must be positive")
        self.p = p
        self.D = d
        self.q = p ** d
        self.N = precision
        self.kind = ramified
        self.e = 1
        self.nu = 0
        self.unit = unit % p ** precision
        if self.q > Config().MAX_RESIDUE_FIELD:
            raise ResourceError(f"residue field of size {self.q} exceeds bound {Config().MAX_RESIDUE_FIELD}")
        if ramified == "none":
            self.R = 1
            self.eisenstein: Tuple[int, ...] = (-p,)
        elif ramified == "tame":
            if e < 1 or (self.q - 1) % e:
                raise InputError(f"tame layer needs e | q - 1, got e={e}, q={self.q}")
            if unit % p == 0:
                raise InputError("the radicand twist must be a p-adic unit")
            self.e = e
            self.R = e
            self.eisenstein = tuple([(-unit * p)] + [0] * (e - 1))
        elif ramified == "cyclotomic":
            if p == 2:
                raise InputError("cyclotomic layers need an odd prime")
            if nu < 1:
                raise InputError(f"cyclotomic layer needs nu >= 1, got {nu}")
            self.nu = nu
            self.R = int(totient(p ** nu))
            X = symbols("X")
            shifted = Poly(cyclotomic_poly(p ** nu, X), X).shift(1)
            coeffs = [int(c) for c in reversed(shifted.all_coeffs())]
            self.eisenstein = tuple(coeffs[:self.R])
        else:
            raise InputError(f"unknown ramified layer {ramified!r}")

        self.mod = p ** precision
        if modulus is None:
            modulus = _teichmuller_modulus(p, d, precision)
        self.modulus: Tuple[int, ...] = tuple(int(c) % self.mod for c in modulus)
        self.residue_modulus = [1] + [c % p for c in reversed(self.modulus)]

        self.galois_group = self._galois_presentation()
        self.zeta_level = zeta_level
        self.cyclotomic_generator = int(primitive_root(p ** self.nu)) if self.kind == "cyclotomic" else None
        self._frobenius_tables: Dict[int, List[List[int]]] = {}
        self._ramified_images: Dict[int, object] = {}
        self._tame_zeta_powers: Optional[List[List[int]]] = None
        self._T: Optional[FieldElement] = None

    def _galois_presentation(self) -> AbelianPresentation:
        if self.kind == "tame":
            return AbelianPresentation((self.D, self.e))
        if self.kind == "cyclotomic":
            return AbelianPresentation((self.D, self.R))
        return AbelianPresentation((self.D,))

    @property
    def id(self) -> str:
        parts = [f"p={self.p}", f"d={self.D}"]
        if self.kind == "tame":
            layer = f"tame e={self.e}"
            if self.unit != 1:
                layer += f" u={_signed(self.unit, self.mod)}"
            if self.zeta_level is not None:
                layer += f" z={self.zeta_level}"
            parts.append(layer)
        elif self.kind == "cyclotomic":
            parts.append(f"cyclotomic nu={self.nu}")
        else:
            parts.append("none")
        parts.append(f"N={self.N}")
        return ";".join(parts)

    def __repr__(self):
        return f"PadicField({self.id})"

    def __eq__(self, other):
        return isinstance(other, PadicField) and self.id == other.id

    def __hash__(self):
        return hash(self.id)

    @property
    def degree(self) -> int:
        return self.D * self.R

    # -- raw grid arithmetic -------------------------------------------------

    def _umul(self, a: Sequence[int], b: Sequence[int], m: int) -> List[int]:
        """Product in Z[t]/(modulus) mod m"""
        D = self.D
        raw = [0] * (2 * D - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        raw[i + j] += x * y
        self._reduce_unramified(raw)
        return [c % m for c in raw[:D]]

    def _reduce_unramified(self, raw: List[int]) -> None:
        D = self.D
        F = self.modulus
        for deg in range(len(raw) - 1, D - 1, -1):
            c = raw[deg]
            if c:
                base = deg - D
                for j in range(D):
                    raw[base + j] -= c * F[j]
                raw[deg] = 0

    def _mul_grids(self, a: Grid, b: Grid, m: int) -> List[List[int]]:
        R, D = self.R, self.D
        raw = [[0] * (2 * D - 1) for _ in range(2 * R - 1)]
        for i, ai in enumerate(a):
            if not any(ai):
                continue
            for j, bj in enumerate(b):
                if not any(bj):
                    continue
                row = raw[i + j]
                for u, x in enumerate(ai):
                    if x:
                        for v, y in enumerate(bj):
                            if y:
                                row[u + v] += x * y
        for row in raw:
            self._reduce_unramified(row)
        rows = [row[:D] for row in raw]
        for k in range(2 * R - 2, R - 1, -1):
            c = rows[k]
            if any(c):
                for i, eps in enumerate(self.eisenstein):
                    if eps:
                        target = rows[k - R + i]
                        for j in range(D):
                            target[j] -= eps * c[j]
        return [[x % m for x in row] for row in rows[:R]]

    # -- constructors --------------------------------------------------------

    def element(self, rows: Sequence[Sequence[int]], shift: int = 0, prec: Optional[int] = None) -> "FieldElement":
        prec = self.N if prec is None else prec
        grid = [list(row) + [0] * (self.D - len(row)) for row in rows]
        grid += [[0] * self.D for _ in range(self.R - len(grid))]
        return FieldElement.make(self, shift, grid, prec)

    def zero(self, prec: Optional[int] = None) -> "FieldElement":
        return self.element([], prec=prec)

    def one(self) -> "FieldElement":
        return self.element([[1]])

    def from_integer(self, n: int) -> "FieldElement":
        if n == 0:
            return self.zero()
        v = _vp(n, self.p)
        return self.element([[n // self.p ** v]], shift=v)

    def from_unramified(self, coeffs: Sequence[int], prec: Optional[int] = None) -> "FieldElement":
        return self.element([list(coeffs)], prec=prec)

    def coerce(self, x: Union[int, "FieldElement"]) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field != self:
                raise InputError(f"element of {x.field.id} used in {self.id}")
            return x
        if isinstance(x, int):
            return self.from_integer(x)
        raise InputError(f"cannot coerce {type(x).__name__} into {self.id}")

    def generator(self) -> "FieldElement":
        """t, the canonical generator of the residue field's multiplicative group"""
        if self.D == 1:
            return self.element([[(-self.modulus[0]) % self.mod]])
        return self.element([[0, 1]])

    def uniformizer(self) -> "FieldElement":
        """ϖ: Y for ramified layers, p otherwise"""
        if self.R == 1:
            return self.from_integer(self.p)
        return self.element([[0], [1]])

    def random_element(self, rng: random.Random, unit: bool = False, prec: Optional[int] = None) -> "FieldElement":
        prec = self.N if prec is None else prec
        m = self.p ** prec
        while True:
            rows = [[rng.randrange(m) for _ in range(self.D)] for _ in range(self.R)]
            if not unit or any(c % self.p for c in rows[0]):
                return self.element(rows, prec=prec)

    # -- residues ------------------------------------------------------------

    def residue_of(self, coeffs: Sequence[int]) -> List[int]:
        """Unramified coefficient vector (low to high) to a residue polynomial (high to low)"""
        f = [c % self.p for c in reversed(coeffs)]
        while f and f[0] == 0:
            f.pop(0)
        return f

    def lift_residue(self, f: Sequence[int]) -> List[int]:
        coeffs = [int(c) for c in reversed(list(f))]
        return coeffs + [0] * (self.D - len(coeffs))

    def residue_inverse(self, coeffs: Sequence[int]) -> List[int]:
        r = self.residue_of(coeffs)
        if not r:
            raise ValuationUndeterminedError("residue of a non-unit has no inverse")
        return self.lift_residue(gf_pow_mod(r, self.q - 2, self.residue_modulus, self.p, ZZ))

    # -- Galois action ---------------------------------------------------------

    def _frobenius_table(self, a: int) -> List[List[int]]:
        a %= self.D
        table = self._frobenius_tables.get(a)
        if table is None:
            image = self.generator() ** (self.p ** a)
            if self.D == 1:
                image_row = [image.grid[0][0] * self.p ** image.shift % self.mod]
            else:
                image_row = list(image.grid[0])
            table = [[1] + [0] * (self.D - 1)]
            for _ in range(1, self.D):
                table.append(self._umul(table[-1], image_row, self.mod))
            self._frobenius_tables[a] = table
        return table

    def _tame_zeta(self) -> List[List[int]]:
        """Powers ζ_e^0, ..., ζ_e^{e-1} as unramified coefficient vectors"""
        if self._tame_zeta_powers is None:
            level = self.zeta_level or _default_zeta_level(self)
            base = subfield_root_of_unity(self, level, self.p ** level - 1)
            zeta = base ** ((self.p ** level - 1) // self.e)
            row = list(zeta.grid[0])
            powers = [[1] + [0] * (self.D - 1)]
            for _ in range(1, self.e):
                powers.append(self._umul(powers[-1], row, self.mod))
            self._tame_zeta_powers = powers
        return self._tame_zeta_powers

    def tame_zeta(self) -> "FieldElement":
        if self.kind != "tame":
            raise InputError("ζ_e is attached to tame layers")
        return self.from_unramified(self._tame_zeta()[1 % self.e])

    def _cyclotomic_images(self, b: int) -> List["FieldElement"]:
        b %= self.R
        images = self._ramified_images.get(b)
        if images is None:
            m = pow(self.cyclotomic_generator, b, self.p ** self.nu)
            Z = (self.one() + self.uniformizer()) ** m - self.one()
            images = [self.one()]
            for _ in range(1, self.R):
                images.append(images[-1] * Z)
            self._ramified_images[b] = images
        return images

    def frobenius(self, x: "FieldElement", a: int = 1) -> "FieldElement":
        """σ_0^a: t ↦ t^{p^a}, Y fixed"""
        if a % self.D == 0:
            return x
        table = self._frobenius_table(a)
        m = self.p ** x.prec
        rows = []
        for row in x.grid:
            out = [0] * self.D
            for j, c in enumerate(row):
                if c:
                    for k, v in enumerate(table[j]):
                        out[k] += c * v
            rows.append([v % m for v in out])
        return FieldElement.make(self, x.shift, rows, x.prec)

    def ramified_automorphism(self, x: "FieldElement", b: int = 1) -> "FieldElement":
        """σ_1^b: Y ↦ ζ_e^b·Y (tame) or ζ ↦ ζ^{g^b} (cyclotomic), t fixed"""
        if self.kind == "none" or b % self.R == 0:
            return x
        if self.kind == "tame":
            powers = self._tame_zeta()
            m = self.p ** x.prec
            rows = [self._umul(row, powers[(b * i) % self.e], m) for i, row in enumerate(x.grid)]
            return FieldElement.make(self, x.shift, rows, x.prec)
        images = self._cyclotomic_images(b)
        total = self.zero(prec=x.prec)
        for i, row in enumerate(x.grid):
            if any(row):
                total = total + self.from_unramified(row, prec=x.prec) * images[i]
        return total.shifted(x.shift)

    def apply(self, g: GroupElement, x: "FieldElement") -> "FieldElement":
        if g.presentation != self.galois_group:
            raise InputError(f"group element {g} is not indexed against the Galois group of {self.id}")
        y = self.frobenius(x, g.exponents[0])
        if len(g.exponents) > 1:
            y = self.ramified_automorphism(y, g.exponents[1])
        return y

    def check_automorphisms(self) -> bool:
        """Declared orders and pairwise commutation, checked on t and Y"""
        G = self.galois_group
        gens = [self.generator(), self.uniformizer()]
        for s in G.generators():
            for x in gens:
                y = x
                for _ in range(G.element_order(s)):
                    y = self.apply(s, y)
                if y != x:
                    return False
        for s, r in zip(G.generators(), G.generators()[1:]):
            for x in gens:
                if self.apply(s, self.apply(r, x)) != self.apply(r, self.apply(s, x)):
                    return False
        return True

    # -- division support ------------------------------------------------------

    def _uniformizer_cofactor(self) -> "FieldElement":
        """T = p/Y, integral of valuation (R-1)/R"""
        if self._T is None:
            w_rows = [[(-eps // self.p)] for eps in self.eisenstein]
            w = self.element(w_rows)
            self._T = self.uniformizer() ** (self.R - 1) * _unit_inverse(w)
        return self._T


def _signed(n: int, m: int) -> int:
    return n - m if n > m // 2 else n


def _default_zeta_level(F: PadicField) -> int:
    for k in range(1, F.D + 1):
        if F.D % k == 0 and (F.p ** k - 1) % F.e == 0:
            return k
    raise InputError(f"no unramified subfield of {F.id} contains the e-th roots of unity")


@lru_cache(maxsize=None)
def _teichmuller_modulus(p: int, d: int, precision: int) -> Tuple[int, ...]:
    """Low-to-high coefficients (leading 1 omitted) of the minimal polynomial of the
    Teichmüller lift of a root of the least primitive polynomial of degree d"""
    f = least_primitive_polynomial(p, d)
    naive = PadicField(p, d, precision=precision, modulus=[int(c) for c in reversed(f[1:])])
    root = naive.generator()
    omega = teichmuller_of(root)
    conjugates = [omega]
    for _ in range(1, d):
        conjugates.append(conjugates[-1] ** p)
    poly = [naive.one()]
    for c in conjugates:
        shifted = [naive.zero()] + poly
        scaled = [-(c * a) for a in poly] + [naive.zero()]
        poly = [x + y for x, y in zip(shifted, scaled)]
    coeffs = []
    for c in poly[:d]:
        coeffs.append(to_integer(c))
    logger.debug(f"Teichmüller modulus for p={p}, d={d}: {coeffs}")
    return tuple(coeffs)


@lru_cache(maxsize=128)
def construct_field(p: int, d: int = 1, ramified: str = "none", e: int = 1, nu: int = 0, unit: int = 1,
                    precision: int = 32, zeta_level: Optional[int] = None) -> PadicField:
    F = PadicField(p, d, ramified, e=e, nu=nu, unit=unit, precision=precision, zeta_level=zeta_level)
    logger.info(f"constructed field {F.id} of absolute degree {F.degree}")
    return F


def field_from_id(field_id: str) -> PadicField:
    """Inverse of PadicField.id"""
    try:
        parts = field_id.split(";")
        p = int(parts[0].split("=")[1])
        d = int(parts[1].split("=")[1])
        layer = parts[2].split()
        N = int(parts[3].split("=")[1])
    except (IndexError, ValueError):
        raise InputError(f"malformed field id {field_id!r}")
    options = {k: int(v) for k, v in (item.split("=") for item in layer[1:])}
    if layer[0] == "tame":
        return construct_field(p, d, "tame", e=options["e"], unit=options.get("u", 1), precision=N,
                               zeta_level=options.get("z"))
    if layer[0] == "cyclotomic":
        return construct_field(p, d, "cyclotomic", nu=options["nu"], precision=N)
    return construct_field(p, d, precision=N)


@dataclass(frozen=True, eq=False)
class FieldElement:
    """p^shift · Σ_i Y^i Σ_j grid[i][j] t^j with a p-primitive grid known mod p^prec"""

    field: PadicField
    shift: int
    grid: Grid
    prec: int

    @classmethod
    def make(cls, F: PadicField, shift: int, rows, prec: int) -> "FieldElement":
        if prec < 1:
            raise PrecisionError(f"precision exhausted in {F.id}")
        m = F.p ** prec
        rows = [[int(c) % m for c in row] for row in rows]
        if any(c for row in rows for c in row):
            p = F.p
            while all(c % p == 0 for row in rows for c in row):
                rows = [[c // p for c in row] for row in rows]
                shift += 1
                prec -= 1
                if prec < 1:
                    raise PrecisionError(f"precision exhausted in {F.id}")
        return cls(F, shift, tuple(tuple(row) for row in rows), prec)

    def __repr__(self):
        return f"FieldElement({self.field.id}, shift={self.shift}, prec={self.prec}, grid={self.grid})"

    @property
    def absolute_precision(self) -> int:
        return self.shift + self.prec

    def is_zero(self) -> bool:
        return not any(c for row in self.grid for c in row)

    def is_unit(self) -> bool:
        return self.shift == 0 and any(c % self.field.p for c in self.grid[0])

    def in_base(self) -> bool:
        return not any(c for i, row in enumerate(self.grid) for j, c in enumerate(row) if i or j)

    def shifted(self, k: int) -> "FieldElement":
        """Multiply by p^k"""
        return FieldElement(self.field, self.shift + k, self.grid, self.prec)

    def truncated(self, digits: int) -> "FieldElement":
        """Reduce modulo p^digits (absolute)"""
        if digits < 1:
            raise InputError("truncation needs at least one digit")
        if self.absolute_precision <= digits:
            return self
        if self.is_zero() or self.shift >= digits:
            return self.field.zero(prec=digits)
        return FieldElement.make(self.field, self.shift, self.grid, digits - self.shift)

    def residue(self) -> Tuple[int, ...]:
        if self.shift < 0:
            raise InputError("residue of a non-integral element")
        if self.shift > 0 or self.is_zero():
            return (0,) * self.field.D
        return tuple(c % self.field.p for c in self.grid[0])

    def valuation_units(self) -> int:
        """Valuation in uniformizer units (v(p) = R)"""
        if self.is_zero():
            raise ValuationUndeterminedError(f"valuation of an element indistinguishable from 0 at {self.prec} digits")
        R, p = self.field.R, self.field.p
        best = None
        for i, row in enumerate(self.grid):
            for c in row:
                if c:
                    v = R * _vp(c, p) + i
                    best = v if best is None else min(best, v)
        return self.shift * R + best

    def valuation(self) -> Fraction:
        """Valuation normalized by v(p) = 1"""
        return Fraction(self.valuation_units(), self.field.R)

    def _align(self, other: "FieldElement") -> Tuple[int, List[List[int]], List[List[int]], int]:
        s = min(self.shift, other.shift)
        prec = min(self.absolute_precision, other.absolute_precision) - s
        p = self.field.p
        a = [[c * p ** (self.shift - s) for c in row] for row in self.grid]
        b = [[c * p ** (other.shift - s) for c in row] for row in other.grid]
        return s, a, b, prec

    def __add__(self, other) -> "FieldElement":
        other = self.field.coerce(other)
        s, a, b, prec = self._align(other)
        rows = [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
        return FieldElement.make(self.field, s, rows, prec)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement.make(self.field, self.shift, [[-c for c in row] for row in self.grid], self.prec)

    def __sub__(self, other) -> "FieldElement":
        return self + (-self.field.coerce(other))

    def __rsub__(self, other) -> "FieldElement":
        return self.field.coerce(other) - self

    def __mul__(self, other) -> "FieldElement":
        other = self.field.coerce(other)
        prec = min(self.prec, other.prec)
        rows = self.field._mul_grids(self.grid, other.grid, self.field.p ** prec)
        return FieldElement.make(self.field, self.shift + other.shift, rows, prec)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        F = self.field
        if self.is_zero():
            raise ValuationUndeterminedError(f"division by an element indistinguishable from 0 in {F.id}")
        g = FieldElement(F, 0, self.grid, self.prec)
        k = g.valuation_units()
        if k == 0:
            return _unit_inverse(g).shifted(-self.shift)
        T_k = F._uniformizer_cofactor() ** k
        u = g * T_k
        if u.shift != k or not u.shifted(-k).is_unit():
            raise InternalError("uniformizer cofactor did not produce a unit")
        return (T_k * _unit_inverse(u.shifted(-k))).shifted(-k - self.shift)

    def __truediv__(self, other) -> "FieldElement":
        return self * self.field.coerce(other).inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        return self.field.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field.from_integer(other)
        if not isinstance(other, FieldElement) or other.field != self.field:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def congruent(self, other, digits: int) -> bool:
        """self ≡ other mod p^digits (absolute)"""
        diff = self - self.field.coerce(other)
        if diff.is_zero():
            if diff.absolute_precision < digits:
                raise PrecisionError(f"only {diff.absolute_precision} digits available, {digits} requested")
            return True
        return diff.valuation() >= digits


def _unit_inverse(u: FieldElement) -> FieldElement:
    """Newton iteration y ← y(2 - uy) from the residue inverse"""
    F = u.field
    if not u.is_unit():
        raise InternalError("unit inverse called on a non-unit")
    y = F.from_unramified(F.residue_inverse(u.grid[0]), prec=u.prec)
    two = F.from_integer(2)
    for _ in range(u.prec.bit_length() + 2):
        err = u * y - 1
        if err.is_zero():
            return y
        y = y * (two - u * y)
    if not (u * y - 1).is_zero():
        raise NoConvergenceError("unit inverse did not converge")
    return y


def to_integer(x: FieldElement) -> int:
    """An element of Z_p as an integer modulo p^{absolute precision}"""
    if not x.in_base() or x.shift < 0:
        raise InputError("element is not in Z_p")
    return x.grid[0][0] * x.field.p ** x.shift % x.field.p ** max(x.absolute_precision, 0)


def to_rational(x: FieldElement) -> Fraction:
    """An element of Q_p as p^shift · (integer representative of the grid)"""
    if not x.in_base():
        raise InputError("element is not in Q_p")
    return Fraction(x.grid[0][0]) * Fraction(x.field.p) ** x.shift


def elem_arith(x: FieldElement, y: Optional[FieldElement], op: str, k: int = 1) -> FieldElement:
    if y is not None and y.field != x.field:
        raise InputError("elements of different fields")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "pow":
        return x ** k
    raise InputError(f"unknown field operation {op!r}")


def galois_apply(g: GroupElement, x: FieldElement) -> FieldElement:
    return x.field.apply(g, x)


def norm(x: FieldElement, along: SubgroupSpec) -> FieldElement:
    result = x.field.one()
    for h in along.elements():
        result = result * galois_apply(h, x)
    return result


def trace(x: FieldElement, along: SubgroupSpec) -> FieldElement:
    result = x.field.zero(prec=x.prec)
    for h in along.elements():
        result = result + galois_apply(h, x)
    return result


def partial_norm(g: GroupElement, n: int, x: FieldElement) -> FieldElement:
    """σ^{(n)}(x) = ∏_{k<n} σ^k(x)"""
    if n < 0:
        raise InputError("partial norm needs n >= 0")
    result = x.field.one()
    y = x
    for k in range(n):
        result = result * y
        if k + 1 < n:
            y = galois_apply(g, y)
    return result


def _settled(residual: FieldElement, target: int, what: str) -> bool:
    """residual ≡ 0 mod p^target; a zero known to fewer digits is a precision failure"""
    if residual.is_zero():
        if residual.absolute_precision < target:
            raise PrecisionError(f"{what}: residual vanishes to only {residual.absolute_precision} digits, "
                                 f"{target} requested")
        return True
    return residual.valuation() >= target


def _evaluate(poly: Dict[int, FieldElement], x: FieldElement) -> FieldElement:
    total = x.field.zero(prec=x.prec)
    for k in sorted(poly):
        total = total + poly[k] * x ** k
    return total


def hensel_root(poly: Dict[int, Union[int, FieldElement]], approx: FieldElement,
                digits: Optional[int] = None) -> FieldElement:
    """Newton lifting of a root of Σ c_k X^k from an approximation satisfying Hensel's condition"""
    F = approx.field
    target = F.N if digits is None else digits
    f = {k: F.coerce(c) for k, c in poly.items()}
    df = {k - 1: c * k for k, c in f.items() if k > 0}
    x = approx
    fx = _evaluate(f, x)
    if _settled(fx, target, "Hensel lifting"):
        return x
    dfx = _evaluate(df, x)
    if dfx.is_zero() or fx.valuation_units() <= 2 * dfx.valuation_units():
        raise NoConvergenceError("Hensel condition |f(a)| < |f'(a)|^2 fails at the seed")
    for iteration in range(2 * target.bit_length() + 4):
        x = x - fx / dfx
        fx = _evaluate(f, x)
        if _settled(fx, target, "Hensel lifting"):
            logger.debug(f"Hensel lifting converged after {iteration + 1} steps")
            return x
        dfx = _evaluate(df, x)
    raise NoConvergenceError(f"Hensel lifting did not reach {target} digits")


def teichmuller_of(x: FieldElement) -> FieldElement:
    F = x.field
    if x.shift < 0:
        raise InputError("Teichmüller lift of a non-integral element")
    seed = F.from_unramified(x.residue())
    if seed.is_zero():
        raise InputError("Teichmüller lift of 0")
    return hensel_root({F.q - 1: 1, 0: -1}, seed)


def teichmuller(F: PadicField, a: Union[int, Sequence[int]]) -> FieldElement:
    """ω(a) for a residue given as an integer (F_p) or coefficient vector in the t-basis"""
    coeffs = [a] if isinstance(a, int) else list(a)
    if not any(c % F.p for c in coeffs):
        raise InputError("Teichmüller lift of 0")
    return teichmuller_of(F.from_unramified([c % F.p for c in coeffs]))


def primitive_root_of_unity(F: PadicField, m: int) -> FieldElement:
    """ζ_m = t^{(q-1)/m}"""
    if m < 1 or (F.q - 1) % m:
        raise InputError(f"m={m} does not divide q - 1 = {F.q - 1}")
    return F.generator() ** ((F.q - 1) // m)


@lru_cache(maxsize=256)
def _subfield_generator_exponent(F: PadicField, k: int) -> int:
    """Least j coprime to p^k - 1 with t^{j(q-1)/(p^k-1)} a root of the degree-k canonical polynomial"""
    qk = F.p ** k - 1
    step = (F.q - 1) // qk
    g = list(least_primitive_polynomial(F.p, k))
    for j in range(1, qk + 1):
        if math.gcd(j, qk) != 1:
            continue
        r = gf_pow_mod([1, 0], j * step, F.residue_modulus, F.p, ZZ)
        if not gf_compose_mod(g, r, F.residue_modulus, F.p, ZZ):
            return j
    raise InternalError(f"no conjugate of the degree-{k} generator found in {F.id}")


def subfield_root_of_unity(F: PadicField, k: int, m: int) -> FieldElement:
    """ζ_m inside the degree-k unramified subfield, powered from that subfield's canonical generator"""
    if k < 1 or F.D % k:
        raise InputError(f"no unramified subfield of degree {k} in {F.id}")
    qk = F.p ** k - 1
    if m < 1 or qk % m:
        raise InputError(f"m={m} does not divide p^{k} - 1")
    j = _subfield_generator_exponent(F, k)
    return F.generator() ** (j * ((F.q - 1) // qk) * (qk // m) % (F.q - 1))


def _frobenius_power(s: GroupElement) -> int:
    if any(s.exponents[1:]):
        raise InputError(f"{s} is not a power of the Frobenius σ_0")
    return s.exponents[0]


def _residue_power(F: PadicField, e: int) -> List[int]:
    return gf_pow_mod([1, 0], e, F.residue_modulus, F.p, ZZ)


def solve_unit_norm(s: GroupElement, u: FieldElement, digits: Optional[int] = None) -> FieldElement:
    """η with N_{⟨s⟩}(η) ≡ u, s a power of σ_0 and u a unit fixed by s"""
    F = u.field
    a = _frobenius_power(s) % F.D
    if u.is_zero() or u.valuation_units() != 0:
        raise InputError("solve_unit_norm needs a unit")
    if a == 0:
        return u
    target = min(F.N, u.absolute_precision) if digits is None else digits
    H = SubgroupSpec(F.galois_group, (s,))
    k0 = math.gcd(a, F.D)
    fixed_size = F.p ** k0 - 1
    exponent = (F.q - 1) // fixed_size

    ubar = F.residue_of(u.grid[0])
    step = _residue_power(F, exponent)
    current = [1]
    j = None
    for i in range(fixed_size):
        if current == ubar:
            j = i
            break
        current = gf_rem(gf_mul(current, step, F.p, ZZ), F.residue_modulus, F.p, ZZ)
    if j is None:
        raise InternalError("residue of u is not a norm from the residue field")
    t = F.generator()
    eta = t ** j

    w = None
    for i in range(F.q - 1):
        candidate = t ** i
        tr = trace(candidate, H)
        if tr.is_unit():
            w = candidate / tr
            break
    if w is None:
        raise InternalError("residue trace vanished on every Teichmüller power")

    for iteration in range(2 * target.bit_length() + 4):
        r = u / norm(eta, H)
        err = r - 1
        if _settled(err, target, "unit norm equation"):
            logger.debug(f"unit norm equation solved after {iteration} corrections")
            return eta
        eta = eta * (1 + err * w)
    raise NoConvergenceError(f"unit norm iteration did not reach {target} digits")


def solve_h90(s: GroupElement, t: FieldElement, digits: Optional[int] = None) -> FieldElement:
    """η with s(η)/η ≡ t via the Poincaré series over Teichmüller candidates"""
    F = t.field
    _frobenius_power(s)
    if t.is_zero() or t.valuation_units() != 0:
        raise InputError("solve_h90 needs a unit")
    target = min(F.N, t.absolute_precision) if digits is None else digits
    H = SubgroupSpec(F.galois_group, (s,))
    h = H.order
    if not _settled(norm(t, H) - 1, target, "Hilbert 90"):
        raise ObstructionError("norm of t is not 1, Hilbert 90 does not apply")
    one = F.one()
    if (t - 1).is_zero():
        return one

    partials = [one]
    for _ in range(1, h):
        partials.append(t * galois_apply(s, partials[-1]))
    generator = F.generator()
    for k in range(F.q - 1):
        c = generator ** k
        b = F.zero()
        image = c
        for tk in partials:
            b = b + tk * image
            image = galois_apply(s, image)
        if b.is_unit():
            logger.debug(f"Hilbert 90 candidate t^{k} gives a unit Poincaré series")
            return b.inverse()
    raise InternalError("every Teichmüller candidate gave a non-unit Poincaré series")

"""
Explicit local fundamental classes of abelian extensions of Q_p
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import discrete_log, isprime, primitive_root, totient

from config import Config
from exceptions import (ConventionError, InputError, InternalError, ObstructionError, PipelineError,
                        PrecisionError, ValuationUndeterminedError)
from groups import AbelianPresentation, GroupElement, SubgroupSpec
from linalg import exgcd
from padic_fields import (FieldElement, PadicField, construct_field, galois_apply, norm, partial_norm,
                          solve_h90, solve_unit_norm, subfield_root_of_unity, teichmuller, to_integer)

logger = logging.getLogger(__name__)

FAMILIES = ("unramified", "tame", "cyclotomic")


@dataclass(frozen=True)
class ExtensionSpec:
    """An abelian extension L/Q_p from one of the supported families"""

    p: int
    family: str
    n: int = 1
    e: int = 1
    f: int = 1
    nu: int = 0
    precision: Optional[int] = None
    unit: int = 1

    def normalized(self) -> "ExtensionSpec":
        """A tame layer with e = 1 is the unramified extension of degree f"""
        if self.family == "tame" and self.e == 1:
            return ExtensionSpec(self.p, "unramified", n=self.f, precision=self.precision)
        return self

    def validate(self) -> None:
        if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
            raise InputError(f"p must be prime, got {self.p}")
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}, expected one of {', '.join(FAMILIES)}")
        if self.precision is not None and self.precision < 1:
            raise InputError("precision must be positive")
        if self.family == "unramified" and self.n < 1:
            raise InputError(f"unramified degree must be >= 1, got {self.n}")
        if self.family == "tame":
            if self.e < 1 or self.f < 1:
                raise InputError("tame layers need e >= 1 and f >= 1")
            if (self.p - 1) % self.e:
                raise InputError(f"tame abelian extensions of Q_{self.p} need e | p - 1, got e={self.e}")
            if self.unit % self.p == 0:
                raise InputError("the uniformizer twist must be a unit")
        if self.family == "cyclotomic":
            if self.p == 2:
                raise InputError("cyclotomic family needs an odd prime")
            if self.nu < 1:
                raise InputError(f"cyclotomic family needs nu >= 1, got {self.nu}")

    @property
    def degree(self) -> int:
        if self.family == "unramified":
            return self.n
        if self.family == "tame":
            return self.e * self.f
        return int(totient(self.p ** self.nu))

    @property
    def requested_precision(self) -> int:
        if self.precision is not None:
            return self.precision
        return Config().precision_for(self.family, self.nu)

    def to_dict(self) -> Dict[str, str]:
        data = {"p": str(self.p), "family": self.family, "precision": str(self.requested_precision)}
        if self.family == "unramified":
            data["n"] = str(self.n)
        elif self.family == "tame":
            data.update(e=str(self.e), f=str(self.f), unit=str(self.unit))
        else:
            data["nu"] = str(self.nu)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> "ExtensionSpec":
        try:
            return cls(p=int(data["p"]), family=data["family"], n=int(data.get("n", 1)),
                       e=int(data.get("e", 1)), f=int(data.get("f", 1)), nu=int(data.get("nu", 0)),
                       precision=int(data["precision"]) if "precision" in data else None,
                       unit=int(data.get("unit", 1)))
        except (KeyError, ValueError) as e:
            raise InputError(f"malformed extension spec: {e}")


@dataclass(frozen=True, eq=False)
class Tower:
    """K ⊆ L ⊆ LM with M/K unramified of degree n = [L:K], realized inside one field LM.

    `indices` lists the generators σ_i kept in Gal(L/K) (σ_0 only when f > 1);
    `galois_L` is Gal(L/K) on those generators and `lift` maps it into Gal(LM/K).
    """

    spec: ExtensionSpec
    field: PadicField
    n: int
    f: int
    m: int
    G: AbelianPresentation
    H: SubgroupSpec
    indices: Tuple[int, ...]
    galois_L: AbelianPresentation
    precision: int
    pi: FieldElement
    varpi: FieldElement

    @property
    def frobenius_f(self) -> GroupElement:
        """σ_0^f, generator of H = Gal(LM/L)"""
        return self.G.power(self.G.generator(0), self.f)

    def lift(self, g: GroupElement) -> GroupElement:
        if g.presentation != self.galois_L:
            raise InputError(f"{g} is not an element of Gal(L/K)")
        exps = [0] * self.G.rank
        for position, a in zip(self.indices, g.exponents):
            exps[position] = a
        return self.G.element(exps)

    def act(self, g: GroupElement, x: FieldElement) -> FieldElement:
        return galois_apply(self.lift(g), x)

    def sigma(self, i: int) -> GroupElement:
        """σ_i as an element of Gal(LM/K)"""
        return self.G.generator(i)

    def order_in_L(self, i: int) -> int:
        return self.f if i == 0 else self.G.orders[i]

    def in_L(self, x: FieldElement) -> bool:
        return galois_apply(self.frobenius_f, x).congruent(x, self.precision)

    def describe(self) -> Dict[str, object]:
        return {"n": str(self.n), "f": str(self.f), "m": str(self.m),
                "orders": [str(k) for k in self.galois_L.orders],
                "indices": [str(i) for i in self.indices],
                "field": self.field.id}


def tower_setup(spec: ExtensionSpec, attempt: int = 0, field: Optional[PadicField] = None) -> Tower:
    """Build LM, its Galois generators σ_0 (Frobenius fixing the ramified generator) and σ_1"""
    spec = spec.normalized()
    spec.validate()
    config = Config()
    N = spec.requested_precision
    W = config.working_precision(N, attempt)
    p = spec.p
    if spec.family == "unramified":
        n, f, m = spec.n, spec.n, 0
        F = field or construct_field(p, n, precision=W)
    elif spec.family == "tame":
        n, f, m = spec.e * spec.f, spec.f, 1
        F = field or construct_field(p, n, "tame", e=spec.e, unit=spec.unit, precision=W, zeta_level=spec.f)
    else:
        n, f, m = spec.degree, 1, 1
        F = field or construct_field(p, n, "cyclotomic", nu=spec.nu, precision=W)

    expected = {"unramified": "none", "tame": "tame", "cyclotomic": "cyclotomic"}[spec.family]
    if F.kind != expected or F.D != n or F.N <= N:
        raise InputError(f"field {F.id} does not carry the tower of {spec.to_dict()}")

    G = F.galois_group
    H = SubgroupSpec(G, (G.power(G.generator(0), f),))
    indices = tuple(i for i in range(m + 1) if i > 0 or f > 1)
    orders = tuple(f if i == 0 else G.orders[i] for i in indices)
    galois_L = AbelianPresentation(orders, tuple(f"σ{i}" for i in indices))
    pi = F.from_integer(p)
    varpi = pi if spec.family == "unramified" else F.uniformizer()
    tower = Tower(spec, F, n, f, m, G, H, indices, galois_L, N, pi, varpi)
    logger.info(f"Tower for {spec.family} p={p}: n={n}, f={f}, m={m}, Gal(LM/K)={G.encode()}, "
                f"Gal(L/K)={galois_L.encode() or '1'}, working precision {W}")
    return tower


def _check(ok: bool, identity: str) -> None:
    if not ok:
        raise PipelineError(f"pipeline identity fails: {identity}")


def unramified_cocycle(n: int, pi: FieldElement, precision: Optional[int] = None) -> "LocalCocycle":
    """c(σ^i, σ^j) = π^{⌊(i+j)/n⌋} on ⟨σ_0⟩ of order n"""
    F = pi.field
    if n < 1 or F.galois_group.orders[0] != n:
        raise InputError(f"the unramified layer of {F.id} does not have degree {n}")
    C = AbelianPresentation((n,), ("σ0",))
    values = {}
    powers = [F.one(), pi]
    for g in C.elements():
        for h in C.elements():
            values[(g, h)] = powers[(g.exponents[0] + h.exponents[0]) // n]
    return LocalCocycle(C, F, (0,), values, precision or F.N)


def compute_gamma(tower: Tower) -> FieldElement:
    """γ = ϖ·η with N_H(γ) = π"""
    H = tower.H
    unit = tower.pi / norm(tower.varpi, H)
    eta = solve_unit_norm(tower.frobenius_f, unit)
    gamma = tower.varpi * eta
    _check(norm(gamma, H).congruent(tower.pi, tower.precision), "N_{LM/L}(γ) = π")
    logger.info(f"γ found with valuation {gamma.valuation()}")
    return gamma


def compute_b(tower: Tower, gamma: FieldElement, g: GroupElement) -> FieldElement:
    """b_{σ_0^a τ} = σ_0^a τ(∏_{i=1}^{⌊a/f⌋} σ_0^{-fi}(γ))"""
    G = tower.G
    a = g.exponents[0]
    product = tower.field.one()
    for i in range(1, a // tower.f + 1):
        product = product * galois_apply(G.power(G.generator(0), -tower.f * i), gamma)
    return galois_apply(g, product)


def compute_c_prime(tower: Tower, gamma: FieldElement, g: GroupElement, g2: GroupElement,
                    b: Optional[Dict[GroupElement, FieldElement]] = None) -> FieldElement:
    """c′(g,g′) = π^{⌊(a+a′)/n⌋}·b_{gg′}/(g(b_{g′})·b_g)"""
    G = tower.G

    def b_of(x):
        return b[x] if b is not None else compute_b(tower, gamma, x)

    gg = G.compose(g, g2)
    wrap = (g.exponents[0] + g2.exponents[0]) // tower.n
    return tower.pi ** wrap * b_of(gg) / (galois_apply(g, b_of(g2)) * b_of(g))


def compute_etas(tower: Tower, gamma: FieldElement) -> Dict[int, FieldElement]:
    """η_i with σ_0^f(η_i)/η_i = σ_i(γ)/γ for each kept index i"""
    s = tower.frobenius_f
    etas = {}
    for i in tower.indices:
        t = galois_apply(tower.sigma(i), gamma) / gamma
        try:
            eta = solve_h90(s, t, digits=tower.precision)
        except ObstructionError as e:
            raise PipelineError(f"σ_{i}(γ)/γ is not a norm-one unit, the γ contract is broken: {e}")
        _check((galois_apply(s, eta) / eta).congruent(t, tower.precision),
               f"σ_0^f(η_{i})/η_{i} = σ_{i}(γ)/γ")
        etas[i] = eta
        logger.info(f"η_{i} solved")
    return etas


@dataclass(eq=False)
class FundamentalData:
    gamma: FieldElement
    etas: Dict[int, FieldElement]
    b: Dict[GroupElement, FieldElement]
    report: Optional["CocycleReport"] = None


@dataclass(frozen=True, eq=False)
class EncodingTuple:
    """(α_i, β_ij) over the kept generators; z_i^{n_i} = α_i and z_i z_j = β_ij z_j z_i"""

    field: PadicField
    indices: Tuple[int, ...]
    orders: Tuple[int, ...]
    alpha: Tuple[FieldElement, ...]
    beta: Tuple[Tuple[FieldElement, ...], ...]
    precision: int

    @property
    def size(self) -> int:
        return len(self.indices) + len(self.indices) ** 2

    def agrees_with(self, other: "EncodingTuple") -> bool:
        if self.indices != other.indices or self.orders != other.orders:
            return False
        digits = min(self.precision, other.precision)
        pairs = list(zip(self.alpha, other.alpha))
        for row, other_row in zip(self.beta, other.beta):
            pairs.extend(zip(row, other_row))
        return all(x.congruent(y, digits) for x, y in pairs)


def check_tuple(tower: Tower, T: EncodingTuple) -> None:
    """β_ii = 1, β_ij·β_ji = 1, α_i fixed by σ_i and every entry in L"""
    N = T.precision
    r = len(T.indices)
    for j in range(r):
        _check(T.beta[j][j].congruent(1, N), f"β_{T.indices[j]}{T.indices[j]} = 1")
        for k in range(j + 1, r):
            _check((T.beta[j][k] * T.beta[k][j]).congruent(1, N),
                   f"β_{T.indices[j]}{T.indices[k]}·β_{T.indices[k]}{T.indices[j]} = 1")
        s = tower.galois_L.generator(j)
        _check(tower.act(s, T.alpha[j]).congruent(T.alpha[j], N), f"σ_{T.indices[j]}(α_{T.indices[j]}) = α")
    for x in list(T.alpha) + [x for row in T.beta for x in row]:
        _check(tower.in_L(x), "tuple entries lie in L")


def _truncate_tuple(tower: Tower, alpha: Dict[int, FieldElement], beta: Dict[Tuple[int, int], FieldElement]):
    N = tower.precision
    idx = tower.indices
    short = [x.absolute_precision for x in list(alpha.values()) + list(beta.values()) if x.absolute_precision < N]
    if short:
        raise PrecisionError(f"tuple entries hold only {min(short)} digits, {N} requested")
    return EncodingTuple(tower.field, idx, tower.galois_L.orders,
                         tuple(alpha[i].truncated(N) for i in idx),
                         tuple(tuple(beta[(i, j)].truncated(N) for j in idx) for i in idx), N)


def _general_tuple_at(spec: ExtensionSpec, attempt: int, jobs: int):
    tower = tower_setup(spec, attempt)
    G, H = tower.G, tower.H
    gamma = compute_gamma(tower)
    b = {g: compute_b(tower, gamma, g) for g in G.elements()}
    for g in G.elements():
        for h in H.elements():
            _check(compute_c_prime(tower, gamma, g, h, b).congruent(1, tower.precision), f"c′({g}, {h}) = 1")
    etas = compute_etas(tower, gamma)

    sigma0 = tower.sigma(0)
    alpha, beta = {}, {}
    for i in tower.indices:
        if i == 0:
            alpha[0] = gamma / partial_norm(sigma0, tower.f, etas[0])
        else:
            alpha[i] = 1 / partial_norm(tower.sigma(i), tower.G.orders[i], etas[i])
    one = tower.field.one()
    for i in tower.indices:
        beta[(i, i)] = one
        for j in tower.indices:
            if i < j:
                value = (galois_apply(tower.sigma(j), etas[i]) / etas[i]) * \
                        (etas[j] / galois_apply(tower.sigma(i), etas[j]))
                beta[(i, j)] = value
                beta[(j, i)] = value.inverse()
    T = _truncate_tuple(tower, alpha, beta)
    c, report = verify_tuple(tower, T, jobs)
    if not report.ok:
        raise ConventionError(f"expanded tuple is not a cocycle: witness {report.witness_text()}")
    data = FundamentalData(gamma, etas, b, report)
    logger.info(f"Fundamental tuple for {spec.family} p={spec.p}: {T.size} entries, "
                f"{report.checked} cocycle triples verified")
    return tower, data, T


def _with_retries(stage, spec: ExtensionSpec, *args):
    config = Config()
    for attempt in range(config.PRECISION_RETRIES + 1):
        try:
            return stage(spec, attempt, *args)
        except PrecisionError as e:
            if attempt == config.PRECISION_RETRIES:
                logger.error(f"Precision exhausted after {attempt + 1} attempts: {e}")
                raise
            logger.warning(f"Precision exhausted ({e}); retrying with more guard digits")


def fundamental_tuple(spec: ExtensionSpec, jobs: Optional[int] = None):
    """(Tower, FundamentalData, EncodingTuple) via γ, b_g, c′ and the Frobenius equations"""
    return _with_retries(_general_tuple_at, spec, jobs or Config().JOBS)


def tame_spec_for(spec: ExtensionSpec) -> ExtensionSpec:
    """Q_p(ζ_p) is the tame extension with e = p - 1, f = 1 and radicand -p"""
    spec = spec.normalized()
    if spec.family == "cyclotomic" and spec.nu == 1:
        return ExtensionSpec(spec.p, "tame", e=spec.p - 1, f=1, unit=-1, precision=spec.requested_precision)
    return spec


def _tame_tuple_at(spec: ExtensionSpec, attempt: int):
    tower = tower_setup(spec, attempt)
    F = tower.field
    p, e, f = spec.p, spec.e, spec.f
    zeta = subfield_root_of_unity(F, f, p ** f - 1)
    gamma = tower.varpi
    k = (p - 1) // e
    alpha = {0: gamma, 1: zeta.inverse()}
    beta = {(0, 0): F.one(), (1, 1): F.one(), (0, 1): zeta ** (-k), (1, 0): zeta ** k}
    T = _truncate_tuple(tower, alpha, beta)
    check_tuple(tower, T)
    return tower, T


def tame_tuple(spec: ExtensionSpec) -> Tuple[Tower, EncodingTuple]:
    """(α_0, α_1) = (γ, ζ^{-1}) and β_01 = ζ^{-(q-1)/e} with ζ = ζ_{q^f-1} and γ^e = π"""
    spec = tame_spec_for(spec)
    if spec.family != "tame":
        raise InputError("the closed form covers tame extensions with e > 1")
    return _with_retries(_tame_tuple_at, spec)


@dataclass(frozen=True, eq=False)
class LocalCocycle:
    """A 2-cocycle table on Gal(L/K) with values in LM; `positions` places the generators in Gal(LM/K)"""

    group: AbelianPresentation
    field: PadicField
    positions: Tuple[int, ...]
    values: Dict[Tuple[GroupElement, GroupElement], FieldElement]
    precision: int

    def __call__(self, g: GroupElement, h: GroupElement) -> FieldElement:
        return self.values[(g, h)]

    def lift(self, g: GroupElement) -> GroupElement:
        exps = [0] * self.field.galois_group.rank
        for position, a in zip(self.positions, g.exponents):
            exps[position] = a
        return self.field.galois_group.element(exps)

    def act(self, g: GroupElement, x: FieldElement) -> FieldElement:
        return galois_apply(self.lift(g), x)

    def with_values(self, values) -> "LocalCocycle":
        return LocalCocycle(self.group, self.field, self.positions, dict(values), self.precision)


class _CrossedProduct:
    """Normal ordering of monomials z_0^{a_0}⋯z_r^{a_r} over L"""

    def __init__(self, T: EncodingTuple, group: AbelianPresentation, act):
        self.T = T
        self.group = group
        self.act = act
        self.one = T.field.one()

    def _rho(self, exps: Sequence[int], lo: int, hi: int) -> GroupElement:
        return self.group.element([a if lo <= l < hi else 0 for l, a in enumerate(exps)])

    def times_generator(self, coeff: FieldElement, exps: List[int], k: int) -> FieldElement:
        """(coeff·z^exps)·z_k, updating exps in place and returning the new coefficient"""
        r = len(exps)
        nu = self.one
        for j in range(k + 1, r):
            if exps[j]:
                mu = self._partial_norm(j, exps[j], self.T.beta[j][k])
                nu = nu * self.act(self._rho(exps, k + 1, j), mu)
        coeff = coeff * self.act(self._rho(exps, 0, k + 1), nu)
        exps[k] += 1
        if exps[k] == self.group.orders[k]:
            coeff = coeff * self.act(self._rho(exps, 0, k), self.T.alpha[k])
            exps[k] = 0
        return coeff

    def _partial_norm(self, j: int, count: int, x: FieldElement) -> FieldElement:
        result = self.one
        y = x
        s = self.group.generator(j)
        for step in range(count):
            result = result * y
            if step + 1 < count:
                y = self.act(s, y)
        return result

    def product(self, g: GroupElement, h: GroupElement) -> FieldElement:
        """c with z(g)·z(h) = c·z(gh)"""
        coeff = self.one
        exps = list(g.exponents)
        for k, count in enumerate(h.exponents):
            for _ in range(count):
                coeff = self.times_generator(coeff, exps, k)
        return coeff


def cocycle_from_tuple(T: EncodingTuple, tower: Tower, verify: bool = True,
                       jobs: Optional[int] = None) -> LocalCocycle:
    """Expand a tuple through z_i λ = σ_i(λ) z_i, z_j z_i = β_ji z_i z_j (i < j), z_i^{n_i} = α_i"""
    if T.indices != tower.indices or T.field != tower.field:
        raise InputError("tuple does not belong to this tower")
    group = tower.galois_L
    algebra = _CrossedProduct(T, group, tower.act)
    values = {}
    for g in group.elements():
        for h in group.elements():
            values[(g, h)] = algebra.product(g, h)
    c = LocalCocycle(group, tower.field, tower.indices, values, T.precision)
    if verify:
        report = verify_cocycle(c, jobs)
        if not report.ok:
            raise ConventionError(f"expanded tuple is not a cocycle: witness {report.witness_text()}")
        _check_round_trip(c, T)
    return c


def _check_round_trip(c: "LocalCocycle", T: EncodingTuple) -> None:
    if not tuple_from_cocycle(c).agrees_with(T):
        raise ConventionError("expanded tuple does not round-trip through the extraction formulas")


def verify_tuple(tower: Tower, T: EncodingTuple, jobs: Optional[int] = None) -> Tuple[LocalCocycle, "CocycleReport"]:
    """Expand T and sweep the cocycle identity; a passing sweep also checks the tuple laws and the round trip"""
    c = cocycle_from_tuple(T, tower, verify=False)
    report = verify_cocycle(c, jobs)
    if report.ok:
        check_tuple(tower, T)
        _check_round_trip(c, T)
    return c, report


def tuple_from_cocycle(c: LocalCocycle) -> EncodingTuple:
    """α_i = ∏_{k<n_i} c(σ_i^k, σ_i), β_ii = 1 and β_ij = c(σ_i,σ_j)/c(σ_j,σ_i)

    The tuple precision is the least absolute precision among the extracted entries,
    capped by the cocycle precision.
    """
    G = c.group
    gens = G.generators()
    one = c.field.one()
    alpha = tuple(local_cup(c, s) for s in gens)
    beta = tuple(tuple(one if i == j else c(s, t) / c(t, s) for j, t in enumerate(gens))
                 for i, s in enumerate(gens))
    entries = list(alpha) + [x for row in beta for x in row]
    precision = min([c.precision] + [x.absolute_precision for x in entries])
    if precision < c.precision:
        logger.debug(f"extraction kept {precision} of {c.precision} digits")
    return EncodingTuple(c.field, c.positions, G.orders, alpha, beta, precision)


def local_cup(c: LocalCocycle, s: GroupElement) -> FieldElement:
    """∏_{g∈⟨s⟩} c(g, s), the cup product of c with [s] in Ĥ^0"""
    result = c.field.one()
    for g in SubgroupSpec(c.group, (s,)).powers():
        result = result * c(g, s)
    return result


@dataclass(frozen=True)
class CocycleReport:
    ok: bool
    checked: int
    witness: Optional[Tuple[GroupElement, GroupElement, GroupElement]] = None

    def witness_text(self) -> Optional[str]:
        if self.witness is None:
            return None
        return " | ".join(g.encode() for g in self.witness)


def _sweep_first(c: LocalCocycle, g: GroupElement) -> Tuple[int, Optional[tuple]]:
    G = c.group
    checked = 0
    for h in G.elements():
        for k in G.elements():
            checked += 1
            lhs = c.act(g, c(h, k)) * c(g, G.compose(h, k))
            rhs = c(G.compose(g, h), k) * c(g, h)
            if not lhs.congruent(rhs, c.precision):
                return checked, (g, h, k)
    return checked, None


def verify_cocycle(c: LocalCocycle, jobs: Optional[int] = None) -> CocycleReport:
    """g·c(h,k)·c(g,hk) = c(gh,k)·c(g,h) on every triple; the witness is the least failing triple"""
    jobs = jobs or Config().JOBS
    elements = c.group.elements()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda g: _sweep_first(c, g), elements))
    else:
        results = []
        for g in elements:
            results.append(_sweep_first(c, g))
            if results[-1][1] is not None:
                break
    failures = [w for _, w in results if w is not None]
    if failures:
        witness = min(failures, key=lambda t: tuple(x.exponents for x in t))
        checked = sum(n for n, _ in results)
        logger.info(f"Cocycle identity fails at {' | '.join(x.encode() for x in witness)}")
        return CocycleReport(False, checked, witness)
    return CocycleReport(True, len(elements) ** 3)


# -- norm groups and reciprocity -------------------------------------------------


@dataclass(frozen=True)
class NormQuotient:
    """K^×/N(L^×) on coordinates (v(a), log of the unit part), modulo the lattice
    spanned by (a, b) and (0, c) in Hermite form"""

    a: int
    b: int
    c: int
    log_base: int
    log_modulus: int
    unit_order: int

    @property
    def order(self) -> int:
        return self.a * self.c

    def reduce(self, v: int, ell: int) -> Tuple[int, int]:
        k = v // self.a
        v, ell = v - k * self.a, ell - k * self.b
        return v, ell % self.c

    def class_order(self, v: int, ell: int) -> int:
        for k in range(1, self.order + 1):
            if self.reduce(k * v, k * ell) == (0, 0):
                return k
        raise InternalError("class order exceeds the quotient order")


def _hermite(rows: Sequence[Tuple[int, int]]) -> Tuple[int, int, int]:
    """Basis (a, b), (0, c) with a, c > 0 and 0 <= b < c of the lattice spanned by rows"""
    a, b = 0, 0
    c = 0
    for u, w in rows:
        M = exgcd(a, u)
        other = M[1, 0] * b + M[1, 1] * w
        a, b = M[0, 0] * a + M[0, 1] * u, M[0, 0] * b + M[0, 1] * w
        c = math.gcd(c, int(other))
    if a <= 0 or c <= 0:
        raise InternalError("norm lattice is not of full rank")
    return int(a), int(b) % c, c


def _unit_log(value: int, modulus: int, base: int, order: int) -> int:
    if order == 1:
        return 0
    return int(discrete_log(modulus, value % modulus, base)) % order


def norm_quotient(tower: Tower) -> NormQuotient:
    spec = tower.spec
    p = spec.p
    if spec.family == "cyclotomic":
        modulus = p ** spec.nu
        order = int(totient(modulus))
        base = int(primitive_root(modulus))
        relations = [(1, 0), (0, order)]
    else:
        modulus, order = p, p - 1
        base = int(primitive_root(p)) if p > 2 else 1
        if spec.family == "unramified":
            relations = [(tower.n, 0), (0, 1)]
        else:
            e, f = spec.e, spec.f
            # N(ϖ) = ((-1)^{e-1}·u·p)^f, unit norms are the e-th powers times 1-units
            sign = (-1) ** (e - 1) * spec.unit
            relations = [(f, f * _unit_log(sign, modulus, base, order)), (0, e)]
        relations.append((0, order))
    a, b, c = _hermite(relations)
    Q = NormQuotient(a, b, c, base, modulus, order)
    if Q.order != tower.n:
        raise InternalError(f"|K^×/N(L^×)| = {Q.order} differs from [L:K] = {tower.n}")
    return Q


def _base_coordinates(tower: Tower, a: Union[int, FieldElement], Q: NormQuotient) -> Tuple[int, int]:
    if isinstance(a, FieldElement):
        x = tower.field.coerce(a).truncated(tower.precision)
    else:
        x = tower.field.from_integer(a)
    if x.is_zero():
        raise ValuationUndeterminedError("the zero element has no class in K^×/N(L^×)")
    if not x.in_base():
        raise InputError("element does not lie in K = Q_p")
    return x.shift, _unit_log(x.grid[0][0], Q.log_modulus, Q.log_base, Q.unit_order)


@dataclass(frozen=True)
class Membership:
    member: bool
    decomposition: Tuple[int, int]
    order: int


def norm_group_membership(tower: Tower, a: Union[int, FieldElement]) -> Membership:
    """Class of a in K^×/N(L^×), written as p^i·ω(g)^j with (i, j) reduced"""
    Q = norm_quotient(tower)
    v, ell = _base_coordinates(tower, a, Q)
    reduced = Q.reduce(v, ell)
    return Membership(reduced == (0, 0), reduced, Q.class_order(*reduced))


def norm_to_base(tower: Tower, x: FieldElement) -> FieldElement:
    """N_{L/K}(x) for x ∈ L"""
    result = tower.field.one()
    for g in tower.galois_L.elements():
        result = result * tower.act(g, x)
    return result


def _complement_norm(tower: Tower, x: FieldElement, j: int) -> FieldElement:
    """N_{L^{⟨σ⟩}/K}(x) for x fixed by the j-th generator σ of Gal(L/K)"""
    result = tower.field.one()
    for g in tower.galois_L.elements():
        if g.exponents[j] == 0:
            result = result * tower.act(g, x)
    return result


@dataclass(frozen=True, eq=False)
class ArtinRow:
    index: int
    element: FieldElement
    image: GroupElement


def artin_table(tower: Tower, T: EncodingTuple, c: Optional[LocalCocycle] = None) -> List[ArtinRow]:
    """Rows (N_{L^{⟨σ_i⟩}/K}(α_i), σ_i|_L)"""
    c = c or cocycle_from_tuple(T, tower, verify=False)
    rows = []
    for j, i in enumerate(T.indices):
        s = tower.galois_L.generator(j)
        _check(local_cup(c, s).congruent(T.alpha[j], T.precision), f"∏_k c(σ_{i}^k, σ_{i}) = α_{i}")
        element = _complement_norm(tower, T.alpha[j], j).truncated(T.precision)
        _check(element.in_base(), f"N(α_{i}) lies in K")
        rows.append(ArtinRow(i, element, s))
    return rows


def artin_evaluate(tower: Tower, T: EncodingTuple, a: Union[int, FieldElement],
                   table: Optional[List[ArtinRow]] = None) -> GroupElement:
    """θ_{L/K}(a) from the decomposition of the class of a over the table's left entries"""
    table = table if table is not None else artin_table(tower, T)
    Q = norm_quotient(tower)
    target = Q.reduce(*_base_coordinates(tower, a, Q))
    coords = [_base_coordinates(tower, row.element, Q) for row in table]
    for g in tower.galois_L.elements():
        v = sum(k * x[0] for k, x in zip(g.exponents, coords))
        ell = sum(k * x[1] for k, x in zip(g.exponents, coords))
        if Q.reduce(v, ell) == target:
            return g
    raise InternalError("the Artin table entries do not generate K^×/N(L^×)")


def reciprocity_normalization(tower: Tower, T: EncodingTuple) -> str:
    """"inverse" if units act by ζ ↦ ζ^{u^{-1}}, "direct" if ζ ↦ ζ^u"""
    spec = tower.spec
    if spec.family != "cyclotomic":
        raise InputError("reciprocity normalization is read off cyclotomic towers")
    table = artin_table(tower, T)
    p, modulus = spec.p, spec.p ** spec.nu
    x = tower.field.cyclotomic_generator
    units = [teichmuller(tower.field, r) for r in range(1, p)]
    if spec.nu > 1:
        units.append(tower.field.from_integer(1 + p))
    verdicts = set()
    for u in units:
        image = artin_evaluate(tower, T, u, table)
        exponent = pow(x, image.exponents[0], modulus)
        w = to_integer(u.truncated(tower.precision)) % modulus
        matches = set()
        if exponent == pow(w, -1, modulus):
            matches.add("inverse")
        if exponent == w:
            matches.add("direct")
        verdicts.add(frozenset(matches))
    common = frozenset.intersection(*verdicts) if verdicts else frozenset()
    if len(common) != 1:
        raise PipelineError(f"Artin map matches neither cyclotomic normalization consistently: {verdicts}")
    normalization = next(iter(common))
    logger.info(f"Artin map on Q_{p}(ζ_{modulus}) follows the {normalization} normalization")
    return normalization


def invariant_cyclic_unramified(c: LocalCocycle) -> Fraction:
    """v(∏_k c(σ^k, σ))/n mod 1 for a cocycle on the cyclic group of an unramified extension"""
    if c.field.kind != "none" or c.group.rank != 1 or c.positions != (0,):
        raise InputError("invariant is read off unramified cyclic cocycles")
    n = c.group.orders[0]
    cup = local_cup(c, c.group.generator(0))
    return (cup.valuation() / n) % 1


@dataclass(frozen=True)
class Fingerprint:
    quotient: Tuple[int, int, int]
    orders: Tuple[int, ...]
    classes: Tuple[Tuple[int, int], ...]
    invariant: Optional[Fraction] = None


def tuple_fingerprint(tower: Tower, T: EncodingTuple, c: Optional[LocalCocycle] = None) -> Fingerprint:
    """Classes of N(α_i) in K^×/N(L^×), plus the invariant for unramified towers; equal
    classes in H^2 give equal fingerprints"""
    Q = norm_quotient(tower)
    c = c or cocycle_from_tuple(T, tower, verify=False)
    table = artin_table(tower, T, c)
    classes = tuple(Q.reduce(*_base_coordinates(tower, row.element, Q)) for row in table)
    invariant = None
    if tower.spec.family == "unramified" and T.indices:
        invariant = invariant_cyclic_unramified(c)
    return Fingerprint((Q.a, Q.b, Q.c), T.orders, classes, invariant)


def perturb_tuple(tower: Tower, T: EncodingTuple, w: FieldElement) -> EncodingTuple:
    """Rescale every z_i by w ∈ L^×: α_i ↦ α_i·N_{⟨σ_i⟩}(w) and β_ij ↦ β_ij·σ_i(w)/σ_j(w)"""
    N = T.precision
    gens = tower.galois_L.generators()
    alpha = tuple((a * _cyclic_norm(tower, s, w)).truncated(N) for a, s in zip(T.alpha, gens))
    beta = []
    for j, s in enumerate(gens):
        row = []
        for k, t in enumerate(gens):
            factor = tower.act(s, w) / tower.act(t, w)
            row.append((T.beta[j][k] * factor).truncated(N))
        beta.append(tuple(row))
    return EncodingTuple(T.field, T.indices, T.orders, alpha, tuple(beta), N)


def _cyclic_norm(tower: Tower, s: GroupElement, x: FieldElement) -> FieldElement:
    result = tower.field.one()
    for g in SubgroupSpec(tower.galois_L, (s,)).powers():
        result = result * tower.act(g, x)
    return result

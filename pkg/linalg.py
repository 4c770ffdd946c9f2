"""
Exact diagonal (Smith-type) forms over Z and Z/L with tracked transforms.

Over Z the decomposition comes from sympy; the elimination below is kept for
Z/L, which is not a principal ideal domain.
"""

import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.domains import ZZ

from exceptions import InputError, InternalError

logger = logging.getLogger(__name__)


def as_matrix(rows, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Object-dtype integer matrix (entries stay Python ints)"""
    if shape is not None and (shape[0] == 0 or shape[1] == 0):
        return np.zeros(shape, dtype=object)
    M = np.array(rows, dtype=object)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    return M


def exgcd(a: int, b: int) -> np.ndarray:
    """2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0].

    If a divides b, M[0, 1] is 0.
    """
    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    M = np.array([[a, 1, 0],
                  [b, 0, 1]], dtype=object)
    M = M[::-1]
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]

    g = M[0, 0]
    M = M[:, 1:]
    M *= [a_sign, b_sign]
    if g != 0:
        M[1] = [- b_sign * b // g, a_sign * a // g]
    return M


def inv_2x2_det1(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


@dataclass
class NormalForm:
    """A == S @ D @ T (congruence mod `modulus` when it is nonzero).

    Transforms are exact over Z, or reduced mod modulus**2 when a modulus is
    set; `rhs` carries the row operations applied to an extra block.
    """

    D: np.ndarray
    modulus: int
    S: Optional[np.ndarray] = None
    Sinv: Optional[np.ndarray] = None
    T: Optional[np.ndarray] = None
    Tinv: Optional[np.ndarray] = None
    rhs: Optional[np.ndarray] = None

    def diagonal(self) -> List[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]


def normal_form(A: np.ndarray, modulus: int = 0, left: bool = True, right: bool = True,
                rhs: Optional[np.ndarray] = None) -> NormalForm:
    """Diagonalize A by alternately clearing columns and rows with 2x2 unimodular steps.

    No divisibility chain is imposed here; see `enforce_chain`.
    """
    L = modulus
    tmod = L * L
    D = as_matrix(A).astype(object)
    if L:
        D = D % L
    rows, cols = D.shape
    S = np.eye(rows, dtype=object) if left else None
    Sinv = np.eye(rows, dtype=object) if left else None
    T = np.eye(cols, dtype=object) if right else None
    Tinv = np.eye(cols, dtype=object) if right else None
    R = None
    if rhs is not None:
        R = as_matrix(rhs).astype(object)
        if L:
            R = R % L

    def reduce_(X, m):
        return X % m if m else X

    def clear_row(i):
        if not D[i, i + 1:].any():
            return False
        for j in range(i + 1, cols):
            if D[i, j] == 0:
                continue
            M = exgcd(D[i, i], D[i, j]).T
            D[:, [i, j]] = reduce_(D[:, [i, j]] @ M, L)
            if right:
                T[[i, j]] = reduce_(inv_2x2_det1(M) @ T[[i, j]], tmod)
                Tinv[:, [i, j]] = reduce_(Tinv[:, [i, j]] @ M, tmod)
        return True

    def clear_col(i):
        if not D[i + 1:, i].any():
            return False
        for j in range(i + 1, rows):
            if D[j, i] == 0:
                continue
            M = exgcd(D[i, i], D[j, i])
            D[[i, j]] = reduce_(M @ D[[i, j]], L)
            if left:
                S[:, [i, j]] = reduce_(S[:, [i, j]] @ inv_2x2_det1(M), tmod)
                Sinv[[i, j]] = reduce_(M @ Sinv[[i, j]], tmod)
            if R is not None:
                R[[i, j]] = reduce_(M @ R[[i, j]], L)
        return True

    for i in range(min(rows, cols)):
        clear_col(i)
        while True:
            if not clear_row(i):
                break
            if not clear_col(i):
                break

    return NormalForm(D=D, modulus=L, S=S, Sinv=Sinv, T=T, Tinv=Tinv, rhs=R)


def _from_sympy(M: Matrix) -> np.ndarray:
    return np.array([[int(v) for v in M.row(i)] for i in range(M.rows)], dtype=object).reshape(M.shape)


def smith_decomposition(A: np.ndarray, left: bool = True, right: bool = True,
                        rhs: Optional[np.ndarray] = None) -> NormalForm:
    """Smith form over Z through sympy's smith_normal_decomp.

    sympy returns D = P A Q, so Sinv = P and Tinv = Q; the inverses S and T
    are only formed when `left` or `right` asks for them.
    The diagonal is already a non-negative divisibility chain with zeros last.
    """
    A = as_matrix(A)
    rows, cols = A.shape
    if not rows or not cols:
        raise InputError(f"Smith decomposition of an empty {rows}x{cols} matrix")
    D, P, Q = smith_normal_decomp(Matrix(rows, cols, [int(v) for v in A.flat]), domain=ZZ)
    R = None if rhs is None else _from_sympy(P * Matrix(as_matrix(rhs).tolist()))
    return NormalForm(D=_from_sympy(D), modulus=0,
                      S=_from_sympy(P.inv()) if left else None, Sinv=_from_sympy(P),
                      T=_from_sympy(Q.inv()) if right else None, Tinv=_from_sympy(Q),
                      rhs=R)


def _divides(a: int, b: int) -> bool:
    return b == 0 if a == 0 else b % a == 0


def enforce_chain(values: Sequence[int], S: Optional[np.ndarray] = None,
                  modulus: int = 0) -> Tuple[List[int], Optional[np.ndarray]]:
    """Turn a diagonal into a divisibility chain d_0 | d_1 | ... (0 last).

    diag(a, b) = L^{-1} diag(g, ab/g) R^{-1}; the generator columns of S are
    updated by L^{-1} so that S e_i keeps generating the i-th factor.
    """
    values = [abs(v) for v in values]
    S = None if S is None else S.copy()
    n = len(values)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = values[i], values[j]
            if _divides(a, b):
                continue
            M = exgcd(a, b)
            s, t = M[0, 0], M[0, 1]
            g = s * a + t * b
            values[i], values[j] = g, a * b // g
            if S is not None:
                Linv = np.array([[a // g, -t], [b // g, s]], dtype=object)
                S[:, [i, j]] = S[:, [i, j]] @ Linv
                if modulus:
                    S[:, [i, j]] %= modulus
    return values, S


def lcm_all(values: Sequence[int]) -> int:
    return reduce(math.lcm, values, 1)


def solve_linear(A: np.ndarray, c: Sequence[int], row_moduli: Sequence[int]) -> Optional[np.ndarray]:
    """One solution x of A x = c where row j holds modulo row_moduli[j] (0: over Z).

    Free parameters of the diagonal system are set to 0. Returns None when the
    system is inconsistent.
    """
    A = as_matrix(A)
    rows, cols = A.shape
    c = [int(v) for v in c]
    if len(c) != rows or len(row_moduli) != rows:
        raise InputError("right-hand side does not match the system")
    if cols == 0:
        ok = all((v % m == 0) if m else v == 0 for v, m in zip(c, row_moduli))
        return np.zeros(0, dtype=object) if ok else None

    finite = [m for m in row_moduli if m]
    if rows and len(finite) == rows:
        L = lcm_all(finite)
        scale = np.array([[L // m] for m in row_moduli], dtype=object)
        rhs = as_matrix([[v * (L // m) % L] for v, m in zip(c, row_moduli)])
        nf = normal_form(A * scale, modulus=L, left=False, rhs=rhs)
        r = nf.rhs[:, 0]
        y = np.zeros(cols, dtype=object)
        for i in range(rows):
            d = nf.D[i, i] if i < cols else 0
            g = math.gcd(d, L)
            if r[i] % g:
                return None
            if i < cols and d % L:
                y[i] = (r[i] // g) * pow(d // g, -1, L // g) % (L // g)
        return (nf.Tinv @ y) % L

    if finite:
        # mixed: slack columns turn each finite row into an equation over Z
        slack = [j for j, m in enumerate(row_moduli) if m]
        E = np.zeros((rows, len(slack)), dtype=object)
        for s, j in enumerate(slack):
            E[j, s] = row_moduli[j]
        x = solve_linear(np.hstack([A, E]), c, [0] * rows)
        return None if x is None else x[:cols]

    if rows == 0:
        return np.zeros(cols, dtype=object)
    nf = smith_decomposition(A, left=False, right=False, rhs=as_matrix([[v] for v in c]))
    r = nf.rhs[:, 0]
    y = np.zeros(cols, dtype=object)
    for i in range(rows):
        d = nf.D[i, i] if i < cols else 0
        if d == 0:
            if r[i] != 0:
                return None
        else:
            if r[i] % d:
                return None
            y[i] = r[i] // d
    return nf.Tinv @ y


@dataclass
class Subquotient:
    """ker/im as ⊕ Z/d_i; d_i = 0 stands for a free factor Z"""

    invariant_factors: List[int]
    generators: List[np.ndarray]


def subquotient(cycle_matrix: np.ndarray, cycle_moduli: Sequence[int], boundary_matrix: np.ndarray,
                moduli: Sequence[int]) -> Subquotient:
    """ker(cycle_matrix) / im(boundary_matrix) on coordinates taken modulo `moduli`.

    Rows of cycle_matrix hold modulo cycle_moduli. Either every modulus is
    finite or every modulus is 0 (exact Z).
    """
    A = as_matrix(cycle_matrix)
    N = len(moduli)
    all_moduli = list(moduli) + list(cycle_moduli)
    if all(all_moduli):
        return _finite_subquotient(A, cycle_moduli, as_matrix(boundary_matrix), moduli)
    if any(all_moduli):
        raise InputError("coefficient modules mixing Z and finite factors are not supported here")
    return _integral_subquotient(A, as_matrix(boundary_matrix), N)


def _finite_subquotient(A, cycle_moduli, B, moduli) -> Subquotient:
    L = lcm_all(list(moduli) + list(cycle_moduli))
    N = len(moduli)
    rows = A.shape[0]
    if rows:
        scale = np.array([[L // m] for m in cycle_moduli], dtype=object)
        nf = normal_form(A * scale, modulus=L, left=False)
        V, T = nf.Tinv, nf.T
        diag = nf.diagonal() + [0] * (N - min(rows, N))
    else:
        V = T = np.eye(N, dtype=object)
        diag = [0] * N
    c = [L // math.gcd(d, L) for d in diag]

    Bg = np.hstack([B, np.diag(np.array(moduli, dtype=object))]) if B.size else \
        np.diag(np.array(moduli, dtype=object))
    TB = (T @ Bg) % (L * L)
    W = np.zeros(TB.shape, dtype=object)
    for i in range(N):
        if any(v % c[i] for v in TB[i]):
            raise InternalError("boundary generator outside the cycle lattice")
        W[i] = (TB[i] // c[i]) % L

    nf2 = normal_form(W, modulus=L, right=False)
    diag2 = nf2.diagonal() + [0] * (N - min(W.shape))
    values, S = enforce_chain([math.gcd(d, L) for d in diag2], nf2.S % L, modulus=L)

    basis = (V % L) * np.array(c, dtype=object)
    factors, generators = [], []
    for i, d in enumerate(values):
        if d == 1:
            continue
        x = basis @ S[:, i]
        factors.append(d)
        generators.append(np.array([v % m for v, m in zip(x, moduli)], dtype=object))
    logger.debug(f"finite subquotient over Z/{L}: factors {factors}")
    return Subquotient(factors, generators)


def _integral_subquotient(A, B, N) -> Subquotient:
    rows = A.shape[0]
    if rows and N:
        nf = smith_decomposition(A, left=False)
        V, T = nf.Tinv, nf.T
        diag = nf.diagonal() + [0] * (N - min(rows, N))
    else:
        V = T = np.eye(N, dtype=object)
        diag = [0] * N
    idx = [i for i, d in enumerate(diag) if d == 0]
    rest = [i for i, d in enumerate(diag) if d != 0]
    if not idx:
        return Subquotient([], [])
    if B.size:
        TB = T @ B
        if rest and TB[rest].any():
            raise InternalError("boundary generator outside the cycle lattice")
        W = TB[idx]
    else:
        W = np.zeros((len(idx), 0), dtype=object)

    if W.shape[1]:
        nf2 = smith_decomposition(W, right=False)
        values = nf2.diagonal() + [0] * (len(idx) - min(W.shape))
        S = nf2.S
    else:
        values = [0] * len(idx)
        S = np.eye(len(idx), dtype=object)

    basis = V[:, idx]
    factors, generators = [], []
    for i, d in enumerate(values):
        if d == 1:
            continue
        factors.append(d)
        generators.append(basis @ S[:, i])
    return Subquotient(factors, generators)

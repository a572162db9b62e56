"""Petrov classification of 4-metrics.

From an orthonormal Lorentz frame a Newman-Penrose null tetrad is formed,
the five complex Weyl scalars are extracted by contracting the Weyl tensor
with the tetrad, and the algebraic type follows from a decision tree driven
by which scalars (and which derived invariants) vanish.  Every zero test
goes through the exact kernel; an expression that can be neither proved
zero nor certified nonzero numerically aborts the classification instead of
guessing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import sympy as sp

from . import scalars
from .curvature import MetricContext
from .scalars import is_zero, ratsimp, trigsimp


class PetrovType(Enum):
    I = "I"
    II = "II"
    III = "III"
    D = "D"
    N = "N"
    O = "O"

    def __str__(self):
        return self.value


class UnclassifiableError(ValueError):
    """A zero test could not be decided; carries the offending expression."""

    def __init__(self, expression):
        super().__init__(
            f"cannot decide whether this expression vanishes: {expression}")
        self.expression = expression


@dataclass(frozen=True)
class NPTetrad:
    """Null tetrad vectors, contravariant and covariant components."""

    k: tuple
    l: tuple
    m: tuple
    mbar: tuple
    k_cov: tuple
    l_cov: tuple
    m_cov: tuple
    mbar_cov: tuple


@dataclass(frozen=True)
class WeylScalars:
    psi: tuple  # psi[0] .. psi[4], complex expressions

    def __getitem__(self, i):
        return self.psi[i]


_MINKOWSKI = (1, -1, -1, -1)


def np_tetrad(ctx: MetricContext) -> NPTetrad:
    """Null tetrad from an orthonormal frame with (+,-,-,-) signature.

    k, l combine the timelike and first spacelike legs; m, mbar combine the
    remaining two with the imaginary unit.  Orthonormality is verified with
    the exact zero test before anything is built.
    """
    if ctx.dim != 4:
        raise ValueError("a Newman-Penrose tetrad needs four dimensions")
    if not ctx.cframe_flag:
        raise ValueError("this context has no frame base")
    E = ctx.frame_contravariant
    g = ctx.lg
    for a in range(4):
        for b in range(a + 1):
            inner = sum(g[i][j] * E[a][i] * E[b][j]
                        for i in range(4) for j in range(4))
            expected = _MINKOWSKI[a] if a == b else 0
            if not is_zero(inner - expected):
                raise ValueError(
                    f"frame is not orthonormal with (+,-,-,-) signature: "
                    f"e_{a + 1}.e_{b + 1} != {expected}")
    s = sp.sqrt(2) / 2
    k = [trigsimp(s * (E[0][i] + E[1][i])) for i in range(4)]
    l = [trigsimp(s * (E[0][i] - E[1][i])) for i in range(4)]
    mbar = [trigsimp(s * (E[2][i] + sp.I * E[3][i])) for i in range(4)]
    m = [trigsimp(s * (E[2][i] - sp.I * E[3][i])) for i in range(4)]

    def lower(vec):
        return tuple(trigsimp(sum(g[i][j] * vec[j] for j in range(4)))
                     for i in range(4))

    return NPTetrad(tuple(k), tuple(l), tuple(m), tuple(mbar),
                    lower(k), lower(l), lower(m), lower(mbar))


def weyl_scalars(weyl, tetrad: NPTetrad) -> WeylScalars:
    """The five complex Weyl scalars as tetrad contractions of the Weyl
    tensor (standard Newman-Penrose convention).

    The curvature arrays keep the transported index first and the
    antisymmetric derivative pair in the middle slots; the Newman-Penrose
    contractions are written for the pairwise arrangement W_{abcd} =
    weyl[c][a][b][d], which is how the array is read here.
    """
    if len(weyl) != 4:
        raise ValueError("the Weyl array must be four dimensional")
    k, l, m, mb = tetrad.k, tetrad.l, tetrad.m, tetrad.mbar

    def contract4(va, vb, vc, vd):
        total = sp.S.Zero
        for p in range(4):
            for q in range(4):
                for r in range(4):
                    for s in range(4):
                        w = weyl[p][q][r][s]
                        if w == 0:
                            continue
                        total += w * va[q] * vb[r] * vc[p] * vd[s]
        return trigsimp(sp.expand(total))

    return WeylScalars((
        contract4(k, m, k, m),
        contract4(k, l, k, m),
        contract4(k, m, mb, l),
        contract4(k, l, mb, l),
        contract4(mb, l, mb, l),
    ))


def invariant_I(psi) -> sp.Expr:
    """I = psi0 psi4 - 4 psi1 psi3 + 3 psi2^2."""
    return ratsimp(psi[0] * psi[4] - 4 * psi[1] * psi[3] + 3 * psi[2] ** 2)


def invariant_J(psi) -> sp.Expr:
    """J = det [[psi0, psi1, psi2], [psi1, psi2, psi3], [psi2, psi3, psi4]]."""
    return ratsimp(
        psi[0] * (psi[2] * psi[4] - psi[3] ** 2)
        - psi[1] * (psi[1] * psi[4] - psi[2] * psi[3])
        + psi[2] * (psi[1] * psi[3] - psi[2] ** 2))


def _nonzero_certificate(e) -> bool:
    """Try to certify that ``e`` is not identically zero by evaluating it at
    sample points (independently of the symbolic kernel)."""
    names = sorted(s.name for s in sp.sympify(e).free_symbols)
    rng = random.Random(0x5EED)
    for _ in range(12):
        point = {n: Fraction(rng.randint(11, 97), rng.randint(7, 23))
                 for n in names}
        try:
            v = complex(scalars.evaluate(e, point))
        except (ValueError, ZeroDivisionError, OverflowError):
            continue
        if v == v and abs(v) > 1e-9:
            return True
    return False


def _vanishes(e) -> bool:
    e = sp.sympify(e)
    if is_zero(e):
        return True
    if _nonzero_certificate(e):
        return False
    raise UnclassifiableError(e)


# Lookup table indexed by the zero pattern of the Weyl scalars: strings are
# final types, positive integers name the branch that decides the type.
_TABLE = (0, "N", "II", "III", "D", "II", "II", 7,
          "II", "I", "I", 11, "II", 13, 14, 15,
          "N", "I", "I", 19, "II", 21, 13, 23,
          "III", 19, 11, 27, 7, 23, 15, 31)


def classify(psi) -> PetrovType:
    """Petrov type from the Weyl scalars.

    Direct table hit on the zero pattern where possible; otherwise the
    numbered branch conditions decide, computing auxiliary invariants only
    as needed.
    """
    if isinstance(psi, WeylScalars):
        psi = psi.psi
    psi = [sp.sympify(p) for p in psi]
    if len(psi) != 5:
        raise ValueError("expected five Weyl scalars")
    P = 1
    for weight, index in ((1, 4), (2, 3), (4, 2), (8, 1), (16, 0)):
        if not _vanishes(psi[index]):
            P += weight
    entry = _TABLE[P - 1]
    if entry == 0:
        return PetrovType.O
    if isinstance(entry, str):
        return PetrovType(entry)
    return _branch(entry, psi)


def _branch(case, psi):
    p0, p1, p2, p3, p4 = psi
    if case == 7:
        return PetrovType.D if _vanishes(p3 ** 2 - 3 * p2 * p4) else PetrovType.II
    if case == 11:
        return (PetrovType.II if _vanishes(27 * p4 ** 2 * p1 + 64 * p3 ** 3)
                else PetrovType.I)
    if case == 13:
        return (PetrovType.II if _vanishes(p1 ** 2 * p4 + 2 * p2 ** 3)
                else PetrovType.I)
    if case == 14:
        return (PetrovType.II if _vanishes(9 * p2 ** 2 - 16 * p1 * p3)
                else PetrovType.I)
    if case == 15:
        return (PetrovType.II
                if _vanishes(3 * p2 ** 2 - 4 * p1 * p3)
                and _vanishes(p2 * p3 - 3 * p1 * p4)
                else PetrovType.I)
    if case == 19:
        return (PetrovType.II if _vanishes(p0 * p4 ** 3 - 27 * p3 ** 4)
                else PetrovType.I)
    if case == 21:
        # The source writes this condition without "=0"; it is ported as a
        # zero test like every sibling branch.
        return PetrovType.D if _vanishes(9 * p2 ** 2 - p4 ** 2) else PetrovType.I
    if case == 23:
        inv_i = ratsimp(p0 * p4 + 3 * p2 ** 2)
        if _vanishes(inv_i) and _vanishes(4 * p2 * p4 - 3 * p3 ** 2):
            return PetrovType.III
        inv_j = ratsimp(4 * p2 * p4 - 3 * p3 ** 2)
        cond = p4 * inv_i ** 2 - 3 * inv_j * (p0 * inv_j - 2 * p2 * inv_i)
        return PetrovType.II if _vanishes(cond) else PetrovType.I
    if case == 27:
        if _vanishes(p0 * p3 ** 2 - p1 ** 2 * p4):
            if _vanishes(p0 * p4 + 2 * p1 * p3):
                return PetrovType.D
            if _vanishes(p0 * p4 - 16 * p1 * p3):
                return PetrovType.II
            return PetrovType.I
        inv_i = ratsimp(p0 * p4 + 2 * p1 * p3)
        if _vanishes(inv_i):
            inv_j = ratsimp(-p0 * p3 ** 2 - p1 ** 2 * p4)
            if _vanishes(inv_j):
                return PetrovType.III
            if _vanishes(inv_i ** 3 - 27 * inv_j ** 2):
                return PetrovType.II
            return PetrovType.I
        return PetrovType.I
    if case == 31:
        return _general_branch(psi)
    raise AssertionError(f"unknown branch {case}")


def _general_branch(psi):
    p0, p1, p2, p3, p4 = psi
    h = ratsimp(p0 * p2 - p1 ** 2)
    if _vanishes(h):
        if _vanishes(p0 * p3 - p1 * p2):
            if _vanishes(p0 * p4 - p2 ** 2):
                return PetrovType.N
            return PetrovType.I
        e = ratsimp(p0 * p4 - p2 ** 2)
        if _vanishes(e):
            if _vanishes(37 * p2 ** 2 + 27 * p1 * p3):
                return PetrovType.II
            return PetrovType.I
        a = ratsimp(p1 * p3 + p2 ** 2)
        inv_i = ratsimp(e - 4 * a)
        cond = inv_i ** 3 - 27 * (p4 * h - p3 ** 2 * p0
                                  + p1 * p2 * p3 + p2 * a) ** 2
        if not _vanishes(inv_i) and _vanishes(cond):
            return PetrovType.II
        return PetrovType.I
    inv_i = ratsimp(p0 * p4 - p2 ** 2 - 4 * (p1 * p3 + p2 ** 2))
    if _vanishes(inv_i):
        if _vanishes(p4 * h - p3 ** 2 * p0 + p1 * p2 * p3
                     + p2 * (p1 * p3 + p2 ** 2)):
            return PetrovType.III
        return PetrovType.I
    if _vanishes(p0 ** 2 * p3 - p0 * p1 * p2 - 2 * p1 * h):
        if _vanishes(p0 ** 2 * inv_i - 12 * h ** 2):
            return PetrovType.D
        if _vanishes(p0 ** 2 * inv_i - 3 * h ** 2):
            return PetrovType.II
        return PetrovType.I
    inv_j = ratsimp(p4 * h - p3 ** 2 * p0 + p1 * p2 * p3
                    + p2 * (p1 * p3 + p2 ** 2))
    if not _vanishes(inv_j) and _vanishes(inv_i ** 3 - 27 * inv_j ** 2):
        return PetrovType.II
    return PetrovType.I


def petrov_of_metric(ctx: MetricContext) -> PetrovType:
    """Classify a 4-metric given with an orthonormal Lorentz frame.

    Both frame-metric conventions diag(-1,1,1,1) and diag(1,-1,-1,-1) are
    accepted; the former is sign-flipped internally (the classification is
    invariant under scaling all Weyl scalars by a nonzero constant).
    """
    if ctx.dim != 4:
        raise ValueError("Petrov classification applies to four dimensions")
    if not ctx.cframe_flag:
        raise ValueError("Petrov classification needs an orthonormal frame")
    eta = ctx.lfg
    offdiag_zero = all(eta[a][b] == 0 for a in range(4) for b in range(4)
                       if a != b)
    diag = [eta[a][a] for a in range(4)]
    if offdiag_zero and diag == [1, -1, -1, -1]:
        work = ctx
    elif offdiag_zero and diag == [-1, 1, 1, 1]:
        work = MetricContext(
            ctx.chart, [[-x for x in row] for row in ctx.lg],
            fri=ctx.fri, lfg=[[-x for x in row] for row in eta],
            constants=ctx.constants)
    else:
        raise ValueError("frame metric must be diag(-1,1,1,1) or "
                         "diag(1,-1,-1,-1)")
    tetrad = np_tetrad(work)
    return classify(weyl_scalars(work.weyl, tetrad))

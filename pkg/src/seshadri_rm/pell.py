"""Minimal positive solutions of x^2 - D*y^2 = 1 and x^2 - D*y^2 = 4.

Both equations are solved by walking the continued-fraction convergents of a
reduced quadratic irrational: sqrt(D) for N=1, and (1+sqrt(D))/2 for N=4 when
D = 1 (mod 4).  Every positive solution shows up as a convergent (Legendre's
criterion), so the first hit has minimal y.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Iterator, List, Optional, Tuple

from sympy.ntheory import sqrt_mod

from .exceptions import SquareDiscriminantError


@dataclass(frozen=True)
class PellSolution:
    x: int
    y: int
    D: int
    N: int

    def __post_init__(self):
        if self.x * self.x - self.D * self.y * self.y != self.N:
            raise ValueError(f"({self.x}, {self.y}) does not solve x^2-{self.D}y^2={self.N}")

    def __iter__(self):
        return iter((self.x, self.y))


def _check(D: int) -> int:
    D = int(D)
    if D < 2 or isqrt(D) ** 2 == D:
        raise SquareDiscriminantError(f"D={D} must be a non-square integer >= 2")
    return D


def _convergents(P: int, Q: int, D: int) -> Iterator[Tuple[int, int, int]]:
    """Convergents h/k of the continued fraction of (P + sqrt(D))/Q, each with
    the next complete-quotient denominator.

    Requires Q | D - P^2 and Q > 0.  For sqrt(D) itself (P=0, Q=1),
    h^2 - D k^2 is plus or minus that denominator.
    """
    r = isqrt(D)
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    while True:
        a = (P + r) // Q
        h0, h1 = a * h0 + h1, h0
        k0, k1 = a * k0 + k1, k0
        P = a * Q - P
        Q = (D - P * P) // Q
        yield h0, k0, Q


def _solve1(D: int, ymax: Optional[int]) -> Optional[Tuple[int, int]]:
    for x, y, Qn in _convergents(0, 1, D):
        if ymax is not None and y > ymax:
            return None
        # only norm +-1 convergents can solve the equation
        if Qn == 1 and x * x - D * y * y == 1:
            return x, y


@lru_cache(maxsize=1 << 16)
def _pell1_cached(D: int) -> Tuple[int, int]:
    return _solve1(D, None)


def pell1(D: int) -> PellSolution:
    """Fundamental solution of x^2 - D y^2 = 1.

    >>> tuple(pell1(2))
    (3, 2)
    """
    D = _check(D)
    x, y = _pell1_cached(D)
    return PellSolution(x, y, D, 1)


def pell1_bounded(D: int, ymax: int) -> Optional[PellSolution]:
    """Fundamental solution of x^2 - D y^2 = 1 if its y is at most ``ymax``.

    Convergent denominators grow at least like Fibonacci numbers, so this
    costs O(log ymax) steps no matter how long the period of sqrt(D) is.
    """
    D = _check(D)
    if ymax < 1:
        return None
    sol = _solve1(D, ymax)
    if sol is None:
        return None
    return PellSolution(sol[0], sol[1], D, 1)


@lru_cache(maxsize=1 << 14)
def _pell4_cached(D: int) -> Tuple[int, int]:
    m = D % 4
    if m == 1:
        # x = 2h - k, y = k for convergents h/k of (1 + sqrt(D))/2
        for h, k, _ in _convergents(1, 2, D):
            x = 2 * h - k
            if x > 0 and x * x - D * k * k == 4:
                return x, k
    if m == 0:
        # x must be even: x = 2u with u^2 - (D/4) y^2 = 1
        u, y = _pell1_cached(D // 4)
        return 2 * u, y
    # D = 2, 3 (mod 4) forces x and y even
    u, y = _pell1_cached(D)
    return 2 * u, 2 * y


def pell4(D: int) -> PellSolution:
    """Minimal positive solution of x^2 - D y^2 = 4.

    >>> tuple(pell4(5))
    (3, 1)
    """
    D = _check(D)
    x, y = _pell4_cached(D)
    return PellSolution(x, y, D, 4)


@lru_cache(maxsize=1 << 14)
def _negative_unit(D: int) -> Optional[Tuple[int, int]]:
    """Minimal solution of x^2 - D y^2 = -1, if there is one.

    When it exists it is the first convergent of sqrt(D) of norm +-1.
    """
    for x, y, Qn in _convergents(0, 1, D):
        if Qn == 1:
            return (x, y) if x * x - D * y * y == -1 else None


def _pqa(P: int, Q: int, D: int) -> Iterator[Tuple[int, int, int, int]]:
    """Continued fraction data (P_i, Q_i, B_i, G_i) of (P + sqrt(D))/Q."""
    r = isqrt(D)
    B2, B1 = 1, 0
    G2, G1 = -P, Q
    while True:
        # exact floor of (P + sqrt(D))/Q, also for negative Q
        a = (P + r) // Q if Q > 0 else -((P + r) // -Q) - 1
        B2, B1 = B1, a * B1 + B2
        G2, G1 = G1, a * G1 + G2
        yield P, Q, B1, G1
        P = a * Q - P
        Q = (D - P * P) // Q


def norm_classes(D: int, N: int) -> List[Tuple[int, int]]:
    """One solution of x^2 - D y^2 = N per class under the unit group.

    Lagrange-Matthews-Mollin algorithm; every solution is
    ``+-(x + y sqrt(D)) * u^i`` with ``u`` the fundamental unit from
    :func:`pell1`.
    """
    D = _check(D)
    if N == 0:
        raise ValueError("N must be nonzero")
    neg = _negative_unit(D)
    out = []
    f = 1
    while f * f <= abs(N):
        if N % (f * f) == 0:
            m = N // (f * f)
            am = abs(m)
            roots = sorted(sqrt_mod(D, am, all_roots=True)) if am > 1 else [0]
            for z in roots:
                if 2 * z > am:
                    z -= am
                seen = set()
                steps = _pqa(z, am, D)
                _, _, prev_B, prev_G = next(steps)
                for P, Q, B, G in steps:
                    if abs(Q) == 1:
                        if prev_G * prev_G - D * prev_B * prev_B == m:
                            out.append((f * prev_G, f * prev_B))
                        elif neg is not None:
                            t, u = neg
                            out.append((f * (prev_G * t + prev_B * D * u), f * (prev_G * u + prev_B * t)))
                        break
                    if (P, Q) in seen:
                        break
                    seen.add((P, Q))
                    prev_B, prev_G = B, G
        f += 1
    return out


def norm_solutions(D: int, N: int, ymax: int) -> List[Tuple[int, int]]:
    """All solutions of x^2 - D y^2 = N with x > 0 and 0 < y <= ymax."""
    ux, uy = pell1(D)
    found = set()
    for x, y in norm_classes(D, N):
        # walk each class down to its smallest |y|, then outwards both ways
        while True:
            lx, ly = x * ux - D * y * uy, y * ux - x * uy
            if abs(ly) < abs(y):
                x, y = lx, ly
                continue
            hx, hy = x * ux + D * y * uy, y * ux + x * uy
            if abs(hy) < abs(y):
                x, y = hx, hy
                continue
            break
        for step in (1, -1):
            cx, cy = x, y
            while abs(cy) <= ymax:
                for sx, sy in ((cx, cy), (-cx, -cy)):
                    if sx > 0 and 0 < sy <= ymax:
                        found.add((sx, sy))
                cx, cy = cx * ux + step * D * cy * uy, cy * ux + step * cx * uy
    return sorted(found, key=lambda s: (s[1], s[0]))

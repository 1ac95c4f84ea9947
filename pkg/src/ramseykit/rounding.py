"""Directed-rounding float helpers.

Closed-form count lower bounds are only sound if float error never rounds
them up, so every multiplication/division in a bound is nudged one ulp
toward zero (all quantities here are non-negative).
"""

import math


def down(x: float) -> float:
    """One ulp toward -inf for positive x; identity at 0."""
    return math.nextafter(x, -math.inf) if x > 0.0 else x


def up(x: float) -> float:
    return math.nextafter(x, math.inf)


def mul_down(a: float, b: float) -> float:
    return down(a * b)


def div_down(a: float, b: float) -> float:
    return down(a / b)


def pow_down(base: float, exp: int) -> float:
    if exp == 0:
        return 1.0
    if base <= 0.0:
        return 0.0 if exp > 0 else math.inf
    out = 1.0
    for _ in range(exp):
        out = mul_down(out, base)
    return out


def sqrt_up(x: float) -> float:
    return up(math.sqrt(x)) if x > 0.0 else 0.0

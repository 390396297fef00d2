"""Independent brute-force oracles.

Everything here is deliberately naive (direct enumeration, no generating
functions, no shared code with the package) so that agreement with the
series machinery is meaningful.
"""

from fractions import Fraction


def partitions_by_enumeration(n: int, max_part: int | None = None) -> int:
    """Count the partitions of n by recursive enumeration of the largest part."""
    if n == 0:
        return 1
    if max_part is None:
        max_part = n
    total = 0
    for largest in range(min(n, max_part), 0, -1):
        total += partitions_by_enumeration(n - largest, largest)
    return total


def partitions_with_parts(n: int, allowed, _cap: int | None = None) -> int:
    """Count partitions of n into parts from ``allowed`` (enumeration)."""
    if n == 0:
        return 1
    cap = _cap if _cap is not None else n
    total = 0
    for part in sorted(p for p in allowed if p <= min(n, cap)):
        total += partitions_with_parts(n - part, allowed, part)
    return total


def convolve(xs, ys):
    out = [Fraction(0)] * (len(xs) + len(ys) - 1)
    for i, a in enumerate(xs):
        for j, b in enumerate(ys):
            out[i + j] += Fraction(a) * Fraction(b)
    return out


def harmonic2_partial(K: int) -> Fraction:
    """Sum of 1/k^2 for k = 1..K, exactly."""
    return sum((Fraction(1, k * k) for k in range(1, K + 1)), Fraction(0))

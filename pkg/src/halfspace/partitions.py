"""Integer partitions and strip combinatorics.

Partitions are plain tuples of weakly decreasing positive integers, with ()
the empty partition.  Trailing zeros are stripped on construction so tuples
can be used directly as dict keys.
"""

from __future__ import annotations

from typing import Iterator, Sequence


def as_partition(parts: Sequence[int]) -> tuple[int, ...]:
    """Canonicalize a weakly decreasing sequence (trailing zeros dropped)."""
    out = []
    prev = None
    for p in parts:
        p = int(p)
        if p < 0:
            raise ValueError("partition parts must be nonnegative")
        if prev is not None and p > prev:
            raise ValueError("partition parts must be weakly decreasing")
        prev = p
        if p > 0:
            out.append(p)
    return tuple(out)


def size(lam: tuple[int, ...]) -> int:
    return sum(lam)


def length(lam: tuple[int, ...]) -> int:
    return len(lam)


def conjugate(lam: tuple[int, ...]) -> tuple[int, ...]:
    """Transpose of the Young diagram."""
    if not lam:
        return ()
    cols = [0] * lam[0]
    for p in lam:
        for i in range(p):
            cols[i] += 1
    return tuple(cols)


def multiplicity(lam: tuple[int, ...], i: int) -> int:
    """Number of parts of lam equal to i (i >= 1)."""
    return sum(1 for p in lam if p == i)


def multiplicities(lam: tuple[int, ...]) -> dict[int, int]:
    m: dict[int, int] = {}
    for p in lam:
        m[p] = m.get(p, 0) + 1
    return m


def odd_parts(lam: tuple[int, ...]) -> int:
    """Number of odd parts (rows of odd length)."""
    return sum(1 for p in lam if p % 2 == 1)


def contains(lam: tuple[int, ...], mu: tuple[int, ...]) -> bool:
    """mu subseteq lam as Young diagrams."""
    if len(mu) > len(lam):
        return False
    return all(mu[i] <= lam[i] for i in range(len(mu)))


def is_horizontal_strip(lam: tuple[int, ...], mu: tuple[int, ...]) -> bool:
    """lam/mu is a horizontal strip: interlacing lam1 >= mu1 >= lam2 >= mu2 >= ..."""
    if not contains(lam, mu):
        return False
    if len(lam) > len(mu) + 1:
        return False
    for i in range(len(mu)):
        if mu[i] < (lam[i + 1] if i + 1 < len(lam) else 0):
            return False
    return True


def is_vertical_strip(lam: tuple[int, ...], mu: tuple[int, ...]) -> bool:
    """lam/mu has at most one box per row."""
    if not contains(lam, mu):
        return False
    for i in range(len(lam)):
        m = mu[i] if i < len(mu) else 0
        if lam[i] - m > 1:
            return False
    return True


def horizontal_strips_over(
    mu: tuple[int, ...],
    max_part: int | None = None,
    max_size: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """All lam with lam/mu a horizontal strip, lam_1 <= max_part, |lam| <= max_size."""
    n = len(mu)
    cap = max_part if max_part is not None else (mu[0] if mu else 0) + (
        max_size - sum(mu) if max_size is not None else 0
    )
    budget = None if max_size is None else max_size - sum(mu)
    if budget is not None and budget < 0:
        return

    lam: list[int] = []

    def rec(i: int, remaining: int | None):
        if i == n + 1:
            yield as_partition(lam)
            return
        lo = mu[i] if i < n else 0
        hi = mu[i - 1] if i > 0 else cap
        if max_part is not None:
            hi = min(hi, max_part)
        if remaining is not None:
            hi = min(hi, lo + remaining)
        for v in range(lo, hi + 1):
            lam.append(v)
            yield from rec(i + 1, None if remaining is None else remaining - (v - lo))
            lam.pop()

    yield from rec(0, budget)


def vertical_strips_over(
    mu: tuple[int, ...],
    max_len: int | None = None,
    max_size: int | None = None,
    max_part: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """All lam with lam/mu a vertical strip: at most one box added per row,
    including any number of new rows of length 1 (bounded by max_len/max_size).
    """
    n = len(mu)
    if max_size is None and max_len is None:
        raise ValueError("vertical strips over a partition need a bound")
    budget = None if max_size is None else max_size - sum(mu)
    if budget is not None and budget < 0:
        return

    lam: list[int] = []

    def rec(i: int, remaining: int | None):
        if i == n:
            # optional tail of new rows, each a single box
            tail_cap = remaining if remaining is not None else 10 ** 9
            if max_len is not None:
                tail_cap = min(tail_cap, max_len - n)
            if max_part is not None and max_part < 1:
                tail_cap = 0
            for j in range(tail_cap + 1):
                yield as_partition(lam + [1] * j)
            return
        base = mu[i]
        prev = lam[i - 1] if i > 0 else None
        for add in (0, 1):
            v = base + add
            if add and remaining is not None and remaining < 1:
                continue
            if prev is not None and v > prev:
                continue
            if max_part is not None and v > max_part:
                continue
            lam.append(v)
            yield from rec(i + 1, None if remaining is None else remaining - add)
            lam.pop()

    yield from rec(0, budget)


def horizontal_strips_under(lam: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All mu with lam/mu a horizontal strip (mu interlaces lam from below)."""
    n = len(lam)

    def rec(i: int, acc: list[int]):
        if i == n:
            yield as_partition(acc)
            return
        lo = lam[i + 1] if i + 1 < n else 0
        for v in range(lo, lam[i] + 1):
            acc.append(v)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(0, [])


def partitions_in_box(max_part: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """All partitions with lam_1 <= max_part and l(lam) <= max_len."""

    def rec(prev: int, rows_left: int, acc: list[int]):
        yield tuple(acc)
        if rows_left == 0:
            return
        for v in range(min(prev, max_part), 0, -1):
            acc.append(v)
            yield from rec(v, rows_left - 1, acc)
            acc.pop()

    yield from rec(max_part, max_len, [])


def partitions_of(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """All partitions of n (largest part first)."""
    if n == 0:
        yield ()
        return
    cap = n if max_part is None else min(n, max_part)

    def rec(remaining: int, prev: int, acc: list[int]):
        if remaining == 0:
            yield tuple(acc)
            return
        for v in range(min(prev, remaining), 0, -1):
            acc.append(v)
            yield from rec(remaining - v, v, acc)
            acc.pop()

    yield from rec(n, cap, [])


def partitions_up_to(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """All partitions of size <= n."""
    for k in range(n + 1):
        yield from partitions_of(k, max_part)


def subdiagrams(lam: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All mu subseteq lam."""
    n = len(lam)

    def rec(i: int, prev: int, acc: list[int]):
        if i == n:
            yield as_partition(acc)
            return
        for v in range(min(lam[i], prev), -1, -1):
            acc.append(v)
            yield from rec(i + 1, v, acc)
            acc.pop()

    yield from rec(0, lam[0] if lam else 0, [])

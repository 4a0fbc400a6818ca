"""Truth tables as Python ints.

A table over ``n`` variables has ``2**n`` bits; bit ``i`` holds the value for
the assignment where variable ``j`` equals bit ``j`` of ``i``.  Cut
computation works on 64-bit (6-variable) tables where unused variables are
don't-cares, so tables over different leaf sets can be aligned by swapping
adjacent variables.
"""

from itertools import permutations

MAX_VARS = 6
FULL = (1 << 64) - 1

VAR6 = (
    0xAAAAAAAAAAAAAAAA,
    0xCCCCCCCCCCCCCCCC,
    0xF0F0F0F0F0F0F0F0,
    0xFF00FF00FF00FF00,
    0xFFFF0000FFFF0000,
    0xFFFFFFFF00000000,
)

# masks for swapping variables i and i+1
_SWAP = tuple(
    (VAR6[i + 1] & ~VAR6[i] & FULL, VAR6[i] & ~VAR6[i + 1] & FULL)
    for i in range(MAX_VARS - 1)
)


def table_mask(n):
    return (1 << (1 << n)) - 1


def var_table(i, n):
    """Projection function of variable ``i`` as an ``n``-variable table."""
    return VAR6[i] & table_mask(n) if n <= MAX_VARS else _wide_var(i, n)


def _wide_var(i, n):
    block = ((1 << (1 << i)) - 1) << (1 << i)
    period = 1 << (i + 1)
    t = 0
    for start in range(0, 1 << n, period):
        t |= block << start
    return t


def extend(tt, n):
    """Replicate an ``n``-variable table to 64 bits."""
    width = 1 << n
    while width < 64:
        tt |= tt << width
        width <<= 1
    return tt


def shrink(tt, n):
    return tt & table_mask(n)


def swap_adjacent(tt, i):
    """Swap variables ``i`` and ``i + 1`` of a 64-bit table."""
    lo, hi = _SWAP[i]
    shift = 1 << i
    return (tt & ~(lo | hi) & FULL) | ((tt & lo) >> shift) | ((tt & hi) << shift)


def stretch(tt, src, dst):
    """Re-express a 64-bit table over sorted leaves ``src`` on sorted leaves ``dst``.

    ``src`` must be a subset of ``dst``.
    """
    if len(src) == len(dst):
        return tt
    pos = 0
    targets = []
    for leaf in src:
        while dst[pos] != leaf:
            pos += 1
        targets.append(pos)
    for i in range(len(src) - 1, -1, -1):
        for j in range(i, targets[i]):
            tt = swap_adjacent(tt, j)
    return tt


def permute(tt, perm, n):
    """Table of ``g(x) = f(y)`` where ``y[i] = x[perm[i]]``."""
    out = 0
    for idx in range(1 << n):
        src = 0
        for i in range(n):
            if (idx >> perm[i]) & 1:
                src |= 1 << i
        if (tt >> src) & 1:
            out |= 1 << idx
    return out


def flip_inputs(tt, phases, n):
    """Complement the variables whose bit is set in ``phases``."""
    out = 0
    for idx in range(1 << n):
        if (tt >> (idx ^ phases)) & 1:
            out |= 1 << idx
    return out


def depends_on(tt, i, n):
    v = var_table(i, n)
    shift = 1 << i
    return ((tt & v) >> shift) != (tt & ~v & table_mask(n))


def all_permutations(n):
    return list(permutations(range(n)))


def eval_words(tt, words, mask):
    """Bit-parallel evaluation of a table on input words (one int per variable)."""
    n = len(words)
    if n == 0:
        return mask if tt & 1 else 0
    half = 1 << (n - 1)
    w = words[-1]
    hi = eval_words(tt >> half, words[:-1], mask)
    lo = eval_words(tt & ((1 << half) - 1), words[:-1], mask)
    return (w & hi) | (~w & lo & mask)


def to_bits(tt, n):
    """MSB-first bit string, e.g. ``'1000'`` for a 2-input AND."""
    return format(tt, "0%db" % (1 << n)) if n else str(tt & 1)

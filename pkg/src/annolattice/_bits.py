# Python ints as bitsets: bit i set <=> element at position i present.


def iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_of(positions) -> int:
    out = 0
    for p in positions:
        out |= 1 << p
    return out


def full(n: int) -> int:
    return (1 << n) - 1

"""
Z2-graded bookkeeping shared by every contraction that can reorder odd
vectors (module pentagon, bond assembly, state parities).
"""

from typing import Sequence, Tuple


def koszul_sign(parities: Sequence[int], order: Sequence[int]) -> int:
    """Sign picked up when the vectors with the given parities are permuted.

    ``order[k]`` is the position in ``parities`` of the vector that ends up
    at slot ``k``. Every transposition of two odd vectors contributes -1.
    """
    sign = 1
    placed = [order[k] for k in range(len(order))]
    for a in range(len(placed)):
        for b in range(a + 1, len(placed)):
            if placed[a] > placed[b] and parities[placed[a]] and parities[placed[b]]:
                sign = -sign
    return sign


def swap_sign(p: int, q: int) -> int:
    """Sign for exchanging two adjacent vectors of parity p and q."""
    return -1 if (p & 1) and (q & 1) else 1


def basis_parity(dims: Tuple[int, int], index: int) -> int:
    """Parity of basis vector ``index`` in a space with graded dimension dims.

    Even vectors come first, odd vectors after them.
    """
    even, odd = dims
    if index < 0 or index >= even + odd:
        raise IndexError(f"index {index} outside graded space {dims}")
    return 0 if index < even else 1


def total_parity(parities: Sequence[int]) -> int:
    return sum(parities) & 1

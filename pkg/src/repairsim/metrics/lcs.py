"""Character-level longest common subsequence similarity."""

from __future__ import annotations


def lcs_length_dp(a: str, b: str) -> int:
    """Textbook O(|a|·|b|) dynamic program with two rolling rows."""
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0] * (len(b) + 1)
        for j, cb in enumerate(b, 1):
            if ca == cb:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = cur[j - 1] if cur[j - 1] > prev[j] else prev[j]
        prev = cur
    return prev[-1]


def lcs_length(a: str, b: str) -> int:
    """Same table as :func:`lcs_length_dp`, one column per machine word.

    Bit-parallel row update (Allison-Dix / Hyyro): bit i of ``v`` is 0 where
    the DP row increases at position i of ``a``. Python integers make the row
    arbitrarily wide, so each character of ``b`` costs a handful of bigint
    operations instead of |a| interpreter steps.
    """
    if not a or not b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    masks: dict[str, int] = {}
    for i, ch in enumerate(a):
        masks[ch] = masks.get(ch, 0) | (1 << i)
    full = (1 << len(a)) - 1
    v = full
    for ch in b:
        m = masks.get(ch, 0)
        u = v & m
        v = ((v + u) | (v - u)) & full
    return len(a) - bin(v).count("1")


def lcs_similarity(a: str, b: str) -> float:
    """LCS length normalised by the longer string, in [0, 1].

    Raises:
        ValueError: if either text is empty.
    """
    if not a or not b:
        raise ValueError("LCS similarity of an empty component is undefined")
    return lcs_length(a, b) / max(len(a), len(b))

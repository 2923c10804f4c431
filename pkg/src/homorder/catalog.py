"""Named families: directed paths, the L_k paths, and the bottom chain.

The bottom chain is the totally ordered family of all path cores of
height at most 3:  P0 < P1 < P2 < ... < L_2 < L_1 < L_0 = P3.
"""
from __future__ import annotations

from dataclasses import dataclass

from .structures import FORWARD, OrientedPath, zigzag  # noqa: F401  (zigzag re-exported)


class ChainVerificationError(RuntimeError):
    """The generated chain failed its own strictness audit (engine bug)."""


def directed_path(n: int) -> OrientedPath:
    if n < 0:
        raise ValueError("n must be >= 0")
    return OrientedPath(FORWARD * n)


def l_path(k: int) -> OrientedPath:
    """The height-3 core L_k: one initial ascent, k dips, one final ascent."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return OrientedPath("FF" + "BF" * k + "F")


@dataclass(frozen=True)
class BottomChain:
    elements: tuple[OrientedPath, ...]
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def bottom_chain(k_max: int, verify: bool = True) -> BottomChain:
    """(P0, P1, P2, L_{k_max}, ..., L_1, L_0), strictness-audited."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    elements = [directed_path(0), directed_path(1), directed_path(2)]
    labels = ["P0", "P1", "P2"]
    for k in range(k_max, -1, -1):
        elements.append(l_path(k))
        labels.append(f"L{k}")
    if verify:
        from .order import leq

        for lo, hi, lo_name, hi_name in zip(
            elements, elements[1:], labels, labels[1:]
        ):
            if not leq(lo, hi) or leq(hi, lo):
                raise ChainVerificationError(
                    f"chain strictness failed between {lo_name} and {hi_name}"
                )
    return BottomChain(tuple(elements), tuple(labels))


def identify_bottom_element(p: OrientedPath, k_max: int = 32) -> str | None:
    """Label p as P0..P3 or L_k (up to reversal), or None if outside."""
    candidates = {p.directions, p.reverse().directions}
    for n in range(4):
        if directed_path(n).directions in candidates:
            return "P3" if n == 3 else f"P{n}"
    for k in range(k_max + 1):
        lk = l_path(k)
        if lk.n_arcs > p.n_arcs:
            break
        if lk.directions in candidates:
            return f"L{k}"
    return None

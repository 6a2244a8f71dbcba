"""Vertex partitions and disjoint collections, stored as per-vertex part labels.

Label ``-1`` marks a vertex outside every part; it only appears in disjoint
collections (the relaxed quantities), never in a proper partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from mwiso.graph import GraphParseError

UNUSED = -1


class EmptyPart(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    part_of: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        seen = set(self.part_of) - {UNUSED}
        if seen != set(range(self.n)):
            missing = sorted(set(range(self.n)) - seen)
            raise EmptyPart(f"parts {missing} are empty or labels out of range")

    @classmethod
    def from_labels(cls, labels: Sequence[int], n: int | None = None) -> "Partition":
        labels = tuple(int(x) for x in labels)
        if n is None:
            n = max(labels) + 1 if labels else 0
        return cls(labels, n)

    @classmethod
    def from_blocks(cls, num_vertices: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        labels = [UNUSED] * num_vertices
        n = 0
        for i, block in enumerate(blocks):
            for v in block:
                if labels[v] != UNUSED:
                    raise ValueError(f"vertex {v} in two blocks")
                labels[v] = i
            n = i + 1
        return cls(tuple(labels), n)

    @property
    def num_vertices(self) -> int:
        return len(self.part_of)

    @property
    def covers(self) -> bool:
        return UNUSED not in self.part_of

    def masks(self) -> list[int]:
        out = [0] * self.n
        for v, p in enumerate(self.part_of):
            if p != UNUSED:
                out[p] |= 1 << v
        return out

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.part_of):
            if p != UNUSED:
                out[p].append(v)
        return out

    def sizes(self) -> list[int]:
        out = [0] * self.n
        for p in self.part_of:
            if p != UNUSED:
                out[p] += 1
        return out

    def canonical(self) -> "Partition":
        """Relabel so part labels first appear in increasing order."""
        relabel: dict[int, int] = {UNUSED: UNUSED}
        for p in self.part_of:
            if p not in relabel:
                relabel[p] = len(relabel) - 1
        return Partition(tuple(relabel[p] for p in self.part_of), self.n)

    def is_canonical(self) -> bool:
        return self.canonical() == self

    def relabeled(self, new_label_of: Sequence[int]) -> "Partition":
        return Partition(
            tuple(UNUSED if p == UNUSED else new_label_of[p] for p in self.part_of), self.n
        )

    def __iter__(self) -> Iterator[int]:
        return iter(self.part_of)


def format_partition(p: Partition) -> str:
    return "part " + " ".join(str(x) for x in p.part_of) + "\n"


def parse_partition(text: str) -> Partition:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] != "part":
            raise GraphParseError(f"expected 'part ...', got {raw!r}")
        try:
            return Partition.from_labels([int(x) for x in tok[1:]])
        except ValueError as exc:
            raise GraphParseError(str(exc)) from None
    raise GraphParseError("no 'part' line found")


def restricted_growth_strings(length: int, n: int) -> Iterator[tuple[int, ...]]:
    """All restricted-growth strings of ``length`` using exactly ``n`` labels, in lex order."""
    if n < 1 or n > length:
        return
    s = [0] * length

    def rec(pos: int, used: int) -> Iterator[tuple[int, ...]]:
        if pos == length:
            if used == n:
                yield tuple(s)
            return
        if used + (length - pos) < n:
            return
        for p in range(min(used + 1, n)):
            s[pos] = p
            yield from rec(pos + 1, max(used, p + 1))

    s[0] = 0
    yield from rec(1, 1)


def stirling2(m: int, n: int) -> int:
    if n < 0 or m < 0:
        return 0
    row = [1] + [0] * n
    for i in range(1, m + 1):
        new = [0] * (n + 1)
        for k in range(1, min(i, n) + 1):
            new[k] = k * row[k] + row[k - 1]
        row = new
    return row[n]

"""Finite group presentations."""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from pathlib import Path

from ..words import Word, cyclic_reduce, encode, parse, render


def default_names(n: int) -> tuple[str, ...]:
    letters = string.ascii_lowercase
    if n <= len(letters):
        return tuple(letters[:n])
    raise ValueError("more than 26 generators need explicit names")


@dataclass(frozen=True)
class Presentation:
    """``<generators | relators>`` with relators as signed 1-based words."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = field(default=())

    def __post_init__(self):
        n = len(self.generators)
        for r in self.relators:
            if not r:
                raise ValueError("empty relator")
            if any(x == 0 or abs(x) > n for x in r):
                raise ValueError(f"relator {r} uses an unknown generator")
            if cyclic_reduce(r) != tuple(r):
                raise ValueError(f"relator {r} is not cyclically reduced")

    @classmethod
    def free(cls, n: int) -> "Presentation":
        return cls(default_names(n) if n <= 26 else tuple(f"x{i}" for i in range(n)))

    @classmethod
    def from_strings(cls, generators, relators=()) -> "Presentation":
        gens = tuple(generators)
        return cls(gens, tuple(cyclic_reduce(parse(r, gens)) for r in relators))

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def encoded_relators(self) -> list[bytes]:
        return [encode(r) for r in self.relators]

    def to_json(self) -> dict:
        names = self.generators
        single = all(len(n) == 1 and n.islower() for n in names)
        rels = [render(r, names) if single else list(r) for r in self.relators]
        return {"generators": list(names), "relators": rels}

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        gens = tuple(data["generators"])
        rels = []
        for r in data.get("relators", []):
            word = parse(r, gens) if isinstance(r, str) else tuple(int(x) for x in r)
            word = cyclic_reduce(word)
            if word:
                rels.append(word)
        return cls(gens, tuple(rels))

    @classmethod
    def load(cls, path) -> "Presentation":
        return cls.from_json(json.loads(Path(path).read_text()))

    def __str__(self) -> str:
        rels = ", ".join(render(r, self.generators) for r in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


def surface_presentation(genus: int) -> Presentation:
    """Standard presentation ``prod [x_i, y_i]`` of a closed orientable surface group."""
    rel = []
    for i in range(genus):
        x, y = 2 * i + 1, 2 * i + 2
        rel += [x, y, -x, -y]
    names = tuple(n for i in range(genus) for n in (f"x{i + 1}", f"y{i + 1}"))
    return Presentation(names, (tuple(rel),))

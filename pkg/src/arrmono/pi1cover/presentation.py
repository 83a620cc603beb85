from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..exact import smith_normal_form
from .words import Word, abelianize, reduce_word


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class GroupPresentation:
    """Finite presentation; ``meridians[i]`` is a word for the meridian of line i."""

    n_generators: int
    relators: tuple[Word, ...]
    meridians: tuple[Word, ...] = ()

    def abelian_matrix(self) -> list[list[int]]:
        return [abelianize(r, self.n_generators) for r in self.relators]

    def abelianization(self) -> tuple[int, list[int]]:
        """(free rank, torsion coefficients) of the abelianization."""
        if not self.relators:
            return self.n_generators, []
        diag = smith_normal_form(self.abelian_matrix(), self.n_generators)
        nonzero = [x for x in diag if x]
        return self.n_generators - len(nonzero), [x for x in nonzero if x > 1]

    def to_json(self) -> dict:
        return {
            "generators": self.n_generators,
            "relators": [list(r) for r in self.relators],
            "meridians": [list(m) for m in self.meridians],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GroupPresentation":
        g = int(data["generators"])
        rels = tuple(reduce_word(int(a) for a in r) for r in data["relators"])
        mers = tuple(reduce_word(int(a) for a in m) for m in data.get("meridians", []))
        for w in rels + mers:
            if any(abs(a) > g for a in w):
                raise PresentationError(f"letter out of range 1..{g} in {list(w)}")
        return cls(g, rels, mers)


def load_presentation(path: str | Path) -> GroupPresentation:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise PresentationError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    try:
        return GroupPresentation.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise PresentationError(f"{path}: malformed presentation ({exc})") from exc


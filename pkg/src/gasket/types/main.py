import enum

import structlog

logger = structlog.get_logger(__name__)

__all__ = [
    "Letter",
    "Corner",
    "RegularityKind",
    "RenderFormat",
    "OutputFormat",
    "Suite",
    "LETTERS",
    "CORNERS",
    "CORNER_RANK",
    "CORNER_LETTER",
    "LETTER_CORNER",
    "GLUED_CORNERS",
    "GLUED_PAIRS",
    "third_letter",
]


# --- Enums ---
class BaseEnum(enum.Enum):
    def __str__(self):
        return str(self.value)

    def __eq__(self, other):
        return str(other) == self.value

    def __hash__(self):
        return hash(self.value)


class Letter(BaseEnum):
    a = "a"  # top copy
    b = "b"  # left copy
    c = "c"  # right copy


class Corner(BaseEnum):
    T = "T"  # top
    L = "L"  # left
    R = "R"  # right

    @property
    def rank(self) -> int:
        return CORNER_RANK[self.value]

    @property
    def letter(self) -> Letter:
        """The copy whose contraction fixes this corner."""
        return Letter(CORNER_LETTER[self.value])


class RegularityKind(BaseEnum):
    short = "short"
    lipschitz = "lipschitz"
    continuous = "continuous"
    isometry = "isometry"


class RenderFormat(BaseEnum):
    svg = "svg"
    points = "points"


class OutputFormat(BaseEnum):
    svg = "svg"
    csv = "csv"
    json = "json"
    text = "text"
    points = "points"


class Suite(BaseEnum):
    metric = "metric"
    functor = "functor"
    initiality = "initiality"
    finality = "finality"
    completion = "completion"
    euclid = "euclid"
    all = "all"


LETTERS = "abc"
CORNERS = (Corner.T, Corner.L, Corner.R)

# tie-break order T < L < R
CORNER_RANK = {"T": 0, "L": 1, "R": 2}
# letter(T)=a, letter(L)=b, letter(R)=c; the contraction fixing each corner
CORNER_LETTER = {"T": "a", "L": "b", "R": "c"}
LETTER_CORNER = {"a": "T", "b": "L", "c": "R"}

# (m1, m2) -> (corner of copy m1, corner of copy m2) that are identified
GLUED_CORNERS = {
    ("a", "b"): ("L", "T"),
    ("b", "a"): ("T", "L"),
    ("a", "c"): ("R", "T"),
    ("c", "a"): ("T", "R"),
    ("b", "c"): ("R", "L"),
    ("c", "b"): ("L", "R"),
}

# (letter, corner) -> the (letter, corner) it is glued to
GLUED_PAIRS = {
    (m1, GLUED_CORNERS[(m1, m2)][0]): (m2, GLUED_CORNERS[(m1, m2)][1])
    for (m1, m2) in GLUED_CORNERS
}


def third_letter(m1: str, m2: str) -> str:
    (m3,) = set(LETTERS) - {m1, m2}
    return m3

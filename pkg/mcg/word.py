"""SL2(Z) arithmetic and LR words for mapping classes of the punctured torus.

Convention: R = [[1, 1], [0, 1]] and L = [[1, 0], [1, 1]]. A word A1 A2 ... An
encodes the product A1 @ A2 @ ... @ An. Swapping the letter names only
relabels the word.
"""

from dataclasses import dataclass
from typing import List, Tuple

from utils.errors import InvalidParameter, MatrixOverflowError, NotPseudoAnosov
from utils.logger import get_logger

logger = get_logger(__name__)

INT64_MAX = 2**63 - 1
LETTERS = ("R", "L")

# Entries are bounded by the Fibonacci growth of the word, so this cap only
# trips on corrupted input.
MAX_REDUCTION_STEPS = 100_000


def _check_range(*entries: int) -> None:
    for entry in entries:
        if abs(entry) > INT64_MAX:
            raise MatrixOverflowError(f"Matrix entry {entry} exceeds the signed 64-bit range")


@dataclass(frozen=True)
class IntMatrix2x2:
    """Element of SL2(Z), row-major."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidParameter(f"Entry '{name}' must be an integer, got {value!r}")
        _check_range(self.a, self.b, self.c, self.d)
        if self.det != 1:
            raise InvalidParameter(f"Matrix {self.to_list()} has determinant {self.det}, expected 1")

    @classmethod
    def from_list(cls, rows) -> "IntMatrix2x2":
        """Build from [[a, b], [c, d]]."""
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls) -> "IntMatrix2x2":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "IntMatrix2x2") -> "IntMatrix2x2":
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        _check_range(a, b, c, d)
        return IntMatrix2x2(a, b, c, d)

    def __neg__(self) -> "IntMatrix2x2":
        return IntMatrix2x2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "IntMatrix2x2":
        return IntMatrix2x2(self.d, -self.b, -self.c, self.a)

    def conjugate_by(self, p: "IntMatrix2x2") -> "IntMatrix2x2":
        """Return p^-1 @ self @ p."""
        return p.inverse() @ self @ p

    def is_nonnegative(self) -> bool:
        return min(self.a, self.b, self.c, self.d) >= 0

    def to_list(self) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __repr__(self):
        return f"<IntMatrix2x2([[{self.a}, {self.b}], [{self.c}, {self.d}]])>"


R = IntMatrix2x2(1, 1, 0, 1)
L = IntMatrix2x2(1, 0, 1, 1)
GENERATORS = {"R": R, "L": L}


@dataclass(frozen=True)
class MappingClassWord:
    """Nonempty word over {R, L}."""

    letters: str

    def __post_init__(self):
        if not isinstance(self.letters, str) or not self.letters:
            raise InvalidParameter("A mapping class word must be a nonempty string over {R, L}")
        bad = sorted(set(self.letters) - set(LETTERS))
        if bad:
            raise InvalidParameter(f"Word '{self.letters}' contains letters outside {{R, L}}: {bad}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, index):
        return self.letters[index]

    def __str__(self):
        return self.letters

    def rotate(self, shift: int) -> "MappingClassWord":
        """Cyclic rotation A_{s+1} ... A_n A_1 ... A_s."""
        shift %= len(self.letters)
        return MappingClassWord(self.letters[shift:] + self.letters[:shift])

    def rotations(self) -> List["MappingClassWord"]:
        return [self.rotate(shift) for shift in range(len(self.letters))]

    def is_admissible(self) -> bool:
        """True iff both letters occur, which is what makes the class pseudo-Anosov."""
        return "R" in self.letters and "L" in self.letters

    def require_pseudo_anosov(self) -> "MappingClassWord":
        if not self.is_admissible():
            raise NotPseudoAnosov(
                f"Word '{self.letters}' uses a single letter; its matrix has trace 2"
            )
        return self


def word_to_matrix(word: MappingClassWord) -> IntMatrix2x2:
    """Ordered product of the letter matrices."""
    result = IntMatrix2x2.identity()
    for letter in word:
        result = result @ GENERATORS[letter]
    return result


def prefix_product(word: MappingClassWord, length: int) -> IntMatrix2x2:
    """Product of the first ``length`` letters; conjugates the word onto its rotation."""
    return word_to_matrix(MappingClassWord(word.letters[:length])) if length else IntMatrix2x2.identity()


def is_pseudo_anosov(m: IntMatrix2x2) -> bool:
    return abs(m.trace) > 2


def _sign_plus_sqrt(m: int, disc: int) -> int:
    """Sign of m + sqrt(disc) for a non-square disc > 0."""
    if m >= 0:
        return 1
    return 1 if disc > m * m else -1


def _attracting_point_signs(m: IntMatrix2x2) -> Tuple[bool, bool]:
    """Return (x > 0, x > 1) for the attracting fixed point x of the Moebius action.

    x = (a - d + sqrt(disc)) / (2c) with disc = tr^2 - 4; the comparisons are
    exact integer sign tests since disc is never a perfect square here.
    """
    disc = m.trace * m.trace - 4
    c_sign = 1 if m.c > 0 else -1
    positive = _sign_plus_sqrt(m.a - m.d, disc) == c_sign
    above_one = _sign_plus_sqrt(m.a - m.d - 2 * m.c, disc) == c_sign
    return positive, above_one


def _peel(m: IntMatrix2x2) -> str:
    """Factor a nonnegative SL2(Z) matrix into R and L (Euclid on the rows)."""
    letters = []
    while m != IntMatrix2x2.identity():
        if m.a >= m.c and m.b >= m.d:
            letters.append("R")
            m = IntMatrix2x2(m.a - m.c, m.b - m.d, m.c, m.d)
        elif m.c >= m.a and m.d >= m.b:
            letters.append("L")
            m = IntMatrix2x2(m.a, m.b, m.c - m.a, m.d - m.b)
        else:
            raise InvalidParameter(f"Matrix {m.to_list()} is not a positive word in R and L")
    return "".join(letters)


def decompose(m: IntMatrix2x2) -> MappingClassWord:
    """Return the canonical LR word of a pseudo-Anosov class.

    The attracting fixed point is pushed along the Farey map by conjugations
    until the matrix has nonnegative entries (fixed points of opposite signs),
    then the letters are peeled off. Negative trace classes are decomposed via -m.
    """
    if not is_pseudo_anosov(m):
        raise NotPseudoAnosov(f"Matrix {m.to_list()} has |trace| = {abs(m.trace)} <= 2")

    if m.trace < 0:
        logger.debug(f"Negative trace {m.trace}, decomposing -m")
        m = -m

    for _ in range(MAX_REDUCTION_STEPS):
        if m.is_nonnegative():
            break
        positive, above_one = _attracting_point_signs(m)
        if not positive:
            m = R @ m @ R.inverse()
        elif above_one:
            m = m.conjugate_by(R)
        else:
            m = m.conjugate_by(L)
    else:
        raise MatrixOverflowError(f"Reduction of {m.to_list()} did not terminate")

    return cyclic_normalize(MappingClassWord(_peel(m)))


def _rank(letters: str) -> str:
    return letters.replace("R", "0").replace("L", "1")


def cyclic_normalize(word: MappingClassWord) -> MappingClassWord:
    """Least rotation of the word with R < L."""
    best = min(word.rotations(), key=lambda w: _rank(w.letters))
    return best

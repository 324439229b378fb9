"""LR words and SL2(Z) arithmetic for mapping classes."""

from .word import (
    IntMatrix2x2,
    MappingClassWord,
    R,
    L,
    word_to_matrix,
    prefix_product,
    is_pseudo_anosov,
    decompose,
    cyclic_normalize,
)

__all__ = [
    "IntMatrix2x2",
    "MappingClassWord",
    "R",
    "L",
    "word_to_matrix",
    "prefix_product",
    "is_pseudo_anosov",
    "decompose",
    "cyclic_normalize",
]

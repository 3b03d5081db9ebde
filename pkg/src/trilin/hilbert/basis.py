"""
Truncated three-mode Fock basis decomposed into conserved-quantity sectors.

The coupling a+bc shifts (n_a, n_b, n_c) by (+1, -1, -1), so both
N1 = n_a + n_b and N2 = n_a + n_c are conserved. Kets are stored
sector-major: sector k occupies the contiguous flat slice
offsets[k]:offsets[k+1], and inside a sector kets run by descending n_a,
which makes the coupling tridiagonal.
"""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..shared import (
    DimensionCap,
    IntArray,
    Ket,
    ModeLike,
    OutOfTruncation,
    SectorLabel,
    as_mode,
    parse_int_triple,
)

logger = logging.getLogger(__name__)


class Truncation(BaseModel):
    """Inclusive per-mode Fock cutoffs."""

    model_config = ConfigDict(frozen=True)

    n_max_a: int = Field(..., description="Axial zigzag cutoff")
    n_max_b: int = Field(..., description="Radial tilt cutoff")
    n_max_c: int = Field(..., description="Radial zigzag cutoff")

    @field_validator('n_max_a', 'n_max_b', 'n_max_c')
    @classmethod
    def validate_cutoff(cls, v: int) -> int:
        if v < 1:
            raise ValueError('Fock cutoffs must be at least 1')
        return v

    @classmethod
    def parse(cls, text: str) -> "Truncation":
        """Parse "a,b,c"."""
        n_a, n_b, n_c = parse_int_triple(text)
        return cls(n_max_a=n_a, n_max_b=n_b, n_max_c=n_c)

    @classmethod
    def uniform(cls, n_max: int) -> "Truncation":
        return cls(n_max_a=n_max, n_max_b=n_max, n_max_c=n_max)

    @property
    def cutoffs(self) -> tuple[int, int, int]:
        return self.n_max_a, self.n_max_b, self.n_max_c

    @property
    def dimension(self) -> int:
        return (self.n_max_a + 1) * (self.n_max_b + 1) * (self.n_max_c + 1)

    def cutoff(self, mode: ModeLike) -> int:
        return self.cutoffs[as_mode(mode).position]

    def contains(self, ket: Ket) -> bool:
        return all(0 <= n <= n_max for n, n_max in zip(ket, self.cutoffs))

    def __str__(self) -> str:
        return f"{self.n_max_a},{self.n_max_b},{self.n_max_c}"


class SectorBasis:
    """
    Immutable sector-major basis of a truncated three-mode Fock space.

    Use build_basis() to construct one.
    """

    def __init__(
        self,
        truncation: Truncation,
        kets: IntArray,
        labels: list[SectorLabel],
        offsets: IntArray,
    ):
        self.truncation = truncation
        self._kets = kets
        self._kets.setflags(write=False)
        self.labels: tuple[SectorLabel, ...] = tuple(labels)
        self.offsets = offsets
        self.offsets.setflags(write=False)

        self._index = np.full(
            (truncation.n_max_a + 1, truncation.n_max_b + 1, truncation.n_max_c + 1),
            -1,
            dtype=np.int64,
        )
        self._index[kets[:, 0], kets[:, 1], kets[:, 2]] = np.arange(len(kets))
        self._index.setflags(write=False)

        self.sector_of = np.repeat(np.arange(len(labels)), np.diff(offsets))
        self.sector_of.setflags(write=False)
        self._label_index = {label: k for k, label in enumerate(self.labels)}

    @property
    def dimension(self) -> int:
        return int(self._kets.shape[0])

    @property
    def num_sectors(self) -> int:
        return len(self.labels)

    @property
    def kets(self) -> IntArray:
        return self._kets

    @property
    def n_a(self) -> IntArray:
        return self._kets[:, 0]

    @property
    def n_b(self) -> IntArray:
        return self._kets[:, 1]

    @property
    def n_c(self) -> IntArray:
        return self._kets[:, 2]

    def occupation(self, mode: ModeLike) -> IntArray:
        """Per-index phonon number of one mode."""
        return self._kets[:, as_mode(mode).position]

    def sector_sizes(self) -> IntArray:
        return np.diff(self.offsets)

    def sector_slice(self, sector: int) -> slice:
        return slice(int(self.offsets[sector]), int(self.offsets[sector + 1]))

    def sector_kets(self, sector: int) -> IntArray:
        return self._kets[self.sector_slice(sector)]

    def sector_index(self, label: SectorLabel) -> int:
        """Position of the sector labeled (N1, N2)."""
        try:
            return self._label_index[tuple(label)]
        except KeyError:
            raise KeyError(f"No sector labeled {tuple(label)} in truncation {self.truncation}")

    def index(self, ket: Ket) -> int:
        """Flat index of a ket."""
        if not self.truncation.contains(ket):
            raise OutOfTruncation(tuple(ket), self.truncation.cutoffs)
        return int(self._index[ket])

    def indices(self, kets: IntArray) -> IntArray:
        """Flat indices of in-range kets (rows of n_a, n_b, n_c)."""
        return self._index[kets[:, 0], kets[:, 1], kets[:, 2]]

    def ket(self, flat_index: int) -> Ket:
        n_a, n_b, n_c = self._kets[flat_index]
        return int(n_a), int(n_b), int(n_c)

    def locate(self, flat_index: int) -> tuple[int, int]:
        """(sector, offset within sector) of a flat index."""
        sector = int(self.sector_of[flat_index])
        return sector, flat_index - int(self.offsets[sector])

    def same_as(self, other: "SectorBasis") -> bool:
        """Whether two bases share the same layout."""
        return other is self or other.truncation == self.truncation

    def __repr__(self) -> str:
        return (
            f"SectorBasis(truncation={self.truncation}, dimension={self.dimension}, "
            f"sectors={self.num_sectors})"
        )


def build_basis(truncation: Truncation, dimension_cap: Optional[int] = None) -> SectorBasis:
    """
    Enumerate the truncated space and group it into (N1, N2) sectors.

    Sectors are ordered by ascending (N1, N2); kets inside a sector by
    descending n_a.

    Raises:
        DimensionCap: If the space exceeds the cap
    """
    if dimension_cap is None:
        from ..config import get_settings

        dimension_cap = get_settings().dimension_cap
    if truncation.dimension > dimension_cap:
        raise DimensionCap(truncation.dimension, dimension_cap)

    grid = np.indices(
        (truncation.n_max_a + 1, truncation.n_max_b + 1, truncation.n_max_c + 1)
    ).reshape(3, -1)
    n_a, n_b, n_c = grid
    n1 = n_a + n_b
    n2 = n_a + n_c
    order = np.lexsort((-n_a, n2, n1))
    kets = np.ascontiguousarray(grid[:, order].T.astype(np.int64))

    sorted_labels = np.stack([n1[order], n2[order]], axis=1)
    boundaries = np.flatnonzero(np.any(np.diff(sorted_labels, axis=0) != 0, axis=1)) + 1
    starts = np.concatenate([[0], boundaries])
    offsets = np.concatenate([starts, [len(kets)]]).astype(np.int64)
    labels = [(int(sorted_labels[s, 0]), int(sorted_labels[s, 1])) for s in starts]

    logger.debug(
        f"Built basis for truncation {truncation}: "
        f"{len(kets)} kets in {len(labels)} sectors"
    )
    return SectorBasis(truncation, kets, labels, offsets)


def build_sector(truncation: Truncation, n1: int, n2: int) -> IntArray:
    """
    Kets of the single sector (N1, N2), by descending n_a.

    Only the sector is enumerated, so large cutoffs are fine here.
    """
    n_max_a, n_max_b, n_max_c = truncation.cutoffs
    top = min(n1, n2, n_max_a)
    bottom = max(0, n1 - n_max_b, n2 - n_max_c)
    if top < bottom:
        return np.empty((0, 3), dtype=np.int64)
    n_a = np.arange(top, bottom - 1, -1, dtype=np.int64)
    return np.stack([n_a, n1 - n_a, n2 - n_a], axis=1)

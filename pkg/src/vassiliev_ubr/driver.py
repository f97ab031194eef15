"""Upper bounds: reduce the null-map images to normal form and take the rank.

For a degree ``m`` the irreducibles ``I`` span everything the diagrams can
distinguish, and every row ``Delta(rho(pi))`` is a relation among them, so

    output = |I| - rank of the rows

bounds the primitive rank from above.  Rows are assembled column block by
column block from one precomputed reduction program.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .linalg import BitMatrix, PrimeMatrix, RowSink, save
from .perm import Values, _is_prime
from .reduction import NormalFormTable, ReductionProgram
from .rho import rho_A_terms, rho_B_terms
from .series import KNOWN_PRIMITIVES

log = logging.getLogger(__name__)

DEFAULT_BLOCK = 64


@dataclass
class UbrConfig:
    algorithm: str = "B"
    degree: int = 5
    characteristic: int = 2
    block_width: Optional[int] = DEFAULT_BLOCK
    export: Optional[str] = None

    def __post_init__(self):
        self.algorithm = self.algorithm.upper()
        if self.algorithm not in ("A", "B"):
            raise ValueError(f"algorithm must be A or B, got {self.algorithm!r}")
        low = 2 if self.algorithm == "A" else 3
        if self.degree < low:
            raise ValueError(f"algorithm {self.algorithm} needs degree >= {low}")
        if not _is_prime(self.characteristic):
            raise ValueError(f"characteristic {self.characteristic} is not prime")
        if self.block_width is not None and self.block_width < 1:
            raise ValueError("block width must be positive")


@dataclass
class UbrReport:
    algorithm: str
    degree: int
    characteristic: int
    universe: int
    irreducible: int
    rank: int
    output: int
    moves: Dict[str, int] = field(default_factory=dict)
    blocks: int = 1
    seconds: float = 0.0
    export: Optional[str] = None
    version: str = __version__

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def null_rows(algorithm: str, degree: int, irreducibles: Sequence[Values]):
    """Integer null-map images of the irreducibles, one dict per row."""
    if algorithm == "A":
        return [rho_A_terms(p) for p in irreducibles]
    return [rho_B_terms(degree, p) for p in irreducibles]


def rho_bar(
    algorithm: str,
    degree: int,
    characteristic: int = 2,
    block_width: Optional[int] = DEFAULT_BLOCK,
    program: Optional[ReductionProgram] = None,
):
    """The matrix of ``Delta . rho`` on the irreducibles, with its program.

    Returns a ``BitMatrix`` over ``F_2`` or a ``PrimeMatrix`` otherwise.
    """
    if program is None:
        program = ReductionProgram.compute(algorithm, degree)
    irr = program.irreducibles
    n = len(irr)
    raw = [program.canonical(t) for t in null_rows(algorithm, degree, irr)]
    width = n if block_width is None else block_width
    starts = list(range(0, n, width)) if n else []
    if characteristic == 2:
        rows = [0] * n
    else:
        rows = np.zeros((n, n), dtype=np.int64)
    for start in starts:
        table = NormalFormTable.build(algorithm, degree, characteristic, start, width, program=program)
        for r, terms in enumerate(raw):
            part = table.normal_form(terms)
            if characteristic == 2:
                rows[r] |= part << start
            else:
                for b, c in part.items():
                    rows[r, start + b] = c
        log.debug("block %d..%d done", start, start + width)
    if characteristic == 2:
        matrix = BitMatrix.from_row_ints(rows, n)
    else:
        matrix = PrimeMatrix(rows, characteristic)
    return matrix, program, max(1, len(starts))


def output_upper(config: UbrConfig) -> UbrReport:
    """Run one algorithm at one degree and report its output."""
    t0 = time.perf_counter()
    program = ReductionProgram.compute(config.algorithm, config.degree)
    matrix, _, blocks = rho_bar(
        config.algorithm, config.degree, config.characteristic, config.block_width, program
    )
    n = len(program.irreducibles)
    sink = RowSink(n, config.characteristic)
    if config.characteristic == 2:
        for v in matrix.row_ints():
            sink.ingest(v)
    else:
        for row in matrix.entries:
            sink.ingest(row)
    if config.export:
        save(matrix, config.export)
    return UbrReport(
        algorithm=config.algorithm,
        degree=config.degree,
        characteristic=config.characteristic,
        universe=program.universe,
        irreducible=n,
        rank=sink.rank,
        output=n - sink.rank,
        moves=dict(sorted(program.moves.items())),
        blocks=blocks,
        seconds=round(time.perf_counter() - t0, 3),
        export=config.export,
    )


def census_row(algorithm: str, degree: int) -> dict:
    program = ReductionProgram.compute(algorithm, degree)
    return {
        "algorithm": algorithm.upper(),
        "degree": degree,
        "universe": program.universe,
        "irreducible": len(program.irreducibles),
    }


@dataclass
class TorsionVerdict:
    degree: int
    prime: int
    output: int
    reference: int

    @property
    def torsion_free(self) -> bool:
        """An upper bound over ``F_p`` meeting the rational rank rules out p-torsion."""
        return self.output == self.reference

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "prime": self.prime,
            "output": self.output,
            "reference": self.reference,
            "verdict": "no p-torsion" if self.torsion_free else "inconclusive",
        }


def torsion_probe(
    algorithm: str,
    degree: int,
    primes: Sequence[int] = (2,),
    reference: Optional[int] = None,
    block_width: Optional[int] = None,
) -> List[TorsionVerdict]:
    """Compare upper bounds over small primes with a rational rank.

    ``reference`` is a rational lower bound such as the thickening rank; it
    defaults to the tabulated primitive rank.  Equality over ``F_p`` shows
    the primitive space has no elements of order ``p`` in this degree.
    """
    if reference is None:
        if degree >= len(KNOWN_PRIMITIVES):
            raise ValueError(f"no tabulated rank for degree {degree}")
        reference = KNOWN_PRIMITIVES[degree]
    out = []
    for p in primes:
        rep = output_upper(UbrConfig(algorithm, degree, p, block_width))
        out.append(TorsionVerdict(degree, p, rep.output, reference))
    return out


def write_report(report: UbrReport, path: str) -> None:
    Path(path).write_text(report.to_json() + "\n")

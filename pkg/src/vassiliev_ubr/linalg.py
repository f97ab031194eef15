"""Exact rank over prime fields with a bit-packed GF(2) path and a row-checksummed file format.

File layout (all integers little-endian)::

    b"UBRM"  u16 version  u16 characteristic  u64 rows  u64 cols
    then per row:  payload words (u64)  followed by  crc32(payload) (u32)

Over GF(2) the payload is ``ceil(cols / 64)`` words holding the row bits,
column ``j`` at bit ``j % 64`` of word ``j // 64``.  For an odd prime ``p`` the
payload is ``bit_length(p - 1)`` such bit planes, least significant first.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

MAGIC = b"UBRM"
VERSION = 1
_HEADER = struct.Struct("<4sHHQQ")


class MatrixFormatError(ValueError):
    """Bad magic, truncated data or a row checksum mismatch."""


def _words(cols: int) -> int:
    return (cols + 63) // 64


class BitMatrix:
    """Dense GF(2) matrix, row-major, 64 columns per word, zero padding."""

    characteristic = 2

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        shape = (self.rows, _words(self.cols))
        if data is None:
            data = np.zeros(shape, dtype=np.uint64)
        data = np.ascontiguousarray(data, dtype=np.uint64)
        if data.shape != shape:
            raise ValueError(f"data shape {data.shape} does not match {shape}")
        self.data = data
        self._clear_padding()

    def _clear_padding(self) -> None:
        extra = self.cols % 64
        if extra and self.rows:
            self.data[:, -1] &= np.uint64((1 << extra) - 1)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        a = np.asarray(dense, dtype=np.uint8) & 1
        rows, cols = a.shape
        padded = np.zeros((rows, _words(cols) * 64), dtype=np.uint8)
        padded[:, :cols] = a
        packed = np.packbits(padded, axis=1, bitorder="little")
        return cls(rows, cols, packed.view("<u8").astype(np.uint64))

    @classmethod
    def from_row_ints(cls, rows: Sequence[int], cols: int) -> "BitMatrix":
        m = cls(len(rows), cols)
        nbytes = _words(cols) * 8
        for i, r in enumerate(rows):
            if r >> cols:
                raise ValueError(f"row {i} has bits beyond column {cols}")
            m.data[i] = np.frombuffer(int(r).to_bytes(nbytes, "little"), dtype="<u8")
        return m

    def to_dense(self) -> np.ndarray:
        bits = np.unpackbits(self.data.astype("<u8").view(np.uint8), axis=1, bitorder="little")
        return bits[:, : self.cols].copy()

    def row_int(self, i: int) -> int:
        return int.from_bytes(self.data[i].astype("<u8").tobytes(), "little")

    def row_ints(self) -> List[int]:
        return [self.row_int(i) for i in range(self.rows)]

    def get(self, i: int, j: int) -> int:
        return int(self.data[i, j // 64] >> np.uint64(j % 64)) & 1

    def set(self, i: int, j: int, v: int) -> None:
        bit = np.uint64(1 << (j % 64))
        if v & 1:
            self.data[i, j // 64] |= bit
        else:
            self.data[i, j // 64] &= ~bit

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


class PrimeMatrix:
    """Dense matrix over ``F_p`` for a small odd prime ``p``."""

    def __init__(self, entries, p: int):
        if p < 3 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"PrimeMatrix needs an odd prime, got {p}")
        self.p = int(p)
        self.entries = np.asarray(entries, dtype=np.int64) % self.p
        if self.entries.ndim != 2:
            raise ValueError("entries must be two-dimensional")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def transpose(self) -> "PrimeMatrix":
        return PrimeMatrix(self.entries.T, self.p)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PrimeMatrix)
            and self.p == other.p
            and np.array_equal(self.entries, other.entries)
        )

    def __repr__(self) -> str:
        return f"PrimeMatrix({self.rows}x{self.cols}, p={self.p})"


Matrix = Union[BitMatrix, PrimeMatrix]


# ---------------------------------------------------------------------------
# incremental elimination


class RowSink:
    """Accumulates rows and keeps only a reduced basis of their span.

    Over GF(2) rows are Python integers (bit ``j`` = column ``j``); over an odd
    prime they are integer sequences.  Peak memory is the basis itself.
    """

    def __init__(self, cols: int, characteristic: int = 2):
        self.cols = int(cols)
        self.characteristic = int(characteristic)
        self._pivots: Dict[int, object] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def nullity(self) -> int:
        return self.cols - self.rank

    def _reduce_bits(self, v: int) -> int:
        piv = self._pivots
        while v:
            h = v.bit_length() - 1
            row = piv.get(h)
            if row is None:
                return v
            v ^= row
        return 0

    def _reduce_prime(self, v: np.ndarray) -> np.ndarray:
        p = self.characteristic
        nz = np.flatnonzero(v)
        while nz.size:
            h = int(nz[-1])
            row = self._pivots.get(h)
            if row is None:
                return v
            v = (v - int(v[h]) * row) % p
            nz = np.flatnonzero(v)
        return v

    def ingest(self, row) -> bool:
        """Add one row; return True when it raised the rank."""
        if self.characteristic == 2:
            v = int(row)
            if v < 0 or v >> self.cols:
                raise ValueError(f"row does not fit in {self.cols} columns")
            v = self._reduce_bits(v)
            if v:
                self._pivots[v.bit_length() - 1] = v
                return True
            return False
        v = np.asarray(row, dtype=np.int64) % self.characteristic
        if v.shape != (self.cols,):
            raise ValueError(f"row width {v.shape} does not match {self.cols}")
        v = self._reduce_prime(v)
        nz = np.flatnonzero(v)
        if nz.size:
            h = int(nz[-1])
            inv = pow(int(v[h]), -1, self.characteristic)
            self._pivots[h] = (v * inv) % self.characteristic
            return True
        return False

    def contains(self, row) -> bool:
        if self.characteristic == 2:
            return self._reduce_bits(int(row)) == 0
        v = np.asarray(row, dtype=np.int64) % self.characteristic
        return not np.any(self._reduce_prime(v))


def ingest_rows(sink: RowSink, rows: Iterable) -> RowSink:
    for r in rows:
        sink.ingest(r)
    return sink


def rank_nullity(matrix: Matrix) -> Tuple[int, int]:
    """Exact ``(rank, nullity)`` with ``rank + nullity == cols``."""
    if isinstance(matrix, BitMatrix):
        sink = ingest_rows(RowSink(matrix.cols, 2), matrix.row_ints())
        return sink.rank, matrix.cols - sink.rank
    r = prime_rank(matrix.entries, matrix.p)
    return r, matrix.cols - r


def prime_rank(entries: np.ndarray, p: int) -> int:
    """Rank over ``F_p`` by row reduction on a copy."""
    a = np.array(entries, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if not nz.size:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        below = np.flatnonzero(a[r + 1 :, c]) + r + 1
        if below.size:
            a[below] = (a[below] - np.outer(a[below, c], a[r])) % p
        r += 1
    return r


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank over the rationals by fraction-free (Bareiss) elimination."""
    a = [list(map(int, r)) for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        for i in range(rank + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c, ncols):
                row[j] = (pr[c] * row[j] - f * pr[j]) // prev
        prev = pr[c]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# serialization


def _planes(p: int) -> int:
    return 1 if p == 2 else (p - 1).bit_length()


def _row_payload(matrix: Matrix, i: int) -> bytes:
    if isinstance(matrix, BitMatrix):
        return matrix.data[i].astype("<u8").tobytes()
    row = matrix.entries[i]
    out = []
    for b in range(_planes(matrix.p)):
        bits = ((row >> b) & 1).astype(np.uint8)
        padded = np.zeros(_words(matrix.cols) * 64, dtype=np.uint8)
        padded[: matrix.cols] = bits
        out.append(np.packbits(padded, bitorder="little").tobytes())
    return b"".join(out)


def save(matrix: Matrix, path: Union[str, Path]) -> None:
    p = matrix.characteristic
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, p, matrix.rows, matrix.cols))
        for i in range(matrix.rows):
            payload = _row_payload(matrix, i)
            fh.write(payload)
            fh.write(struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))


def read_header(path: Union[str, Path]) -> dict:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise MatrixFormatError("truncated header")
    magic, version, p, rows, cols = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise MatrixFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise MatrixFormatError(f"unsupported version {version}")
    return {"version": version, "characteristic": p, "rows": rows, "cols": cols}


def load(path: Union[str, Path]) -> Matrix:
    head = read_header(path)
    p, rows, cols = head["characteristic"], head["rows"], head["cols"]
    row_bytes = _planes(p) * _words(cols) * 8
    with open(path, "rb") as fh:
        fh.seek(_HEADER.size)
        blob = fh.read()
    need = rows * (row_bytes + 4)
    if len(blob) < need:
        have = len(blob) // (row_bytes + 4)
        raise MatrixFormatError(f"truncated file: row {have} of {rows} is incomplete")
    payloads = []
    for i in range(rows):
        off = i * (row_bytes + 4)
        payload = blob[off : off + row_bytes]
        (crc,) = struct.unpack_from("<I", blob, off + row_bytes)
        if zlib.crc32(payload) & 0xFFFFFFFF != crc:
            raise MatrixFormatError(f"checksum mismatch in row {i}")
        payloads.append(payload)
    if p == 2:
        data = np.frombuffer(b"".join(payloads), dtype="<u8").reshape(rows, _words(cols))
        m = BitMatrix(rows, cols, data.astype(np.uint64))
        if not np.array_equal(m.data, data):
            raise MatrixFormatError("nonzero padding bits")
        return m
    entries = np.zeros((rows, cols), dtype=np.int64)
    w = _words(cols) * 8
    for i, payload in enumerate(payloads):
        for b in range(_planes(p)):
            plane = np.frombuffer(payload[b * w : (b + 1) * w], dtype=np.uint8)
            bits = np.unpackbits(plane, bitorder="little")[:cols].astype(np.int64)
            entries[i] += bits << b
    if np.any(entries >= p):
        raise MatrixFormatError("entry out of range for the field")
    return PrimeMatrix(entries, p)

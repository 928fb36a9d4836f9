"""
Binary trajectory files.

Layout, all little-endian::

    magic        4 bytes   b"NLST"
    version      u32       1
    length       f64
    points       u32
    sample_count u32
    times        f64[sample_count]
    coefficients sample_count x points complex pairs (re f64, im f64)

Coefficients are stored per snapshot in increasing mode order
(k = -points/2 ... points/2 - 1).

Author: Hassan Fouani
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from propagators.integrators import Trajectory
from spectral_core.field import SpectralField
from spectral_core.grid import TorusGrid
from utils.exceptions import (
    NLSLabError, ReportWriteError, TrajectoryFormatError, UnsupportedVersionError,
)
from utils.logger import setup_logger

logger = setup_logger(__name__)

MAGIC = b'NLST'
FORMAT_VERSION = 1
HEADER = struct.Struct('<4sIdII')
TIME_DTYPE = np.dtype('<f8')
COEFFICIENT_DTYPE = np.dtype('<c16')


def encode_trajectory(traj: Trajectory) -> bytes:
    grid = traj.grid
    header = HEADER.pack(MAGIC, FORMAT_VERSION, float(grid.length), grid.points, len(traj))
    times = np.asarray(traj.times, dtype=TIME_DTYPE).tobytes()
    matrix = np.fft.fftshift(traj.coefficient_matrix(), axes=1) if len(traj) else np.empty((0, grid.points))
    return header + times + np.ascontiguousarray(matrix, dtype=COEFFICIENT_DTYPE).tobytes()


def decode_trajectory(payload: bytes, path: str = None) -> Trajectory:
    """
    Parse a trajectory file image.

    Raises:
        TrajectoryFormatError: On a bad magic, inconsistent header or truncated payload
        UnsupportedVersionError: On a version other than 1
    """
    if len(payload) < HEADER.size:
        raise TrajectoryFormatError("Trajectory file is shorter than its header", path)
    magic, version, length, points, sample_count = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise TrajectoryFormatError(f"Bad trajectory magic {magic!r}", path)
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(version, path)

    expected = HEADER.size + sample_count * (TIME_DTYPE.itemsize + points * COEFFICIENT_DTYPE.itemsize)
    if len(payload) != expected:
        raise TrajectoryFormatError(
            f"Trajectory payload has {len(payload)} bytes, header implies {expected}", path
        )

    try:
        grid = TorusGrid(length, points)
    except NLSLabError as e:
        raise TrajectoryFormatError(f"Invalid grid in trajectory header: {e.message}", path)

    offset = HEADER.size
    times = np.frombuffer(payload, TIME_DTYPE, sample_count, offset).astype(float)
    offset += sample_count * TIME_DTYPE.itemsize
    matrix = np.frombuffer(payload, COEFFICIENT_DTYPE, sample_count * points, offset)
    matrix = matrix.reshape(sample_count, points)

    try:
        snapshots = [SpectralField(grid, np.fft.ifftshift(row)) for row in matrix]
        return Trajectory(None, grid, times, snapshots, scheme_id='file')
    except NLSLabError as e:
        raise TrajectoryFormatError(f"Invalid trajectory samples: {e.message}", path)


def save_trajectory(traj: Trajectory, path: Union[str, Path]) -> None:
    path = Path(path)
    payload = encode_trajectory(traj)
    try:
        path.write_bytes(payload)
    except OSError as e:
        raise ReportWriteError(f"Cannot write trajectory: {e.strerror or e}", str(path))
    logger.info('Trajectory saved', extra={'event_type': 'trajectory_io', 'path': str(path),
                                           'samples': len(traj), 'bytes': len(payload)})


def load_trajectory(path: Union[str, Path]) -> Trajectory:
    path = Path(path)
    try:
        payload = path.read_bytes()
    except OSError as e:
        raise TrajectoryFormatError(f"Cannot read trajectory: {e.strerror or e}", str(path))
    return decode_trajectory(payload, str(path))

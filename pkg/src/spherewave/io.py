"""Plain-text file formats.

All files start with a versioned magic line followed by ``key value``
header lines and whitespace separated rows; ``#`` starts a comment.
Floats are written with 17 significant digits so a write/read cycle is
lossless.

Coefficient file::

    SPHEREWAVE COEFFS 1
    d 4
    max_degree 2
    # n k_1 ... k_{d-2} re im
    0 0 0 1 0
    ...

Frame coefficient files carry the frame parameters and rows ``j i re im``;
profile table files carry rows ``n key re im``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .coeffs import CoefficientVector, flat_position
from .errors import ConfigurationError, ParseError
from .filters import FilterProfile
from .frame import Frame, FrameCoefficients, build_frame
from .sphere import index_table
from .specfun import _validate_chain
from .wavelet import DirectionalProfile, custom_profile, d3_profile

__all__ = [
    "FrameConfig",
    "format_float",
    "write_coeffs",
    "read_coeffs",
    "coeffs_to_text",
    "write_frame_description",
    "read_frame_description",
    "write_frame_coeffs",
    "read_frame_coeffs",
    "read_profile_table",
    "write_profile_table",
]

COEFFS_MAGIC = "SPHEREWAVE COEFFS 1"
FRAME_MAGIC = "SPHEREWAVE FRAME 1"
FRAMECOEFFS_MAGIC = "SPHEREWAVE FRAMECOEFFS 1"
PROFILE_MAGIC = "SPHEREWAVE PROFILE 1"


def format_float(x: float) -> str:
    s = format(float(x), ".17g")
    return "0" if s == "-0" else s


def _lines(path):
    """``(line_number, fields)`` for non-blank, non-comment lines."""
    with open(path, "r", encoding="ascii") as fh:
        for no, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield no, text.split()


class _Reader:
    def __init__(self, path, magic: str):
        self.path = os.fspath(path)
        try:
            self.it = _lines(path)
            no, first = next(self.it)
        except StopIteration:
            raise ParseError("empty file", line=1, path=self.path) from None
        except (OSError, UnicodeDecodeError) as exc:
            raise ParseError(str(exc), path=self.path) from None
        if " ".join(first) != magic:
            raise ParseError(f"expected header {magic!r}", line=no, path=self.path)
        self.pending = None

    def error(self, msg, line):
        return ParseError(msg, line=line, path=self.path)

    def header(self, keys: list) -> dict:
        """Read ``key value...`` lines in the given order."""
        out = {}
        for key in keys:
            no, fields = self.next_line(required=True)
            if fields[0] != key or len(fields) < 2:
                raise self.error(f"expected header field {key!r}", no)
            out[key] = (no, fields[1:])
        return out

    def next_line(self, required=False):
        try:
            return next(self.it)
        except StopIteration:
            if required:
                raise self.error("unexpected end of file", None) from None
            return None

    def rows(self):
        while True:
            item = self.next_line()
            if item is None:
                return
            yield item

    def int_field(self, item, name) -> int:
        no, vals = item
        try:
            return int(vals[0])
        except ValueError:
            raise self.error(f"{name} must be an integer", no) from None


def _to_float(reader: _Reader, token: str, no: int) -> float:
    try:
        val = float(token)
    except ValueError:
        raise reader.error(f"bad number {token!r}", no) from None
    if not np.isfinite(val):
        raise reader.error(f"non-finite number {token!r}", no)
    return val


def coeffs_to_text(v: CoefficientVector) -> str:
    lines = [COEFFS_MAGIC, f"d {v.d}", f"max_degree {v.max_degree}"]
    idx = index_table(v.d, v.max_degree)
    for row, c in zip(idx, v.values):
        lines.append(" ".join(str(int(x)) for x in row) + f" {format_float(c.real)} {format_float(c.imag)}")
    return "\n".join(lines) + "\n"


def write_coeffs(v: CoefficientVector, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(coeffs_to_text(v))


def read_coeffs(path) -> CoefficientVector:
    """Parse a coefficient file; every error names its line number."""
    rd = _Reader(path, COEFFS_MAGIC)
    h = rd.header(["d", "max_degree"])
    d = rd.int_field(h["d"], "d")
    D = rd.int_field(h["max_degree"], "max_degree")
    if d < 3 or D < 0:
        raise rd.error("need d >= 3 and max_degree >= 0", h["d"][0])
    out = CoefficientVector(d, D)
    seen = set()
    for no, fields in rd.rows():
        if len(fields) != d + 1:
            raise rd.error(f"expected {d + 1} fields, got {len(fields)}", no)
        try:
            ints = [int(x) for x in fields[: d - 1]]
        except ValueError:
            raise rd.error("index entries must be integers", no) from None
        n, k = ints[0], tuple(ints[1:])
        try:
            _validate_chain(d, n, k)
        except (IndexError, ValueError) as exc:
            raise rd.error(f"invalid index: {exc}", no) from None
        if n > D:
            raise rd.error(f"degree {n} exceeds max_degree {D}", no)
        key = (n,) + k
        if key in seen:
            raise rd.error(f"duplicate index {key}", no)
        seen.add(key)
        re = _to_float(rd, fields[-2], no)
        im = _to_float(rd, fields[-1], no)
        out.values[flat_position(d, n, k)] = complex(re, im)
    return out


@dataclass(frozen=True)
class FrameConfig:
    """Parameters that determine a frame."""

    d: int
    K: int
    J_max: int
    filter: str = "bump"
    q: int = 0
    profile: str = "optimal"
    convention: str = "binomial"

    def filter_profile(self) -> FilterProfile:
        return FilterProfile(self.filter, self.q)

    def directional_profile(self) -> DirectionalProfile | None:
        if self.profile == "zonal":
            if self.K != 0:
                raise ConfigurationError("the zonal profile requires K = 0")
            return None
        if self.profile == "optimal":
            if self.K == 0:
                return None
            if self.d == 3:
                return d3_profile(self.K, self.convention)
            return None
        if self.profile.startswith("custom:"):
            return read_profile_table(self.profile[len("custom:"):], self.d, self.K)
        raise ConfigurationError(f"unknown profile {self.profile!r}")

    def build(self) -> Frame:
        return build_frame(self.d, self.K, self.J_max, self.filter_profile(), self.directional_profile())

    def header_lines(self) -> list:
        return [
            f"d {self.d}",
            f"K {self.K}",
            f"J_max {self.J_max}",
            f"filter {self.filter} {self.q}",
            f"profile {self.profile} {self.convention}",
        ]


def _read_config(rd: _Reader) -> FrameConfig:
    h = rd.header(["d", "K", "J_max", "filter", "profile"])
    no_f, ffields = h["filter"]
    no_p, pfields = h["profile"]
    if len(ffields) != 2 or len(pfields) != 2:
        raise rd.error("filter and profile lines need two values", no_f if len(ffields) != 2 else no_p)
    try:
        q = int(ffields[1])
    except ValueError:
        raise rd.error("filter order must be an integer", no_f) from None
    return FrameConfig(
        rd.int_field(h["d"], "d"),
        rd.int_field(h["K"], "K"),
        rd.int_field(h["J_max"], "J_max"),
        ffields[0],
        q,
        pfields[0],
        pfields[1],
    )


def write_frame_description(cfg: FrameConfig, frame: Frame, path_or_fh) -> None:
    lines = [FRAME_MAGIC] + cfg.header_lines()
    lines.append(f"atoms {frame.n_atoms}")
    lines.append("# j N max_degree sphere_degree s directions r atoms")
    for sc in frame.scales:
        if sc.j == 0:
            lines.append("0 0 0 0 1 none 1 1")
            continue
        dirs = sc.directions
        lines.append(
            f"{sc.j} {format_float(sc.spec.N)} {sc.spec.max_degree} {sc.sphere.exact_degree} {sc.s} "
            f"{dirs.kind}:{dirs.exact_degree} {sc.r} {sc.n_atoms}"
        )
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_fh, "write"):
        path_or_fh.write(text)
    else:
        with open(path_or_fh, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def read_frame_description(path) -> FrameConfig:
    rd = _Reader(path, FRAME_MAGIC)
    return _read_config(rd)


def write_frame_coeffs(cfg: FrameConfig, coeffs: FrameCoefficients, signal_degree: int, path) -> None:
    """One batch column; rows ``j i re im`` over all atoms."""
    if coeffs.batch != 1:
        raise ValueError("only single signals can be written")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join([FRAMECOEFFS_MAGIC] + cfg.header_lines() + [f"signal_degree {signal_degree}"]) + "\n")
        for j, arr in enumerate(coeffs.scales):
            vals = arr[:, 0]
            for i, c in enumerate(vals):
                fh.write(f"{j} {i} {format_float(c.real)} {format_float(c.imag)}\n")


def read_frame_coeffs(path):
    """Returns ``(config, frame, coefficients, signal_degree)``."""
    rd = _Reader(path, FRAMECOEFFS_MAGIC)
    cfg = _read_config(rd)
    h = rd.header(["signal_degree"])
    D = rd.int_field(h["signal_degree"], "signal_degree")
    frame = cfg.build()
    arrs = [np.zeros((sc.n_atoms, 1), dtype=complex) for sc in frame.scales]
    seen = [np.zeros(sc.n_atoms, dtype=bool) for sc in frame.scales]
    for no, fields in rd.rows():
        if len(fields) != 4:
            raise rd.error(f"expected 4 fields, got {len(fields)}", no)
        try:
            j, i = int(fields[0]), int(fields[1])
        except ValueError:
            raise rd.error("scale and atom must be integers", no) from None
        if not 0 <= j < len(arrs) or not 0 <= i < arrs[j].shape[0]:
            raise rd.error(f"atom ({j}, {i}) does not exist in this frame", no)
        if seen[j][i]:
            raise rd.error(f"duplicate atom ({j}, {i})", no)
        seen[j][i] = True
        arrs[j][i, 0] = complex(_to_float(rd, fields[2], no), _to_float(rd, fields[3], no))
    return cfg, frame, FrameCoefficients(frame.d, frame.J_max, arrs), D


def read_profile_table(path, d: int | None = None, K: int | None = None) -> DirectionalProfile:
    """Custom directionality tables; rows ``n key re im``.

    For d = 3 the key is the chain entry k, for d >= 4 the order m of the
    chain ``(m, 0, ..., 0)``.
    """
    rd = _Reader(path, PROFILE_MAGIC)
    h = rd.header(["d", "K"])
    fd = rd.int_field(h["d"], "d")
    fK = rd.int_field(h["K"], "K")
    if d is not None and fd != d:
        raise ConfigurationError(f"profile file is for d={fd}, not d={d}")
    if K is not None and fK != K:
        raise ConfigurationError(f"profile file has K={fK}, not K={K}")
    tables: dict = {}
    for no, fields in rd.rows():
        if len(fields) != 4:
            raise rd.error(f"expected 4 fields, got {len(fields)}", no)
        try:
            n, key = int(fields[0]), int(fields[1])
        except ValueError:
            raise rd.error("degree and key must be integers", no) from None
        if n < 1:
            raise rd.error("degrees start at 1", no)
        row = tables.setdefault(n, {})
        if key in row:
            raise rd.error(f"duplicate entry ({n}, {key})", no)
        row[key] = complex(_to_float(rd, fields[2], no), _to_float(rd, fields[3], no))
    return custom_profile(fd, fK, tables)


def write_profile_table(profile: DirectionalProfile, path, n_max: int | None = None) -> None:
    top = profile.n_stable if n_max is None else n_max
    lines = [PROFILE_MAGIC, f"d {profile.d}", f"K {profile.K}"]
    for n in range(1, top + 1):
        for key, v in sorted(profile.components(n).items()):
            v = complex(v)
            lines.append(f"{n} {key} {format_float(v.real)} {format_float(v.imag)}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

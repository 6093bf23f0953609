"""Instance generators and the versioned text file format.

File format (version 1), line oriented, ``#`` starts a comment::

    scenagg instance v1
    name <free text>                  # optional
    meta <key> <value ...>            # optional, repeatable
    structure layered <layers> <width>
    structure selection <n> <p>       # (exactly one structure line)
    structure chains <len1> <len2> ...
    scenarios <K> <n>
    <K rows of n space-separated decimal costs>

Costs are written with full round-trip precision, so parse(serialize(x))
reproduces the instance bit for bit. Files ending in ``.gz`` are
transparently gzip-compressed.
"""

from __future__ import annotations

import gzip
import io

import numpy as np

from .core import (
    Instance,
    LayeredPath,
    ParallelChains,
    ScenarioSet,
    Selection,
    ValidationError,
)

FORMAT_VERSION = 1
_HEADER = f"scenagg instance v{FORMAT_VERSION}"


class InstanceFormatError(ValidationError):
    """Malformed instance file; message carries source and line number."""


# ---------------------------------------------------------------------------
# generators


def gen_layered(layers: int, width: int, scenario_count: int,
                seed: int) -> Instance:
    """Complete layered graph with i.i.d. uniform-[0,1) edge costs per
    scenario, drawn from a seeded deterministic generator.

    The seed-to-instance map is fixed for this implementation (PCG64) and
    recorded in the metadata; nothing downstream depends on the specific
    draws.
    """
    if layers < 1 or width < 1 or scenario_count < 1:
        raise ValidationError("layers, width, and scenario count must be >= 1")
    structure = LayeredPath(layer_count=layers, width=width)
    rng = np.random.default_rng(int(seed))
    costs = rng.random((scenario_count, structure.ground_size))
    meta = {
        "generator": "layered",
        "layers": str(layers),
        "width": str(width),
        "scenarios": str(scenario_count),
        "seed": str(int(seed)),
    }
    name = f"layered-{layers}x{width}-K{scenario_count}-seed{seed}"
    return Instance(structure, ScenarioSet(costs), name=name, metadata=meta)


def gen_tight(k: int, ell: int) -> Instance:
    """Two-path family on which the level-``ell`` aggregation guarantee is
    attained exactly.

    With K = 2**k scenarios, both paths have K edges. The top path is split
    into 2**ell blocks of r = 2**(k - ell) edges, every edge of block i
    costing 1 in scenario i*r (0-based) and 0 elsewhere; bottom-path edge i
    costs 1 in scenario i only. The top path's worst case is r, the bottom
    path's is 1, yet after consecutive aggregation to level ``ell`` the two
    paths are indistinguishable.
    """
    if k < 0:
        raise ValidationError("k must be nonnegative")
    if not 0 <= ell <= k:
        raise ValidationError(f"ell must be in 0..{k}, got {ell}")
    K = 2**k
    r = 2 ** (k - ell)
    costs = np.zeros((K, 2 * K))
    for t in range(K):
        costs[(t // r) * r, t] = 1.0  # top edge t sits in block t // r
        costs[t, K + t] = 1.0
    meta = {"generator": "tight", "k": str(k), "ell": str(ell)}
    return Instance(ParallelChains((K, K)), ScenarioSet(costs),
                    name=f"tight-k{k}-ell{ell}", metadata=meta)


def gen_example1() -> Instance:
    """Three parallel edges, four scenarios: the instance separating plain
    regret aggregation (factor 4) from offset-carrying aggregation
    (factor 2)."""
    costs = np.array([
        [4.0, 1.0, 0.0],
        [0.0, 1.0, 4.0],
        [0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
    ])
    return Instance(ParallelChains((1, 1, 1)), ScenarioSet(costs),
                    name="example1", metadata={"generator": "example1"})


# ---------------------------------------------------------------------------
# serialization


def _structure_line(structure) -> str:
    if isinstance(structure, LayeredPath):
        return f"structure layered {structure.layer_count} {structure.width}"
    if isinstance(structure, Selection):
        return f"structure selection {structure.n} {structure.p}"
    if isinstance(structure, ParallelChains):
        lengths = " ".join(str(c) for c in structure.chain_lengths)
        return f"structure chains {lengths}"
    raise ValidationError(f"unsupported structure {type(structure).__name__}")


def dumps_instance(instance: Instance) -> str:
    lines = [_HEADER]
    if instance.name is not None:
        lines.append(f"name {instance.name}")
    for key, value in instance.metadata.items():
        lines.append(f"meta {key} {value}")
    lines.append(_structure_line(instance.structure))
    matrix = instance.scenarios.matrix
    lines.append(f"scenarios {matrix.shape[0]} {matrix.shape[1]}")
    for row in matrix:
        lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path) -> None:
    text = dumps_instance(instance)
    if str(path).endswith(".gz"):
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            fh.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fail(source, lineno, message):
    raise InstanceFormatError(f"{source}:{lineno}: {message}")


def _parse_ints(fields, count, source, lineno, what):
    if count is not None and len(fields) != count:
        _fail(source, lineno, f"expected {count} integers for {what}")
    try:
        return [int(f) for f in fields]
    except ValueError:
        _fail(source, lineno, f"non-integer token in {what}")


def parse_instance(text: str, source: str = "<string>") -> Instance:
    name = None
    meta: dict[str, str] = {}
    structure = None
    matrix_rows: list[np.ndarray] = []
    expected: tuple[int, int] | None = None
    header_seen = False

    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if not line.startswith("scenagg instance v"):
                _fail(source, lineno, "missing 'scenagg instance v1' header")
            version = line.removeprefix("scenagg instance v")
            if version != str(FORMAT_VERSION):
                _fail(source, lineno, f"unknown format version {version!r}")
            header_seen = True
            continue
        fields = line.split()
        keyword = fields[0]
        if expected is not None:
            # inside the scenario matrix: rows only
            if len(matrix_rows) < expected[0]:
                if len(fields) != expected[1]:
                    _fail(source, lineno,
                          f"expected {expected[1]} costs, got {len(fields)}")
                try:
                    row = np.array([float(f) for f in fields])
                except ValueError:
                    _fail(source, lineno, "non-numeric cost token")
                if not np.all(np.isfinite(row)):
                    _fail(source, lineno, "costs must be finite")
                if row.min() < 0:
                    _fail(source, lineno, "negative cost")
                matrix_rows.append(row)
                continue
            _fail(source, lineno, "unexpected content after scenario matrix")
        if keyword == "name":
            name = line[len("name"):].strip()
        elif keyword == "meta":
            if len(fields) < 3:
                _fail(source, lineno, "meta needs a key and a value")
            meta[fields[1]] = line.split(None, 2)[2]
        elif keyword == "structure":
            if structure is not None:
                _fail(source, lineno, "duplicate structure line")
            kind = fields[1] if len(fields) > 1 else ""
            try:
                if kind == "layered":
                    layers, width = _parse_ints(fields[2:], 2, source, lineno,
                                                "layered structure")
                    structure = LayeredPath(layers, width)
                elif kind == "selection":
                    n, p = _parse_ints(fields[2:], 2, source, lineno,
                                       "selection structure")
                    structure = Selection(n, p)
                elif kind == "chains":
                    lengths = _parse_ints(fields[2:], None, source, lineno,
                                          "chain lengths")
                    structure = ParallelChains(tuple(lengths))
                else:
                    _fail(source, lineno, f"unknown structure kind {kind!r}")
            except InstanceFormatError:
                raise
            except ValidationError as exc:
                _fail(source, lineno, str(exc))
        elif keyword == "scenarios":
            if structure is None:
                _fail(source, lineno, "scenarios before structure line")
            k, n = _parse_ints(fields[1:], 2, source, lineno,
                               "scenario dimensions")
            if k < 1:
                _fail(source, lineno, "scenario count must be at least 1")
            if n != structure.ground_size:
                _fail(source, lineno,
                      f"declared width {n} does not match the structure's "
                      f"ground-set size {structure.ground_size}")
            expected = (k, n)
        else:
            _fail(source, lineno, f"unknown keyword {keyword!r}")

    if not header_seen:
        _fail(source, 1, "empty file")
    if structure is None or expected is None:
        _fail(source, 1, "missing structure or scenarios section")
    if len(matrix_rows) != expected[0]:
        _fail(source, 1,
              f"expected {expected[0]} scenario rows, found {len(matrix_rows)}")
    try:
        return Instance(structure, ScenarioSet(np.array(matrix_rows)),
                        name=name, metadata=meta)
    except ValidationError as exc:
        raise InstanceFormatError(f"{source}: {exc}") from exc


def read_instance(path) -> Instance:
    if str(path).endswith(".gz"):
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            text = fh.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_instance(text, source=str(path))

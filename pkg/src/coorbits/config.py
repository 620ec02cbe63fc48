"""Run configuration files for the command-line interface.

A run config is a TOML document with sections:

[group]       kind = "cyclic" | "dihedral" | "sign_flips" | "permutations" | "explicit"
              n (or d) = size parameter; generators / matrices for the last two kinds;
              optional max_order.
[windows]     either file = "w.csv" (one window per row) or count = p with an
              optional seed (default 0) for random unit windows; optional
              normalize = true.
[selector]    kind = "max" | "top_k" | "explicit"; k for top_k; pairs =
              [[rank, window], ...] (1-based) for explicit.
[tolerances]  optional overrides: tie_tol, orth_tol, dedup_tol, stab_tol,
              align_tol, sep_floor, svd_tol.
[sampling]    count, seed, refine_steps for lower-bound estimation.
[projection]  q (defaults to twice the data dimension) and seed.

All seeds must fit in an unsigned 64-bit integer.
"""

from __future__ import annotations

import hashlib
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .coorbit import CoorbitConfig, full_selector, max_selector, top_k_selector
from .exceptions import ConfigError, CoorbitError
from .groups import DEFAULT_MAX_ORDER, FiniteGroupAction, GroupSpec, build_group
from .lipschitz import SamplingPlan

_TOLERANCE_KEYS = (
    "tie_tol",
    "orth_tol",
    "dedup_tol",
    "stab_tol",
    "align_tol",
    "sep_floor",
    "svd_tol",
)


def _check_seed(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < 2**64:
        raise ConfigError(f"{where}: seed must be an unsigned 64-bit integer, got {value!r}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run needs: the embedding config plus plans and knobs."""

    coorbit: CoorbitConfig
    tolerances: dict
    sampling: SamplingPlan
    projection_rows: int | None
    projection_seed: int
    source: Path | None = None

    @property
    def group(self) -> FiniteGroupAction:
        return self.coorbit.group

    def digest(self) -> str:
        """Stable fingerprint of the resolved numerical content."""
        h = hashlib.sha256()
        h.update(self.group.matrices.tobytes())
        h.update(self.coorbit.windows.tobytes())
        h.update(repr(self.coorbit.selector).encode())
        h.update(repr(sorted(self.tolerances.items())).encode())
        return h.hexdigest()[:16]


def read_vectors_csv(path, *, header: bool = False) -> np.ndarray:
    """Load a locale-independent comma-separated matrix, one vector per row."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"input file does not exist: {path}")
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=1 if header else 0)
    except ValueError as exc:
        raise ConfigError(f"{path}: could not parse CSV ({exc})") from exc
    return data


def _parse_group(section, where="group") -> FiniteGroupAction:
    if not isinstance(section, dict):
        raise ConfigError(f"missing [{where}] section")
    try:
        spec = GroupSpec.from_mapping(section)
        return build_group(spec, max_order=int(section.get("max_order", DEFAULT_MAX_ORDER)))
    except CoorbitError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_windows(section, group: FiniteGroupAction, base: Path | None) -> np.ndarray:
    if not isinstance(section, dict):
        raise ConfigError("missing [windows] section")
    if "file" in section:
        path = Path(section["file"])
        if base is not None and not path.is_absolute():
            path = base / path
        windows = read_vectors_csv(path)
        if windows.shape[1] != group.dim:
            raise ConfigError(
                f"windows.file: rows have {windows.shape[1]} entries, group acts on R^{group.dim}"
            )
    elif "count" in section:
        count = int(section["count"])
        if count < 1:
            raise ConfigError(f"windows.count must be >= 1, got {count}")
        seed = _check_seed(section.get("seed", 0), "windows.seed")
        rng = np.random.default_rng(seed)
        windows = rng.standard_normal((count, group.dim))
        windows /= np.linalg.norm(windows, axis=1, keepdims=True)
    else:
        raise ConfigError("windows: need either 'file' or 'count'")
    if section.get("normalize", False):
        norms = np.linalg.norm(windows, axis=1, keepdims=True)
        if np.any(norms == 0):
            raise ConfigError("windows: cannot normalize a zero window")
        windows = windows / norms
    return windows


def _parse_selector(section, p: int, n: int):
    if not isinstance(section, dict):
        raise ConfigError("missing [selector] section")
    kind = section.get("kind")
    if kind == "max":
        return max_selector(p)
    if kind == "top_k":
        k = section.get("k")
        if not isinstance(k, int) or not 1 <= k <= n:
            raise ConfigError(f"selector.k must be an integer in 1..{n}, got {k!r}")
        return top_k_selector(p, k)
    if kind == "full":
        return full_selector(p, n)
    if kind == "explicit":
        pairs = section.get("pairs")
        if not pairs:
            raise ConfigError("selector.pairs: required for kind = 'explicit'")
        out = []
        for idx, pair in enumerate(pairs):
            if len(pair) != 2:
                raise ConfigError(f"selector.pairs[{idx}]: expected [rank, window]")
            j, i = int(pair[0]), int(pair[1])
            if not 1 <= j <= n:
                raise ConfigError(f"selector.pairs[{idx}]: rank {j} outside 1..{n}")
            if not 1 <= i <= p:
                raise ConfigError(f"selector.pairs[{idx}]: window {i} outside 1..{p}")
            out.append((j, i))
        return tuple(out)
    raise ConfigError(f"selector.kind must be max|top_k|full|explicit, got {kind!r}")


def load_run_config(path) -> RunConfig:
    """Parse and validate a TOML run configuration; errors name the field."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file does not exist: {path}")
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML ({exc})") from exc

    group = _parse_group(doc.get("group"))
    windows = _parse_windows(doc.get("windows"), group, path.parent)
    selector = _parse_selector(doc.get("selector"), windows.shape[0], group.order)

    tol_section = doc.get("tolerances", {})
    tolerances = {}
    for key in tol_section:
        if key not in _TOLERANCE_KEYS:
            raise ConfigError(f"tolerances.{key}: unknown tolerance")
        tolerances[key] = float(tol_section[key])

    try:
        coorbit = CoorbitConfig(
            group=group,
            windows=windows,
            selector=selector,
            tie_tol=tolerances.get("tie_tol", 1e-9),
        )
    except (ValueError, CoorbitError) as exc:
        raise ConfigError(f"selector/windows: {exc}") from exc

    sampling_section = doc.get("sampling", {})
    sampling = SamplingPlan(
        count=int(sampling_section.get("count", 10_000)),
        seed=_check_seed(sampling_section.get("seed", 0), "sampling.seed"),
        refine_steps=int(sampling_section.get("refine_steps", 200)),
    )
    if sampling.count < 1:
        raise ConfigError(f"sampling.count must be >= 1, got {sampling.count}")

    projection_section = doc.get("projection", {})
    rows = projection_section.get("q")
    if rows is not None:
        rows = int(rows)
        if rows < 1:
            raise ConfigError(f"projection.q must be >= 1, got {rows}")
    projection_seed = _check_seed(projection_section.get("seed", 0), "projection.seed")

    return RunConfig(
        coorbit=coorbit,
        tolerances=tolerances,
        sampling=sampling,
        projection_rows=rows,
        projection_seed=projection_seed,
        source=path,
    )

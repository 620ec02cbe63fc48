"""Shared groups and embedding configurations for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from coorbits import (
    CoorbitConfig,
    GroupSpec,
    build_group,
    full_selector,
    max_selector,
    top_k_selector,
)


def unit_windows(count: int, dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    w = rng.standard_normal((count, dim))
    return w / np.linalg.norm(w, axis=1, keepdims=True)


@pytest.fixture(scope="session")
def swap2():
    """Order-2 coordinate swap on R^2."""
    return build_group(GroupSpec.cyclic(2))


@pytest.fixture(scope="session")
def cyclic3():
    return build_group(GroupSpec.cyclic(3))


@pytest.fixture(scope="session")
def cyclic4():
    return build_group(GroupSpec.cyclic(4))


@pytest.fixture(scope="session")
def signs1():
    return build_group(GroupSpec.sign_flips(1))


@pytest.fixture(scope="session")
def signs2():
    return build_group(GroupSpec.sign_flips(2))


@pytest.fixture(scope="session")
def s3():
    """Full permutation group on three points, generated by two permutations."""
    return build_group(GroupSpec.permutations([(1, 0, 2), (1, 2, 0)]))


@pytest.fixture(scope="session")
def trivial3():
    return build_group(GroupSpec.explicit([np.eye(3)]))


@pytest.fixture(scope="session")
def sf1_full(signs1):
    """sign_flips(1) with window 1 and both ranks kept: the phase-retrieval toy."""
    return CoorbitConfig(group=signs1, windows=[[1.0]], selector=full_selector(1, 2))


def standard_configs() -> list[tuple[str, CoorbitConfig]]:
    """The mixed bag of configurations the randomized suites run over."""
    configs = []
    g = build_group(GroupSpec.cyclic(4))
    configs.append(
        ("cyclic4-top2", CoorbitConfig(group=g, windows=unit_windows(2, 4, 11), selector=top_k_selector(2, 2)))
    )
    g = build_group(GroupSpec.cyclic(8))
    configs.append(
        ("cyclic8-max", CoorbitConfig(group=g, windows=unit_windows(3, 8, 12), selector=max_selector(3)))
    )
    g = build_group(GroupSpec.sign_flips(2))
    configs.append(
        ("signs2-full", CoorbitConfig(group=g, windows=unit_windows(2, 2, 13), selector=full_selector(2, 4)))
    )
    g = build_group(GroupSpec.dihedral(4))
    configs.append(
        ("dihedral4-top2", CoorbitConfig(group=g, windows=unit_windows(2, 4, 14), selector=top_k_selector(2, 2)))
    )
    g = build_group(GroupSpec.permutations([(1, 0, 2), (1, 2, 0)]))
    configs.append(
        ("perms3-full", CoorbitConfig(group=g, windows=unit_windows(2, 3, 15), selector=full_selector(2, 6)))
    )
    g = build_group(GroupSpec.explicit([np.eye(3)]))
    configs.append(
        ("trivial3-iso", CoorbitConfig(group=g, windows=np.eye(3), selector=max_selector(3)))
    )
    return configs


@pytest.fixture(scope="session", params=[name for name, _ in standard_configs()])
def any_config(request):
    for name, cfg in standard_configs():
        if name == request.param:
            return cfg
    raise AssertionError("unknown config")

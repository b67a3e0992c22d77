from __future__ import annotations

import time

import pytest

from halos import MapParams, build_W, build_region_system
from halos.certify import winding_survey

TEST_PAIRS = [(3, 4), (4, 3), (2, 5), (5, 2)]


@pytest.fixture(scope="session")
def center_params_34():
    return MapParams(3, 4, build_W(3, 4).center())


@pytest.fixture(scope="session")
def center_rs_34(center_params_34):
    return build_region_system(center_params_34, curve_points=512, steps=256)


@pytest.fixture(scope="session")
def pair_grids():
    """(n, d) -> (build seconds, [(params, region system), ...]) on a 9x9 grid."""
    out = {}
    for n, d in TEST_PAIRS:
        t0 = time.time()
        W = build_W(n, d)
        systems = [
            (p, build_region_system(p, curve_points=512, steps=256))
            for p in W.grid(9)
        ]
        out[(n, d)] = (time.time() - t0, systems)
    return out


@pytest.fixture(scope="session")
def survey_34_256():
    return winding_survey(3, 4, 256)


@pytest.fixture(scope="session")
def survey_34_512():
    return winding_survey(3, 4, 512)

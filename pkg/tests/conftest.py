import time

import pytest

from fptimages import (LinearBoundary, LogBoundary, ProblemSpec,
                       QuadraticBoundary, SqrtBoundary, solve_all_programs)

PAPER_T0 = 1.0


def catalogue_boundaries():
    return {
        "linear": LinearBoundary(1.0, 1.0),
        "sqrt": SqrtBoundary(1.0),
        "log": LogBoundary(2.0),
        "quadratic": QuadraticBoundary(1.0),
    }


@pytest.fixture(scope="session")
def catalogue():
    return catalogue_boundaries()


@pytest.fixture(scope="session")
def paper_specs(catalogue):
    """Paper settings: t0=1, x0=b(1)-1, n=100, l=5, n_lambda=100, k_max=20."""
    return {
        name: ProblemSpec(boundary=b, t0=PAPER_T0, x0=b.value(PAPER_T0) - 1.0)
        for name, b in catalogue.items()
    }


@pytest.fixture(scope="session")
def paper_solves(paper_specs):
    """All four programs solved per boundary, with wall times."""
    out = {}
    for name, spec in paper_specs.items():
        start = time.perf_counter()
        results = solve_all_programs(spec)
        out[name] = {"spec": spec, "results": results,
                     "seconds": time.perf_counter() - start}
    return out

import numpy as np
import pytest

from rank1spec.model import (
    AffineTail,
    BaseSpectrum,
    PerturbationCoefficients,
    validate_base,
)


@pytest.fixture
def zspec():
    """Integer eigenvalues lambda_n = n over Z, separation gap 1."""
    return validate_base(
        BaseSpectrum(index_kind="Z", head_offset=0, head=(), tail=AffineTail(1.0, 0.0), gap=1.0)
    )


def finite_coeffs(c_by_index, lo=None, hi=None):
    """Zero-tail coefficients with a_n = 1 and b_n = c_n on [lo, hi].

    Every index in the head window keeps a_n = 1 so that no explicit index
    degenerates; c_n is zero outside the given dictionary.
    """
    keys = sorted(c_by_index)
    if lo is None:
        lo = min(keys)
    if hi is None:
        hi = max(keys)
    idx = range(lo, hi + 1)
    a = tuple(1.0 + 0.0j for _ in idx)
    b = tuple(complex(c_by_index.get(n, 0.0)) for n in idx)
    return PerturbationCoefficients(
        a_head_offset=lo,
        a_head=a,
        a_tail=None,
        b_head_offset=lo,
        b_head=b,
        b_tail=None,
    )


def random_finite_instance(rng, radius=40, max_points=8, c_cap=0.3, complex_c=True):
    """Random zero-tail instance: up to max_points nonzero c_n, |c_n| <= c_cap."""
    m = int(rng.integers(2, max_points + 1))
    support = rng.choice(np.arange(-radius, radius + 1), size=m, replace=False)
    mags = rng.uniform(0.02, c_cap, size=m)
    if complex_c:
        phases = rng.uniform(0, 2 * np.pi, size=m)
        vals = mags * np.exp(1j * phases)
    else:
        vals = mags * rng.choice([-1.0, 1.0], size=m)
    c = {int(n): complex(v) for n, v in zip(support, vals)}
    return finite_coeffs(c)

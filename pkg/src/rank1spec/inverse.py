"""Inverse spectral problem: coefficients realizing a prescribed spectrum.

Three steps: form the finite product F~(z) = prod (nu_n - z)/(lambda_n - z)
over the deviating indices, read off its residues -c_n at the poles, and
synthesize Fourier coefficients with conj(a_n) b_n = c_n.
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from . import errors
from .charfn import CharacteristicFunction
from .model import PerturbationCoefficients, PowerTail


@dataclass(frozen=True)
class ProductFunction:
    spec: object
    target: object
    i1: tuple  # indices with nu_n != lambda_n, increasing
    nu1: tuple
    lam1: tuple

    def eval_product(self, z):
        """Exact finite product over the deviating indices."""
        z = complex(z)
        lam = np.asarray(self.lam1, dtype=float)
        if len(lam):
            d = np.abs(lam - z)
            j = int(np.argmin(d))
            if d[j] < 1e-12 * max(1.0, abs(lam[j])):
                raise errors.PoleHit(f"z = {z} coincides with pole at index {self.i1[j]}")
        out = 1.0 + 0.0j
        for nu_n, lam_n in zip(self.nu1, self.lam1):
            out *= (nu_n - z) / (lam_n - z)
        return out


def split_target(spec, target):
    """Indices kept fixed (I0) and deviating (I1), after the normalization
    that assigns any target value equal to some lambda_m to index m itself."""
    head = list(target.nu_head)
    off = target.nu_head_offset
    n_idx = list(range(off, off + len(head)))
    lam = [complex(spec.lambda_at(n)) for n in n_idx]
    changed = True
    while changed:
        changed = False
        for j, m in enumerate(n_idx):
            if head[j] == lam[j]:
                continue
            # if lambda_m occurs elsewhere in the head, pull it onto index m
            for k in range(len(head)):
                if k != j and head[k] == lam[j] and head[k] != lam[k]:
                    head[j], head[k] = head[k], head[j]
                    changed = True
                    break
            if changed:
                break
    i0, i1 = [], []
    for j, m in enumerate(n_idx):
        (i0 if head[j] == lam[j] else i1).append(m)
    normalized = dict(zip(n_idx, head))
    return i0, i1, normalized


def build_product(spec, target):
    i0, i1, normalized = split_target(spec, target)
    nu1 = tuple(normalized[n] for n in i1)
    lam1 = tuple(float(spec.lambda_at(n)) for n in i1)
    return ProductFunction(spec=spec, target=target, i1=tuple(i1), nu1=nu1, lam1=lam1)


def residues(pf):
    """c_n = (nu_n - lambda_n) * prod_{m != n} (nu_m - lambda_n)/(lambda_m - lambda_n).

    Factors are multiplied from the most distant pole inward so that the
    near-unity factors enter last.  The product magnitudes are checked
    against the exp(sum |nu - lambda| / d) bound as a sanity cap.
    """
    d = pf.spec.gap
    dev_sum = float(np.sum(np.abs(np.asarray(pf.nu1) - np.asarray(pf.lam1))))
    cap = math.exp(dev_sum / d) * (1.0 + 1e-9)
    out = {}
    for j, n in enumerate(pf.i1):
        lam_n = pf.lam1[j]
        others = [(abs(pf.lam1[m] - lam_n), m) for m in range(len(pf.i1)) if m != j]
        others.sort(reverse=True)
        prod = 1.0 + 0.0j
        for _, m in others:
            prod *= (pf.nu1[m] - lam_n) / (pf.lam1[m] - lam_n)
        if abs(prod) > cap:
            raise errors.CertificationFailed(
                f"residue product at index {n} exceeds the analytic cap {cap:.3g}"
            )
        out[n] = (pf.nu1[j] - lam_n) * prod
    return out


def synthesize_coefficients(spec, c, i0_window=None):
    """Coefficients with conj(a_n) b_n = c_n on I1 and b_n = 0 on I0.

    a_n = sqrt|c_n|, b_n = sqrt|c_n| e^{i arg c_n} (principal branch) for
    deviating indices; a_n = 1/(1+|n|), b_n = 0 for the rest.  The head
    covers the deviating window; beyond it a carries a square-summable
    1/|n| power-law tail and b is identically zero.
    """
    idx1 = sorted(c)
    radius = max([abs(n) for n in idx1], default=0)
    if i0_window is not None:
        radius = max(radius, i0_window)
    idx = spec.window_indices(radius) if radius > 0 else spec.window_indices(0)
    a_vals, b_vals = [], []
    for n in idx:
        n = int(n)
        if n in c and c[n] != 0:
            r = math.sqrt(abs(c[n]))
            a_vals.append(complex(r))
            b_vals.append(r * cmath.exp(1j * cmath.phase(c[n])))
        else:
            a_vals.append(complex(1.0 / (1.0 + abs(n))))
            b_vals.append(0.0j)
    off = int(idx[0]) if len(idx) else 0
    return PerturbationCoefficients(
        a_head_offset=off,
        a_head=tuple(a_vals),
        a_tail=PowerTail(beta=1.0, scale=1.0, phase=0.0),
        b_head_offset=off,
        b_head=tuple(b_vals),
        b_tail=None,
    )


def solve_inverse(spec, target):
    """Full 3-step reconstruction; returns (coefficients, product function)."""
    pf = build_product(spec, target)
    c = residues(pf)
    coeffs = synthesize_coefficients(spec, c)
    return coeffs, pf


def solve_inverse_fixed_phi(spec, target, phi_coeffs):
    """Fixed-phi variant: keep the given a_n and solve b_n = c_n / conj(a_n)."""
    pf = build_product(spec, target)
    c = residues(pf)
    idx1 = sorted(c)
    radius = max([abs(n) for n in idx1], default=0)
    idx = spec.window_indices(radius)
    b_vals = []
    for n in idx:
        n = int(n)
        c_n = c.get(n, 0.0)
        a_n = phi_coeffs.a_at(n)
        if c_n != 0:
            if a_n == 0:
                raise errors.ZeroCoefficientObstruction(
                    f"a_{n} = 0 but c_{n} != 0: coefficient b_{n} is undetermined"
                )
            b_vals.append(c_n / np.conj(a_n))
        else:
            b_vals.append(0.0j)
    off = int(idx[0]) if len(idx) else 0
    coeffs = PerturbationCoefficients(
        a_head_offset=phi_coeffs.a_head_offset,
        a_head=phi_coeffs.a_head,
        a_tail=phi_coeffs.a_tail,
        b_head_offset=off,
        b_head=tuple(complex(v) for v in b_vals),
        b_tail=None,
    )
    return coeffs, pf


def default_sample_points(spec, pf, count=25):
    """Deterministic sample points staying at least d/4 away from all poles."""
    d = spec.gap
    lam = np.asarray(pf.lam1, dtype=float)
    lo = float(lam.min()) - 2.0 * d if len(lam) else -2.0 * d
    hi = float(lam.max()) + 2.0 * d if len(lam) else 2.0 * d
    res = np.linspace(lo, hi, count)
    ims = 0.4 * d * (1.0 + (np.arange(count) % 3))
    return [complex(r, i) for r, i in zip(res, ims)]


def check_F_equals_product(coeffs, pf, sample_points, n_trunc=None):
    """Max |F - F~| over the samples; the two functions agree identically."""
    spec = pf.spec
    radius = max([abs(n) for n in pf.i1], default=1)
    if n_trunc is None:
        n_trunc = max(radius + 8, coeffs.head_radius() + 8)
    cf = CharacteristicFunction.build(spec, coeffs, n_trunc)
    worst = 0.0
    for z in sample_points:
        f, _ = cf.eval_F(z)
        g = pf.eval_product(z)
        worst = max(worst, abs(f - g))
    return worst


def combined_discrepancy_bound(coeffs, pf, sample_points, n_trunc=None):
    """Certified bound on |F - F~| at the samples: tail truncation plus a
    floating-point allowance proportional to the summed term magnitudes."""
    spec = pf.spec
    radius = max([abs(n) for n in pf.i1], default=1)
    if n_trunc is None:
        n_trunc = max(radius + 8, coeffs.head_radius() + 8)
    cf = CharacteristicFunction.build(spec, coeffs, n_trunc)
    worst = 0.0
    for z in sample_points:
        tail = float(cf.tail_bound_at(z)[0])
        dist = np.abs(cf.lam1 - z) if len(cf.lam1) else np.array([1.0])
        fp = 4e-15 * (1.0 + float(np.sum(np.abs(cf.c1) / np.maximum(dist, 1e-300)))) * max(
            1, len(cf.c1)
        ) ** 0.5
        worst = max(worst, tail + fp)
    return worst

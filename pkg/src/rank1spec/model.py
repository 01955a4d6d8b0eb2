"""Core data types: base spectrum, perturbation coefficients, targets.

Infinite sequences are represented by an explicit head array plus a
parametric tail generator (affine for the base eigenvalues, power law with
phase or identically zero for the coefficient sequences, equals-lambda for
targets).  All tail estimates used elsewhere are then available in closed
form.  Every type is immutable after validation.
"""

from dataclasses import dataclass, replace
import json
import math
import os
import tempfile

import numpy as np

from . import errors

INDEX_Z = "Z"
INDEX_N = "N"

# indices used for I0/I1 membership compare c_n to zero exactly (entering I0
# flips the multiplicity bookkeeping, so users must opt in explicitly)


@dataclass(frozen=True)
class AffineTail:
    """lambda_n = slope * n + intercept outside the explicit head."""

    slope: float
    intercept: float


@dataclass(frozen=True)
class PowerTail:
    """x_n = scale * |n| ** (-beta) * exp(i*phase) outside the explicit head."""

    beta: float
    scale: float
    phase: float

    def value(self, n):
        n = np.asarray(n)
        return self.scale * np.abs(n, dtype=float) ** (-self.beta) * np.exp(1j * self.phase)


@dataclass(frozen=True)
class BaseSpectrum:
    """Simple separated real spectrum lambda_n, n in I (I = Z or N)."""

    index_kind: str
    head_offset: int
    head: tuple
    tail: AffineTail
    gap: float

    @property
    def start(self):
        """Smallest represented index (None for two-sided index sets)."""
        if self.index_kind == INDEX_Z:
            return None
        return self.head_offset if self.head else 1

    def contains_index(self, n):
        if self.index_kind == INDEX_Z:
            return True
        return n >= self.start

    def lambda_at(self, n):
        """Eigenvalue at index n (scalar or integer array)."""
        n = np.asarray(n)
        out = self.tail.slope * n.astype(float) + self.tail.intercept
        if self.head:
            lo = self.head_offset
            hi = self.head_offset + len(self.head)
            in_head = (n >= lo) & (n < hi)
            if np.any(in_head):
                head = np.asarray(self.head, dtype=float)
                out = np.where(in_head, head[np.clip(n - lo, 0, len(self.head) - 1)], out)
        if out.ndim == 0:
            return float(out)
        return out

    def window_indices(self, radius):
        """Represented indices n with |n| <= radius, in increasing order."""
        if self.index_kind == INDEX_Z:
            return np.arange(-radius, radius + 1)
        return np.arange(self.start, radius + 1)


def validate_base(spec):
    """Check simplicity and separation; return the spectrum with its
    certified gap (the infimum over represented pairs and the tail)."""
    if spec.index_kind not in (INDEX_Z, INDEX_N):
        raise errors.SchemaError(f"unknown index set {spec.index_kind!r}")
    if not (spec.gap > 0) or not math.isfinite(spec.gap):
        raise errors.GapViolation("declared gap must be a positive real number")
    head = np.asarray(spec.head, dtype=float)
    if head.size and not np.all(np.isfinite(head)):
        raise errors.NonReal("base eigenvalues must be finite reals")
    if not (math.isfinite(spec.tail.slope) and math.isfinite(spec.tail.intercept)):
        raise errors.NonReal("tail parameters must be finite reals")
    if spec.index_kind == INDEX_N and not spec.head:
        # pure generator over N starts at index 1 by convention
        pass

    gaps = []
    if head.size >= 2:
        diffs = np.diff(head)
        if np.any(diffs <= 0):
            raise errors.NonMonotone("head eigenvalues are not strictly increasing")
        gaps.append(float(diffs.min()))
    # tail-to-tail gap
    if spec.tail.slope <= 0:
        raise errors.NonMonotone("affine tail must have positive slope")
    gaps.append(spec.tail.slope)
    # junctions between head and generated tail
    if head.size:
        hi = spec.head_offset + len(spec.head)
        upper = spec.tail.slope * hi + spec.tail.intercept
        jump_up = upper - head[-1]
        if jump_up <= 0:
            raise errors.NonMonotone("tail does not continue the head monotonically")
        gaps.append(float(jump_up))
        if spec.index_kind == INDEX_Z:
            lower = spec.tail.slope * (spec.head_offset - 1) + spec.tail.intercept
            jump_down = head[0] - lower
            if jump_down <= 0:
                raise errors.NonMonotone("tail does not continue the head monotonically")
            gaps.append(float(jump_down))
    certified = min(gaps)
    if certified < spec.gap * (1.0 - 1e-12):
        raise errors.GapViolation(
            f"certified gap {certified:.6g} is below the declared gap {spec.gap:.6g}"
        )
    return replace(spec, gap=float(certified))


@dataclass(frozen=True)
class PerturbationCoefficients:
    """Fourier-coefficient sequences a_n, b_n of the perturbation vectors."""

    a_head_offset: int
    a_head: tuple
    a_tail: PowerTail  # None means identically zero tail
    b_head_offset: int
    b_head: tuple
    b_tail: PowerTail

    @staticmethod
    def _eval(n, offset, head, tail):
        n = np.asarray(n)
        out = np.zeros(n.shape, dtype=complex)
        if head:
            arr = np.asarray(head, dtype=complex)
            in_head = (n >= offset) & (n < offset + len(head))
            out = np.where(in_head, arr[np.clip(n - offset, 0, len(head) - 1)], out)
        else:
            in_head = np.zeros(n.shape, dtype=bool)
        if tail is not None:
            outside = ~in_head
            if np.any(outside & (n == 0)):
                raise errors.IndexMismatch("power-law tail undefined at index 0; cover it with the head")
            out = np.where(outside, tail.value(np.where(n == 0, 1, n)), out)
        if out.ndim == 0:
            return complex(out)
        return out

    def a_at(self, n):
        return self._eval(n, self.a_head_offset, self.a_head, self.a_tail)

    def b_at(self, n):
        return self._eval(n, self.b_head_offset, self.b_head, self.b_tail)

    def c_at(self, n):
        """c_n = conj(a_n) * b_n."""
        return np.conj(self.a_at(n)) * self.b_at(n)

    @property
    def c_tail(self):
        """Tail generator of c_n, or None when the tail vanishes."""
        if self.a_tail is None or self.b_tail is None:
            return None
        return PowerTail(
            beta=self.a_tail.beta + self.b_tail.beta,
            scale=self.a_tail.scale * self.b_tail.scale,
            phase=self.b_tail.phase - self.a_tail.phase,
        )

    def head_radius(self):
        """Largest |index| covered by either explicit head."""
        r = 0
        for off, head in ((self.a_head_offset, self.a_head), (self.b_head_offset, self.b_head)):
            if head:
                r = max(r, abs(off), abs(off + len(head) - 1))
        return r

    def c_tail_sum(self, radius, index_kind):
        """Certified upper bound on sum_{|n| > radius} |c_n|."""
        h = self.head_radius()
        total = 0.0
        if radius < h:
            if index_kind == INDEX_Z:
                idx = np.concatenate(
                    [np.arange(-h, -radius), np.arange(radius + 1, h + 1)]
                )
            else:
                idx = np.arange(radius + 1, h + 1)
            if idx.size:
                total += float(np.abs(self.c_at(idx)).sum())
        tail = self.c_tail
        if tail is not None and tail.scale != 0.0:
            gamma = tail.beta
            if gamma <= 1.0:
                return math.inf
            m = max(radius, h)
            # 64 explicit terms, then the integral bound on the remainder
            k = np.arange(m + 1, m + 65, dtype=float)
            part = float(np.sum(k**-gamma)) + (m + 64.0) ** (1.0 - gamma) / (gamma - 1.0)
            total += abs(tail.scale) * part * (2.0 if index_kind == INDEX_Z else 1.0)
        return total

    def partition(self, indices):
        """Split the given indices into (I0, I1) by exact c_n == 0."""
        indices = np.asarray(indices)
        c = self.c_at(indices)
        mask = c != 0
        return indices[~mask], indices[mask]


def validate_coefficients(coeffs, spec):
    """Validate square summability, non-degeneracy of explicit indices, and
    the fit between coefficient data and the index set."""
    for off, head, tail, name in (
        (coeffs.a_head_offset, coeffs.a_head, coeffs.a_tail, "a"),
        (coeffs.b_head_offset, coeffs.b_head, coeffs.b_tail, "b"),
    ):
        arr = np.asarray(head, dtype=complex)
        if arr.size and not np.all(np.isfinite(arr)):
            raise errors.SchemaError(f"{name} head contains non-finite entries")
        if spec.index_kind == INDEX_N and head and off < spec.start:
            raise errors.IndexMismatch(
                f"{name} head starts at {off}, below the index set start {spec.start}"
            )
        if tail is not None:
            if not (tail.beta > 0.5):
                raise errors.NonSummable(
                    f"{name} tail with beta = {tail.beta} is not square summable"
                )
            if spec.index_kind == INDEX_Z and tail.scale != 0.0:
                lo, hi = off, off + len(head)
                if not (head and lo <= 0 < hi):
                    raise errors.IndexMismatch(
                        f"{name} head must cover index 0 when the tail is nonzero"
                    )
    # degenerate indices are only detectable on explicit entries; generator
    # zero-zero tails encode finite-rank data and are accepted as-is
    h = coeffs.head_radius()
    if h > 0 or coeffs.a_head or coeffs.b_head:
        idx = spec.window_indices(h)
        a = np.atleast_1d(coeffs.a_at(idx))
        b = np.atleast_1d(coeffs.b_at(idx))
        both_head = np.zeros(len(idx), dtype=bool)
        for off, head in ((coeffs.a_head_offset, coeffs.a_head), (coeffs.b_head_offset, coeffs.b_head)):
            if head:
                both_head |= (idx >= off) & (idx < off + len(head))
        dead = both_head & (a == 0) & (b == 0)
        if np.any(dead):
            n_bad = int(idx[dead][0])
            raise errors.DegenerateIndex(
                f"a_n = b_n = 0 at explicit index {n_bad}; pre-reduce the input"
            )
    if not math.isfinite(coeffs.c_tail_sum(0, spec.index_kind)):
        raise errors.NonSummable("sum |c_n| diverges")
    return coeffs


@dataclass(frozen=True)
class TargetSpectrum:
    """Desired spectrum nu_n; equals lambda_n outside the explicit head."""

    nu_head_offset: int
    nu_head: tuple

    def nu_at(self, n, spec):
        n = np.asarray(n)
        lam = np.asarray(spec.lambda_at(n), dtype=complex)
        if self.nu_head:
            arr = np.asarray(self.nu_head, dtype=complex)
            lo = self.nu_head_offset
            in_head = (n >= lo) & (n < lo + len(self.nu_head))
            lam = np.where(in_head, arr[np.clip(n - lo, 0, len(self.nu_head) - 1)], lam)
        if lam.ndim == 0:
            return complex(lam)
        return lam


def validate_target(target, spec):
    arr = np.asarray(target.nu_head, dtype=complex)
    if arr.size and not np.all(np.isfinite(arr)):
        raise errors.SchemaError("target head contains non-finite entries")
    if spec.index_kind == INDEX_N and target.nu_head and target.nu_head_offset < spec.start:
        raise errors.IndexMismatch("target head starts below the index set start")
    return target


# ---------------------------------------------------------------------------
# perturbed spectrum (solver output)

ORIGIN_COMMON = "common"
ORIGIN_ZERO = "zero_of_F"
ORIGIN_BOTH = "both"


@dataclass(frozen=True)
class SpectrumEntry:
    mu: complex
    mult: int
    paired_index: int
    origin: str


@dataclass(frozen=True)
class PerturbedSpectrum:
    entries: tuple  # of SpectrumEntry
    pairing: tuple  # of (index, mu) with one slot per unit of multiplicity
    offset_sum: float
    tail_bound: float
    certified: bool

    def eigenvalues(self):
        """All eigenvalues repeated by multiplicity."""
        out = []
        for e in self.entries:
            out.extend([e.mu] * e.mult)
        return np.array(out)

    def offsets(self, spec):
        idx = np.array([n for n, _ in self.pairing])
        mu = np.array([m for _, m in self.pairing])
        return idx, np.abs(mu - spec.lambda_at(idx))


# ---------------------------------------------------------------------------
# JSON serialization.  Complex numbers are [re, im]; unknown fields rejected.


def _need(doc, keys, what):
    if not isinstance(doc, dict):
        raise errors.SchemaError(f"{what}: expected an object")
    extra = set(doc) - set(keys)
    if extra:
        raise errors.SchemaError(f"{what}: unknown fields {sorted(extra)}")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise errors.SchemaError(f"{what}: missing fields {missing}")


def _cx_out(z):
    z = complex(z)
    return [z.real, z.imag]


def _cx_in(v, what):
    if not (isinstance(v, list) and len(v) == 2):
        raise errors.SchemaError(f"{what}: complex values are [re, im] pairs")
    return complex(float(v[0]), float(v[1]))


def base_to_json(spec):
    return {
        "index_set": spec.index_kind,
        "lambda_head": {"offset": spec.head_offset, "values": [float(v) for v in spec.head]},
        "lambda_tail": {"slope": spec.tail.slope, "intercept": spec.tail.intercept},
        "gap": spec.gap,
    }


def base_from_json(doc):
    _need(doc, ["index_set", "lambda_head", "lambda_tail", "gap"], "BaseSpectrum")
    _need(doc["lambda_head"], ["offset", "values"], "lambda_head")
    _need(doc["lambda_tail"], ["slope", "intercept"], "lambda_tail")
    return BaseSpectrum(
        index_kind=doc["index_set"],
        head_offset=int(doc["lambda_head"]["offset"]),
        head=tuple(float(v) for v in doc["lambda_head"]["values"]),
        tail=AffineTail(float(doc["lambda_tail"]["slope"]), float(doc["lambda_tail"]["intercept"])),
        gap=float(doc["gap"]),
    )


def _tail_to_json(tail):
    if tail is None:
        return "zero"
    return {"beta": tail.beta, "scale": tail.scale, "phase": tail.phase}


def _tail_from_json(doc, what):
    if doc == "zero":
        return None
    _need(doc, ["beta", "scale", "phase"], what)
    return PowerTail(float(doc["beta"]), float(doc["scale"]), float(doc["phase"]))


def coefficients_to_json(coeffs):
    return {
        "a_head": {
            "offset": coeffs.a_head_offset,
            "values": [_cx_out(v) for v in coeffs.a_head],
        },
        "a_tail": _tail_to_json(coeffs.a_tail),
        "b_head": {
            "offset": coeffs.b_head_offset,
            "values": [_cx_out(v) for v in coeffs.b_head],
        },
        "b_tail": _tail_to_json(coeffs.b_tail),
    }


def coefficients_from_json(doc):
    _need(doc, ["a_head", "a_tail", "b_head", "b_tail"], "PerturbationCoefficients")
    _need(doc["a_head"], ["offset", "values"], "a_head")
    _need(doc["b_head"], ["offset", "values"], "b_head")
    return PerturbationCoefficients(
        a_head_offset=int(doc["a_head"]["offset"]),
        a_head=tuple(_cx_in(v, "a_head") for v in doc["a_head"]["values"]),
        a_tail=_tail_from_json(doc["a_tail"], "a_tail"),
        b_head_offset=int(doc["b_head"]["offset"]),
        b_head=tuple(_cx_in(v, "b_head") for v in doc["b_head"]["values"]),
        b_tail=_tail_from_json(doc["b_tail"], "b_tail"),
    )


def target_to_json(target):
    return {
        "nu_head": {
            "offset": target.nu_head_offset,
            "values": [_cx_out(v) for v in target.nu_head],
        },
        "tail": "equals_lambda",
    }


def target_from_json(doc):
    _need(doc, ["nu_head", "tail"], "TargetSpectrum")
    _need(doc["nu_head"], ["offset", "values"], "nu_head")
    if doc["tail"] != "equals_lambda":
        raise errors.SchemaError("TargetSpectrum: tail must be 'equals_lambda'")
    return TargetSpectrum(
        nu_head_offset=int(doc["nu_head"]["offset"]),
        nu_head=tuple(_cx_in(v, "nu_head") for v in doc["nu_head"]["values"]),
    )


def spectrum_to_json(ps):
    return {
        "entries": [
            {"mu": _cx_out(e.mu), "mult": e.mult, "paired_index": e.paired_index, "origin": e.origin}
            for e in ps.entries
        ],
        "offset_sum": ps.offset_sum,
        "tail_bound": ps.tail_bound,
        "certified": ps.certified,
    }


def dump_json(doc, path):
    """Deterministic, atomic JSON write (sorted keys, shortest float repr)."""
    text = json.dumps(doc, sort_keys=True, indent=2)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)

"""The equiconnection structure on step functions: the splice operator,
its simplex-weighted iterate, the exact convex midpoint, and a
quantitative uniform-continuity certificate for the splice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .functionals import WindowedFunctional, Window, window_average
from .space import TestFunctional, functional_norm, _as_fraction
from .stepfn import StepFunction, canonicalize, evaluate

ZERO = Fraction(0)
ONE = Fraction(1)


def e1(alpha: StepFunction, beta: StepFunction, t) -> StepFunction:
    """Splice: alpha on [0, t), beta on [t, 1), canonicalized.

    e1(alpha, beta, 1) = alpha and e1(alpha, beta, 0) = beta exactly.
    """
    if alpha.space != beta.space:
        raise ValidationError("splice of step functions over different spaces")
    t = _as_fraction(t)
    if not ZERO <= t <= ONE:
        raise ValidationError(f"splice time {t} outside [0, 1]")
    if t == 1:
        return alpha
    if t == 0:
        return beta
    breaks: list[Fraction] = []
    vals: list[str] = []
    for i, v in enumerate(alpha.values):
        if alpha.breakpoints[i] >= t:
            break
        breaks.append(alpha.breakpoints[i])
        vals.append(v)
    breaks.append(t)
    vals.append(evaluate(beta, t))
    for i, v in enumerate(beta.values):
        if beta.breakpoints[i] > t:
            breaks.append(beta.breakpoints[i])
            vals.append(v)
    breaks.append(ONE)
    return canonicalize(alpha.space, breaks, vals)


@dataclass(frozen=True)
class SimplexWeights:
    """Nonnegative rational weights summing exactly to 1."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(_as_fraction(w) for w in self.weights))
        if not self.weights:
            raise ValidationError("empty weight vector")
        if any(w < 0 for w in self.weights):
            raise ValidationError("simplex weights must be nonnegative")
        if sum(self.weights) != 1:
            raise ValidationError("simplex weights must sum to 1")

    def __len__(self) -> int:
        return len(self.weights)


def e_n(points: Sequence[StepFunction], w: SimplexWeights) -> StepFunction:
    """The iterated splice over a weight vector on the standard simplex.

    x_1 = points[0]; x_i = e1(x_{i-1}, points[i-1], S_{i-1}/S_i) with S_i
    the weight prefix sums.  A 0/0 prefix ratio is defined as 0, which
    makes x_i = points[i-1] across an all-zero prefix; this pins the
    vertex identity and makes zero-weight padding invisible.
    """
    if len(points) != len(w):
        raise ValidationError("need exactly one weight per step function")
    spaces = {p.space for p in points}
    if len(spaces) != 1:
        raise ValidationError("iterated splice of step functions over different spaces")
    current = points[0]
    prefix = w.weights[0]
    for i in range(1, len(points)):
        total = prefix + w.weights[i]
        ratio = ZERO if total == 0 else prefix / total
        current = e1(current, points[i], ratio)
        prefix = total
    return current


def hm_midpoint(
    alpha: StepFunction, beta: StepFunction, coords: Sequence[WindowedFunctional]
) -> StepFunction:
    """A step function whose coordinates under ``coords`` are exactly the
    averages of alpha's and beta's.

    Refines by the two breakpoint sets and all window endpoints, then takes
    alpha on the left half and beta on the right half of every cell.  On
    each window the halves contribute equal measure from each cell, so the
    projection identity holds with zero tolerance.
    """
    if alpha.space != beta.space:
        raise ValidationError("midpoint of step functions over different spaces")
    if not coords:
        raise ValidationError("midpoint needs a nonempty coordinate family")
    cuts = set(alpha.breakpoints) | set(beta.breakpoints)
    for wf in coords:
        if wf.space != alpha.space:
            raise ValidationError("coordinate family lives over a different space")
        cuts.add(wf.window.a)
        cuts.add(wf.window.b)
    cuts.add(ZERO)
    cuts.add(ONE)
    grid = sorted(cuts)
    breaks: list[Fraction] = []
    vals: list[str] = []
    for lo, hi in zip(grid, grid[1:]):
        mid = (lo + hi) / 2
        breaks.append(lo)
        vals.append(evaluate(alpha, lo))
        breaks.append(mid)
        vals.append(evaluate(beta, lo))
    breaks.append(ONE)
    return canonicalize(alpha.space, breaks, vals)


@dataclass(frozen=True)
class ContinuityCertificate:
    """Data certifying uniform continuity of the splice in windowed
    coordinates: a grid fineness n with 1/n < delta/(2c), the uniform grid
    a_i = i/n, and the two thresholds the hypotheses are tested at.
    """

    phi: TestFunctional
    delta: Fraction
    c: Fraction
    n: int
    grid: tuple[Fraction, ...]
    v_threshold: Fraction
    e_threshold: Fraction

    def cell_windows(self) -> tuple[Window, ...]:
        return tuple(Window(a, b) for a, b in zip(self.grid, self.grid[1:]))


def make_certificate(phi: TestFunctional, delta) -> ContinuityCertificate:
    """Build the certificate with the smallest valid grid fineness.

    n is the least integer with 1/n < delta/(2c) where c = max |phi|; for
    c = 0 the certificate is trivial and n = 1.  The thresholds are
    delta/(2 n^2) on cell averages and 1/(2n) on splice times.
    """
    delta = _as_fraction(delta)
    if delta <= 0:
        raise ValidationError("tolerance must be positive")
    c = functional_norm(phi)
    if c == 0:
        n = 1
    else:
        n = (2 * c / delta).__floor__() + 1  # least n with n > 2c/delta
    grid = tuple(Fraction(i, n) for i in range(n + 1))
    return ContinuityCertificate(
        phi=phi,
        delta=delta,
        c=c,
        n=n,
        grid=grid,
        v_threshold=delta / (2 * n * n),
        e_threshold=Fraction(1, 2 * n),
    )


@dataclass(frozen=True)
class CertificateCheck:
    in_v: bool
    in_e: bool
    conclusion: bool


def check_certificate(
    cert: ContinuityCertificate,
    alpha1: StepFunction,
    beta1: StepFunction,
    t1,
    alpha2: StepFunction,
    beta2: StepFunction,
    t2,
) -> CertificateCheck:
    """Evaluate the certificate's hypotheses and conclusion, all exactly.

    in_v: every cell average of phi differs by less than the V threshold,
    for the alpha pair and the beta pair alike.  in_e: the splice times
    differ by less than the E threshold.  conclusion: the full-window
    averages of the two splices differ by less than delta.
    """
    t1 = _as_fraction(t1)
    t2 = _as_fraction(t2)
    for f in (alpha1, beta1, alpha2, beta2):
        if f.space != cert.phi.space:
            raise ValidationError("certificate and inputs live over different spaces")

    def close_on_cells(f: StepFunction, g: StepFunction) -> bool:
        for win in cert.cell_windows():
            wf = WindowedFunctional(cert.phi, win)
            if abs(window_average(wf, f) - window_average(wf, g)) >= cert.v_threshold:
                return False
        return True

    in_v = close_on_cells(alpha1, alpha2) and close_on_cells(beta1, beta2)
    in_e = abs(t1 - t2) < cert.e_threshold
    full = WindowedFunctional(cert.phi, Window(ZERO, ONE))
    gap = abs(window_average(full, e1(alpha1, beta1, t1)) - window_average(full, e1(alpha2, beta2, t2)))
    return CertificateCheck(in_v=in_v, in_e=in_e, conclusion=gap < cert.delta)

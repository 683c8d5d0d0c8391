"""Closed-form bound functions and constants used in ratio certificates.

``omega(theta)`` is the unique real root of ``x + 1 = ln(theta/x)``;
``omega_bar(theta)`` is ``max_k (H_k - 1)/(1 + k/theta)``, attained at the
smallest ``k`` with ``H_k >= 2 + (theta-1)/(k+1)``.  Both approach
``ln(theta) - lnln(theta)`` as theta grows (slowly; see the table), and
``omega_bar < omega`` everywhere.  Constants that are plain fractions
(73/60, 67/360, 1555/1347, the k-set-cover quality table) are kept exact;
floats appear only at the reporting boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import DomainError

ThetaLike = Union[int, float, Fraction]

# Exact harmonic sums beyond this index are pointless for bound reporting and
# expensive (denominators grow like e^k); continue the scan in floats.
_EXACT_SCAN_LIMIT = 2048

_EULER_GAMMA = 0.5772156649015329

#: Best known k-set-cover approximation guarantees for small k.
ALPHA_K: dict[int, Fraction] = {
    1: Fraction(1),
    2: Fraction(1),
    3: Fraction(4, 3),
    4: Fraction(73, 48),
    5: Fraction(26, 15),
    6: Fraction(28, 15),
    7: Fraction(212, 105),
}

#: Sum of the first five quality values.
SIGMA: Fraction = sum((ALPHA_K[k] for k in range(1, 6)), Fraction(0))

#: Guarantee of the unit-threshold solver with a quality-certified subsolver.
RHO: Fraction = (7 * ALPHA_K[6] - SIGMA) / (6 * ALPHA_K[6] - SIGMA + 1)

#: Guarantee of the unit-threshold solver using only the exact 2-set-cover phase.
A1_RATIO: Fraction = 1 + Fraction(67, 360)


def rho_from_alphas(alphas: dict[int, Fraction]) -> Fraction:
    """Evaluate (7*a6 - sigma)/(6*a6 - sigma + 1) for a quality table."""
    sigma = sum((alphas[k] for k in range(1, 6)), Fraction(0))
    return (7 * alphas[6] - sigma) / (6 * alphas[6] - sigma + 1)


def harmonic(k: int) -> Fraction:
    """Exact k-th harmonic number."""
    if k < 1:
        raise DomainError(f"harmonic needs k >= 1, got {k}")
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


def _harmonic_float(k: int) -> float:
    # Asymptotic expansion; error below 1/(120 k^4).
    return math.log(k) + _EULER_GAMMA + 1.0 / (2 * k) - 1.0 / (12 * k * k)


def _theta_fraction(theta: ThetaLike) -> Fraction:
    try:
        f = Fraction(theta)
    except (TypeError, ValueError, OverflowError) as exc:
        raise DomainError(f"not a valid slope: {theta!r}") from exc
    if f <= 0:
        raise DomainError(f"slope must be positive, got {theta!r}")
    return f


def omega(theta: ThetaLike) -> float:
    """Root of x + 1 = ln(theta/x), by bisection on the bracketing interval."""
    if theta != math.inf:
        _theta_fraction(theta)
    else:
        raise DomainError("omega is undefined for infinite slope")
    t = float(theta)

    def resid(x: float) -> float:
        return x + 1.0 - math.log(t / x)

    hi = t  # resid(t) = t + 1 > 0
    lo = t
    while resid(lo) > 0:
        lo /= 2.0
    for _ in range(200):
        mid = (lo + hi) / 2.0
        r = resid(mid)
        if abs(r) < 1e-13:
            return mid
        if r > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


def k_theta(theta: ThetaLike) -> int:
    """Smallest k with H_k >= 2 + (theta-1)/(k+1)."""
    t = _theta_fraction(theta)
    h = Fraction(0)
    k = 0
    while k < _EXACT_SCAN_LIMIT:
        k += 1
        h += Fraction(1, k)
        if h >= 2 + (t - 1) / (k + 1):
            return k
    hf = float(h)
    tf = float(t)
    while True:
        k += 1
        hf += 1.0 / k
        if hf >= 2.0 + (tf - 1.0) / (k + 1):
            return k


def g_value(theta: ThetaLike, k: int) -> Union[Fraction, float]:
    """The truncated-maximum summand theta*(H_k - 1)/(theta + k)."""
    t = _theta_fraction(theta)
    if k < 1:
        raise DomainError(f"g needs k >= 1, got {k}")
    if k <= _EXACT_SCAN_LIMIT:
        return t * (harmonic(k) - 1) / (t + k)
    return float(t) * (_harmonic_float(k) - 1.0) / (float(t) + k)


def omega_bar(theta: ThetaLike, delta_cap: Optional[int] = None) -> Union[Fraction, float]:
    """max over 1 <= k <= cap of (H_k - 1)/(1 + k/theta).

    Exact Fraction whenever the maximizing k is small; float for the huge-theta
    regime.  With ``delta_cap`` the maximum is truncated at the cap.  Infinite
    slope is allowed only with a cap, where the value degenerates to H_cap - 1.
    """
    if theta == math.inf:
        if delta_cap is None:
            raise DomainError("omega_bar needs a cap when the slope is infinite")
        if delta_cap < 1:
            raise DomainError(f"cap must be >= 1, got {delta_cap}")
        return harmonic(delta_cap) - 1
    k = k_theta(theta)
    if delta_cap is not None:
        if delta_cap < 1:
            raise DomainError(f"cap must be >= 1, got {delta_cap}")
        k = min(k, delta_cap)
    return g_value(theta, k)


def setcover_greedy_bound(n: int, tau: int, m_margin: ThetaLike) -> float:
    """Greedy set-cover ratio 1 + omega_bar(n*M/tau)*(1 + 1/M)."""
    if n <= 0 or tau <= 0:
        raise DomainError("n and tau must be positive")
    m = _theta_fraction(m_margin)
    slope = Fraction(n) * m / tau
    return 1.0 + float(omega_bar(slope)) * float(1 + 1 / m)


def unit_a1_constant(scan_limit: int = 100) -> tuple[Fraction, int]:
    """max over 2 <= k <= limit of (H_k - 7/6)/(k + 1), with its argmax."""
    best = None
    arg = 0
    h = Fraction(1)
    for k in range(2, scan_limit + 1):
        h += Fraction(1, k)
        val = (h - Fraction(7, 6)) / (k + 1)
        if best is None or val > best:
            best, arg = val, k
    return best, arg


# ---------------------------------------------------------------------------
# Bound table reporting

TABLE1_THETAS: tuple[int, ...] = (1, 2, 3, 4, 5, 10, 100, 1000, 10000, 10**6)

TABLE1_ROWS: tuple[str, ...] = (
    "1+omega",
    "1+omega_bar",
    "ln(theta)-lnln(theta)",
    "1+ln(theta+1)",
)


@dataclass(frozen=True)
class BoundTable:
    thetas: tuple[int, ...]
    rows: dict[str, tuple[Optional[float], ...]]


def bound_row(theta: ThetaLike) -> dict[str, Optional[float]]:
    t = float(theta)
    lnln = math.log(t) - math.log(math.log(t)) if t > 1 else None
    return {
        "1+omega": 1.0 + omega(theta),
        "1+omega_bar": 1.0 + float(omega_bar(theta)),
        "ln(theta)-lnln(theta)": lnln,
        "1+ln(theta+1)": 1.0 + math.log(t + 1.0),
    }


def table1() -> BoundTable:
    cols = [bound_row(t) for t in TABLE1_THETAS]
    rows = {name: tuple(col[name] for col in cols) for name in TABLE1_ROWS}
    return BoundTable(thetas=TABLE1_THETAS, rows=rows)


def format_bound_up(x: float, decimals: int = 4) -> str:
    """Round a ratio upper bound upward at the given precision.

    Bound tables never understate a guarantee, so the last digit is a ceiling
    (a tiny slack absorbs float representation noise).
    """
    scale = 10**decimals
    return f"{math.ceil(x * scale - 1e-9) / scale:.{decimals}f}"


def render_table(table: BoundTable) -> str:
    width = 12
    head = "theta".ljust(22) + "".join(str(t).rjust(width) for t in table.thetas)
    lines = [head]
    for name in TABLE1_ROWS:
        cells = [
            ("-" if x is None else format_bound_up(x)).rjust(width)
            for x in table.rows[name]
        ]
        lines.append(name.ljust(22) + "".join(cells))
    return "\n".join(lines)

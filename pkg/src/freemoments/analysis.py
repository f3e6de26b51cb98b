"""Sequence analytics on moment sequences.

A-sequence transform A_k = m_{2k} / 2^k, the convolution-dominance checks,
the minorant growth certificate, norm estimation and Hankel sanity checks.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from math import ceil
from typing import Sequence

from .errors import InvalidInputError
from .gram import leading_principal_minors
from .qmoments import MomentSequence, catalan

DEFAULT_DIGITS = 60
DEFAULT_HORIZON = 128


def _values(m) -> tuple[int, ...]:
    return m.values if isinstance(m, MomentSequence) else tuple(int(v) for v in m)


def fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_decimal(x: Decimal, digits: int = 30) -> str:
    return format(x, f".{digits}g") if x.is_finite() else str(x)


@dataclass(frozen=True)
class ASequence:
    values: tuple[Fraction, ...]
    catalan: tuple[int, ...]

    @classmethod
    def from_values(cls, values: Sequence) -> "ASequence":
        vals = tuple(Fraction(v) for v in values)
        return cls(vals, tuple(catalan(k) for k in range(len(vals))))

    @property
    def integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values)

    def __len__(self):
        return len(self.values)

    def to_json(self) -> dict:
        return {
            "values": [fmt_fraction(v) for v in self.values],
            "catalan": [str(c) for c in self.catalan],
            "integral": self.integral,
        }


def to_A_sequence(m) -> ASequence:
    vals = _values(m)
    if not vals:
        raise InvalidInputError("empty moment sequence")
    if vals[0] != 1:
        raise InvalidInputError(f"m_0 must be 1, got {vals[0]}")
    return ASequence.from_values([Fraction(vals[2 * k], 2**k) for k in range((len(vals) - 1) // 2 + 1)])


@dataclass
class ConvolutionReport:
    length: int
    holds_a: bool
    holds_b: bool
    first_violation_b: int | None
    first_strict_b: int | None
    holds_c: bool
    first_k0: int | None

    @property
    def passed(self) -> bool:
        return self.holds_a and self.holds_b

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "holds_a": self.holds_a,
            "holds_b": self.holds_b,
            "first_violation_b": self.first_violation_b,
            "first_strict_b": self.first_strict_b,
            "holds_c": self.holds_c,
            "first_k0": self.first_k0,
        }


def _convolution(values, k):
    return sum(values[j] * values[k - j] for j in range(k + 1))


def check_convolution(A: ASequence) -> ConvolutionReport:
    """Check A_0 = 1, A_{k+1} >= sum_j A_j A_{k-j}, and A_{k0} > C_{k0} for some k0 >= 1.

    ``first_strict_b`` is the k of the first strict step A_{k+1} > ...
    """
    vals = A.values
    holds_a = bool(vals) and vals[0] == 1
    violation = strict = None
    for k in range(len(vals) - 1):
        conv = _convolution(vals, k)
        if vals[k + 1] < conv and violation is None:
            violation = k
        if vals[k + 1] > conv and strict is None:
            strict = k
    k0 = next((k for k in range(1, len(vals)) if vals[k] > A.catalan[k]), None)
    return ConvolutionReport(
        len(vals), holds_a, violation is None, violation, strict, k0 is not None, k0
    )


@dataclass
class MinorantReport:
    applicable: bool
    certified: bool
    horizon: int
    growth_at_horizon: Decimal | None = None
    seed_index: int | None = None
    strict_gap: Fraction | None = None
    minorant: tuple[int | Fraction, ...] = ()
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "certified": self.certified,
            "horizon": self.horizon,
            "growth_at_horizon": None if self.growth_at_horizon is None
            else fmt_decimal(self.growth_at_horizon),
            "seed_index": self.seed_index,
            "strict_gap": None if self.strict_gap is None else fmt_fraction(self.strict_gap),
            "reason": self.reason,
        }


def _root(x: Fraction, n: int, digits: int) -> Decimal:
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        if x == 0:
            return Decimal(0)
        return ((Decimal(x.numerator).ln() - Decimal(x.denominator).ln()) / n).exp()


def minorant_certificate(A: ASequence, horizon: int = DEFAULT_HORIZON,
                         digits: int = DEFAULT_DIGITS) -> MinorantReport:
    """Certify limsup A_k^{1/k} > 4 through an explicit minorant.

    B copies A up to the first index s where convolution dominance is
    strict, then continues with equality B_{k+1} = sum_j B_j B_{k-j}.
    Dominance gives A_k >= B_k for all k.  B is supermultiplicative in the
    shifted sense B_{a+b+1} >= B_a B_b, so by Fekete's lemma
    B_h^{1/(h+1)} bounds the growth rate of B, hence of A, from below.
    """
    conv = check_convolution(A)
    if not (conv.holds_a and conv.holds_b and conv.holds_c):
        missing = [name for name, ok in (("(a)", conv.holds_a), ("(b)", conv.holds_b),
                                         ("(c)", conv.holds_c)) if not ok]
        return MinorantReport(False, False, horizon,
                              reason="preconditions fail: " + ", ".join(missing))
    if any(v < 0 for v in A.values):
        return MinorantReport(False, False, horizon, reason="negative terms")
    if horizon < 1:
        raise InvalidInputError(f"horizon must be >= 1, got {horizon}")
    seed = conv.first_strict_b + 1
    vals = A.values
    gap = vals[seed] - _convolution(vals, seed - 1)
    B = list(vals[: seed + 1])
    while len(B) <= horizon:
        B.append(_convolution(B, len(B) - 1))
    B = B[: horizon + 1]
    growth = _root(Fraction(B[horizon]), horizon + 1, digits)
    minorant = tuple(int(b) if b.denominator == 1 else b for b in B)
    return MinorantReport(True, growth > 4, horizon, growth, seed, gap, minorant)


@dataclass
class NormEstimate:
    root_estimates: list[Decimal]
    ratio_estimates: list[Decimal]
    extrapolated: Decimal
    lower_bound: Decimal
    fit_points: list[int]
    fit_slope: Decimal
    digits: int
    ks: list[int] = field(default_factory=list)

    @property
    def root_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.root_estimates, self.root_estimates[1:]))

    def table(self) -> list[tuple[int, Decimal | None, Decimal | None, Decimal | None]]:
        """Rows (k, root, ratio, fit) for plotting; k indexes m_{2k}."""
        rows = []
        for i, k in enumerate(self.ks):
            fit = self.extrapolated + self.fit_slope / k
            rows.append((k, self.root_estimates[i], self.ratio_estimates[i], fit))
        return rows

    def to_json(self) -> dict:
        return {
            "estimator": "heuristic extrapolation; only lower_bound is certified",
            "ks": self.ks,
            "root_estimates": [fmt_decimal(x) for x in self.root_estimates],
            "ratio_estimates": [fmt_decimal(x) for x in self.ratio_estimates],
            "extrapolated": fmt_decimal(self.extrapolated),
            "lower_bound": fmt_decimal(self.lower_bound),
            "fit_points": self.fit_points,
            "fit_slope": fmt_decimal(self.fit_slope),
            "root_monotone": self.root_monotone,
            "digits": self.digits,
        }


def estimate_norm(m, digits: int = DEFAULT_DIGITS) -> NormEstimate:
    """Estimate lim m_{2k}^{1/2k}.

    root_k = m_{2k}^{1/2k} and ratio_k = sqrt(m_{2k}/m_{2k-2}) for k >= 1;
    ratio_k is fitted as a + b/k by least squares over the last half of the
    points and the intercept a is reported as ``extrapolated``.
    """
    vals = _values(m)
    even = [(k, vals[2 * k]) for k in range((len(vals) - 1) // 2 + 1)]
    nonzero = [(k, v) for k, v in even if v > 0]
    if len(nonzero) < 3:
        raise InvalidInputError("need at least 3 nonzero even moments to estimate the norm")
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ks, roots, ratios = [], [], []
        for k in range(1, len(even)):
            cur, prev = even[k][1], even[k - 1][1]
            if cur <= 0 or prev <= 0:
                continue
            ks.append(k)
            roots.append((Decimal(cur).ln() / (2 * k)).exp())
            ratios.append((Decimal(cur) / Decimal(prev)).sqrt())
        npts = max(2, ceil(len(ks) / 2))
        pts = list(range(len(ks) - npts, len(ks)))
        xs = [Decimal(1) / ks[i] for i in pts]
        ys = [ratios[i] for i in pts]
        xbar = sum(xs) / len(xs)
        ybar = sum(ys) / len(ys)
        sxx = sum((x - xbar) ** 2 for x in xs)
        sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
        slope = sxy / sxx
        intercept = ybar - slope * xbar
    return NormEstimate(
        root_estimates=roots,
        ratio_estimates=ratios,
        extrapolated=+intercept,
        lower_bound=max(roots),
        fit_points=[ks[i] for i in pts],
        fit_slope=slope,
        digits=digits,
        ks=ks,
    )


@dataclass
class HankelReport:
    size: int
    psd: bool
    log_convex: bool
    leading_minors: list[int]
    first_violation: str | None

    @property
    def passed(self) -> bool:
        return self.psd and self.log_convex

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "psd": self.psd,
            "log_convex": self.log_convex,
            "leading_minors": [str(x) for x in self.leading_minors],
            "first_violation": self.first_violation,
            "passed": self.passed,
        }


def is_psd_exact(rows: Sequence[Sequence[int]]) -> tuple[bool, int | None]:
    """Exact PSD test by symmetric elimination over the rationals.

    Returns (psd, index of the first offending pivot).  A zero pivot is
    acceptable only if its whole remaining row vanishes.
    """
    a = [[Fraction(x) for x in row] for row in rows]
    size = len(a)
    for i in range(size):
        p = a[i][i]
        if p < 0:
            return False, i
        if p == 0:
            if any(a[i][j] != 0 for j in range(i + 1, size)):
                return False, i
            continue
        for r in range(i + 1, size):
            f = a[r][i] / p
            if f:
                for c in range(i + 1, size):
                    a[r][c] -= f * a[i][c]
    return True, None


def hankel_matrix(vals: Sequence[int], j: int) -> list[list[int]]:
    return [[vals[a + b] for b in range(j + 1)] for a in range(j + 1)]


def check_hankel(m) -> HankelReport:
    vals = _values(m)
    j = (len(vals) - 1) // 2
    H = hankel_matrix(vals, j) if vals else []
    minors = leading_principal_minors(H) if H else []
    psd, bad = is_psd_exact(H) if H else (True, None)
    violation = None
    if not psd:
        violation = f"hankel pivot {bad} negative or inconsistent"
    elif any(x < 0 for x in minors):
        psd = False
        violation = f"leading minor {next(i for i, x in enumerate(minors) if x < 0) + 1} negative"
    log_convex = True
    for k in range(1, (len(vals) - 1) // 2 + 1):
        if 2 * k + 2 >= len(vals):
            break
        if vals[2 * k] ** 2 > vals[2 * k - 2] * vals[2 * k + 2]:
            log_convex = False
            if violation is None:
                violation = f"log-convexity fails at m_{2 * k}"
            break
    return HankelReport(len(H), psd, log_convex, minors, violation)

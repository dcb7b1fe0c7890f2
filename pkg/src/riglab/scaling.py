"""Threshold scalings, limit formulas and exact edge probabilities.

Each supported family has a scalar *coupling*, the effective edge
probability appearing on the left-hand side of its threshold law:

=====================  =====================================
family                 coupling
=====================  =====================================
uniform RIG  G_s       K^{2s} / (s! P^s)
binomial RIG H_s       t^{2s} P^s / s!
Erdos-Renyi            q
G_s intersect ER       exact edge probability of G_s times q
G_1 intersect RGG      pi r^2 K^2 / P
=====================  =====================================

For the intersection-graph and Erdos-Renyi families the law reads
``coupling = (ln n + c ln ln n + dev)/n`` where the ln ln n coefficient c
is k-1 for minimum degree, k-connectivity and k-robustness, 0 for perfect
matchings and 1 for Hamilton cycles; the limit of P[property] as the
deviation sequence tends to d is then

* ``exp(-exp(-d)/(k-1)!)`` for minimum degree / k-connectivity,
* ``exp(-exp(-d))`` for perfect matching and Hamilton cycle,
* the 0/1 dichotomy only (d -> -inf / +inf) for k-robustness.

The geometric compositions instead scale ``pi r^2 K^2/P ~ a ln(n)/n`` on
the torus (connected iff a > 1, not iff a < 1) and, on the square with its
boundary effect, against a piecewise denominator split on how K^2/P
compares to 1/(n^{1/3} ln n).

Deviations are treated as per-configuration constants; discretizing a
solved parameter (integer K) shifts the deviation, so every candidate is
re-annotated with the deviation its rounded value actually implies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.special import betainc

from .errors import ParameterError
from .models import (
    BinomialRigParams,
    ErParams,
    IntersectionSpec,
    ModelSpec,
    RggParams,
    UniformRigParams,
)
from .properties import (
    HAMILTON_CYCLE,
    K_CONNECTED,
    K_ROBUST,
    MIN_DEGREE,
    NEAR_PERFECT_MATCHING,
    PropertyKind,
)

URIG = "urig"
BRIG = "brig"
ER = "er"
URIG_ER = "urig_er"
URIG_RGG = "urig_rgg"

POISSON_KCONN = "poisson_kconn"
GUMBEL = "gumbel"
ZERO_ONE = "zero_one"
RGG_TORUS = "rgg_torus"
RGG_SQUARE = "rgg_square"


@dataclass(frozen=True)
class ModelFamily:
    kind: str
    s: int = 1
    region: str | None = None

    def __post_init__(self):
        if self.kind not in (URIG, BRIG, ER, URIG_ER, URIG_RGG):
            raise ParameterError(f"unknown family kind {self.kind!r}")
        if self.s < 1:
            raise ParameterError("s must be >= 1")
        if self.kind == URIG_RGG:
            if self.region not in ("torus", "square"):
                raise ParameterError("geometric composition needs a region")
            if self.s != 1:
                raise ParameterError("geometric composition is defined for s=1")
        elif self.region is not None:
            raise ParameterError("region only applies to the geometric composition")

    @classmethod
    def uniform_rig(cls, s: int = 1) -> "ModelFamily":
        return cls(URIG, s)

    @classmethod
    def binomial_rig(cls, s: int = 1) -> "ModelFamily":
        return cls(BRIG, s)

    @classmethod
    def er(cls) -> "ModelFamily":
        return cls(ER)

    @classmethod
    def uniform_rig_er(cls, s: int = 1) -> "ModelFamily":
        return cls(URIG_ER, s)

    @classmethod
    def uniform_rig_rgg(cls, region: str) -> "ModelFamily":
        return cls(URIG_RGG, 1, region)

    def label(self) -> str:
        if self.kind == URIG_RGG:
            return f"urig_rgg[{self.region}]"
        if self.kind in (URIG, BRIG, URIG_ER) and self.s != 1:
            return f"{self.kind}[s={self.s}]"
        return self.kind


@dataclass(frozen=True)
class FamilyParams:
    """Flat parameter record; each family reads the fields it needs."""

    n: int
    K: int | None = None
    P: int | None = None
    t: float | None = None
    q: float | None = None
    r: float | None = None

    def require(self, *names: str) -> None:
        missing = [x for x in names if getattr(self, x) is None]
        if missing:
            raise ParameterError(f"missing parameter(s) {missing} for this family")


@dataclass(frozen=True)
class SideCondition:
    """One asymptotic hypothesis rendered as an advisory finite-n ratio."""

    name: str
    description: str
    value: float
    ok: bool


@dataclass(frozen=True)
class ThresholdSpec:
    family: ModelFamily
    property: PropertyKind
    lnln_coefficient: int
    limit_form: str


@dataclass(frozen=True)
class CouplingReport:
    family: ModelFamily
    property: PropertyKind
    coupling: float
    deviation: float
    side_conditions: tuple[SideCondition, ...]


@dataclass(frozen=True)
class Candidate:
    value: float
    implied_deviation: float
    params: FamilyParams


@dataclass(frozen=True)
class SolveResult:
    param: str
    real_value: float
    clamped: bool
    target_deviation: float
    candidates: tuple[Candidate, ...]

    def best(self) -> Candidate:
        """Candidate whose implied deviation is nearest the target."""
        return min(
            self.candidates,
            key=lambda c: (abs(c.implied_deviation - self.target_deviation), c.value),
        )


# -- thresholds -------------------------------------------------------------


def lnln_offset(prop: PropertyKind) -> int:
    if prop.kind in (MIN_DEGREE, K_CONNECTED, K_ROBUST):
        return prop.k - 1
    if prop.kind == NEAR_PERFECT_MATCHING:
        return 0
    if prop.kind == HAMILTON_CYCLE:
        return 1
    raise ParameterError(f"no threshold offset for {prop!r}")


def threshold_spec(family: ModelFamily, prop: PropertyKind) -> ThresholdSpec:
    """The threshold law for this family/property pair.

    The uniform-RIG x ER composition has a k-connectivity law for s=1; for
    s >= 2 only its minimum-degree law is known, and requesting
    k-connectivity returns that law as an audit surrogate.
    """
    if family.kind == URIG_RGG:
        if prop.kind != K_CONNECTED or prop.k != 1:
            raise ParameterError(
                "the geometric composition only has a connectivity law"
            )
        form = RGG_TORUS if family.region == "torus" else RGG_SQUARE
        return ThresholdSpec(family, prop, 0, form)
    if prop.kind in (MIN_DEGREE, K_CONNECTED):
        form = POISSON_KCONN
    elif prop.kind in (NEAR_PERFECT_MATCHING, HAMILTON_CYCLE):
        if family.kind == URIG_ER:
            raise ParameterError(
                "no matching/Hamilton law for the ER composition"
            )
        form = GUMBEL
    elif prop.kind == K_ROBUST:
        if family.kind == URIG_ER:
            raise ParameterError("no robustness law for the ER composition")
        form = ZERO_ONE
    else:
        raise ParameterError(f"no threshold law for {prop!r}")
    return ThresholdSpec(family, prop, lnln_offset(prop), form)


def limiting_probability(spec: ThresholdSpec, deviation: float) -> float | None:
    """Limit of P[property] when the deviation sequence tends to ``deviation``.

    Returns None where the law specifies no value (finite deviations of
    zero-one-only laws; a geometric constant exactly 1).
    """
    if spec.limit_form in (RGG_TORUS, RGG_SQUARE):
        if deviation < 1.0:
            return 0.0
        if deviation > 1.0:
            return 1.0
        return None
    if deviation == math.inf:
        return 1.0
    if deviation == -math.inf:
        return 0.0
    if spec.limit_form == ZERO_ONE:
        return None
    if spec.limit_form == POISSON_KCONN:
        scale = math.factorial(spec.property.k - 1)
    elif spec.limit_form == GUMBEL:
        scale = 1.0
    else:
        raise ParameterError(f"unknown limit form {spec.limit_form!r}")
    if -deviation > 500.0:
        return 0.0
    return math.exp(-math.exp(-deviation) / scale)


# -- couplings and edge probabilities ----------------------------------------


def _lchoose(a: int, b: int) -> float:
    if b < 0 or b > a:
        return -math.inf
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def uniform_overlap_tail(K: int, P: int, s: int) -> float:
    """P[|X ∩ Y| >= s] for independent uniform K-subsets of a P-pool.

    Hypergeometric upper tail, summed in the log domain so pools up to
    ~1e9 stay overflow-free.
    """
    if not 1 <= s <= K <= P:
        raise ParameterError("need 1 <= s <= K <= P")
    if 2 * K - P >= s:
        return 1.0  # overlap is at least 2K - P for any two K-subsets
    denom = _lchoose(P, K)
    total = 0.0
    for i in range(s, K + 1):
        term = _lchoose(K, i) + _lchoose(P - K, K - i) - denom
        if term > -math.inf:
            total += math.exp(term)
    return min(total, 1.0)


def binomial_overlap_tail(t: float, P: int, s: int) -> float:
    """P[Binomial(P, t^2) >= s]: each pool item is shared independently."""
    if not 0.0 <= t <= 1.0:
        raise ParameterError("t must lie in [0, 1]")
    if s > P:
        return 0.0
    p2 = t * t
    if p2 == 0.0:
        return 0.0
    return float(betainc(s, P - s + 1, p2))


def exact_edge_probability(family: ModelFamily, params: FamilyParams) -> float:
    """Finite-n edge probability; compositions multiply their parts."""
    if family.kind == URIG:
        params.require("K", "P")
        return uniform_overlap_tail(params.K, params.P, family.s)
    if family.kind == BRIG:
        params.require("t", "P")
        return binomial_overlap_tail(params.t, params.P, family.s)
    if family.kind == ER:
        params.require("q")
        return params.q
    if family.kind == URIG_ER:
        params.require("K", "P", "q")
        return uniform_overlap_tail(params.K, params.P, family.s) * params.q
    if family.kind == URIG_RGG:
        params.require("K", "P", "r")
        disk = min(math.pi * params.r * params.r, 1.0)
        return uniform_overlap_tail(params.K, params.P, 1) * disk
    raise ParameterError(f"unknown family {family!r}")


def coupling_value(family: ModelFamily, params: FamilyParams) -> float:
    if family.kind == URIG:
        params.require("K", "P")
        s = family.s
        return (params.K ** (2 * s)) / (math.factorial(s) * params.P**s)
    if family.kind == BRIG:
        params.require("t", "P")
        s = family.s
        return (params.t ** (2 * s)) * (params.P**s) / math.factorial(s)
    if family.kind == ER:
        params.require("q")
        return params.q
    if family.kind == URIG_ER:
        params.require("K", "P", "q")
        return uniform_overlap_tail(params.K, params.P, family.s) * params.q
    if family.kind == URIG_RGG:
        params.require("K", "P", "r")
        return math.pi * params.r * params.r * params.K**2 / params.P
    raise ParameterError(f"unknown family {family!r}")


def rgg_square_threshold(params: FamilyParams, n: int) -> float:
    """Geometric constant b for the unit square with boundary effect.

    The scaling denominator is ``ln(n P/K^2)/n`` in the dense-ring branch
    (K^2/P above 1/(n^{1/3} ln n)) and ``4 ln(P/K^2)/n`` below it.
    """
    params.require("K", "P", "r")
    density = params.K**2 / params.P
    split = 1.0 / (n ** (1.0 / 3.0) * math.log(n))
    if density > split:
        denom = math.log(n * params.P / params.K**2) / n
    else:
        denom = 4.0 * math.log(params.P / params.K**2) / n
    if denom <= 0:
        raise ParameterError("square threshold denominator is non-positive here")
    return math.pi * params.r**2 * density / denom


def _rgg_denominator(family: ModelFamily, params: FamilyParams, n: int) -> float:
    if family.region == "torus":
        return math.log(n) / n
    density = params.K**2 / params.P
    split = 1.0 / (n ** (1.0 / 3.0) * math.log(n))
    if density > split:
        denom = math.log(n * params.P / params.K**2) / n
    else:
        denom = 4.0 * math.log(params.P / params.K**2) / n
    if denom <= 0:
        raise ParameterError("square threshold denominator is non-positive here")
    return denom


def deviation_from_params(
    family: ModelFamily, params: FamilyParams, prop: PropertyKind
) -> float:
    """Invert the scaling: the deviation these parameters realize at n.

    Additive families: ``n * coupling - ln n - c * ln ln n``. Geometric
    compositions: the ratio of the coupling to its threshold denominator.
    """
    n = params.n
    if n < 3:
        raise ParameterError("need n >= 3 so ln ln n is defined and positive")
    coupling = coupling_value(family, params)
    if family.kind == URIG_RGG:
        return coupling / _rgg_denominator(family, params, n)
    c = lnln_offset(prop)
    return n * coupling - math.log(n) - c * math.log(math.log(n))


# -- solving for a free parameter --------------------------------------------


def _target_coupling(
    family: ModelFamily, prop: PropertyKind, n: int, deviation: float,
    params: FamilyParams,
) -> float:
    if n < 3:
        raise ParameterError("need n >= 3")
    if family.kind == URIG_RGG:
        return deviation * _rgg_denominator(family, params, n)
    c = lnln_offset(prop)
    return (math.log(n) + c * math.log(math.log(n)) + deviation) / n


def solve_param(
    family: ModelFamily,
    prop: PropertyKind,
    n: int,
    deviation: float,
    fixed: FamilyParams,
) -> SolveResult:
    """Solve the threshold scaling for the family's free parameter.

    The real-valued solution is reported together with rounded (integer K)
    or clamped candidates, each annotated with the deviation it actually
    implies; downstream predictions must use those implied deviations.
    Targets below the achievable minimum clamp to the smallest valid
    parameter; targets above the achievable maximum (q or t past 1, K past
    P) raise :class:`ParameterError`.
    """
    fixed = replace(fixed, n=n)
    if family.kind == URIG:
        return _solve_urig_K(family, prop, n, deviation, fixed)
    if family.kind == BRIG:
        return _solve_brig_t(family, prop, n, deviation, fixed)
    if family.kind == ER:
        return _solve_er_q(family, prop, n, deviation, fixed)
    if family.kind == URIG_ER:
        if fixed.q is None and fixed.K is not None:
            return _solve_urig_er_q(family, prop, n, deviation, fixed)
        if fixed.K is None and fixed.q is not None:
            return _solve_urig_er_K(family, prop, n, deviation, fixed)
        raise ParameterError("composition solve needs exactly one of q, K free")
    if family.kind == URIG_RGG:
        return _solve_rgg_r(family, prop, n, deviation, fixed)
    raise ParameterError(f"unknown family {family!r}")


def _candidate(family, prop, params: FamilyParams) -> Candidate:
    dev = deviation_from_params(family, params, prop)
    value = next(
        getattr(params, f) for f in ("K", "t", "q", "r") if getattr(params, f) is not None
    )
    return Candidate(value, dev, params)


def _int_candidates(
    family, prop, fixed: FamilyParams, field: str, real: float, lo: int, hi: int
) -> list[FamilyParams]:
    vals = sorted({min(max(int(math.floor(real)), lo), hi),
                   min(max(int(math.ceil(real)), lo), hi)})
    return [replace(fixed, **{field: v}) for v in vals]


def _solve_urig_K(family, prop, n, deviation, fixed) -> SolveResult:
    fixed.require("P")
    s = family.s
    c = _target_coupling(family, prop, n, deviation, fixed)
    clamped = False
    if c <= 0:
        k_real = float(s)
        clamped = True
    else:
        k_real = (math.factorial(s) * c) ** (1.0 / (2 * s)) * math.sqrt(fixed.P)
        if k_real > fixed.P:
            raise ParameterError(
                f"target deviation needs K ~ {k_real:.3g} > P = {fixed.P}"
            )
        if k_real < s:
            k_real = float(s)
            clamped = True
    cands = [
        Candidate(p.K, deviation_from_params(family, p, prop), p)
        for p in _int_candidates(family, prop, fixed, "K", k_real, s, fixed.P)
    ]
    return SolveResult("K", k_real, clamped, deviation, tuple(cands))


def _solve_brig_t(family, prop, n, deviation, fixed) -> SolveResult:
    fixed.require("P")
    s = family.s
    c = _target_coupling(family, prop, n, deviation, fixed)
    clamped = False
    if c <= 0:
        t_real = 0.0
        clamped = True
    else:
        t_real = (math.factorial(s) * c / fixed.P**s) ** (1.0 / (2 * s))
        if t_real > 1.0:
            raise ParameterError(f"target deviation needs t = {t_real:.6g} > 1")
    p = replace(fixed, t=t_real)
    return SolveResult(
        "t", t_real, clamped, deviation,
        (Candidate(t_real, deviation_from_params(family, p, prop), p),),
    )


def _solve_er_q(family, prop, n, deviation, fixed) -> SolveResult:
    c = _target_coupling(family, prop, n, deviation, fixed)
    clamped = False
    if c < 0:
        c = 0.0
        clamped = True
    if c > 1.0:
        raise ParameterError(f"target deviation needs q = {c:.6g} > 1")
    p = replace(fixed, q=c)
    return SolveResult(
        "q", c, clamped, deviation,
        (Candidate(c, deviation_from_params(family, p, prop), p),),
    )


def _solve_urig_er_q(family, prop, n, deviation, fixed) -> SolveResult:
    fixed.require("K", "P")
    c = _target_coupling(family, prop, n, deviation, fixed)
    p_rig = uniform_overlap_tail(fixed.K, fixed.P, family.s)
    clamped = False
    if c < 0:
        q = 0.0
        clamped = True
    else:
        if p_rig == 0.0:
            raise ParameterError("ring overlap probability is zero; K too small")
        q = c / p_rig
        if q > 1.0:
            raise ParameterError(
                f"target deviation needs q = {q:.6g} > 1 at K={fixed.K}, P={fixed.P}"
            )
    p = replace(fixed, q=q)
    return SolveResult(
        "q", q, clamped, deviation,
        (Candidate(q, deviation_from_params(family, p, prop), p),),
    )


def _solve_urig_er_K(family, prop, n, deviation, fixed) -> SolveResult:
    fixed.require("P", "q")
    s = family.s
    c = _target_coupling(family, prop, n, deviation, fixed)
    clamped = False
    if c <= 0:
        k_real = float(s)
        clamped = True
    else:
        if fixed.q == 0.0:
            raise ParameterError("q = 0 cannot reach a positive coupling")
        k_real = (math.factorial(s) * c / fixed.q) ** (1.0 / (2 * s)) * math.sqrt(fixed.P)
        if k_real > fixed.P:
            raise ParameterError(
                f"target deviation needs K ~ {k_real:.3g} > P = {fixed.P}"
            )
        if k_real < s:
            k_real = float(s)
            clamped = True
    cands = [
        Candidate(p.K, deviation_from_params(family, p, prop), p)
        for p in _int_candidates(family, prop, fixed, "K", k_real, s, fixed.P)
    ]
    return SolveResult("K", k_real, clamped, deviation, tuple(cands))


def _solve_rgg_r(family, prop, n, deviation, fixed) -> SolveResult:
    fixed.require("K", "P")
    clamped = False
    if deviation <= 0:
        r_real = 0.0
        clamped = True
    else:
        c = _target_coupling(family, prop, n, deviation, fixed)
        r_real = math.sqrt(c * fixed.P / (math.pi * fixed.K**2))
    p = replace(fixed, r=r_real)
    return SolveResult(
        "r", r_real, clamped, deviation,
        (Candidate(r_real, deviation_from_params(family, p, prop), p),),
    )


# -- side conditions ----------------------------------------------------------


def _cond(name, description, value, ok) -> SideCondition:
    return SideCondition(name, description, float(value), bool(ok))


def side_conditions(
    family: ModelFamily, params: FamilyParams, prop: PropertyKind
) -> tuple[SideCondition, ...]:
    """Advisory finite-n proxies for the theorems' asymptotic hypotheses.

    Never fatal: experiments at violating parameters run and carry the
    flags in their summaries. Proxy thresholds: a big-Omega/little-omega
    lower-bound ratio passes at >= 1, an o(1)/O(.) upper-bound ratio at
    <= 0.1 and <= 1 respectively, and power-law exponents compare
    ``log_n P`` against the stated constant.
    """
    n = params.n
    ln_n = math.log(n)
    out: list[SideCondition] = []
    if family.kind == ER:
        return ()
    if family.kind in (URIG, BRIG):
        P = params.P
        if family.s >= 2:
            expo = math.log(P) / ln_n
            bound = 2.0 - 1.0 / family.s
            out.append(_cond(
                "log_n P", f"pool growth exponent must exceed {bound:.3g}",
                expo, expo > bound,
            ))
            return tuple(out)
        ln5 = P / (n * ln_n**5)
        if family.kind == URIG:
            if prop.kind in (MIN_DEGREE, K_CONNECTED):
                out.append(_cond("P/n", "pool at least proportional to n",
                                 P / n, P / n >= 1.0))
            else:
                out.append(_cond("P/(n ln^5 n)", "pool above n (ln n)^5",
                                 ln5, ln5 >= 1.0))
        else:
            if prop.kind == NEAR_PERFECT_MATCHING:
                expo = math.log(P) / ln_n
                out.append(_cond("log_n P", "pool growth exponent must exceed 1",
                                 expo, expo > 1.0))
            else:
                out.append(_cond("P/(n ln^5 n)", "pool above n (ln n)^5",
                                 ln5, ln5 >= 1.0))
        return tuple(out)
    if family.kind == URIG_ER:
        P, K = params.P, params.K
        out.append(_cond("P/n", "pool at least proportional to n", P / n, P / n >= 1.0))
        out.append(_cond("K/P", "ring negligible against pool (o(1) proxy)",
                         K / P, K / P <= 0.1))
        return tuple(out)
    if family.kind == URIG_RGG:
        P, K = params.P, params.K
        density = K * K / P
        out.append(_cond("K/ln n", "ring grows past ln n", K / ln_n, K / ln_n >= 1.0))
        out.append(_cond("(K^2/P) ln n", "ring density at most order 1/ln n",
                         density * ln_n, density * ln_n <= 1.0))
        out.append(_cond("(K^2/P)/(ln n/n)", "ring density past ln n/n",
                         density / (ln_n / n), density / (ln_n / n) >= 1.0))
        out.append(_cond("K n/P", "K below P/n (o(1/n) proxy)",
                         K * n / P, K * n / P <= 0.1))
        return tuple(out)
    raise ParameterError(f"unknown family {family!r}")


def coupling_report(
    family: ModelFamily, params: FamilyParams, prop: PropertyKind
) -> CouplingReport:
    return CouplingReport(
        family,
        prop,
        coupling_value(family, params),
        deviation_from_params(family, params, prop),
        side_conditions(family, params, prop),
    )


# -- family -> sampleable model spec ------------------------------------------


def build_model_spec(family: ModelFamily, params: FamilyParams) -> ModelSpec:
    n = params.n
    if family.kind == URIG:
        params.require("K", "P")
        return UniformRigParams(n, params.K, params.P, family.s)
    if family.kind == BRIG:
        params.require("t", "P")
        return BinomialRigParams(n, params.t, params.P, family.s)
    if family.kind == ER:
        params.require("q")
        return ErParams(n, params.q)
    if family.kind == URIG_ER:
        params.require("K", "P", "q")
        return IntersectionSpec((
            UniformRigParams(n, params.K, params.P, family.s),
            ErParams(n, params.q),
        ))
    if family.kind == URIG_RGG:
        params.require("K", "P", "r")
        return IntersectionSpec((
            UniformRigParams(n, params.K, params.P, 1),
            RggParams(n, params.r, family.region),
        ))
    raise ParameterError(f"unknown family {family!r}")

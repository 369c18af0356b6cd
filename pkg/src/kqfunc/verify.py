"""Named verification suites driven by the CLI ``verify`` subcommand.

Each check is a zero-argument callable returning ``(passed, detail)``; the
runner times it and turns exceptions into failures carrying the message.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .coeff import BETA, ONE, scalar
from .expand import FormalGPPoly, gp_even_to_odd_tables
from .finvar import (
    check_dual_cancellation,
    check_kq_cancellation,
    specialize,
)
from .kqfam import (
    GQ,
    GQ_finite,
    _q_at_minus_beta_inverse,
    gp,
    ovq_G,
    ovq_G_closed,
    ovq_beta_G,
    ovq_beta_g,
    ovq_g,
    p_beta_G,
    p_beta_g,
    q_G,
    q_beta_G,
    q_beta_g,
    q_g,
)
from .pairing import cauchy_kernel_check, pG_monomial, pair, pairing_weight, pg_monomial
from .partitions import partitions_upto
from .psym import PSeries, ZSeries, substitute_affine, substitute_zbar, zseries_mul

SUITES = ("recurrences", "cancellation", "integrality", "pairing", "cauchy", "gpz")


@dataclass
class RunConfig:
    degree: int = 10
    num_vars: int = 4
    z_order: int = 12

    def __post_init__(self):
        for name in ("degree", "num_vars", "z_order"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "seconds": round(self.seconds, 4),
                "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            line = f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.seconds:.3f}s)"
            if c.detail:
                line += "\n      " + c.detail.replace("\n", "\n      ")
            lines.append(line)
        lines.append(f"{self.suite}: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def run_check(name: str, fn) -> CheckResult:
    start = time.perf_counter()
    try:
        out = fn()
        passed, detail = out if isinstance(out, tuple) else (bool(out), "")
    except Exception as exc:  # a crashing check is a failing check
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, bool(passed), time.perf_counter() - start, detail)


# ---------------------------------------------------------------------------
# recurrences

def _g_side_recurrence(n: int) -> PSeries:
    acc = PSeries.zero(n)
    for k in range(n + 1):
        left = q_g(n - k, n) if n - k > 0 else PSeries.one(n)
        right = ovq_g(k, n) if k > 0 else PSeries.one(n)
        acc = acc + left * right
    return acc


def _G_side_recurrence(n: int, D: int) -> PSeries:
    acc = PSeries.zero(D)
    for k in range(n + 1):
        acc = acc + q_G(n - k, D) * ovq_G(k, D)
    return acc


def _qbar_by_shift(order: int, D: int) -> ZSeries:
    # Q(-z - b) / Q(-b), built from the exact polynomial Q at z-order D
    shifted = substitute_affine(q_beta_G(D, D), -1, -BETA).truncate_order(order)
    inv = _q_at_minus_beta_inverse(D)
    return ZSeries([c * inv for c in shifted.coeffs], D, order)


def recurrence_checks(cfg: RunConfig) -> list:
    D = cfg.degree
    order = min(cfg.z_order, D)
    checks = [
        (f"sum_k q(b)_(n-k) qbar(b)_k = 0, 1<=n<={D}, D={D}",
         lambda: all(_G_side_recurrence(n, D).is_zero() for n in range(1, D + 1))),
        (f"sum_k q[b]_(n-k) qbar[b]_k = 0, 1<=n<={D}",
         lambda: all(_g_side_recurrence(n).is_zero() for n in range(1, D + 1))),
        (f"Q[b](z) Q[b](zbar) = 1 to order {D}",
         lambda: zseries_mul(q_beta_g(D), substitute_zbar(q_beta_g(D))).is_one()),
        (f"Qbar(b)(z) = Q(b)(-z-b) / Q(b)(-b) to order {min(8, D)}",
         lambda: _qbar_by_shift(min(8, D), D).coeffs
         == ovq_beta_G(D, D).truncate_order(min(8, D)).coeffs),
        (f"closed form of qbar(b)_k matches the inverse series, k<={min(order, 6)}",
         lambda: all(ovq_G_closed(k, D) == ovq_G(k, D) for k in range(1, min(order, 6) + 1))),
        (f"qbar[b]_n finite formula matches Q[b](zbar), n<={D}",
         lambda: all(substitute_zbar(q_beta_g(D))[n] == ovq_beta_g(n).with_degree(D)
                     for n in range(1, D + 1))),
    ]
    return [run_check(name, fn) for name, fn in checks]


# ---------------------------------------------------------------------------
# cancellation

def cancellation_checks(cfg: RunConfig, n_max: int = 6, kq_degree: int = 8, t_order: int = 8) -> list:
    N = max(cfg.num_vars, 2)
    odd = range(1, n_max + 1, 2)
    g_members = ([(f"q[b]_{n}", q_g(n)) for n in range(1, n_max + 1)]
                 + [(f"qbar[b]_{n}", ovq_g(n)) for n in range(1, n_max + 1)]
                 + [(f"gp_{n}", gp(n)) for n in range(1, n_max + 1)]
                 + [(f"p[b]_{n}", p_beta_g(n)) for n in odd])
    G_members = ([(f"q(b)_{n}", q_G(n, kq_degree)) for n in range(1, n_max + 1)]
                 + [(f"GQ_{n}", GQ(n, kq_degree)) for n in range(1, n_max + 1)]
                 + [(f"p(b)_{n}", p_beta_G(n, kq_degree)) for n in odd])
    p2_exact = PSeries.p(2, 2)
    p2_trunc = PSeries.p(2, kq_degree)

    def dual_all():
        bad = [name for name, a in g_members if not check_dual_cancellation(specialize(a, N))]
        return not bad, ("failed: " + ", ".join(bad)) if bad else f"{len(g_members)} members, N={N}"

    def kq_all():
        bad = [name for name, a in G_members
               if not check_kq_cancellation(specialize(a, N), t_order)]
        return not bad, ("failed: " + ", ".join(bad)) if bad else f"{len(G_members)} members, N={N}"

    checks = [
        (f"dual K-Q cancellation: q[b], qbar[b], gp, odd p[b], n<={n_max}", dual_all),
        ("dual K-Q cancellation fails for p_2", lambda: not check_dual_cancellation(specialize(p2_exact, N))),
        (f"K-Q cancellation to t^{t_order}: q(b), GQ, odd p(b), n<={n_max}", kq_all),
        ("K-Q cancellation fails for p_2", lambda: not check_kq_cancellation(specialize(p2_trunc, N), t_order)),
    ]
    return [run_check(name, fn) for name, fn in checks]


# ---------------------------------------------------------------------------
# integrality

def integrality_checks(cfg: RunConfig, n_max: int = 8, route_n: int = 6, route_N: int = 3) -> list:
    N_max = cfg.num_vars

    def gq_integral():
        return all(GQ_finite(n, N).is_integral() for n in range(1, n_max + 1) for N in range(1, N_max + 1))

    def gp_integral():
        return all(specialize(gp(n), N).is_integral()
                   for n in range(1, n_max + 1) for N in range(1, N_max + 1))

    def routes():
        for N in range(1, min(route_N, N_max) + 1):
            for n in range(1, route_n + 1):
                exact = GQ_finite(n, N)
                D = exact.total_degree()
                series = specialize(GQ(n, D), N)
                if not series.same_terms(exact):
                    return False, f"GQ_{n} with {N} variables differs"
        return True, ""

    checks = [
        (f"GQ_finite(n, N) in Z[b], n<={n_max}, N<={N_max}", gq_integral),
        (f"gp_n specialized in Z[b], n<={n_max}, N<={N_max}", gp_integral),
        (f"GQ series quotient = factor-theorem division, n<={route_n}, N<={min(route_N, N_max)}", routes),
    ]
    return [run_check(name, fn) for name, fn in checks]


# ---------------------------------------------------------------------------
# pairing

def _diagonal_check(max_weight: int):
    lams = [lam for lam in partitions_upto(max_weight, "odd") if lam]
    for mu in lams:
        g = pg_monomial(mu)
        f_cache = {}
        for lam in lams:
            if lam not in f_cache:
                f_cache[lam] = pG_monomial(lam, sum(mu)) if sum(lam) <= sum(mu) else PSeries.zero(sum(mu))
            got = pair(f_cache[lam], g).value
            want = scalar(pairing_weight(lam)) if lam == mu else scalar(0)
            if got != want:
                return False, f"<pG{list(lam)}, pg{list(mu)}> = {got}, expected {want}"
    return True, f"{len(lams)}x{len(lams)} odd monomials"


def _duality_check(n_max: int):
    for m in range(1, n_max + 1, 2):
        for n in range(1, n_max + 1, 2):
            got = pair(GQ(m, n_max), gp(n)).value
            if got != (ONE if m == n else scalar(0)):
                return False, f"<GQ_{m}, gp_{n}> = {got}"
    return True, ""


def _bilinearity_check(seed: int = 7, trials: int = 5):
    rng = random.Random(seed)
    D = 5
    for _ in range(trials):
        a = scalar(Fraction(rng.randint(-5, 5), rng.randint(1, 4))) + BETA * rng.randint(-3, 3)
        f1 = GQ(rng.choice([1, 3, 5]), D)
        f2 = q_G(rng.choice([1, 3]), D) * q_G(1, D)
        g = gp(rng.choice([1, 3, 5])) if rng.random() < 0.5 else q_g(3).with_degree(4) * q_g(1).with_degree(4)
        lhs = pair(f1.scale(a) + f2, g).value
        rhs = pair(f1, g).value * a + pair(f2, g).value
        if lhs != rhs:
            return False, "bilinearity broke on a random instance"
    return True, f"{trials} random instances"


def _stability_check():
    g = gp(5)
    base = pair(GQ(3, 5), g).value
    for D in (6, 8, 10):
        if pair(GQ(3, D), g).value != base or pair(q_G(5, D), g) != pair(q_G(5, 5), g):
            return False, f"value moved at D={D}"
    return True, ""


def pairing_checks(cfg: RunConfig, max_weight: int = 8, dual_max: int = 7) -> list:
    checks = [
        (f"<pG_lam, pg_mu> = 2^-l(lam) z_lam delta, odd |lam|,|mu|<={max_weight}",
         lambda: _diagonal_check(max_weight)),
        (f"<GQ_m, gp_n> = delta_mn, odd m,n<={dual_max}", lambda: _duality_check(dual_max)),
        ("bilinearity on random instances", _bilinearity_check),
        ("truncation stability beyond degree_used", _stability_check),
    ]
    return [run_check(name, fn) for name, fn in checks]


# ---------------------------------------------------------------------------
# Cauchy kernel

def cauchy_checks(cfg: RunConfig) -> list:
    cases = [(1, 1, 4, False), (2, 2, 6, False), (2, 2, 6, True)]
    extra = (min(cfg.num_vars, 2), min(cfg.num_vars, 2), min(cfg.degree, 6), False)
    if extra not in cases:
        cases.append(extra)
    out = []
    for N, M, D, b0 in cases:
        label = f"Cauchy kernel N={N} M={M} D={D}" + (" at b=0 vs classical" if b0 else "")
        out.append(run_check(label, lambda N=N, M=M, D=D, b0=b0: cauchy_kernel_check(N, M, D, beta_zero=b0)))
    return out


# ---------------------------------------------------------------------------
# gp even-to-odd

REFERENCE_GP = {
    2: "gp1^2 - gp1*b",
    4: "-gp1^4 + 2*gp1*gp3 + 3*gp1^3*b - 2*gp3*b - 3*gp1^2*b^2 + gp1*b^3",
}


def reference_gp(n: int) -> FormalGPPoly:
    g1, g3 = FormalGPPoly.gen(1), FormalGPPoly.gen(3)
    b = FormalGPPoly.const(BETA)
    if n == 2:
        return g1 * g1 - g1 * b
    if n == 4:
        return (-(g1 ** 4) + g1 * g3 * FormalGPPoly.const(2) + (g1 ** 3) * b * FormalGPPoly.const(3)
                - g3 * b * FormalGPPoly.const(2) - (g1 ** 2) * (b ** 2) * FormalGPPoly.const(3)
                + g1 * (b ** 3))
    raise KeyError(n)


def reference_c(n: int) -> FormalGPPoly:
    c1, c3, c5 = (FormalGPPoly.gen(i, "c") for i in (1, 3, 5))
    b = FormalGPPoly.const(BETA, "c")

    def k(v):
        return FormalGPPoly.const(v, "c")

    if n == 2:
        return -(c1 * b)
    if n == 4:
        return c1 * b ** 3 - c3 * b * k(2)
    if n == 6:
        return -(c1 * b ** 5 * k(3)) + c3 * b ** 3 * k(5) - c5 * b * k(3)
    raise KeyError(n)


def gpz_checks(cfg: RunConfig, n_max: int = 6) -> list:
    tables = {}

    def build():
        tables["t"] = gp_even_to_odd_tables(n_max)
        return True, ""

    def formula(n):
        got = tables["t"].gp_even[n]
        return got == reference_gp(n), f"gp{n} = {got.to_text()}"

    def c_seq():
        t = tables["t"]
        lines = [f"c{n} = {t.c_even[n].to_text()}" for n in sorted(t.c_even)]
        return all(t.c_even[n] == reference_c(n) for n in (2, 4, 6)), "\n".join(lines)

    def evaluated():
        t = tables["t"]
        for n, poly in t.gp_even.items():
            if poly.evaluate(gp, n) != gp(n):
                return False, f"gp{n} formula does not evaluate to gp({n})"
        return True, f"gp{n_max} = {t.gp_even[n_max].to_text()}" if n_max in t.gp_even else ""

    checks = [(f"even-to-odd reduction up to {n_max}", build),
              ("gp2 formula", lambda: formula(2)),
              ("gp4 formula", lambda: formula(4)),
              ("c2, c4, c6 sequence", c_seq),
              ("even formulas evaluated in power sums reproduce gp", evaluated)]
    return [run_check(name, fn) for name, fn in checks]


SUITE_FUNCS = {
    "recurrences": recurrence_checks,
    "cancellation": cancellation_checks,
    "integrality": integrality_checks,
    "pairing": pairing_checks,
    "cauchy": cauchy_checks,
    "gpz": gpz_checks,
}


def run_suite(suite: str, cfg: RunConfig | None = None) -> SuiteReport:
    cfg = cfg or RunConfig()
    if suite == "all":
        checks = []
        for name in SUITES:
            checks.extend(CheckResult(f"[{name}] {c.name}", c.passed, c.seconds, c.detail)
                          for c in SUITE_FUNCS[name](cfg))
        return SuiteReport("all", checks)
    if suite not in SUITE_FUNCS:
        raise ValueError(f"unknown suite {suite!r}")
    return SuiteReport(suite, SUITE_FUNCS[suite](cfg))


__all__ = ["SUITES", "RunConfig", "CheckResult", "SuiteReport", "run_check", "run_suite",
           "reference_gp", "reference_c", "REFERENCE_GP"]

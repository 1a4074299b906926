"""Pfaffian systems dual to control distributions and Sluis-Gardner-Shadwick style tests."""

from __future__ import annotations

import dataclasses
from typing import Sequence

import mpmath

from .config import current_config
from .expr import Expr, as_expr, parse, symbol
from .flags import DerivedFlag
from .geometry import AltForm, Chart, Distribution, OneForm, exterior_derivative, generic_rank, numeric_wedge
from .geometry.distribution import kernel_of_forms
from .geometry.linalg import good_points


class DegenerateTau(ValueError):
    """``d tau`` already lies in one of the derived systems."""


@dataclasses.dataclass
class PfaffianSystem:
    chart: Chart
    generators: list[OneForm]
    levels: list[list[OneForm]]

    @property
    def ranks(self) -> list[int]:
        return [len(L) for L in self.levels]

    def derived(self, j: int) -> list[OneForm]:
        return self.levels[min(j, len(self.levels) - 1)]

    @classmethod
    def from_forms(cls, chart: Chart, forms: Sequence[OneForm]) -> "PfaffianSystem":
        """Dualize: the derived systems are the annihilators of the derived flag of ``ker I``."""
        return pfaffian_of(kernel_of_forms(chart, forms))


def pfaffian_of(D: Distribution | DerivedFlag) -> PfaffianSystem:
    """Annihilator of ``D`` with ``I^(j) = ann V^(j)``."""
    flag = D if isinstance(D, DerivedFlag) else DerivedFlag(D)
    levels = []
    for L in flag.levels:
        levels.append(L.annihilator() if L.rank < flag.chart.dim else [])
    return PfaffianSystem(flag.chart, levels[0], levels)


@dataclasses.dataclass
class SGSResult:
    passed: bool
    levels: list[bool]
    tau: str
    failed_level: int | None = None

    def __bool__(self):
        return self.passed


def _tau(chart: Chart, tau) -> Expr:
    if tau is None:
        if chart.time is None:
            raise DegenerateTau("no time coordinate; supply tau")
        return symbol(chart.time)
    if isinstance(tau, str):
        return parse(tau, chart.symbols)
    return as_expr(tau)


def _frobenius_with(forms: list[OneForm], extra: OneForm) -> bool:
    """``d theta ^ theta_1 ^ ... ^ theta_s ^ extra = 0`` for every ``theta``, tested numerically."""
    thetas = [AltForm.from_oneform(w) for w in forms]
    top = AltForm.from_oneform(extra)
    dthetas = [exterior_derivative(th) for th in thetas]
    exprs = [c for f in thetas + dthetas + [top] for c in f.coeffs.values()]
    cfg = current_config()
    tol = mpmath.mpf(10) ** (-cfg.threshold_exp)
    for _, p in good_points(exprs, cfg.zero_samples):
        with mpmath.workdps(p.precision):
            wedge = {(): mpmath.mpf(1)}
            for f in thetas + [top]:
                wedge = numeric_wedge(wedge, _unit(f.evaluate(p)))
            wedge = _unit(wedge)
            if not wedge:
                raise DegenerateTau("the forms and d tau are dependent at a sample point")
            for d in dthetas:
                if not d.coeffs:
                    continue
                prod = numeric_wedge(_unit(d.evaluate(p)), wedge)
                if any(abs(v) > tol for v in prod.values()):
                    return False
    return True


def _unit(values: dict) -> dict:
    norm = max((abs(v) for v in values.values()), default=0)
    if norm == 0:
        return {}
    return {k: v / norm for k, v in values.items()}


def sgs_test(I: PfaffianSystem, tau=None) -> SGSResult:
    """``I^(j) + span{d tau}`` integrable for ``0 <= j <= k - 1``."""
    chart = I.chart
    tau_e = _tau(chart, tau)
    dtau = OneForm.differential(chart, tau_e)
    if dtau.is_structurally_zero:
        raise DegenerateTau("d tau vanishes")
    results = []
    failed = None
    for j, forms in enumerate(I.levels):
        if not forms:
            break
        rows = [w.coeffs for w in forms]
        if generic_rank(rows + [dtau.coeffs], chart.dim) == len(forms):
            raise DegenerateTau(f"d{tau_e} lies in I^({j})")
        ok = _frobenius_with(forms, dtau)
        results.append(ok)
        if not ok and failed is None:
            failed = j
    return SGSResult(all(results), results, str(tau_e), failed)


def sgs_quotient_test(D: Distribution, G) -> SGSResult:
    """S-G-S test with ``tau = t`` on the annihilator of ``V + Gamma``."""
    from .symmetry import augmented

    return sgs_test(pfaffian_of(augmented(D, G)))


__all__ = ["DegenerateTau", "PfaffianSystem", "SGSResult", "pfaffian_of", "sgs_quotient_test", "sgs_test"]

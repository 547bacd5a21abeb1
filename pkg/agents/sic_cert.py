import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Union

import numpy as np

from agents.invariants import ENUMERATION_BUDGET, alpha, fractional_chromatic, independent_set_pool
from agents.ks_logic import nc_model_from_cover
from agents.ortho_graph import orthogonality_graph
from interfaces.certificate import (
    DeletionCheck,
    EgalitarianResult,
    GapReport,
    Rejection,
    SICCertificate,
    SICCriticality,
    SICRefutation,
    SICVerdict,
    StateAudit,
)
from interfaces.projector_set import ProjectorSet
from tools.linalg import eigenvalues, min_eigenvalue, random_density_matrix, weighted_sum
from tools.sdp_solver import independent_set_rows, max_min_eigenvalue
from utils.errors import ConvergenceFailure, WeightArityMismatch
from utils.rational import to_fraction

EIGEN_TOL = 1e-9
MAX_CERTIFY_N = 128
SNAP_DENOMINATORS = (10, 100, 1000, 10**4, 10**5, 10**6)


def integer_weights(weights: Sequence[Fraction]) -> List[int]:
    """The smallest positive integer multiple of a rational weight vector."""
    lcm = 1
    for w in weights:
        lcm = lcm * w.denominator // gcd(lcm, w.denominator)
    scaled = [int(w * lcm) for w in weights]
    common = 0
    for k in scaled:
        common = gcd(common, k)
    return [k // common for k in scaled] if common else scaled


class SICCertifier:
    """
    Decides state-independent contextuality through its weight characterization: S is SI-C iff
    some w >= 0 has alpha(G, w) < 1 <= lambda_min(sum_i w_i P_i).
    Sets with more than max_n vectors raise TooLarge.
    """

    def __init__(
        self,
        inconclusive_band: float = 1e-6,
        jobs: int = 1,
        max_rounds: int = 50,
        enumeration_budget: int = ENUMERATION_BUDGET,
        ortho_tol: float = 1e-9,
        max_n: int = MAX_CERTIFY_N,
    ):
        self.inconclusive_band = inconclusive_band
        self.jobs = jobs
        self.max_rounds = max_rounds
        self.enumeration_budget = enumeration_budget
        self.ortho_tol = ortho_tol
        self.max_n = max_n

    def check_sic_certificate(self, S: ProjectorSet, weights: Sequence) -> Union[SICCertificate, Rejection]:
        if len(weights) != S.n:
            raise WeightArityMismatch(S.n, len(weights))
        w = [to_fraction(x) for x in weights]
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")

        G = orthogonality_graph(S, tol=self.ortho_tol)
        a = alpha(G.with_weights(w), max_n=self.max_n).value
        lam = min_eigenvalue(weighted_sum(S, w))
        if a == 0 or lam <= EIGEN_TOL:
            return Rejection(reason="the weighted projector sum is singular", lambda_min=lam, alpha=a)
        if a < 1 and lam >= 1 - EIGEN_TOL:
            return SICCertificate(weights=w, y=a, lambda_min=lam, normalized=True, scale=Fraction(1))
        if lam <= float(a) * (1 + EIGEN_TOL):
            return Rejection(reason="lambda_min does not exceed alpha(G, w)", lambda_min=lam, alpha=a)

        scale = 1 / Fraction(lam).limit_denominator(10**6)
        if lam * scale < 1 - EIGEN_TOL or a * scale >= 1:
            scale = 2 / (Fraction(lam).limit_denominator(10**6) + a)
        return SICCertificate(
            weights=[x * scale for x in w],
            y=a * scale,
            lambda_min=lam * float(scale),
            normalized=False,
            scale=scale,
        )

    def _ratio(self, S: ProjectorSet, G, w: Sequence[Fraction]):
        a = alpha(G.with_weights(w), max_n=self.max_n).value
        lam = min_eigenvalue(weighted_sum(S, w))
        return a, lam, (lam / float(a) if a > 0 else 0.0)

    def optimize_sic_weights(self, S: ProjectorSet) -> GapReport:
        """
        Maximize lambda_min(sum_i w_i P_i) over w >= 0 with every independent set weighing at most 1.

        Independent-set rows are generated lazily: after each SDP solve, the heaviest independent
        set for the current weights is added when it weighs more than 1. The weights are then
        snapped to small denominators when that loses nothing, and scaled so alpha(G, w) = 1.
        """
        G = orthogonality_graph(S, tol=self.ortho_tol)
        projectors = [S.projector_array(k) for k in range(S.n)]
        rows = independent_set_rows(independent_set_pool(G, self.enumeration_budget))
        seen = {tuple(r) for r in rows}

        for round_ in range(self.max_rounds):
            w, lam, upper, solver_gap = max_min_eigenvalue(projectors, rows)
            raw = [Fraction(float(x)).limit_denominator(10**9) for x in w]
            separation = alpha(G.with_weights(raw), max_n=self.max_n)
            if separation.value <= 1 + Fraction(1, 10**7):
                break
            heaviest = tuple(sorted(separation.witness))
            if heaviest in seen:
                break
            seen.add(heaviest)
            rows.append(list(heaviest))
            logging.debug(f"Weight SDP round {round_ + 1}: independent set of weight {float(separation.value):.6f} added")
        else:
            raise ConvergenceFailure("weight optimization did not converge", {"rounds": self.max_rounds})

        _, _, raw_ratio = self._ratio(S, G, raw)
        weights = raw
        for denominator in SNAP_DENOMINATORS:
            snapped = [Fraction(float(x)).limit_denominator(denominator) for x in w]
            if not any(snapped):
                continue
            _, _, ratio = self._ratio(S, G, snapped)
            if ratio >= raw_ratio - 1e-9:
                weights = snapped
                break

        a, lam_w, ratio = self._ratio(S, G, weights)
        if a > 0:
            weights = [x / a for x in weights]
        quantum_floor = lam_w / float(a) if a > 0 else 0.0
        band = self.inconclusive_band
        if ratio > 1 + band:
            verdict = "sic"
        elif upper < 1 - band:
            verdict = "not_sic"
        else:
            verdict = "inconclusive"
        logging.info(f"Weight optimization: ratio {ratio:.9f}, SDP bound {upper:.9f}, verdict {verdict}")
        return GapReport(
            weights=weights,
            classical=Fraction(1) if a > 0 else Fraction(0),
            quantum_floor=quantum_floor,
            ratio=ratio,
            upper_bound=upper,
            verdict=verdict,
            solver_gap=solver_gap,
            constraints=len(rows),
        )

    def is_sic(self, S: ProjectorSet) -> SICVerdict:
        G = orthogonality_graph(S, tol=self.ortho_tol)
        d = S.dim
        cover = fractional_chromatic(G, max_n=self.max_n, budget=self.enumeration_budget)
        if cover.value <= d:
            # chi_f <= d: a noncontextual model reproduces the maximally mixed state
            return SICVerdict(
                verdict="no",
                refutation=SICRefutation(
                    method="chi_f",
                    d=d,
                    chi_f=cover.value,
                    nc_model=nc_model_from_cover(cover, G.n, d),
                ),
            )

        gap = self.optimize_sic_weights(S)
        if gap.verdict == "sic":
            certificate = self.check_sic_certificate(S, gap.weights)
            if isinstance(certificate, SICCertificate):
                return SICVerdict(verdict="yes", certificate=certificate, gap=gap)
            logging.warning(f"Optimized weights failed the exact re-check: {certificate.reason}")
            return SICVerdict(verdict="inconclusive", gap=gap)
        if gap.verdict == "not_sic":
            return SICVerdict(
                verdict="no",
                refutation=SICRefutation(method="sdp_bound", d=d, upper_bound=gap.upper_bound),
                gap=gap,
            )
        return SICVerdict(verdict="inconclusive", gap=gap)

    def is_critical_sic(self, S: ProjectorSet) -> SICCriticality:
        whole = self.is_sic(S)
        if whole.verdict != "yes":
            verdict = "inconclusive" if whole.verdict == "inconclusive" else "no"
            return SICCriticality(verdict=verdict, whole=whole)

        remnants = [S.delete([v]) for v in range(S.n)]
        if self.jobs > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                verdicts = list(pool.map(self.is_sic, remnants))
        else:
            verdicts = [self.is_sic(r) for r in remnants]

        deletions = [
            DeletionCheck(vertex=v, label=S.labels[v], verdict=result.verdict, refutation=result.refutation)
            for v, result in enumerate(verdicts)
        ]
        if any(c.verdict == "yes" for c in deletions):
            removable = [c.label for c in deletions if c.verdict == "yes"]
            logging.info(f"SI-C set is not critical; still SI-C without {removable}")
            verdict = "no"
        elif any(c.verdict == "inconclusive" for c in deletions):
            verdict = "inconclusive"
        else:
            verdict = "yes"
        return SICCriticality(verdict=verdict, whole=whole, deletions=deletions)

    @staticmethod
    def is_egalitarian(S: ProjectorSet, weights: Sequence, tol: float = EIGEN_TOL) -> EgalitarianResult:
        if len(weights) != S.n:
            raise WeightArityMismatch(S.n, len(weights))
        spectrum = eigenvalues(weighted_sum(S, weights))
        spread = float(spectrum[-1] - spectrum[0])
        egalitarian = spread <= tol
        return EgalitarianResult(
            egalitarian=egalitarian,
            lam=float(np.mean(spectrum)) if egalitarian else None,
            spread=spread,
            spectrum=[float(x) for x in spectrum],
        )

    def state_independence_audit(
        self,
        S: ProjectorSet,
        weights: Sequence,
        states: int = 100,
        seed: int = 2021,
        rank: Optional[int] = None,
    ) -> StateAudit:
        """Noncontextuality left-hand side on random density matrices, against alpha(G, w)."""
        from agents.ineq_engine import build_nc_inequality, quantum_nc_value

        inequality = build_nc_inequality(S, weights)
        rng = np.random.default_rng(seed)
        values = [quantum_nc_value(S, weights, random_density_matrix(S.dim, rng, rank=rank)) for _ in range(states)]
        lowest, highest = min(values), max(values)
        return StateAudit(
            states=states,
            minimum=lowest,
            maximum=highest,
            spread=highest - lowest,
            bound=inequality.bound,
            violated_by_all=lowest > float(inequality.bound),
        )


__all__ = ["SICCertifier", "integer_weights"]

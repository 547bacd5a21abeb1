import asyncio
import hashlib
import importlib
import json
import logging
import os
from typing import Any, Callable, Optional, Type, TypeVar

import yaml
from pydantic import BaseModel

from agents.gadget_forge import GadgetForger
from agents.ineq_engine import (
    build_bell_inequality,
    build_nc_inequality,
    lhv_bound_bruteforce,
    nchv_bound_bruteforce,
    to_nonlocal_game,
    value_pair,
)
from agents.ks_logic import maxmixed_nc_model
from agents.ortho_graph import delete_vertices, has_odd_hole_or_antihole, is_chordal, orthogonality_graph
from agents.round_sampler import RoundSampler
from agents.sic_cert import SICCertifier, integer_weights
from interfaces.certificate import SICVerdict
from interfaces.gadget import ExtensionResult
from interfaces.ks import NCModelCertificate
from interfaces.options import ComponentConfig, PipelineConfig
from interfaces.projector_set import ProjectorSet, ProjectorSetFile
from interfaces.report import (
    CrossCheck,
    InequalityStage,
    InputSummary,
    PipelineReport,
    QuantumValues,
    RemovalCheck,
    SamplingStage,
    ValueStage,
)
from tools.dataset_catalog import projector_set_from_file
from tools.linalg import conjugate_set, maximally_entangled
from utils.errors import TooLarge
from utils.retry import resolve_seed
from utils.timer import Timer

Stage = TypeVar("Stage", bound=BaseModel)

VALUE_TOL = 1e-9
SAMPLING_Z = 3.0
STAGE_FILES = (
    "step1_extension.json",
    "step2_certificate.json",
    "step3_inequalities.json",
    "step3_values.json",
    "step3_sampling.json",
    "report.json",
)


def _build_component(section: ComponentConfig, default_cls: type, **extra) -> Any:
    cls = default_cls
    if section.class_path:
        module_name, cls_name = section.class_path.rsplit(".", 1)
        cls = getattr(importlib.import_module(module_name), cls_name)
    args = {**extra, **section.init_args}
    return cls(**args)


class StageFailed(Exception):
    def __init__(self, stage: str, error: Exception):
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error


class Contextuality2BellPipeline:
    """
    Contextuality witness in, Bell inequality out:
    Step 1 extends the input to a critical SI-C set, Step 2 certifies it and finds weights,
    Step 3 writes the noncontextuality and Bell inequalities and cross-checks their values.
    """

    def __init__(
        self,
        gadget_forger: GadgetForger,
        sic_certifier: SICCertifier,
        sampler: RoundSampler,
        working_dir: str,
        sampling: bool = True,
        ortho_tol: float = 1e-9,
        options_digest: str = "",
    ):
        self.gadget_forger = gadget_forger
        self.sic_certifier = sic_certifier
        self.sampler = sampler
        self.sampling = sampling
        self.ortho_tol = ortho_tol
        self.options_digest = options_digest

        self.working_dir = working_dir
        os.makedirs(self.working_dir, exist_ok=True)

    @classmethod
    def from_options(cls, config: PipelineConfig, seed: Optional[int] = None) -> "Contextuality2BellPipeline":
        seed = resolve_seed(seed)
        seeded = {} if seed is None else {"seed": seed}
        tol = config.tolerances

        gadget_forger = _build_component(
            config.gadget_forge,
            GadgetForger,
            ortho_tol=tol.orthogonality,
            basis_tol=tol.basis,
            jobs=config.jobs,
        )
        sic_certifier = _build_component(config.sic_cert, SICCertifier, ortho_tol=tol.orthogonality, jobs=config.jobs)
        sampler = _build_component(config.sampler, RoundSampler)
        if seed is not None:
            gadget_forger.seed = seed
            sampler.seed = seed

        digest = hashlib.sha256((config.model_dump_json() + json.dumps(seeded)).encode()).hexdigest()[:16]
        logging.info(f"Pipeline configured: working_dir={config.working_dir}, jobs={config.jobs}, sampling={config.sampling}")
        return cls(
            gadget_forger=gadget_forger,
            sic_certifier=sic_certifier,
            sampler=sampler,
            working_dir=config.working_dir,
            sampling=config.sampling,
            ortho_tol=tol.orthogonality,
            options_digest=digest,
        )

    @classmethod
    def init_from_config(cls, config_path: str, seed: Optional[int] = None) -> "Contextuality2BellPipeline":
        with open(config_path, "r", encoding="utf-8") as f:
            config = PipelineConfig.model_validate(yaml.safe_load(f) or {})
        return cls.from_options(config, seed=seed)

    # stage cache

    def _path(self, filename: str) -> str:
        return os.path.join(self.working_dir, filename)

    def _check_fingerprint(self, S: ProjectorSet) -> None:
        expected = {"input": S.fingerprint(), "options": self.options_digest}
        path = self._path("fingerprint.json")
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as f:
                found = json.load(f)
            if found == expected:
                return
            logging.info("Input or options changed since the last run; clearing cached stages")
            for filename in STAGE_FILES:
                if os.path.exists(self._path(filename)):
                    os.remove(self._path(filename))
        with open(path, "w", encoding="utf-8") as f:
            json.dump(expected, f, indent=4)

    def _write(self, filename: str, model: BaseModel) -> None:
        with open(self._path(filename), "w", encoding="utf-8") as f:
            f.write(model.model_dump_json(indent=4))

    async def _stage(self, name: str, filename: str, model: Type[Stage], compute: Callable[[], Stage]) -> Stage:
        path = self._path(filename)
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as f:
                result = model.model_validate_json(f.read())
            logging.info(f"🚀 Loaded {name} from {path}")
            return result
        try:
            with Timer(prefix=f"{name} started at {{start_time}}", postfix=f"{name} ended at {{end_time}}, took {{duration}} seconds."):
                result = await asyncio.to_thread(compute)
        except Exception as e:
            logging.error(f"❌ {name} failed: {e}")
            raise StageFailed(name, e) from e
        self._write(filename, result)
        logging.info(f"✅ {name} completed and saved to {path}")
        return result

    # stages

    def _summary(self, S: ProjectorSet, name: str) -> InputSummary:
        G = orthogonality_graph(S, tol=self.ortho_tol)
        return InputSummary(
            name=name,
            dim=S.dim,
            n=S.n,
            fingerprint=S.fingerprint(),
            edges=len(G.edges),
            is_chordal=is_chordal(G),
            has_odd_hole_or_antihole=has_odd_hole_or_antihole(G),
        )

    def _certify(self, S: ProjectorSet) -> SICVerdict:
        verdict = self.sic_certifier.is_sic(S)
        if verdict.verdict != "yes":
            raise ValueError(f"extended set is not certified SI-C (verdict {verdict.verdict})")
        return verdict

    def _inequalities(self, S: ProjectorSet, verdict: SICVerdict) -> InequalityStage:
        weights = integer_weights(verdict.gap.weights if verdict.gap is not None else verdict.certificate.weights)
        nc = build_nc_inequality(S, weights, tol=self.ortho_tol)
        bell = build_bell_inequality(S, weights, tol=self.ortho_tol)
        skipped = None
        try:
            nchv = nchv_bound_bruteforce(nc)
            lhv = lhv_bound_bruteforce(bell)
        except TooLarge as e:
            logging.warning(f"⚠️ Brute-force bounds skipped: {e}")
            nchv = lhv = None
            skipped = str(e)
        return InequalityStage(
            weights=weights, nc_inequality=nc, bell_inequality=bell, nchv=nchv, lhv=lhv, bounds_skipped=skipped,
        )

    def _values(self, S: ProjectorSet, extension: ExtensionResult, stage: InequalityStage) -> ValueStage:
        nc_value, bell_value = value_pair(S, stage.weights, tol=self.ortho_tol)
        G = orthogonality_graph(S, tol=self.ortho_tol)
        audit = []
        for v in extension.original:
            model = maxmixed_nc_model(delete_vertices(G, [v]), S.dim)
            audit.append(RemovalCheck(vertex=v, label=S.labels[v], maxmixed_feasible=isinstance(model, NCModelCertificate)))
        return ValueStage(
            values=QuantumValues(nc_maxmixed=nc_value, bell_entangled=bell_value),
            game=to_nonlocal_game(stage.bell_inequality, quantum_lhs=bell_value),
            removal_audit=audit,
        )

    def _sample(self, S: ProjectorSet, stage: InequalityStage) -> SamplingStage:
        psi = maximally_entangled(S.dim)
        return SamplingStage(
            sampling=self.sampler.sample_bell_rounds(psi, stage.bell_inequality, S, conjugate_set(S)),
            sequential=self.sampler.sample_sequential_rounds(S, stage.weights, psi),
        )

    # cross-checks

    @staticmethod
    def _bound_checks(stage: InequalityStage) -> list:
        if stage.nchv is None:
            reason = stage.bounds_skipped or "bounds were not computed"
            return [CrossCheck(name="bruteforce_bounds", passed=False, skipped=True, detail=reason)]
        bound = stage.nc_inequality.bound
        return [
            CrossCheck(name="nchv_equals_alpha", passed=stage.nchv.value == bound, detail=f"{stage.nchv.value} vs {bound}"),
            CrossCheck(name="lhv_equals_alpha", passed=stage.lhv.value == bound, detail=f"{stage.lhv.value} vs {bound}"),
        ]

    @staticmethod
    def _value_checks(stage: InequalityStage, values: ValueStage) -> list:
        nc, bell = values.values.nc_maxmixed, values.values.bell_entangled
        bound = float(stage.nc_inequality.bound)
        removable = [c.label for c in values.removal_audit if not c.maxmixed_feasible]
        return [
            CrossCheck(name="value_transfer", passed=abs(nc - bell) <= VALUE_TOL, detail=f"{nc:.12f} vs {bell:.12f}"),
            CrossCheck(name="quantum_violation", passed=nc > bound + VALUE_TOL, detail=f"{nc:.9f} vs bound {bound}"),
            CrossCheck(
                name="removal_audit",
                passed=not removable,
                detail=f"violation survives removing {removable}" if removable else "",
            ),
        ]

    @staticmethod
    def _sampling_checks(values: ValueStage, stage: SamplingStage) -> list:
        target = values.values.bell_entangled
        pairs = [
            ("bell_sampling", stage.sampling.estimate, stage.sampling.stderr),
            ("sequential_nc", stage.sequential.nc_estimate, stage.sequential.nc_stderr),
            ("sequential_bell", stage.sequential.bell_estimate, stage.sequential.bell_stderr),
        ]
        return [
            CrossCheck(name=name, passed=abs(estimate - target) <= SAMPLING_Z * stderr, detail=f"{estimate:.6f} +- {stderr:.6f}")
            for name, estimate, stderr in pairs
        ]

    async def __call__(self, S: ProjectorSet, name: str = "input") -> PipelineReport:
        self._check_fingerprint(S)
        report = PipelineReport(input=self._summary(S, name))

        try:
            extension = await self._stage(
                "extend", "step1_extension.json", ExtensionResult,
                lambda: self.gadget_forger.extend_to_critical_sic(S, certifier=self.sic_certifier),
            )
            report.extension = extension
            S2 = extension.vectors

            verdict = await self._stage("certify", "step2_certificate.json", SICVerdict, lambda: self._certify(S2))
            report.certificate = verdict
            report.gap = verdict.gap

            inequalities = await self._stage(
                "inequalities", "step3_inequalities.json", InequalityStage, lambda: self._inequalities(S2, verdict),
            )
            report.nc_inequality = inequalities.nc_inequality
            report.bell_inequality = inequalities.bell_inequality
            report.nchv = inequalities.nchv
            report.lhv = inequalities.lhv
            report.checks.extend(self._bound_checks(inequalities))

            values = await self._stage(
                "values", "step3_values.json", ValueStage, lambda: self._values(S2, extension, inequalities),
            )
            report.values = values.values
            report.game = values.game
            report.removal_audit = values.removal_audit
            report.checks.extend(self._value_checks(inequalities, values))

            if self.sampling:
                sampled = await self._stage("sampling", "step3_sampling.json", SamplingStage, lambda: self._sample(S2, inequalities))
                report.sampling = sampled.sampling
                report.sequential = sampled.sequential
                report.checks.extend(self._sampling_checks(values, sampled))
        except StageFailed as e:
            report.failed_stage = e.stage
            report.error = f"{type(e.error).__name__}: {e.error}"

        for check in report.checks:
            if check.skipped:
                logging.warning(f"⚠️ Cross-check {check.name} skipped: {check.detail}")
            elif not check.passed:
                logging.warning(f"⚠️ Cross-check {check.name} failed: {check.detail}")
        self._write("report.json", report)
        logging.info(f"✅ Report written to {self._path('report.json')}")
        return report


def run_pipeline(
    input: ProjectorSetFile,
    options: Optional[PipelineConfig] = None,
    name: str = "input",
    seed: Optional[int] = None,
) -> PipelineReport:
    pipeline = Contextuality2BellPipeline.from_options(options or PipelineConfig(), seed=seed)
    return asyncio.run(pipeline(projector_set_from_file(input), name=name))


__all__ = ["Contextuality2BellPipeline", "run_pipeline"]

from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field


class ComponentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    class_path: Optional[str] = Field(default=None, description="Import path of the worker class.")
    init_args: Dict[str, Any] = Field(default_factory=dict)


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    orthogonality: float = 1e-9
    basis: float = 1e-8


class PipelineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gadget_forge: ComponentConfig = Field(default_factory=ComponentConfig)
    sic_cert: ComponentConfig = Field(default_factory=ComponentConfig)
    sampler: ComponentConfig = Field(default_factory=ComponentConfig)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    sampling: bool = Field(default=True, description="Run the Monte Carlo stage.")
    jobs: int = Field(default=1, ge=1)
    log_level: str = "INFO"
    working_dir: str = ".working_dir/default"

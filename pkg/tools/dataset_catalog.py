import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from agents.ortho_graph import johnson_graph, orthogonality_graph
from interfaces.graph import WeightedGraph
from interfaces.projector_set import DatasetMetadata, ProjectorSet, ProjectorSetFile, VectorEntry
from tools.expr_parser import parse_vector, render_scalar
from utils.errors import NotNormalized, UnknownDataset

DATASET_DIR = Path(__file__).resolve().parent.parent / "datasets"
CATALOG = {
    "kcbs5": "kcbs5.json",
    "yuoh13": "yuoh13.json",
    "twin10": "twin10.json",
}
CRITICAL_SIC = ("yuoh13",)
NORM_TOL = 1e-9
JOHNSON_PATTERN = re.compile(r"^johnson\((\d+)\s*,\s*(\d+)\)$")


def projector_set_from_file(spec: ProjectorSetFile) -> ProjectorSet:
    """Parse every entry, apply the declared normalization and check unit norms."""
    vectors, sources = [], []
    for k, entry in enumerate(spec.vectors):
        v = np.asarray(parse_vector(entry.entries, spec.dimension), dtype=complex)
        norm = float(np.linalg.norm(v))
        if spec.normalization == "1/sqrt(sum)":
            if norm == 0:
                raise NotNormalized(norm, k)
            v = v / norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(norm, k)
        vectors.append([complex(z) for z in v])
        sources.append(list(entry.entries))
    return ProjectorSet(
        dim=spec.dimension,
        vectors=vectors,
        labels=[entry.label for entry in spec.vectors],
        sources=sources if spec.normalization == "none" else None,
    )


def read_projector_file(path: Union[str, Path]) -> Tuple[ProjectorSet, ProjectorSetFile]:
    path = Path(path)
    spec = ProjectorSetFile.model_validate_json(path.read_text(encoding="utf-8"))
    S = projector_set_from_file(spec)
    logging.debug(f"Loaded {S.n} vectors in dimension {S.dim} from {path}")
    return S, spec


def load_projector_file(path: Union[str, Path]) -> ProjectorSet:
    return read_projector_file(path)[0]


def to_projector_file(S: ProjectorSet, metadata: Optional[DatasetMetadata] = None) -> ProjectorSetFile:
    """File model for S; entries keep their source expressions when S came from a file."""
    if S.sources is not None:
        rows = S.sources
    else:
        rows = [[render_scalar(z) for z in vector] for vector in S.array]
    edges = [list(e) for e in orthogonality_graph(S).edges]
    return ProjectorSetFile(
        dimension=S.dim,
        normalization="none",
        vectors=[VectorEntry(label=label, entries=row) for label, row in zip(S.labels, rows)],
        metadata=metadata or DatasetMetadata(),
        golden_edges=edges,
    )


def save_projector_file(S: ProjectorSet, path: Union[str, Path], metadata: Optional[DatasetMetadata] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_projector_file(S, metadata).model_dump_json(indent=2), encoding="utf-8")
    return path


def dataset_file(name: str) -> ProjectorSetFile:
    if name not in CATALOG:
        raise UnknownDataset(name, list(CATALOG))
    return read_projector_file(DATASET_DIR / CATALOG[name])[1]


def load_dataset(name: str) -> ProjectorSet:
    if name not in CATALOG:
        raise UnknownDataset(name, list(CATALOG))
    return load_projector_file(DATASET_DIR / CATALOG[name])


def load_graph(name: str) -> WeightedGraph:
    """A catalog set's orthogonality graph, or a graph-only generator such as johnson(7,2)."""
    match = JOHNSON_PATTERN.match(name.strip())
    if match:
        return johnson_graph(int(match.group(1)), int(match.group(2)))
    if name in CATALOG:
        return orthogonality_graph(load_dataset(name))
    raise UnknownDataset(name, list(CATALOG) + ["johnson(n,k)"])


def resolve_input(source: str) -> ProjectorSet:
    """A catalog name or a path to a projector-set file."""
    if source in CATALOG:
        return load_dataset(source)
    path = Path(source)
    if path.exists():
        return load_projector_file(path)
    raise UnknownDataset(source, list(CATALOG))


def list_datasets() -> List[Dict[str, object]]:
    rows = []
    for name in CATALOG:
        spec = dataset_file(name)
        rows.append({"name": name, "dimension": spec.dimension, "vectors": len(spec.vectors), "source": spec.metadata.source})
    return rows


def critical_sic_catalog() -> Dict[str, ProjectorSet]:
    return {name: load_dataset(name) for name in CRITICAL_SIC}


__all__ = [
    "CATALOG",
    "critical_sic_catalog",
    "dataset_file",
    "list_datasets",
    "load_dataset",
    "load_graph",
    "load_projector_file",
    "projector_set_from_file",
    "read_projector_file",
    "resolve_input",
    "save_projector_file",
    "to_projector_file",
]

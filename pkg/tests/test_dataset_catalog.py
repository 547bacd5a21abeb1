import json

import numpy as np
import pytest
from pydantic import ValidationError

from interfaces.projector_set import DatasetMetadata, ProjectorSetFile
from tools.dataset_catalog import (
    critical_sic_catalog,
    list_datasets,
    load_dataset,
    load_graph,
    load_projector_file,
    projector_set_from_file,
    resolve_input,
    save_projector_file,
)
from utils.errors import NotNormalized, UnknownDataset


def test_catalog_contents():
    rows = {row["name"]: row for row in list_datasets()}
    assert set(rows) == {"kcbs5", "yuoh13", "twin10"}
    assert (rows["kcbs5"]["dimension"], rows["kcbs5"]["vectors"]) == (3, 5)
    assert (rows["yuoh13"]["dimension"], rows["yuoh13"]["vectors"]) == (3, 13)
    assert (rows["twin10"]["dimension"], rows["twin10"]["vectors"]) == (6, 10)
    assert list(critical_sic_catalog()) == ["yuoh13"]


def test_yuoh_is_normalized_on_load(yuoh):
    assert np.allclose(np.linalg.norm(yuoh.array, axis=1), 1)
    assert np.allclose(yuoh.array[12], np.array([1, 1, -1]) / np.sqrt(3))
    assert yuoh.sources is None


def test_twin_keeps_its_expressions(twin):
    assert twin.sources is not None
    assert np.allclose(twin.array[9], [0, 1, 0, 0, 0, 0])
    assert twin.sources[9] == ["0", "1", "0", "0", "0", "0"]


@pytest.mark.parametrize("name", ["kcbs5", "yuoh13", "twin10"])
def test_save_and_load(tmp_path, name):
    S = load_dataset(name)
    path = save_projector_file(S, tmp_path / f"{name}.json", DatasetMetadata(source="copy"))
    again = load_projector_file(path)
    assert np.array_equal(again.array, S.array)
    assert again.labels == S.labels
    assert json.loads(path.read_text())["metadata"]["source"] == "copy"


def test_unknown_dataset():
    with pytest.raises(UnknownDataset):
        load_dataset("nope")
    with pytest.raises(KeyError):
        resolve_input("nope")
    with pytest.raises(UnknownDataset):
        load_graph("petersen")


def test_graph_generators():
    assert load_graph("johnson(5,2)").n == 10
    assert load_graph("johnson(7, 2)").n == 21
    assert len(load_graph("kcbs5").edges) == 5


def test_unnormalized_entries_are_rejected():
    spec = ProjectorSetFile(dimension=3, vectors=[{"label": "a", "entries": ["1", "1", "0"]}])
    with pytest.raises(NotNormalized):
        projector_set_from_file(spec)
    spec = spec.model_copy(update={"normalization": "1/sqrt(sum)"})
    assert np.allclose(projector_set_from_file(spec).array[0], np.array([1, 1, 0]) / np.sqrt(2))


def test_file_model_validation():
    with pytest.raises(ValidationError):
        ProjectorSetFile(dimension=3, normalization="l2", vectors=[])
    with pytest.raises(ValidationError):
        ProjectorSetFile(schema_version=2, dimension=3, vectors=[])


def test_resolve_input_reads_paths(tmp_path, kcbs):
    path = save_projector_file(kcbs, tmp_path / "pentagon.json")
    assert resolve_input(str(path)).n == 5

"""JSON documents for networks, datasets, losses, test instances and abs-linear forms.

Numbers are written with Python's shortest round-trip float representation,
so reading a written document gives back the same doubles.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
from collections.abc import Mapping
from typing import Any, Callable, TypeVar

import numpy as np

from ._errors import DimensionError, SchemaError
from ._hardness import AbsNormalForm, PltInstance
from ._model import Dataset, LossModel, Network
from ._robust import ConstantBundle, CurvatureConstants

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _field(document: Mapping[str, Any], name: str, what: str) -> Any:
    if name not in document:
        raise SchemaError(f"{what} document is missing the '{name}' field.")
    return document[name]


def _number(value: Any, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{what} must be a number, got {value!r}.")
    return float(value)


def _numbers(value: Any, what: str) -> list[float]:
    if not isinstance(value, list):
        raise SchemaError(f"{what} must be a list of numbers.")
    return [_number(item, what) for item in value]


def _matrix(value: Any, what: str) -> list[list[float]]:
    if not isinstance(value, list):
        raise SchemaError(f"{what} must be a list of rows.")
    return [_numbers(row, what) for row in value]


def _object(document: Any, what: str) -> Mapping[str, Any]:
    if not isinstance(document, dict):
        raise SchemaError(f"{what} document must be a JSON object.")
    return document


def _build(builder: Callable[[], T], what: str) -> T:
    try:
        return builder()
    except (DimensionError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"Invalid {what} document: {exc}") from exc


def network_to_dict(net: Network) -> dict[str, Any]:
    """Document of a network; pinned ties are written only when present.

    Examples:
        >>> network_to_dict(Network.create([(1.0, [0.5, -2.0])]))
        {'units': [{'u': 1.0, 'w': [0.5, -2.0]}]}
    """
    units = []
    for k, (u_k, w_k) in enumerate(net.units):
        unit: dict[str, Any] = {"u": u_k, "w": [float(value) for value in w_k]}
        if net.ties is not None:
            unit["ties"] = sorted(net.ties[k])
        units.append(unit)
    return {"units": units}


def network_from_dict(document: Any) -> Network:
    """Read a network document."""
    units = _field(_object(document, "Network"), "units", "Network")
    if not isinstance(units, list) or not units:
        raise SchemaError("Network 'units' must be a nonempty list.")
    outer, inner, ties = [], [], []
    for unit in units:
        entry = _object(unit, "Network unit")
        outer.append(_number(_field(entry, "u", "Network unit"), "Outer weight"))
        inner.append(_numbers(_field(entry, "w", "Network unit"), "Inner weights"))
        pinned = entry.get("ties")
        if pinned is not None and (
            not isinstance(pinned, list) or not all(isinstance(i, int) for i in pinned)
        ):
            raise SchemaError("Network unit 'ties' must be a list of sample indices.")
        ties.append(pinned)
    if len({len(row) for row in inner}) != 1:
        raise SchemaError("All inner weight vectors must have the same length.")
    if any(pinned is None for pinned in ties) and any(pinned is not None for pinned in ties):
        raise SchemaError("Either every network unit or none carries 'ties'.")
    pinned_ties = None if ties[0] is None else ties
    return _build(lambda: Network.from_arrays(outer, inner, pinned_ties), "network")


def dataset_to_dict(data: Dataset) -> dict[str, Any]:
    """Document of a dataset with the points as given before any bias coordinate."""
    return {
        "points": [[float(value) for value in row] for row in data.raw_points()],
        "labels": [float(value) for value in data.labels],
        "bias_appended": data.bias_appended,
    }


def dataset_from_dict(document: Any) -> Dataset:
    """Read a dataset document; `bias_appended` adds the constant coordinate on load."""
    entry = _object(document, "Dataset")
    points = _matrix(_field(entry, "points", "Dataset"), "Dataset points")
    labels = _numbers(_field(entry, "labels", "Dataset"), "Dataset labels")
    bias = entry.get("bias_appended", False)
    if not isinstance(bias, bool):
        raise SchemaError("Dataset 'bias_appended' must be a boolean.")
    if not points or len({len(row) for row in points}) != 1:
        raise SchemaError("Dataset points must be a nonempty list of rows of equal length.")
    return _build(lambda: Dataset.create(points, labels, append_bias=bias), "dataset")


def loss_to_dict(loss: LossModel) -> dict[str, Any]:
    """Document of a built-in loss with its Lipschitz constants."""
    if loss.kind == "custom":
        raise SchemaError("Custom losses cannot be written to JSON.")
    document: dict[str, Any] = {"kind": loss.kind}
    if math.isfinite(loss.lip_value):
        document["l_lip"] = loss.lip_value
    document["lg_lip"] = loss.lip_grad
    return document


def loss_from_dict(document: Any) -> LossModel:
    """Read a loss document."""
    entry = _object(document, "Loss")
    kind = _field(entry, "kind", "Loss")
    l_lip = entry.get("l_lip")
    lg_lip = entry.get("lg_lip")
    return _build(
        lambda: LossModel.from_kind(
            kind,
            None if l_lip is None else _number(l_lip, "Loss 'l_lip'"),
            None if lg_lip is None else _number(lg_lip, "Loss 'lg_lip'"),
        ),
        "loss",
    )


def plt_to_dict(inst: PltInstance) -> dict[str, Any]:
    """Document of a piecewise linear test instance."""
    return {"m": inst.num_vars, "vectors": inst.vectors.tolist()}


def plt_from_dict(document: Any) -> PltInstance:
    """Read a piecewise linear test document."""
    entry = _object(document, "PLT")
    num_vars = _field(entry, "m", "PLT")
    if isinstance(num_vars, bool) or not isinstance(num_vars, int):
        raise SchemaError("PLT 'm' must be an integer.")
    vectors = _matrix(_field(entry, "vectors", "PLT"), "PLT vectors")
    return _build(lambda: PltInstance.create(num_vars, np.array(vectors)), "PLT")


def _finite_or_text(value: float) -> Any:
    return value if math.isfinite(value) else str(value)


def _curvature_to_dict(curvature: CurvatureConstants) -> dict[str, float]:
    return {
        "c1": curvature.c1,
        "c2": curvature.c2,
        "c3": curvature.c3,
        "c4": curvature.c4,
        "c5": curvature.c5,
        "c_mu": curvature.mu,
    }


def constants_to_dict(bundle: ConstantBundle) -> dict[str, Any]:
    """Document of a constant bundle; an unbounded loss Lipschitz constant is written as "inf".

    Examples:
        >>> from stattest import constants
        >>> data = Dataset.create([[1.0]], [0.0])
        >>> document = constants_to_dict(constants(data, LossModel.square(), 1.0, 1))
        >>> document["lip_value"], document["clarke"]["c_mu"], document["c_u"]
        ('inf', 9.0, 5.0)
    """
    document: dict[str, Any] = {
        "radius": bundle.radius,
        "bound": bundle.bound,
        "lip_value": _finite_or_text(bundle.lip_value),
        "lip_grad": bundle.lip_grad,
        "n_samples": bundle.n_samples,
        "n_units": bundle.n_units,
        "clarke": _curvature_to_dict(bundle.clarke),
        "frechet": _curvature_to_dict(bundle.frechet),
        "c_u": bundle.c_u,
        "separation": None,
    }
    if bundle.separation is not None:
        document["separation"] = dataclasses.asdict(bundle.separation)
    return document


def anf_to_dict(anf: AbsNormalForm) -> dict[str, Any]:
    """Document of an abs-linear form."""
    return {"a": anf.a.tolist(), "b": anf.b.tolist(), "Z": anf.Z.tolist(), "L": anf.L.tolist()}


def anf_from_dict(document: Any) -> AbsNormalForm:
    """Read an abs-linear form document."""
    entry = _object(document, "ANF")
    a = _numbers(_field(entry, "a", "ANF"), "ANF 'a'")
    b = _numbers(_field(entry, "b", "ANF"), "ANF 'b'")
    z_rows = _matrix(_field(entry, "Z", "ANF"), "ANF 'Z'")
    l_rows = _matrix(_field(entry, "L", "ANF"), "ANF 'L'")
    return _build(lambda: AbsNormalForm.create(a, b, z_rows, l_rows), "ANF")


def read_json(path: str) -> Any:
    """Parse a JSON file; `OSError` propagates, malformed JSON raises `SchemaError`."""
    with open(path, encoding="utf-8") as file:
        try:
            return json.load(file)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"File '{path}' is not valid JSON: {exc}") from exc


def write_json(path: str, document: Any) -> None:
    """Write a JSON document followed by a newline."""
    logger.debug("Writing %s", path)
    with open(path, "w", encoding="utf-8") as file:
        json.dump(document, file, indent=2)
        file.write("\n")


def load_network(path: str) -> Network:
    """Read a network file."""
    return network_from_dict(read_json(path))


def load_dataset(path: str) -> Dataset:
    """Read a dataset file."""
    return dataset_from_dict(read_json(path))


def load_loss(path: str) -> LossModel:
    """Read a loss file."""
    return loss_from_dict(read_json(path))


def load_plt(path: str) -> PltInstance:
    """Read a piecewise linear test file."""
    return plt_from_dict(read_json(path))


def load_anf(path: str) -> AbsNormalForm:
    """Read an abs-linear form file."""
    return anf_from_dict(read_json(path))

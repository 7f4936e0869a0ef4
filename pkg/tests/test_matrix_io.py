import json

import numpy as np
import pytest

from conftest import random_matrix
from meantransform.matrix_io import dumps_matrix, load_matrix, matrix_from_json, matrix_to_json
from meantransform.numerics import InputError


def test_round_trip(tmp_path):
    T = random_matrix(1, 4)
    path = tmp_path / "t.json"
    path.write_text(dumps_matrix(T))
    np.testing.assert_array_equal(load_matrix(path), T)


def test_layout_is_row_major_pairs():
    obj = matrix_to_json(np.array([[1, 2j], [3, -4 + 5j]]))
    assert obj == {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [-4.0, 5.0]]}


def test_negative_zero_is_normalised():
    obj = matrix_to_json(np.array([[-0.0 - 0.0j]]))
    assert json.dumps(obj) == '{"rows": 1, "cols": 1, "data": [[0.0, 0.0]]}'


@pytest.mark.parametrize(
    "obj",
    [
        {"rows": 2, "cols": 2, "data": [[1, 0]] * 3},
        {"rows": 2, "cols": 2, "data": [[1, 0]] * 5},
        {"rows": 1, "cols": 1, "data": [[1]]},
        {"rows": 1, "cols": 1, "data": [["1", 0]]},
        {"rows": 1, "cols": 1, "data": [[float("nan"), 0]]},
        {"rows": 1, "cols": 1, "data": [[float("inf"), 0]]},
        {"rows": 0, "cols": 1, "data": []},
        {"rows": True, "cols": 1, "data": [[0, 0]]},
        {"cols": 1, "data": [[0, 0]]},
        [[1, 0]],
    ],
)
def test_rejects_malformed(obj):
    with pytest.raises(InputError):
        matrix_from_json(obj)


def test_rejects_nan_literal_in_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"rows": 1, "cols": 1, "data": [[NaN, 0]]}')
    with pytest.raises(InputError):
        load_matrix(path)


def test_rejects_invalid_json_and_missing_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{rows: 1")
    with pytest.raises(InputError):
        load_matrix(path)
    with pytest.raises(InputError):
        load_matrix(tmp_path / "missing.json")

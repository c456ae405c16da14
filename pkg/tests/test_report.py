import json
import math

from graftlab.report import dumps, format_float, jsonable, write_csv


class TestFloatFormat:
    def test_seventeen_digits_round_trip(self):
        for x in (0.1, 1.0 / 3.0, math.pi, 1e-300, 123456.789):
            assert float(format_float(x)) == x

    def test_integral_floats_stay_recognizable(self):
        assert format_float(2.0) == "2.0"
        assert format_float(-5.0) == "-5.0"

    def test_non_finite(self):
        assert format_float(math.inf) == "Infinity"
        assert format_float(-math.inf) == "-Infinity"
        assert format_float(math.nan) == "NaN"


class TestDumps:
    def test_sorted_keys_and_nesting(self):
        text = dumps({"b": 1, "a": {"z": [1.5, True, None], "y": "s"}})
        assert text.index('"a"') < text.index('"b"')
        parsed = json.loads(text)
        assert parsed == {"b": 1, "a": {"z": [1.5, True, None], "y": "s"}}

    def test_deterministic(self):
        obj = {"x": [0.1, 0.2], "w": {"k": 3}}
        assert dumps(obj) == dumps(obj)

    def test_dataclasses_and_numpy(self):
        import numpy as np
        from dataclasses import dataclass

        @dataclass
        class Row:
            a: float
            flag: bool

        payload = jsonable({"row": Row(1.5, True), "arr": np.array([1.0, 2.0]), "b": np.bool_(True)})
        assert payload == {"row": {"a": 1.5, "flag": True}, "arr": [1.0, 2.0], "b": True}


class TestCsv:
    def test_cells(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(path, ["a", "b", "c"], [[1, 0.5, True], [2, 1.0 / 3.0, False]])
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "a,b,c"
        assert lines[1] == "1,0.5,true"
        assert float(lines[2].split(",")[1]) == 1.0 / 3.0

import json

import pytest

from posetcat import cli


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def diamond_file(tmp_path):
    path = tmp_path / "diamond.json"
    path.write_text(json.dumps({"size": 4, "relation": [[0, 1], [0, 2], [1, 3], [2, 3]]}))
    return str(path)


def arrow_file(tmp_path):
    path = tmp_path / "arrow.json"
    path.write_text(json.dumps({"size": 2, "relation": [[0, 1]]}))
    return str(path)


class TestAuditIdempotents:
    def test_dim1_exact_output(self, capsys):
        code, out, _ = run(capsys, ["audit-idempotents", "--dim", "1"])
        assert code == 0
        data = json.loads(out)
        assert data["endos"] == 3 and data["idempotents"] == 3
        assert data["violations"] == []

    def test_dim2(self, capsys):
        code, out, _ = run(capsys, ["audit-idempotents", "--dim", "2"])
        assert code == 0
        assert json.loads(out)["endos"] == 36

    def test_sampled_mode_reports_seed(self, capsys):
        code, out, _ = run(
            capsys,
            ["audit-idempotents", "--dim", "3", "--mode", "sampled",
             "--samples", "200", "--seed", "5"],
        )
        assert code == 0
        data = json.loads(out)
        assert data["seed"] == 5 and data["samples"] == 200

    def test_dim_too_large_exits_2(self, capsys):
        code, _, err = run(capsys, ["audit-idempotents", "--dim", "7"])
        assert code == 2 and "error" in err


class TestCertify:
    def test_diamond(self, capsys, tmp_path):
        code, out, _ = run(capsys, ["certify", "--input", diamond_file(tmp_path)])
        assert code == 0
        data = json.loads(out)
        assert data["cube_dim"] == 4
        assert data["section"] == [1, 3, 5, 15]
        for c, v in enumerate(data["section"]):
            assert data["retraction"][v] == c

    def test_incomplete_input_exits_2(self, capsys, tmp_path):
        path = tmp_path / "vee.json"
        path.write_text(json.dumps({"size": 3, "relation": [[0, 2], [1, 2]]}))
        code, _, err = run(capsys, ["certify", "--input", str(path)])
        assert code == 2 and "error" in err


class TestTriangulate:
    def test_count_format(self, capsys):
        code, out, _ = run(
            capsys,
            ["triangulate", "--cube-dim", "2", "--trunc", "3", "--format", "count"],
        )
        assert code == 0
        assert json.loads(out) == [4, 9, 16, 25]

    def test_json_format_round_trips(self, capsys):
        from posetcat import presheaf as ps

        code, out, _ = run(
            capsys, ["triangulate", "--cube-dim", "1", "--trunc", "2"]
        )
        assert code == 0
        X = ps.presheaf_from_json(json.loads(out))
        assert X.cells == (2, 3, 4)


class TestKan:
    def test_matches_oracle(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, ["kan", "--simplex", "1", "--target", diamond_file(tmp_path)]
        )
        assert code == 0
        data = json.loads(out)
        assert data["components"] == data["hom_oracle"] == 6
        assert data["match"] is True

    def test_explicit_truncation(self, capsys, tmp_path):
        code, out, _ = run(
            capsys,
            ["kan", "--simplex", "2", "--target", arrow_file(tmp_path), "--trunc", "3"],
        )
        assert code == 0
        data = json.loads(out)
        assert data["components"] == 6 and data["truncation"] == 3


class TestHorn:
    def test_counts(self, capsys):
        code, out, _ = run(
            capsys, ["horn", "--dim", "2", "--faces", "1,2", "--format", "count"]
        )
        assert code == 0
        data = json.loads(out)
        assert data["cells"] == [3, 5, 7] and data["target_cells"] == [3, 6, 10]

    def test_bad_faces_exit_2(self, capsys):
        code, _, err = run(
            capsys, ["horn", "--dim", "2", "--faces", "0,1,2", "--format", "count"]
        )
        assert code == 2 and "error" in err


class TestEnumerate:
    def test_poset_count(self, capsys):
        code, out, _ = run(
            capsys, ["enumerate", "--kind", "posets", "--size", "3", "--format", "count"]
        )
        assert code == 0 and json.loads(out)["count"] == 5

    def test_lattice_items_round_trip(self, capsys):
        from posetcat.poset import poset_from_json, is_complete

        code, out, _ = run(
            capsys, ["enumerate", "--kind", "lattices", "--size", "4"]
        )
        assert code == 0
        data = json.loads(out)
        assert data["count"] == 2
        for item in data["items"]:
            assert is_complete(poset_from_json(item))

    def test_maps_count(self, capsys, tmp_path):
        arrow = arrow_file(tmp_path)
        code, out, _ = run(
            capsys,
            ["enumerate", "--kind", "maps", "--dom", arrow, "--cod", arrow,
             "--format", "count"],
        )
        assert code == 0 and json.loads(out)["count"] == 3

    def test_maps_require_endpoints(self, capsys):
        code, _, err = run(capsys, ["enumerate", "--kind", "maps"])
        assert code == 2 and err


class TestVerifyAllFlags:
    def test_bad_dim_exits_2(self, capsys):
        code, _, err = run(capsys, ["verify-all", "--max-dim", "99"])
        assert code == 2 and "max-dim" in err

    def test_bad_poset_bound_exits_2(self, capsys):
        code, _, err = run(capsys, ["verify-all", "--max-poset", "9"])
        assert code == 2

    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["no-such-command"])
        assert exc.value.code == 2

    def test_missing_input_file_exits_2(self, capsys):
        code, _, err = run(capsys, ["certify", "--input", "/nonexistent.json"])
        assert code == 2 and "input error" in err

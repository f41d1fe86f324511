import json

from toric_density import cli


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, out


class TestAnalyze:
    def test_hypersurface_11(self, capsys):
        code, out = run_cli(["analyze", "--hypersurface", "1,1"], capsys)
        assert code == 0
        data = json.loads(out)
        assert data["iota"] == 1 and data["rho"] == 1
        assert data["c"] == ["1/2", "1/2"]
        assert data["compact"] is True

    def test_projective_torus(self, capsys):
        code, out = run_cli(["analyze", "--projective-torus", "2"], capsys)
        data = json.loads(out)
        assert code == 0 and data["iota"] == 3 and data["c"] == [1, 1, 1]

    def test_matrix_input(self, capsys):
        code, out = run_cli(["analyze", "--matrix", "1,1,-2"], capsys)
        data = json.loads(out)
        assert code == 0 and data["iota"] == 1 and data["rho"] == 1

    def test_bad_input(self, capsys):
        code = cli.main(["analyze", "--matrix", "1,1,-1"])
        assert code == cli.EXIT_BAD_INPUT

    def test_no_problem(self, capsys):
        assert cli.main(["analyze"]) == cli.EXIT_BAD_INPUT


class TestGenerators:
    def test_points(self, capsys):
        code, out = run_cli(["generators", "--hypersurface", "1,1"], capsys)
        data = json.loads(out)
        assert code == 0
        assert sorted(map(tuple, data["points"])) == [(0, 2), (2, 0)]
        assert data["stabilized"] is True


class TestCount:
    def test_sup_mode(self, capsys):
        code, out = run_cli(["count", "--projective-torus", "1", "--sup-norm",
                             "--t", "5,10"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["results"][0]["count"] == 38

    def test_polynomial_mode(self, capsys):
        code, out = run_cli(["count", "--hypersurface", "1,1", "--polynomial",
                             "X1^2+X2^2+X3^2", "--t", "10"], capsys)
        data = json.loads(out)
        assert code == 0 and data["results"][0]["count"] == 10

    def test_csv(self, capsys, tmp_path):
        csv_path = tmp_path / "series.csv"
        code, _ = run_cli(["count", "--projective-torus", "1", "--sup-norm",
                           "--t", "5", "--csv", str(csv_path)], capsys)
        assert code == 0
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "t,N,predicted,ratio"
        assert lines[1].startswith("5.0,38")


class TestConstants:
    def test_sargos_only(self, capsys):
        code, out = run_cli(["constants", "--hypersurface", "1,1",
                             "--polynomial", "X1^2+X2^2", "--sargos-only"], capsys)
        data = json.loads(out)
        assert code == 0
        import math
        assert abs(data["sargos"]["value"] - math.pi / 4) < 1e-8

    def test_full_assembly(self, capsys):
        code, out = run_cli(["constants", "--hypersurface", "1,1",
                             "--polynomial", "X1^2+X2^2+X3^2",
                             "--prime-cutoff", "20000"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["iota"] == 1 and data["rho"] == 1
        assert abs(data["leading_constant"] - 1.02481333) < 1e-4
        assert data["flags"] == {"compact": True, "dimension_ok": True,
                                 "stabilized": True}


class TestVerify:
    def test_projective_torus_sup(self, capsys):
        code, out = run_cli(["verify", "--projective-torus", "1", "--sup-norm",
                             "--t", "2000", "--band", "0.02"], capsys)
        data = json.loads(out)
        assert code == 0 and data["ok"] is True

    def test_hypersurface_polynomial(self, capsys):
        code, out = run_cli(["verify", "--hypersurface", "1,1", "--polynomial",
                             "X1^2+X2^2+X3^2", "--t", "600",
                             "--prime-cutoff", "20000", "--band", "0.05"], capsys)
        data = json.loads(out)
        assert code == 0 and data["ok"] is True


class TestZeta:
    def test_samples(self, capsys):
        code, out = run_cli(["zeta", "--hypersurface", "1,1", "--polynomial",
                             "X1^2+X2^2+X3^2", "--s", "1.5,1.3",
                             "--budget", "1000000"], capsys)
        data = json.loads(out)
        assert code == 0 and len(data["samples"]) == 2
        assert data["samples"][0]["s"] == 1.5
        assert abs(data["samples"][0]["probe"] - 1.0248) < 0.1


class TestProblemFiles:
    def test_round_trip(self, tmp_path, capsys):
        from toric_density.cli import dump_problem, load_problem_file
        from toric_density.model import validate_toric_matrix
        from toric_density.polyparse import parse_polynomial
        poly = parse_polynomial("X1^2 + 3/2*X2^2 + X3^1/2*X1^3/2")
        prob = validate_toric_matrix([(1, 1, -2)])
        data = dump_problem(prob, None, poly)
        path = tmp_path / "problem.json"
        path.write_text(json.dumps(data))
        prob2, hyper2, poly2 = load_problem_file(str(path))
        assert prob2 == prob and hyper2 is None and poly2 == poly
        assert dump_problem(prob2, hyper2, poly2) == data

    def test_hypersurface_file(self, tmp_path, capsys):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"hypersurface": [1, 1]}))
        code, out = run_cli(["analyze", "--problem", str(path)], capsys)
        assert code == 0 and json.loads(out)["iota"] == 1


class TestDeterminism:
    def test_reports_identical_across_threads(self, capsys, monkeypatch):
        outputs = []
        for threads in ("1", "4", "8"):
            monkeypatch.setenv("MANIN_TORIC_THREADS", threads)
            code, out = run_cli(["verify", "--hypersurface", "1,1",
                                 "--polynomial", "X1^2+X2^2+X3^2",
                                 "--t", "400", "--prime-cutoff", "10000"], capsys)
            assert code == 0
            outputs.append(out)
        assert outputs[0] == outputs[1] == outputs[2]

    def test_count_thread_flag(self, capsys):
        results = []
        for threads in ("1", "4"):
            code, out = run_cli(["count", "--projective-torus", "1", "--sup-norm",
                                 "--t", "3000", "--threads", threads], capsys)
            assert code == 0
            results.append(json.loads(out)["results"][0]["count"])
        assert results[0] == results[1]

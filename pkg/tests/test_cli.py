import numpy as np

from dmaplab.cli import main
from dmaplab.io import TABLE_TAG, load_cloud


def test_rates_writes_table(tmp_path, capsys):
    assert main(["rates", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "tangent_rate" in out
    lines = (tmp_path / "rates.csv").read_text().splitlines()
    assert lines[0] == TABLE_TAG
    assert any(line.startswith("b_star,48") for line in lines)


def test_sample_round_trip(tmp_path):
    assert main(["sample", "--n", "25", "--seed", "9",
                 "--out", str(tmp_path)]) == 0
    cloud = load_cloud(tmp_path / "cloud.csv")
    assert cloud.n == 25
    assert np.allclose(np.linalg.norm(cloud.points, axis=1), 1.0,
                       atol=1e-12)


def test_laplacian_and_eigen(tmp_path, capsys):
    assert main(["laplacian", "--n", "80", "--seed", "1",
                 "--out", str(tmp_path)]) == 0
    assert (tmp_path / "affinity.csv").exists()
    assert main(["eigen", "--n", "120", "--seed", "1",
                 "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "eigenvalues" in out
    assert (tmp_path / "eigen.csv").exists()


def test_embed_writes_coordinates(tmp_path):
    assert main(["embed", "--n", "100", "--seed", "2",
                 "--out", str(tmp_path)]) == 0
    emb = load_cloud(tmp_path / "embedding.csv")
    assert emb.points.shape == (100, 8)


def test_bounds_expressions(tmp_path, capsys):
    assert main(["bounds", "--out", str(tmp_path),
                 "croke_constant:d=2",
                 "star_check:tau_l=0.646924,t0=0.25,eps=0.05,d=2,kappa=0"
                 ]) == 0
    out = capsys.readouterr().out
    assert "0.318309886" in out
    assert "star_check.holds" in out
    text = (tmp_path / "bounds.csv").read_text()
    assert "croke_constant,d=2,0.31830988618379" in text


def test_bounds_rejects_unknown_evaluator(tmp_path, capsys):
    assert main(["bounds", "--out", str(tmp_path), "nonsense:d=2"]) == 2
    assert "unknown bound evaluator" in capsys.readouterr().err


def test_bounds_rejects_missing_argument(tmp_path, capsys):
    assert main(["bounds", "--out", str(tmp_path), "croke_constant:"]) == 2
    assert "missing argument" in capsys.readouterr().err


def test_pipeline_single_run(tmp_path, capsys):
    assert main(["pipeline", "--n", "300", "--seed", "1",
                 "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "runs.csv").read_text().splitlines()
    assert len(lines) == 3
    assert ",ok," in lines[2]


def test_tangent_command(tmp_path, capsys):
    assert main(["tangent", "--n", "250", "--seed", "1",
                 "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "median" in out
    assert (tmp_path / "tangents.csv").exists()


def test_config_errors_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("who_knows = 1\n")
    assert main(["sample", "--config", str(cfg), "--n", "10"]) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_config_grid_reaches_study(tmp_path, capsys):
    cfg = tmp_path / "tiny.cfg"
    cfg.write_text("n_grid = 150,250,400\nseeds = 1,2\n")
    assert main(["pipeline", "--config", str(cfg),
                 "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "theoretical" in out
    assert (tmp_path / "study.csv").exists()
    runs = (tmp_path / "runs.csv").read_text().splitlines()
    assert len(runs) == 2 + 6                 # 3 sizes x 2 seeds

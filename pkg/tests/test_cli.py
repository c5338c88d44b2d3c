import json

import pytest

from pulsemotion import write_trajectories
from pulsemotion.cli import main
from synthetic import synthetic_trajectories


@pytest.fixture(scope="module")
def traj_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("traj") / "subject7.csv"
    write_trajectories(synthetic_trajectories(0, duration=30.0), path)
    return path


class TestEstimate:
    def test_success_prints_bpm(self, traj_file, tmp_path, capsys):
        out = tmp_path / "est.csv"
        rc = main(["estimate", str(traj_file), "--method", "jade",
                   "--out", str(out)])
        assert rc == 0
        printed = capsys.readouterr().out
        assert "bpm=" in printed
        text = out.read_text().splitlines()
        assert text[0].startswith("subject,method,bpm")
        assert text[1].startswith("subject7,jade,")
        assert (tmp_path / "effective_config.json").exists()

    def test_missing_file_names_path(self, capsys):
        rc = main(["estimate", "/definitely/not/here.csv"])
        assert rc == 2
        assert "not/here.csv" in capsys.readouterr().err

    def test_config_violation_names_key(self, traj_file, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"band_high_hz": 500.0}))
        rc = main(["estimate", str(traj_file), "--config", str(cfg)])
        assert rc == 2
        err = capsys.readouterr().err
        assert "Nyquist" in err or "band_high_hz" in err

    def test_unknown_config_key_named(self, traj_file, tmp_path, capsys):
        rc = main(["estimate", str(traj_file), "--set", "bogus_key=1"])
        assert rc == 2
        assert "bogus_key" in capsys.readouterr().err

    def test_short_recording_is_data_error(self, tmp_path, capsys):
        short = tmp_path / "short.csv"
        write_trajectories(synthetic_trajectories(1, duration=10.0), short)
        assert main(["estimate", str(short)]) == 2  # anchor does not fit

    def test_estimation_failure_exit_code(self, traj_file, capsys):
        # a near-zero threshold quantile leaves too few peaks on every
        # component, so selection fails
        rc = main(["estimate", str(traj_file), "--set",
                   "peak_threshold_quantile=0.001"])
        assert rc == 3
        assert "estimation failed" in capsys.readouterr().err

    def test_set_overrides(self, traj_file, capsys):
        rc = main(["estimate", str(traj_file), "--method", "jade", "--set",
                   "pattern_anchors_seconds=[2.0, 8.0, 14.0]"])
        assert rc == 0


class TestEvaluate:
    def test_writes_reports_and_rezuns_identically(self, mini_dataset,
                                                   tmp_path, capsys):
        out1 = tmp_path / "r1"
        out2 = tmp_path / "r2"
        assert main(["evaluate", str(mini_dataset), "--out-dir", str(out1),
                     "--methods", "jade,pca"]) == 0
        assert main(["evaluate", str(mini_dataset), "--out-dir", str(out2),
                     "--methods", "jade,pca"]) == 0
        for name in ("report.csv", "rmse.csv", "effective_config.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        # 2 subjects x 2 conditions x 2 methods
        assert len((out1 / "report.csv").read_text().splitlines()) == 1 + 8

    def test_unknown_method_rejected(self, mini_dataset, tmp_path, capsys):
        rc = main(["evaluate", str(mini_dataset), "--out-dir",
                   str(tmp_path / "x"), "--methods", "jade,icaplus"])
        assert rc == 2
        assert "icaplus" in capsys.readouterr().err

    def test_missing_dataset(self, tmp_path, capsys):
        rc = main(["evaluate", str(tmp_path / "void"), "--out-dir",
                   str(tmp_path / "out")])
        assert rc == 2


@pytest.fixture(scope="module")
def artifacts(traj_file, tmp_path_factory):
    art = tmp_path_factory.mktemp("art")
    est = art / "est.csv"
    rc = main(["estimate", str(traj_file), "--method", "jade",
               "--out", str(est), "--artifacts-dir", str(art)])
    assert rc == 0
    return art


class TestPlot:

    @pytest.mark.parametrize("kind,name", [
        ("components", "components.csv"),
        ("match-curve", "curve_c0.csv"),
        ("peaks", "selected.csv"),
    ])
    def test_renders_svg_and_csv(self, artifacts, tmp_path, kind, name,
                                 capsys):
        out = tmp_path / f"{kind}.svg"
        rc = main(["plot", str(artifacts / name), "--kind", kind,
                   "--out", str(out)])
        assert rc == 0
        assert out.exists() and out.stat().st_size > 0
        assert out.with_suffix(".csv").exists()

    def test_selected_markers_match_estimate(self, artifacts):
        # peak markers in the selected-component artifact agree with the
        # peak count recorded in the estimate CSV
        est_row = (artifacts / "est.csv").read_text().splitlines()[1]
        n_peaks = int(est_row.split(",")[4])
        marked = [line for line in
                  (artifacts / "selected.csv").read_text().splitlines()[2:]
                  if line.endswith(",1")]
        assert len(marked) == n_peaks >= 3

    def test_unknown_kind_is_usage_error(self, artifacts, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["plot", str(artifacts / "components.csv"), "--kind",
                  "sparkline", "--out", "x.svg"])
        assert exc.value.code == 1


class TestTrackIngest:
    def test_valid_file(self, traj_file, capsys):
        assert main(["track-ingest", str(traj_file)]) == 0
        out = capsys.readouterr().out
        assert "features" in out and "fps" in out

    def test_invalid_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("junk\n")
        assert main(["track-ingest", str(bad)]) == 2

    def test_non_raw_origin_rejected(self, tmp_path, capsys):
        from pulsemotion import FeatureTrajectories
        import numpy as np
        path = tmp_path / "f.csv"
        traj = FeatureTrajectories(np.zeros((2, 5)) + 1.0, 250.0, "filtered")
        write_trajectories(traj, path)
        assert main(["track-ingest", str(path)]) == 2

    def test_usage_error_exit_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["estimate"])  # missing positional
        assert exc.value.code == 1

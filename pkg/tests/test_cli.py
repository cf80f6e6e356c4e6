"""CLI subcommands exercised through main(argv)."""

import pytest

from holomed.cli import main
from holomed.depth_gesture.fixtures import read_dseq
from holomed.projection.sheets import load_pack


def test_gen_assets(tmp_path, capsys):
    assert main(["gen-assets", "--out", str(tmp_path / "pack"), "--cell-size", "32"]) == 0
    out = capsys.readouterr().out
    assert "8 sheets / 281 frames" in out
    assert load_pack(tmp_path / "pack").total_frames == 281


def test_gen_fixture(tmp_path, capsys):
    target = tmp_path / "seq.dseq"
    assert main(["gen-fixture", "--out", str(target), "--swipes", "3"]) == 0
    frames = read_dseq(target)
    assert len(frames) > 0
    assert "3 swipes" in capsys.readouterr().out


def test_serve_with_bad_config_exits_2(tmp_path, capsys):
    config = tmp_path / "server.toml"
    config.write_text('pack_dir = "does-not-exist"\n')
    assert main(["serve", "--config", str(config)]) == 2
    assert "startup failed" in capsys.readouterr().err


def test_serve_missing_config_file_exits_2(tmp_path, capsys):
    assert main(["serve", "--config", str(tmp_path / "nope.toml")]) == 2


def test_replay_malformed_fixture_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.dseq"
    bad.write_text("garbage\n")
    code = main(["replay", "--fixture", str(bad), "--server", "http://127.0.0.1:1"])
    assert code == 2
    assert "line 1" in capsys.readouterr().err


def test_unknown_command_rejected():
    with pytest.raises(SystemExit):
        main(["frobnicate"])

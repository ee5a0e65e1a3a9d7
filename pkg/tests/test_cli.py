import pytest

from pairselect.cli import main
from pairselect.config import load_config
from pairselect.errors import ConfigError

CONFIG_TEMPLATE = """\
seed: 17
out_dir: out
instruments:
  - symbol: TREND0
    synthetic: {{kind: persistent_sign, length: {length}, persistence: 0.7, seed: 1}}
  - symbol: TREND1
    synthetic: {{kind: persistent_sign, length: {length}, persistence: 0.7, seed: 2}}
  - symbol: NOISE0
    synthetic: {{kind: random_walk, length: {length}, seed: 3}}
  - symbol: NOISE1
    synthetic: {{kind: random_walk, length: {length}, seed: 4}}
models: [logistic, decision_tree, gaussian_nb, kneighbors]
selection_mode: profitable_list
short_on_down: true
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.yml"
    path.write_text(CONFIG_TEMPLATE.format(length=600))
    return path


def test_load_config_defaults_and_overrides(config_file, tmp_path):
    config = load_config(config_file)
    assert config.seed == 17
    assert config.out_dir == tmp_path / "out"
    assert config.store_path == tmp_path / "out" / "record_store.csv"
    assert config.model_kinds == ("logistic", "decision_tree", "gaussian_nb", "kneighbors")
    override = load_config(config_file, seed_override=99, out_override=tmp_path / "elsewhere")
    assert override.seed == 99
    assert override.store_path == tmp_path / "elsewhere" / "record_store.csv"


def test_load_config_requires_seed(tmp_path):
    path = tmp_path / "no_seed.yml"
    path.write_text(
        "instruments:\n  - symbol: A\n    synthetic: {kind: random_walk, length: 200, seed: 1}\n"
    )
    with pytest.raises(ConfigError, match="seed"):
        load_config(path)
    config = load_config(path, seed_override=5)
    assert config.seed == 5


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "bad.yml"
    path.write_text("seed: 1\ntypo_key: true\ninstruments:\n  - symbol: A\n    synthetic: {kind: random_walk, length: 200}\n")
    with pytest.raises(ConfigError, match="typo_key"):
        load_config(path)


def test_cli_synth_writes_csvs(config_file, tmp_path, capsys):
    assert main(["synth", "--config", str(config_file)]) == 0
    written = sorted(p.name for p in (tmp_path / "out").glob("*.csv"))
    assert written == ["NOISE0.csv", "NOISE1.csv", "TREND0.csv", "TREND1.csv"]
    head = (tmp_path / "out" / "TREND0.csv").read_text().split("\n")[0]
    assert head == "Date,Open,High,Low,Close,Adj Close,Volume"


def test_cli_run_emits_reports(config_file, tmp_path, capsys):
    assert main(["run", "--config", str(config_file)]) == 0
    out = tmp_path / "out"
    for name in ("records.csv", "selection.csv", "summary.txt", "record_store.csv"):
        assert (out / name).exists(), name
    assert "run_id: 17-w01" in capsys.readouterr().out


def test_cli_walkforward_window_dirs(config_file, tmp_path, capsys):
    assert main(["walkforward", "--config", str(config_file), "--windows", "2"]) == 0
    out = tmp_path / "out"
    assert (out / "window_01" / "records.csv").exists()
    assert (out / "window_02" / "records.csv").exists()


def test_cli_predict_next_prints_directions(config_file, tmp_path, capsys):
    assert main(["walkforward", "--config", str(config_file), "--windows", "2"]) == 0
    capsys.readouterr()
    assert main(["predict-next", "--config", str(config_file)]) == 0
    out = capsys.readouterr().out
    assert out.strip()
    for line in out.strip().split("\n"):
        if line == "no pairs selected (no trade)":
            continue
        assert ("\tUP\t" in line) or ("\tDOWN\t" in line)


def test_cli_report_reemits_from_store(config_file, tmp_path, capsys):
    assert main(["run", "--config", str(config_file)]) == 0
    capsys.readouterr()
    report_dir = tmp_path / "fresh"
    assert main([
        "report", "--config", str(config_file), "--out", str(report_dir),
        "--store", str(tmp_path / "out" / "record_store.csv"),
    ]) == 0
    assert (report_dir / "records.csv").read_text().startswith("dataset,model,")


def test_cli_exit_codes(tmp_path, config_file):
    assert main(["run", "--config", str(tmp_path / "missing.yml")]) == 2
    # empty store -> config error for report
    assert main(["report", "--config", str(config_file)]) == 2

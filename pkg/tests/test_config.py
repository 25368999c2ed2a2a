from pathlib import Path

import pytest

from algebra.closedform import FormulaId, Variant
from analysis.config import CampaignConfig, ConfigError, load_config


def test_default_config(tmp_path: Path) -> None:
    config = load_config('config.yaml', run_id='test', artifact_folder=str(tmp_path))
    assert config['run_id'] == 'test'

    cfg = CampaignConfig.from_config(config)
    assert cfg.primes == [3]
    assert cfg.theorems == list(FormulaId)
    assert cfg.variants == [Variant.PRINTED, Variant.CORRECTED]
    assert cfg.max_i_for(3) == 12
    assert cfg.i_values(3) == list(range(13))
    assert cfg.s_values(3) == [0, 1, 2, 3, 4, 5]
    assert cfg.s_values(7) == [0, 1, 2, 4]
    assert cfg.i_values(7) == [0, 1, 6, 7, 8, 14, 48, 49, 56]


def test_overrides(tmp_path: Path) -> None:
    config = load_config('config.yaml', run_id='test', artifact_folder=str(tmp_path))
    cfg = CampaignConfig.from_config(config, primes='3,5', theorems='Thm3.1', max_i=0, variant='corrected', workers=None)
    assert cfg.primes == [3, 5]
    assert cfg.theorems == [FormulaId.THM31]
    assert cfg.i_values(5) == [0]
    assert cfg.variants == [Variant.CORRECTED]
    assert cfg.workers == 1


def test_invalid_settings(tmp_path: Path) -> None:
    config = load_config('config.yaml', run_id='test', artifact_folder=str(tmp_path))
    for overrides in ({'theorems': 'Bogus'}, {'variant': 'sideways'}, {'workers': 0}, {'primes': '4'},
                      {'max_i': -1}, {'format': 'xml'}):
        with pytest.raises(ConfigError):
            CampaignConfig.from_config(config, **overrides)

    with pytest.raises(ConfigError):
        CampaignConfig.from_config({'campaign': {'colour': 'blue'}})
    with pytest.raises(ConfigError):
        CampaignConfig.from_config({'samples': {7: {'i_values': ['q']}}})


def test_unreadable_config(tmp_path: Path) -> None:
    path = f'{tmp_path}/config.yaml'
    with open(path, 'wt') as f:
        f.write('other: 1\n')
    with pytest.raises(ConfigError):
        load_config(path, artifact_folder=str(tmp_path))
    with pytest.raises(ConfigError):
        load_config(f'{tmp_path}/missing.yaml', artifact_folder=str(tmp_path))


def test_tilde_handling(tmp_path: Path) -> None:
    path = f'{tmp_path}/config.yaml'
    with open(path, 'wt') as f:
        f.write('spec:\n  campaign:\n    json_output_path: ~/report.json\n')
    config = load_config(path, run_id='test', artifact_folder=str(tmp_path))
    assert not config['campaign']['json_output_path'].startswith('~')

    with open(path, 'wt') as f:
        f.write('spec:\n  run_id: a~b\n')
    with pytest.raises(ConfigError):
        load_config(path, artifact_folder=str(tmp_path))

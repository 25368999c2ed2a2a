import logging
import os
import time
from dataclasses import dataclass, field
from io import StringIO
from os.path import expanduser
from typing import Dict, List, Mapping, Optional, Sequence, Union

from ruamel.yaml import YAML

from algebra.closedform import FormulaId, Variant
from algebra.gfp import validate_prime
from analysis.shared_parsers import parse_prime_expression, parse_theorems

# Type alias for config type
Config = dict

VARIANT_CHOICES = ('printed', 'corrected', 'both')
FORMAT_CHOICES = ('text', 'json')

# Configure logging
logging.basicConfig(format='%(asctime)s - %(levelname)s - %(message)s', level=logging.INFO)


class ConfigError(ValueError):
    pass


def load_config(
        path: str = 'config.yaml',
        run_id: Optional[str] = None,
        artifact_folder: Optional[str] = None) -> Config:
    """
    Loads 'config.yaml' from the current working directory, or somewhere else if specified

    :param path:    Path to the config yaml file
    :param run_id:  Optional manual id override for the run, mainly for testing
    :param artifact_folder: Optional manual folder for the log file, mainly for testing

    :return: A Config object: a nested dictionary
    """
    yaml = YAML(typ='safe')
    try:
        with open(path) as f:
            config = yaml.load(f)['spec']
    except (OSError, KeyError, TypeError) as error:
        raise ConfigError(f'Unable to read a "spec" section from {path}: {error}') from error

    if run_id is not None:
        config['run_id'] = run_id
    elif not config.get('run_id'):
        config['run_id'] = time.strftime('%Y-%m-%d_%Hh%Mm%Ss')

    # Write to default 'logs' dir if no artifact folder was passed
    log_dir = 'logs' if artifact_folder is None else artifact_folder
    os.makedirs(log_dir, exist_ok=True)
    log_path = os.path.abspath(os.path.join(log_dir, 'logfile.txt'))

    # Repeated loads in one process share a single handler per log file
    logger = logging.getLogger()
    if not any(getattr(handler, 'baseFilename', None) == log_path for handler in logger.handlers):
        logger.addHandler(logging.FileHandler(filename=log_path, mode='a'))
    logging.info(f"Session has run id {config['run_id']}")

    # Expand user directories
    campaign_cfg = config.setdefault('campaign', {})
    for key in ('json_output_path', 'text_output_path'):
        if campaign_cfg.get(key):
            campaign_cfg[key] = expanduser(campaign_cfg[key])

    # Validate the config: convert to text and check for template markers "~"
    string_stream = StringIO()
    yaml.indent(mapping=2, sequence=4, offset=2)
    yaml.default_flow_style = False
    yaml.dump(config, string_stream)
    config_as_text = string_stream.getvalue()

    if '~' in config_as_text:
        raise ConfigError(f'Not all home-dir tildes "~" were substituted: \n{config_as_text}')

    return config


@dataclass
class SampleSpec:
    """A sampled sweep for one prime: explicit s and i values instead of full ranges"""
    s_values: List[int]
    i_values: List[int]


@dataclass
class CampaignConfig:
    primes: List[int]
    theorems: List[FormulaId]
    max_i: Optional[int] = None
    max_s: int = 5
    max_uv: int = 6
    variant: str = 'both'
    workers: int = 1
    json_output_path: Optional[str] = None
    text_output_path: Optional[str] = None
    format: str = 'text'
    progress: bool = True
    samples: Dict[int, SampleSpec] = field(default_factory=dict)

    @property
    def variants(self) -> List[Variant]:
        if self.variant == 'both':
            return [Variant.PRINTED, Variant.CORRECTED]
        return [Variant(self.variant)]

    def max_i_for(self, p: int) -> int:
        return self.max_i if self.max_i is not None else p * p + p

    def s_values(self, p: int) -> List[int]:
        return self.samples[p].s_values if p in self.samples else list(range(self.max_s + 1))

    def i_values(self, p: int) -> List[int]:
        return self.samples[p].i_values if p in self.samples else list(range(self.max_i_for(p) + 1))

    @classmethod
    def from_config(cls, config: Config, **overrides: Union[None, int, str, bool, Sequence[int]]) -> 'CampaignConfig':
        """
        Builds the campaign settings from the 'campaign' and 'samples' sections, with non-None keyword overrides
        (typically command line flags) taking precedence

        :param config:      The loaded config
        :param overrides:   Values for any of the dataclass fields except samples

        :return: A validated CampaignConfig
        """
        settings = dict(config.get('campaign') or {})
        settings.update({key: value for key, value in overrides.items() if value is not None})
        unknown = set(settings) - {f for f in cls.__dataclass_fields__ if f != 'samples'}
        if unknown:
            raise ConfigError(f'Unknown campaign settings: {", ".join(sorted(unknown))}')

        try:
            primes = [validate_prime(int(p)) for p in _as_list(settings.get('primes', [3]))]
            theorems = parse_theorems(settings.get('theorems', 'all'))
        except (ValueError, TypeError) as error:
            raise ConfigError(str(error)) from error

        campaign = cls(
            primes=primes,
            theorems=theorems,
            max_i=settings.get('max_i'),
            max_s=settings.get('max_s', 5),
            max_uv=settings.get('max_uv', 6),
            variant=settings.get('variant', 'both'),
            workers=settings.get('workers', 1),
            json_output_path=settings.get('json_output_path') or None,
            text_output_path=settings.get('text_output_path') or None,
            format=settings.get('format', 'text'),
            progress=bool(settings.get('progress', True)),
            samples=_parse_samples(config.get('samples') or {}),
        )
        campaign.validate()
        return campaign

    def validate(self) -> None:
        if not self.primes:
            raise ConfigError('At least one prime is required')
        for name in ('max_s', 'max_uv', 'workers'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ConfigError(f'{name} must be a nonnegative integer, got {value!r}')
        if self.max_i is not None and (not isinstance(self.max_i, int) or self.max_i < 0):
            raise ConfigError(f'max_i must be blank or a nonnegative integer, got {self.max_i!r}')
        if self.max_uv < 1:
            raise ConfigError('max_uv must be at least 1')
        if self.workers < 1:
            raise ConfigError('workers must be at least 1')
        if self.variant not in VARIANT_CHOICES:
            raise ConfigError(f'variant must be one of {", ".join(VARIANT_CHOICES)}, got {self.variant!r}')
        if self.format not in FORMAT_CHOICES:
            raise ConfigError(f'format must be one of {", ".join(FORMAT_CHOICES)}, got {self.format!r}')


def _as_list(value: Union[int, str, Sequence[int]]) -> List[Union[int, str]]:
    if isinstance(value, int):
        return [value]
    if isinstance(value, str):
        return [item.strip() for item in value.split(',') if item.strip()]
    return list(value)


def _parse_samples(samples_cfg: Mapping[Union[int, str], Mapping[str, Sequence[Union[int, str]]]]) -> \
        Dict[int, SampleSpec]:
    samples = {}
    for prime, sample in samples_cfg.items():
        try:
            p = validate_prime(int(prime))
            samples[p] = SampleSpec(
                s_values=[int(s) for s in sample.get('s_values', [])],
                i_values=[parse_prime_expression(str(i), p) for i in sample.get('i_values', [])],
            )
        except (ValueError, TypeError) as error:
            raise ConfigError(f'Invalid sample settings for prime {prime}: {error}') from error

    return samples

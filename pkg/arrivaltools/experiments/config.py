import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from ..errors import ConfigError
from ..estimation.core import EstimatorConfig
from ..fusion.corpus import CorpusConfig
from ..model.network import BUNDLED_GRAPHS
from ..simulation.runner import ScenarioConfig

logger = logging.getLogger(__name__)

KINDS = ('full-network', 'single-link-visits-sweep', 'rate-sweep', 'roc',
         'hardware-replay')

@dataclass
class ExperimentSpec:
    """Describes one experiment.

    Attributes:
        kind (str): One of :data:`KINDS`.
        scenario (~arrivaltools.simulation.ScenarioConfig): Scenario of the
            simulated runs. Its seed is the base seed of the experiment.
        estimator (~arrivaltools.estimation.EstimatorConfig): Estimator
            parameters.
        corpus (~arrivaltools.fusion.CorpusConfig): Synthetic corpus used by
            ROC experiments.
        visits (list): Numbers of traversals of the visits sweep.
        rates (list): True arrival rates (per minute) of the rate sweep.
        nominal_visits (int): Number of traversals used by the rate sweep.
        nominal_rate (float): True arrival rate used by the visits sweep.
        repetitions (int): Number of Monte Carlo repetitions.
        n_seeds (int): Number of generated corpora of ROC experiments.
        max_fp (float): False positives per minute at which ROC operating
            points are reported.
        output_dir (str): Directory receiving all outputs.
        jobs (int): Number of worker processes. 1 runs in-process.
        log_dir (str): Event log directory replayed by ``hardware-replay``.
        corpus_dir (str): If set, ROC experiments read this corpus instead
            of generating ones.
    """
    kind: str = 'full-network'
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    visits: list = field(default_factory=lambda: [2, 5, 10, 20])
    rates: list = field(default_factory=lambda: [0.5, 1.0, 1.62, 3.0])
    nominal_visits: int = 10
    nominal_rate: float = 1.62
    repetitions: int = 100
    n_seeds: int = 20
    max_fp: float = 1.5
    output_dir: str = 'arrivaltools-output'
    jobs: int = 1
    log_dir: str = None
    corpus_dir: str = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError('Unknown experiment kind {0!r}. Expecting one of: {1}.'
                             .format(self.kind, ', '.join(KINDS)))
        if len(self.visits) == 0 or len(self.rates) == 0:
            raise ValueError('Sweep lists cannot be empty.')
        if any(int(v) != v or v < 0 for v in self.visits):
            raise ValueError('Visit counts must be non-negative integers.')
        if any(r < 0 for r in self.rates) or self.nominal_rate < 0:
            raise ValueError('Arrival rates cannot be negative.')
        self.visits = [int(v) for v in self.visits]
        self.rates = [float(r) for r in self.rates]
        for name in ('repetitions', 'n_seeds', 'jobs', 'nominal_visits'):
            if getattr(self, name) < 1:
                raise ValueError("'{0}' must be at least 1.".format(name))
        if not self.max_fp >= 0:
            raise ValueError("'max_fp' cannot be negative.")

    def seeds(self, n=None):
        """Returns the seeds of the repetitions: the base seed plus the
        repetition index."""
        n = self.repetitions if n is None else n
        return [self.scenario.seed + r for r in range(n)]

    def to_dict(self):
        """Converts the specification into a JSON compatible dictionary that
        :func:`spec_from_dict` maps back to an equal specification."""
        doc = {f.name: getattr(self, f.name) for f in fields(self)}
        doc['scenario'] = self.scenario.as_dict()
        doc['estimator'] = self.estimator.as_dict()
        doc['corpus'] = self.corpus.as_dict()
        return doc

_SECTIONS = {
    'scenario': ScenarioConfig,
    'estimator': EstimatorConfig,
    'corpus': CorpusConfig
}

def _line_of(text, key):
    """Finds the line of the first occurrence of a key in a JSON text."""
    if text is None:
        return None
    i = text.find('"{0}"'.format(key))
    return None if i < 0 else text.count('\n', 0, i) + 1

def _check_keys(obj, cls, where, path, text):
    if not isinstance(obj, dict):
        raise ConfigError("'{0}' must be an object.".format(where), path)
    allowed = {f.name for f in fields(cls)}
    for key in obj:
        if key not in allowed:
            raise ConfigError("Unknown key '{0}' in {1}.".format(key, where),
                              path, _line_of(text, key))

def spec_from_dict(doc, path=None, text=None):
    """Builds an :class:`ExperimentSpec` from a dictionary.

    Args:
        doc (dict): The parsed configuration.
        path (str): Path of the configuration file, used in error messages
            and to resolve relative paths. Relative paths are resolved
            against the current directory if not specified.
        text (str): Raw file content, used to locate unknown keys.

    Returns:
        ExperimentSpec: The specification.

    Raises:
        ConfigError: Unknown keys or invalid values.
    """
    _check_keys(doc, ExperimentSpec, 'the experiment', path, text)
    params = dict(doc)
    for name, cls in _SECTIONS.items():
        if name not in params:
            continue
        _check_keys(params[name], cls, "'{0}'".format(name), path, text)
        try:
            params[name] = cls(**params[name])
        except (TypeError, ValueError) as e:
            raise ConfigError("Invalid '{0}' section: {1}".format(name, e), path) from e
    try:
        spec = ExperimentSpec(**params)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e), path) from e
    base_dir = os.getcwd() if path is None else os.path.dirname(os.path.abspath(path))
    return resolve_paths(spec, base_dir)

def resolve_paths(spec, base_dir):
    """Makes the graph, log and corpus paths of a specification absolute.

    Bundled graph names are kept as they are.
    """
    def absolute(p):
        if p is None or os.path.isabs(p):
            return p
        return os.path.normpath(os.path.join(base_dir, p))
    scenario = spec.scenario
    if scenario.graph not in BUNDLED_GRAPHS:
        scenario = replace(scenario, graph=absolute(scenario.graph))
    return replace(spec, scenario=scenario, log_dir=absolute(spec.log_dir),
                   corpus_dir=absolute(spec.corpus_dir))

def load_config(path):
    """Loads an experiment configuration file.

    The file is a JSON object whose keys are the fields of
    :class:`ExperimentSpec`. The ``scenario``, ``estimator`` and ``corpus``
    sections hold the fields of the corresponding configuration classes.
    Omitted keys take their default values.

    Args:
        path (str): Path of the JSON file.

    Returns:
        ExperimentSpec: The specification.

    Raises:
        ConfigError: The file cannot be read, is not valid JSON, contains
            unknown keys or invalid values.
    """
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError('Cannot read the configuration ({0}).'.format(e.strerror), path) from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, path, e.lineno) from e
    spec = spec_from_dict(doc, path, text)
    logger.info('Loaded %s experiment from %s.', spec.kind, path)
    return spec

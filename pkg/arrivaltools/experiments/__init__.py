from .config import ExperimentSpec, KINDS, load_config, spec_from_dict
from .batch import run_batch
from .reports import Report, aggregate_runs
from .full_network import run_full_network
from .sweeps import run_visits_sweep, run_rate_sweep, visits_duration
from .roc import run_roc, RocResult
from .replay import replay, write_profiles, estimate_log

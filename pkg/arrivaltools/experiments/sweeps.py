import logging
from dataclasses import replace
import numpy as np
import pandas as pd
from ..estimation import EstimatorConfig, RateEstimate, estimate_links, crossing_times, \
                         stationary_counter
from ..model.network import racetrack_graph, racetrack_lap_length, RACETRACK_TARGET_LINK
from ..simulation import ScenarioConfig, simulate
from .batch import run_batch
from .reports import Report, aggregate_runs, estimate_record

logger = logging.getLogger(__name__)

# Moving observer and stationary counter at the target link origin
SWEEP_PREFIXES = ('mo', 'sc')

def visits_duration(visits, vehicle_speed, graph=None):
    """Returns the run duration (seconds) giving ``visits`` laps of the
    racetrack."""
    if not vehicle_speed > 0:
        raise ValueError('Sweeps need a moving vehicle.')
    graph = racetrack_graph() if graph is None else graph
    return visits * racetrack_lap_length(graph) / vehicle_speed

def sweep_repetition(task):
    """Runs one repetition of a sweep on the racetrack graph.

    Args:
        task (tuple): ``(scenario, estimator, visits, rate, rep)``. The
            scenario's graph, route rate, start and duration are replaced:
            the vehicle starts at the beginning of the target link and
            drives ``visits`` laps with every route at ``rate`` per minute.

    Returns:
        dict: The moving-observer estimate of the target link (``mo_``
        columns) and the estimate of a stationary counter at the link
        origin over the same period (``sc_`` columns). With zero visits no
        simulation is run and both estimates are unresolved.
    """
    scenario, estimator, visits, rate, rep = task
    est_config = EstimatorConfig(**estimator)
    row = {'rep': rep, 'seed': scenario['seed'], 'visits': visits, 'true_rate': rate}
    if visits == 0:
        for prefix in ('mo_', 'sc_'):
            row.update(estimate_record(RateEstimate.no_data(RACETRACK_TARGET_LINK), prefix))
        return row
    graph = racetrack_graph(rate_per_min=rate)
    params = dict(scenario)
    params.update(graph='racetrack', route_rate=None, rate_schedule=[],
                  vehicle_start_node=0, vehicle_start_link=RACETRACK_TARGET_LINK,
                  vehicle_start_offset=0.0,
                  duration=visits_duration(visits, scenario['vehicle_speed'], graph))
    config = ScenarioConfig(**params)
    log = simulate(config, graph)
    estimate = estimate_links(log, est_config, [RACETRACK_TARGET_LINK])[RACETRACK_TARGET_LINK]
    row.update(estimate_record(estimate, 'mo_'))
    counter = stationary_counter(crossing_times(log, graph, RACETRACK_TARGET_LINK),
                                 config.duration, est_config, RACETRACK_TARGET_LINK)
    row.update(estimate_record(counter, 'sc_'))
    return row

def _run_sweep(spec, values, progress, desc):
    """Runs every ``(visits, rate)`` pair of ``values`` with the same
    repetition seeds."""
    seeds = spec.seeds()
    tasks = []
    for visits, rate in values:
        for r, s in enumerate(seeds):
            scenario = replace(spec.scenario, seed=s).as_dict()
            tasks.append((scenario, spec.estimator.as_dict(), visits, rate, r))
    rows = run_batch(sweep_repetition, tasks, spec.jobs, progress, desc)
    return seeds, pd.DataFrame(rows)

def run_visits_sweep(spec, progress=False):
    """Runs the visits sweep.

    The target link of the racetrack graph is observed for each number of
    laps in ``spec.visits`` at the true rate ``spec.nominal_rate``.

    The report checks ``width_strictly_decreasing``: the mean interval
    width decreases strictly across the resolved visit counts.

    Args:
        spec (~arrivaltools.experiments.ExperimentSpec): The experiment.
        progress (bool): Shows a progress bar if ``True``.

    Returns:
        ~arrivaltools.experiments.Report: The report.
    """
    logger.info('Visits sweep over %s laps, %d repetitions.', spec.visits, spec.repetitions)
    values = [(v, spec.nominal_rate) for v in sorted(set(spec.visits))]
    seeds, runs = _run_sweep(spec, values, progress, 'sweep-visits')
    summary = aggregate_runs(runs, ['visits'], SWEEP_PREFIXES)
    widths = summary.loc[summary['mo_n_resolved'] > 0, 'mo_mean_width'].to_numpy()
    checks = {
        'graph': 'racetrack',
        'width_strictly_decreasing': bool(np.all(np.diff(widths) < 0))
    }
    config = replace(spec, kind='single-link-visits-sweep').to_dict()
    return Report('single-link-visits-sweep', config, seeds, runs, summary, checks)

def run_rate_sweep(spec, progress=False):
    """Runs the rate sweep.

    The target link of the racetrack graph is observed for
    ``spec.nominal_visits`` laps at each true rate in ``spec.rates``.

    The report checks ``max_relative_error``: the largest relative error
    of the mean estimate over the positive rates.

    Args:
        spec (~arrivaltools.experiments.ExperimentSpec): The experiment.
        progress (bool): Shows a progress bar if ``True``.

    Returns:
        ~arrivaltools.experiments.Report: The report.
    """
    logger.info('Rate sweep over %s per minute, %d repetitions.', spec.rates, spec.repetitions)
    values = [(spec.nominal_visits, r) for r in sorted(set(spec.rates))]
    seeds, runs = _run_sweep(spec, values, progress, 'sweep-rates')
    summary = aggregate_runs(runs, ['true_rate'], SWEEP_PREFIXES)
    positive = summary[summary['true_rate'] > 0]
    checks = {'graph': 'racetrack', 'visits': spec.nominal_visits}
    if len(positive) > 0:
        err = np.abs(positive['mo_mean_rate'] - positive['true_rate']) / positive['true_rate']
        checks['max_relative_error'] = float(err.max())
    config = replace(spec, kind='rate-sweep').to_dict()
    return Report('rate-sweep', config, seeds, runs, summary, checks)

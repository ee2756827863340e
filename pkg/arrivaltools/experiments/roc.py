import logging
import os
from dataclasses import replace
import numpy as np
import pandas as pd
from ..fusion import DetectionCorpus, generate_detection_corpus, roc_curve, roc_to_frame, \
                     roc_dominance, best_hit_rate, operating_point
from .batch import run_batch
from .reports import write_config, write_csv, write_json, write_plot_stub

logger = logging.getLogger(__name__)

ROC_FILES = {'df': 'roc_df.csv', 'mlf': 'roc_mlf.csv'}
ROC_SUMMARY_FILE = 'roc_summary.json'

def _corpus_curves(corpus, seed, max_fp):
    curves = {m: roc_curve(corpus, m) for m in ROC_FILES}
    frames = {}
    for m, points in curves.items():
        df = roc_to_frame(points)
        df.insert(0, 'seed', seed)
        frames[m] = df
    best_op = operating_point(curves['df'], max_fp)
    summary = {
        'seed': seed,
        'n_pedestrians': len(corpus.pedestrian_ids),
        'duration_min': corpus.duration_min,
        'dominance': roc_dominance(curves['df'], curves['mlf']),
        'df_hit_rate': best_hit_rate(curves['df'], max_fp),
        'mlf_hit_rate': best_hit_rate(curves['mlf'], max_fp),
        'df_threshold': None if best_op is None else best_op.threshold
    }
    return frames, summary

def roc_seed(task):
    """Generates the corpus of one seed and computes the DF and MLF curves."""
    corpus_config, seed, max_fp = task
    corpus = generate_detection_corpus(corpus_config, np.random.default_rng(seed))
    return _corpus_curves(corpus, seed, max_fp)

class RocResult:
    """ROC curves of both fusion methods over one or several corpora.

    Attributes:
        curves (dict): Maps ``'df'`` and ``'mlf'`` to a
            :class:`~pandas.DataFrame` of ``seed, threshold, hit_rate,
            fp_per_min`` rows.
        summary (dict): Per-corpus dominance margins and best hit rates at
            ``max_fp`` false positives per minute, plus their minimum and
            mean over corpora.
        config (dict): Resolved experiment configuration.
    """

    def __init__(self, curves, summary, config):
        self.curves = curves
        self.summary = summary
        self.config = config

    def write(self, directory):
        """Writes ``roc_df.csv``, ``roc_mlf.csv``, ``roc_summary.json``,
        ``config.json`` and the ``plot_roc.py`` stub."""
        write_config(directory, self.config)
        for m, name in ROC_FILES.items():
            write_csv(os.path.join(directory, name), self.curves[m])
        write_json(os.path.join(directory, ROC_SUMMARY_FILE), self.summary)
        write_plot_stub(directory, 'plot_roc.py')
        logger.info('ROC curves written to %s.', directory)

def run_roc(spec, progress=False):
    """Compares distributed and maximum-likelihood fusion by their ROC
    curves.

    One corpus is generated per seed (``spec.n_seeds`` seeds starting at
    ``spec.scenario.seed``) unless ``spec.corpus_dir`` names a recorded
    corpus, which is then the only one evaluated.

    Args:
        spec (~arrivaltools.experiments.ExperimentSpec): The experiment.
        progress (bool): Shows a progress bar if ``True``.

    Returns:
        RocResult: The curves and their summary.
    """
    if spec.corpus_dir is not None:
        logger.info('Evaluating the corpus in %s.', spec.corpus_dir)
        seeds = [None]
        results = [_corpus_curves(DetectionCorpus.read(spec.corpus_dir), None, spec.max_fp)]
    else:
        seeds = spec.seeds(spec.n_seeds)
        logger.info('Evaluating %d generated corpora from seed %d.', len(seeds), seeds[0])
        tasks = [(spec.corpus, s, spec.max_fp) for s in seeds]
        results = run_batch(roc_seed, tasks, spec.jobs, progress, 'roc')
    curves = {m: pd.concat([frames[m] for frames, _ in results], ignore_index=True)
              for m in ROC_FILES}
    per_corpus = [s for _, s in results]
    summary = {
        'max_fp': spec.max_fp,
        'seeds': seeds,
        'corpora': per_corpus,
        'min_dominance': min(s['dominance'] for s in per_corpus),
        'mean_df_hit_rate': float(np.mean([s['df_hit_rate'] for s in per_corpus])),
        'mean_mlf_hit_rate': float(np.mean([s['mlf_hit_rate'] for s in per_corpus]))
    }
    logger.info('DF dominates MLF by at least %.3f; mean DF hit rate %.3f at %.2f FP/min.',
                summary['min_dominance'], summary['mean_df_hit_rate'], spec.max_fp)
    return RocResult(curves, summary, replace(spec, kind='roc').to_dict())

"""Seeded simulation studies: sample-score convergence and estimator consistency.

Random numbers come from the Philox 4x64-10 counter-based generator as
implemented by numpy, so a given seed reproduces every replication.
"""
import numpy as np

from .estimation import EstimationProblem, minimize_score, ml_norm
from .families import crps_closed, logs_closed
from .sample_scores import crps_sample_edf, logs_sample

DEFAULT_M_GRID = (50, 100, 200, 500, 1000, 2000, 5000)


def make_rng(seed):
    """``numpy.random.Generator`` backed by Philox with the given integer seed."""
    return np.random.Generator(np.random.Philox(int(seed)))


def convergence_study(seed, score="crps", replications=500, m_grid=DEFAULT_M_GRID,
                      mean=2.0, sd=3.0, y=0.0, level=0.9):
    """Spread of sample-based scores around the closed-form value.

    For each sample size ``m`` draw ``replications`` samples from
    ``N(mean, sd)`` and score ``y``: the empirical-CDF CRPS for
    ``score="crps"`` and the kernel density LogS for ``score="logs"``.

    Returns
    -------
    dict
        ``m``, ``lower``, ``median``, ``upper`` (arrays over the grid, band at
        the central ``level``), ``target`` (closed-form score) and ``values``
        (``len(m_grid) x replications``).
    """
    if score == "crps":
        fn, target = crps_sample_edf, crps_closed("norm", y, mean=mean, sd=sd)
    elif score == "logs":
        fn, target = logs_sample, logs_closed("norm", y, mean=mean, sd=sd)
    else:
        raise ValueError(f"score must be 'crps' or 'logs', got {score!r}")
    rng = make_rng(seed)
    m_grid = tuple(int(m) for m in m_grid)
    values = np.empty((len(m_grid), replications))
    for i, m in enumerate(m_grid):
        for r in range(replications):
            values[i, r] = fn(y, rng.normal(mean, sd, m))
    a = 0.5 * (1.0 - level)
    lower, median, upper = np.quantile(values, [a, 0.5, 1.0 - a], axis=1)
    return {"m": np.array(m_grid), "lower": lower, "median": median, "upper": upper,
            "target": target, "values": values}


def estimation_study(seed, replications=200, n=500, mean=-1.0, sd=2.0):
    """Minimum-CRPS and maximum likelihood fits of a normal model.

    Returns
    -------
    dict
        Arrays ``crps_mean``, ``crps_sd``, ``ml_mean``, ``ml_sd`` and the
        boolean array ``converged`` for the minimum-CRPS fits.
    """
    rng = make_rng(seed)
    out = {k: np.empty(replications) for k in ("crps_mean", "crps_sd", "ml_mean", "ml_sd")}
    converged = np.empty(replications, dtype=bool)
    for r in range(replications):
        y = rng.normal(mean, sd, n)
        res = minimize_score(EstimationProblem("norm", y, "crps"))
        out["crps_mean"][r], out["crps_sd"][r] = res.x
        converged[r] = res.converged
        out["ml_mean"][r], out["ml_sd"][r] = ml_norm(y)
    out["converged"] = converged
    return out

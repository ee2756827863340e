import numpy as np
from scipy.special import gammainc

def chi2_cdf(x, dof):
    """Evaluates the CDF of the chi-squared distribution.

    Uses the regularized lower incomplete gamma function
    :math:`P(k/2, x/2)`.
    """
    if dof == 0:
        return 1.0 if x >= 0 else 0.0
    return float(gammainc(dof / 2.0, max(x, 0.0) / 2.0))

def chi2_quantile(p, dof, tol=1e-10):
    """Computes the p-th quantile of the chi-squared distribution.

    The quantile is found by bisection on :func:`chi2_cdf` until the
    bracketing interval is narrower than ``tol``.

    Args:
        p (float): Probability in [0, 1).
        dof (int): Degrees of freedom. The zero degrees of freedom
            distribution is a point mass at zero, so its quantiles are 0.
        tol (float): Absolute tolerance of the result. Default value is
            1e-10.

    Returns:
        float: The quantile :math:`\\chi^2_p(k)`.
    """
    if not 0.0 <= p < 1.0:
        raise ValueError('p must lie in [0, 1).')
    if dof < 0:
        raise ValueError('The degrees of freedom cannot be negative.')
    if dof == 0 or p == 0.0:
        return 0.0
    lo = 0.0
    hi = max(1.0, float(dof))
    while chi2_cdf(hi, dof) < p:
        lo = hi
        hi *= 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if chi2_cdf(mid, dof) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

def chi2_quantile_closed_form_2dof(p):
    """Computes the p-th quantile of the chi-squared distribution with two
    degrees of freedom, :math:`-2\\ln(1-p)`."""
    if not 0.0 <= p < 1.0:
        raise ValueError('p must lie in [0, 1).')
    return -2.0 * np.log1p(-p)

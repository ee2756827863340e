import numpy as np

ANGULAR_COV_MAT = {
    'rad': {
        'deg': lambda x: np.rad2deg(x)
    },
    'deg': {
        'rad': lambda x: np.deg2rad(x)
    }
}

RATE_COV_MAT = {
    'per_s': {
        'per_min': lambda x: x * 60.0
    },
    'per_min': {
        'per_s': lambda x: x / 60.0
    }
}

def convert_angles(x, from_unit, to_unit):
    """Converts input angular values to a new unit.

    If `from_unit` and `to_unit` are the same, a copy will be made.

    Args:
        x: A scalar or an ndarray of angular values.
        from_unit: The original unit, ``'rad'`` or ``'deg'``.
        to_unit: The target unit, ``'rad'`` or ``'deg'``.
    """
    if from_unit not in ANGULAR_COV_MAT or to_unit not in ANGULAR_COV_MAT:
        raise ValueError(
            "Angular units must be one of the following: {0}."
            .format(', '.join(ANGULAR_COV_MAT.keys()))
        )
    if from_unit == to_unit:
        return np.copy(x) if isinstance(x, np.ndarray) else x
    return ANGULAR_COV_MAT[from_unit][to_unit](x)

def convert_rates(x, from_unit, to_unit):
    """Converts arrival rates between ``'per_s'`` and ``'per_min'``.

    Rates are stored per minute everywhere in this package. The simulator
    clock and the estimator internals work in seconds, so conversions happen
    only at those two boundaries.

    Args:
        x: A scalar or an ndarray of rates.
        from_unit: The original unit.
        to_unit: The target unit.
    """
    if from_unit not in RATE_COV_MAT or to_unit not in RATE_COV_MAT:
        raise ValueError(
            "Rate units must be one of the following: {0}."
            .format(', '.join(RATE_COV_MAT.keys()))
        )
    if from_unit == to_unit:
        return np.copy(x) if isinstance(x, np.ndarray) else x
    return RATE_COV_MAT[from_unit][to_unit](x)

def heading_of(v):
    """Returns the heading (radians, counter-clockwise from the positive
    x-axis) of a 2D vector or of each row of an N x 2 matrix."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 1:
        return float(np.arctan2(v[1], v[0]))
    return np.arctan2(v[:, 1], v[:, 0])

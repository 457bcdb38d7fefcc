"""Compiled inner loops for online SOM training."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def online_som(data, weights, order, rates, radii, unit_dist):
    """Run the online Kohonen update in place on ``weights``.

    ``order[t]`` is the row of ``data`` presented at step t, ``rates[t]`` and
    ``radii[t]`` the learning rate and neighbourhood radius for that step.
    Hard neighbourhood: every unit within ``radii[t]`` of the winner gets the
    full rate.
    """
    n_units, dim = weights.shape
    for t in range(order.shape[0]):
        x = data[order[t]]
        best = 0
        best_d = np.inf
        for u in range(n_units):
            acc = 0.0
            for k in range(dim):
                diff = x[k] - weights[u, k]
                acc += diff * diff
            # strict '<' keeps the lowest index on ties
            if acc < best_d:
                best_d = acc
                best = u
        a = rates[t]
        r = radii[t]
        for u in range(n_units):
            if unit_dist[best, u] <= r:
                for k in range(dim):
                    weights[u, k] += a * (x[k] - weights[u, k])
    return weights

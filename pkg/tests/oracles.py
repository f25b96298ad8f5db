"""Frozen reference values and shared helpers for the test suite."""

from starlap import EdgeSignature

# Weyl zeros from a 30-digit mpmath root solve of the secular equations,
# independent of the package's bisection/Newton path.
FROZEN_ETA = {
    (1, 1): {1: 5.5933213620153309807, 2: 30.225847931780944878, 3: 74.63888382454396129,
             -1: -5.5933213620153309807, -2: -30.225847931780944878, -3: -74.63888382454396129},
    (2, 1): {1: 4.1938599321162415197, 2: 26.791619171502620574, 3: 69.182957017045829966,
             -1: -7.1914216264898481515, -2: -33.867101096128572163, -3: -80.301857417405258225},
    (3, 2): {1: 4.7126832212116743684, 2: 28.094394555397646595, 3: 71.267098591170303161,
             -1: -6.5490108614933323121, -2: -32.435224875824895278, -3: -78.088599058381267844},
    (1, 3): {1: 7.9634553325485228556, 2: 35.538751789422660969, 3: 82.865108096560473589,
             -1: -3.6330109635537779418, -2: -25.342817010262889774, -3: -66.842597592853432625},
}


def all_signatures(n_max):
    return [EdgeSignature(p, q) for p in range(1, n_max) for q in range(1, n_max) if p + q <= n_max]

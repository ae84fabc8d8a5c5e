"""Inclusion moments of uniform subsampling, checked by brute force.

Draws many fixed-size subsamples from a small index set, tallies how
often each index is included, and compares the observed first and
second moments of the inclusion count with their closed forms. Then
shows the finite population correction pulling the subsample-mean
variance to zero as the subsample approaches a census.
"""

import numpy as np

from fusionval.data import generate_dataset
from fusionval.rng import derive_stream
from fusionval.sampling import inclusion_moments, srs_sample
from fusionval.theory import srs_variance_component

N = 8
M = 3
DRAWS = 50_000


def main():
    data = generate_dataset(N, 0.0, 1.0, derive_stream(1234, 0, 0))
    stream = derive_stream(1234, 1, 0)

    hits = np.zeros(N)
    for _ in range(DRAWS):
        view = srs_sample(data, M, stream)
        hits[view.indices] += 1

    expected_total, expected_var = inclusion_moments(N, M)
    print(f"subsampling {M} of {N}, {DRAWS} draws")
    print(f"  per-index inclusion frequency, observed: {hits / DRAWS}")
    print(f"  theoretical frequency everywhere:        {M / N:.4f}")
    print(f"  expected inclusion total {expected_total:.1f}, "
          f"indicator variance sum {expected_var:.4f}")

    print()
    print("subsample-mean variance with the finite population correction")
    population = 10_000
    for n in (2_500, 5_000, 7_500, 9_999, 10_000):
        v = srs_variance_component(1.0, n, population)
        print(f"  n = {n:>6,}: {v:.3e}")
    print("a census (n = N) leaves nothing to chance, so the last entry "
          "is exactly zero")


if __name__ == "__main__":
    main()

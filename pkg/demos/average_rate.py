"""Average-rate ceilings implied by the optimum.

The fixed-message optimum holds while a transmission and an overlapping
hidden transmission fit inside one period, i.e. for duty cycles below one
half. That caps the average rate a node can sustain at the optimum.
"""
from hiddennode import max_average_rate_mimo, max_average_rate_siso

B = 1e6
for alpha in (3.0, 4.0, 5.0):
    print(f"alpha = {alpha}: single antenna up to {max_average_rate_siso(alpha, B) / 1e3:8.1f} kb/s")
    for n in (1, 2, 4, 8):
        print(f"    {n} antennas at duty 0.25: {max_average_rate_mimo(alpha, n, B, 0.25) / 1e3:8.1f} kb/s")

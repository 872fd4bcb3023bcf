"""The twelve benchmark runs and their published reference residuals.

All runs share L = pi, k = 1, N = 256, M = 64, w_min = 1e-8, b = 1.2,
|j| <= 120 and the built-in node/pole rules; only the profile and the
incidence angle vary.
"""

import math

TABLE_ANGLES = (
    ("pi/4", math.pi / 4.0),
    ("pi/3", math.pi / 3.0),
    ("pi/2", math.pi / 2.0),
)

TABLE_PROFILES = ("I", "II", "III", "IV")

# residual r_min reported for each (profile, angle) in the original runs
REFERENCE_RESIDUALS = {
    ("I", "pi/4"): 0.000424,
    ("I", "pi/3"): 0.000407,
    ("I", "pi/2"): 0.000371,
    ("II", "pi/4"): 0.001491,
    ("II", "pi/3"): 0.001815,
    ("II", "pi/2"): 0.002089,
    ("III", "pi/4"): 0.009623,
    ("III", "pi/3"): 0.011903,
    ("III", "pi/2"): 0.013828,
    ("IV", "pi/4"): 0.014398,
    ("IV", "pi/3"): 0.017648,
    ("IV", "pi/2"): 0.020451,
}

TABLE_ROWS = tuple(
    (profile, angle_name)
    for profile in TABLE_PROFILES
    for angle_name, _ in TABLE_ANGLES
)

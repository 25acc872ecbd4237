"""Numerical constants and thresholds used throughout the package."""

import math

#: Ratio used to turn "a << b" into the testable predicate ``a <= MUCH_LESS * b``.
MUCH_LESS = 0.05

#: Step size in seconds when tau is fixed at the Planck time (rounded as 5e-44 s).
PLANCK_TIME = 5e-44

#: lambda_SD = sqrt(f) * LAMBDA_SD_SCALE, in s^-2.
LAMBDA_SD_SCALE = 1e57

#: Lower bound on the total time for the approximate bievolution equation, seconds.
LESS_STRINGENT_LOWER_BOUND = 1e-17

#: Rounded constant of the stringent condition N*tau >> STRINGENT_CONSTANT / sqrt(f).
STRINGENT_CONSTANT = 1e-13

SECONDS_PER_YEAR = 3.156e7

TWO_PI = 2.0 * math.pi

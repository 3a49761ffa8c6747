"""
The deficit expression with -2 prefactors and (1 +- 2 t1) arguments, kept
verbatim here only to show it goes negative; owqd_closed is the working form.
"""
import math

import pytest

from correlations import CorrelationTriple
from measures import owqd_closed, owqd_numeric
from state import build_x_state


def uncorrected_deficit(t1, t3):
    def xlog(x):
        return x * math.log2(x) if x > 0 else 0.0

    return (-2 * (xlog(1 + 2 * t1) + xlog(1 - 2 * t1))
            + 0.25 * (2 * xlog(1 + t3) + xlog(1 - t3 + 2 * t1) + xlog(1 - t3 - 2 * t1)))


def test_uncorrected_form_is_negative():
    assert uncorrected_deficit(0.4, 0.0) < 0
    assert uncorrected_deficit(0.4, 0.0) == pytest.approx(-1.859, abs=2e-3)


def test_corrected_form_is_nonnegative_and_matches_minimization():
    t = CorrelationTriple(m=1, t1=0.4, t2=0.4, t3=0.0)
    numeric, _ = owqd_numeric(build_x_state(t))
    assert owqd_closed(t) >= 0
    assert owqd_closed(t) == pytest.approx(numeric, abs=1e-6)

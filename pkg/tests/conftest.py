from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from nonstd_cones.coeff import RATIONALS, SQRT2, SQRT2_SQRT3
from nonstd_cones.series import EpsSeries

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []

small_fracs = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6),
    st.sampled_from([1, 2, 3, 5]),
)
exponents = st.sampled_from([Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)])


def elements(field):
    return st.lists(small_fracs, min_size=field.degree, max_size=field.degree).map(field.element)


fields = st.sampled_from([RATIONALS, SQRT2])
all_fields = st.sampled_from([RATIONALS, SQRT2, SQRT2_SQRT3])


@st.composite
def series(draw, field=None, max_terms=4):
    fld = field or draw(fields)
    exps = draw(st.lists(exponents, max_size=max_terms, unique=True))
    return EpsSeries([(q, draw(elements(fld))) for q in exps], fld)


@st.composite
def points(draw, n=None, field=None, nonzero=True):
    n = n or draw(st.integers(1, 4))
    fld = field or draw(fields)
    p = draw(st.lists(series(fld), min_size=n, max_size=n))
    if nonzero and all(a.is_zero() for a in p):
        p[0] = EpsSeries.const(1, fld)
    return p


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

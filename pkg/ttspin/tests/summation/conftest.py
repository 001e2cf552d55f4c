"""Fixtures for the summation tests."""

import pytest

from ttspin.tests.summation.sums import zeeman, zz_all_pairs


@pytest.fixture
def zz_chain_terms():
    """All-pairs ZZ coupling on 20 sites."""
    return zz_all_pairs(20)


@pytest.fixture
def zeeman_terms():
    """Zeeman sum with distinct offsets on 20 sites."""
    return zeeman([10.0 * n - 55.0 for n in range(20)])

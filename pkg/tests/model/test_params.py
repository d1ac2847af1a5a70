# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Unit tests for model parameters, fluid states and regions."""

from fractions import Fraction

import pytest

from fqrt_fluid.error import InvalidParameterError
from fqrt_fluid.model.base import (
    FluidState, Region, format_ratio, in_space, params_from_dict, params_to_dict,
    parse_ratio, parse_region, region_label
)


@pytest.mark.parametrize(
    'value,result',
    [
        (Fraction(3, 2), Fraction(3, 2)),
        (2, Fraction(2)),
        ('3/2', Fraction(3, 2)),
        (' 4 / 2 ', Fraction(2)),
        ('5', Fraction(5)),
        ([2, 4], Fraction(1, 2))
    ]
)
def test_parse_ratio(value, result):
    """Test parsing exact queue-ratio values."""
    assert parse_ratio(value) == result


@pytest.mark.parametrize('value', [1.5, True, '0/1', '1/0', 'a/b', [1, 2, 3], -1, '1/2/3'])
def test_parse_invalid_ratio(value):
    """Test error for inexact, nonpositive or malformed ratios."""
    with pytest.raises(InvalidParameterError):
        parse_ratio(value)


def test_format_ratio():
    """Test string rendering of ratios in lowest terms."""
    assert format_ratio(Fraction(6, 4)) == '3/2'
    assert format_ratio(parse_ratio(1)) == '1/1'


def test_params_validation(params):
    """Test validation of parameter values."""
    assert params.r == 1.0
    with pytest.raises(InvalidParameterError):
        params.replace(mu12=0)
    with pytest.raises(InvalidParameterError):
        params.replace(theta1=-0.5)
    with pytest.raises(InvalidParameterError):
        params.replace(kappa12=-1)
    with pytest.raises(InvalidParameterError):
        params.replace(r12='1/2', r21='1/1')
    # Ratio strings are converted.
    p = params.replace(r12='3/2')
    assert p.r12 == Fraction(3, 2)
    assert p.r == 1.5


def test_params_serialization(params):
    """Test flat dictionary serialization of model parameters."""
    doc = params_to_dict(params)
    assert doc['r12'] == '1/1'
    assert params_from_dict(doc) == params
    doc['unknown'] = 1
    with pytest.raises(InvalidParameterError):
        params_from_dict(doc)
    del doc['unknown']
    del doc['kappa21']
    with pytest.raises(InvalidParameterError):
        params_from_dict(doc)


def test_state_space(params):
    """Test membership in the fluid state space."""
    assert in_space(FluidState(0.0, 0.0, 0.0), params)
    assert in_space(FluidState(1.0, 2.0, 1.0), params)
    assert not in_space(FluidState(-0.1, 0.0, 0.0), params)
    assert not in_space(FluidState(0.0, 0.0, 1.1), params)
    assert in_space(FluidState(-1e-12, 0.0, 0.0), params, atol=1e-9)


@pytest.mark.parametrize('label', ['S+', 'S-', 'A', 'A+', 'A-'])
def test_region_labels(label):
    """Test string rendering and parsing of regions."""
    region = parse_region(label)
    assert region_label(region) == label
    assert region.label == label


def test_invalid_region_label():
    """Test error for unknown region labels."""
    assert parse_region('A') == Region.BOUNDARY_A
    with pytest.raises(InvalidParameterError):
        parse_region('B')

"""
Input validation utilities for numerical parameters.

Author: Ahmad Yateem
"""

import math
from typing import Any, List, Sequence

from utils.exceptions import ValidationError


def is_power_of_two(value: int) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value > 0 and value & (value - 1) == 0


def validate_power_of_two(value: Any, field_name: str, minimum: int = 1) -> int:
    """
    Ensure a field is a power of two no smaller than ``minimum``.

    Args:
        value: Value to validate
        field_name: Name used in the error message
        minimum: Smallest accepted value

    Returns:
        The value as an int

    Raises:
        ValidationError: If the value is not an admissible power of two
    """
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not is_power_of_two(value) or value < minimum:
        raise ValidationError(f"{field_name} must be a power of two >= {minimum}, got {value!r}",
                              field=field_name)
    return value


def validate_positive_integer(value: Any, field_name: str) -> int:
    """Ensure a field is a positive integer."""
    if isinstance(value, bool):
        raise ValidationError(f"{field_name} must be a positive integer", field=field_name)

    try:
        value_int = int(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{field_name} must be a positive integer", field=field_name)

    if value_int <= 0 or value_int != value:
        raise ValidationError(f"{field_name} must be a positive integer", field=field_name)

    return value_int


def validate_positive(value: Any, field_name: str) -> float:
    """
    Ensure a field is a finite positive real.

    Args:
        value: Value to validate
        field_name: Name used in the error message

    Returns:
        The value as a float

    Raises:
        ValidationError: If the value is not positive and finite
    """
    if isinstance(value, bool):
        raise ValidationError(f"{field_name} must be a positive number", field=field_name)
    try:
        value_float = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{field_name} must be a positive number", field=field_name)
    if not math.isfinite(value_float) or value_float <= 0:
        raise ValidationError(f"{field_name} must be a positive number, got {value!r}", field=field_name)
    return value_float


def validate_range(value: float, field_name: str, low: float = None, high: float = None,
                   low_inclusive: bool = True, high_inclusive: bool = True) -> float:
    """Check that ``value`` lies in the interval described by the bounds."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{field_name} must be a number", field=field_name)

    if math.isnan(value):
        raise ValidationError(f"{field_name} must be a number", field=field_name)

    if low is not None and (value < low or (value == low and not low_inclusive)):
        raise ValidationError(f"{field_name}={value} is out of range", field=field_name)
    if high is not None and (value > high or (value == high and not high_inclusive)):
        raise ValidationError(f"{field_name}={value} is out of range", field=field_name)
    return value


def validate_dyadic(value: Any, field_name: str, minimum: float = None) -> float:
    """
    Ensure ``value`` is an integer power of two (negative exponents allowed).

    Raises:
        ValidationError: If the value is not dyadic or below ``minimum``
    """
    value = validate_positive(value, field_name)
    mantissa, _ = math.frexp(value)
    if mantissa != 0.5:
        raise ValidationError(f"{field_name} must be a power of two, got {value!r}", field=field_name)
    if minimum is not None and value < minimum:
        raise ValidationError(f"{field_name} must be >= {minimum}, got {value!r}", field=field_name)
    return value


def validate_sweep(values: Sequence, field_name: str) -> List:
    """
    Validate a sweep list: nonempty and sorted ascending or descending.

    Args:
        values: Sweep values
        field_name: Name used in the error message

    Returns:
        The values as a list

    Raises:
        ValidationError: If the list is empty or unsorted
    """
    values = list(values or [])
    if not values:
        raise ValidationError(f"{field_name} must be a nonempty list", field=field_name)
    ascending = all(a <= b for a, b in zip(values, values[1:]))
    descending = all(a >= b for a, b in zip(values, values[1:]))
    if not (ascending or descending):
        raise ValidationError(f"{field_name} must be sorted", field=field_name)
    return values

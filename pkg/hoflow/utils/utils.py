"""
General utility functions for hoflow

Parsing of the tuples and numbers given on the command line, and formatting of complex values.

Examples:

    .. code-block:: python

        parse_complex_tuple("1+2i, 0.5")    # array([1. +2.j, 0.5+0.j])
        parse_multiplicity("4,1,-1", rank=2)
"""
# dependencies
import numpy as np

# custom
from hoflow.multiplicity import Multiplicity

def _split(text: str) -> list[str]:
    parts = [p.strip() for p in text.strip().strip("()[]").split(",")]
    if not parts or any(not p for p in parts):
        raise ValueError(f"Malformed tuple: '{text}'")
    return parts

def parse_complex(text: str) -> complex:
    '''
    Parses a complex number written as "a+bi", "a-bj", "bi" or "a" (blanks ignored).

    Examples
    --------
    >>> parse_complex("1.5-2i")
    (1.5-2j)
    '''
    cleaned = text.replace(" ", "").replace("I", "j").replace("i", "j")
    if cleaned == "j" or cleaned.endswith(("+j", "-j")):
        cleaned = cleaned[:-1] + "1j"
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise ValueError(f"Cannot parse complex number '{text}'") from exc

def parse_complex_tuple(text: str) -> np.ndarray:
    '''comma-separated complex numbers, optionally in brackets'''
    return np.array([parse_complex(p) for p in _split(text)], dtype=complex)

def parse_real_tuple(text: str) -> np.ndarray:
    parts = _split(text)
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ValueError(f"Expected real numbers, got '{text}'") from exc

def parse_multiplicity(text: str, rank: int) -> Multiplicity:
    '''(m_s, m_m, m_l), or (m_s, m_l) in rank one'''
    return Multiplicity.from_values(parse_real_tuple(text), rank)

def format_complex(z: complex, digits: int = 12) -> str:
    """
    Formats a complex number as "a+bi" with ``digits`` significant digits.

    Real values are printed without an imaginary part.
    """
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.{digits}g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.{digits}g}{sign}{abs(z.imag):.{digits}g}i"

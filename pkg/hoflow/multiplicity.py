"""
multiplicity
============

Multiplicity functions on BC_r, their classification against the sets
M+, M0, M1, M2, M3 and MC0, the vector rho(m) and the two-parameter
(ell, ell_tilde)-deformation.

A multiplicity is W-invariant, so it is a triple (m_s, m_m, m_l) of values on
short, middle and long roots. In rank one there are no middle roots and m_m
is stored as 0.

Sets (exact inequalities; conditions on m_m are dropped in rank one):

- ``M+``:  m_s >= 0, m_m >= 0, m_l >= 0
- ``M0``:  m_m >= 0, m_s + m_l >= 0
- ``M1``:  m_m > 0, m_s > 0, m_s + 2 m_l > 0
- ``M2``:  m_m >= 0, m_l >= 0, m_s + m_l >= 0
- ``M3``:  m_m >= 0, m_l <= 0, m_s + 2 m_l >= 0
- ``MC0``: m_s + m_l >= 0 and m_m >= 0 (the complex regularity set, restricted to real triples)

The deformation by (ell, ell_tilde) is
``m(ell, ell_tilde) = (m_s + 2 ell, m_m + 2 ell_tilde, m_l - 2 ell)``.

Examples
--------
.. code-block:: python

    from hoflow.multiplicity import Multiplicity, classify, ell_range

    m = Multiplicity(4, 1, -1, rank=2)
    sorted(classify(m))   # ['M0', 'M1', 'M3', 'MC0']
    ell_range(m)          # (-2.0, 1.0)
"""
# builtins
import logging
from dataclasses import dataclass, astuple
from typing import NamedTuple, Optional

# dependencies
import numpy as np

# custom
from hoflow.errors import DomainError
from hoflow.rootsys import RootSystemBC

LABELS = ("M+", "M0", "M1", "M2", "M3", "MC0")

@dataclass(frozen=True)
class Multiplicity:
    '''
    Values (ms, mm, ml) of a W-invariant multiplicity on short, middle and long roots.

    ``rank`` is carried because the middle-root conditions only apply for rank > 1.
    For rank one, ``mm`` is forced to 0.
    '''
    ms: float
    mm: float
    ml: float
    rank: int = 2

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"Multiplicity rank must be positive, got {self.rank}")
        for name in ("ms", "mm", "ml"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.rank == 1 and self.mm != 0.0:
            logging.debug(f"Rank one has no middle roots; dropping m_m = {self.mm}")
            object.__setattr__(self, "mm", 0.0)

    def __str__(self) -> str:
        return f"({self.ms:g}, {self.mm:g}, {self.ml:g})"

    def __iter__(self):
        return iter((self.ms, self.mm, self.ml))

    def as_tuple(self) -> tuple:
        return (self.ms, self.mm, self.ml)

    def by_class(self, root_class: str) -> float:
        '''value on a root class ("short", "middle" or "long")'''
        return {"short": self.ms, "middle": self.mm, "long": self.ml}[root_class]

    def double(self, root_class: str) -> float:
        '''m_{2 alpha}: the long value for short roots, 0 otherwise'''
        return self.ml if root_class == "short" else 0.0

    def on_roots(self, rs: RootSystemBC) -> np.ndarray:
        '''m_alpha for every positive root of ``rs``'''
        return np.array([self.by_class(cls) for cls in rs.root_classes])

    def doubles_on_roots(self, rs: RootSystemBC) -> np.ndarray:
        return np.array([self.double(cls) for cls in rs.root_classes])

    def to_dict(self) -> dict:
        return {"m_s": self.ms, "m_m": self.mm, "m_l": self.ml, "rank": self.rank}

    @classmethod
    def from_values(cls, values, rank: int) -> "Multiplicity":
        """
        Builds a multiplicity from 3 values, or 2 values (m_s, m_l) in rank one.

        Raises
        ------
        ValueError
            If the number of values does not fit the rank.
        """
        values = [float(v) for v in values]
        if len(values) == 3:
            return cls(*values, rank=rank)
        if len(values) == 2 and rank == 1:
            return cls(values[0], 0.0, values[1], rank=1)
        raise ValueError(f"Multiplicity needs 3 values (m_s, m_m, m_l), or 2 values (m_s, m_l) in rank one. Got {values} for rank {rank}.")

@dataclass(frozen=True)
class Deformation:
    '''Deformation parameters (ell, ell_tilde).'''
    ell: float = 0.0
    ell_tilde: float = 0.0

    def __str__(self) -> str:
        return f"(ell={self.ell:g}, ell_tilde={self.ell_tilde:g})"

    def as_tuple(self) -> tuple:
        return astuple(self)

    def is_trivial(self) -> bool:
        return self.ell == 0.0 and self.ell_tilde == 0.0

class Decomposition(NamedTuple):
    '''m0 = deform(m, (ell, 0)) with m in M+ and ell in [ell_min(m), ell_max(m)].'''
    m: Multiplicity
    ell: float
    strict: bool

def rho(rs: RootSystemBC, m: Multiplicity) -> np.ndarray:
    """
    Half sum of positive roots weighted by m, in e-coordinates.

    Coordinate j equals (p/2)(m_s/2 + m_l + (j-1) m_m).

    Examples
    --------
    >>> rho(RootSystemBC(2), Multiplicity(2, 2, 1))
    array([2., 4.])
    """
    j = np.arange(rs.rank)
    return rs.long_norm / 2.0 * (m.ms / 2.0 + m.ml + j * m.mm)

def classify(m: Multiplicity, margin: float = 0.0) -> frozenset:
    """
    Labels of the multiplicity sets containing ``m``.

    Parameters
    ----------
    m : Multiplicity
        The multiplicity to classify.
    margin : float, optional
        Nonnegative margin; every inequality ``a >= 0`` or ``a > 0`` is tested as
        ``a >= margin`` or ``a > margin``. Default 0 gives the exact sets.

    Returns
    -------
    frozenset
        Subset of LABELS.
    """
    ms, mm, ml = m.as_tuple()
    has_middle = m.rank > 1
    ge = lambda a: a >= margin
    gt = lambda a: a > margin
    mm_ge = ge(mm) or not has_middle
    mm_gt = gt(mm) or not has_middle

    labels = set()
    if ge(ms) and mm_ge and ge(ml):
        labels.add("M+")
    if mm_ge and ge(ms + ml):
        labels.add("M0")
    if mm_gt and gt(ms) and gt(ms + 2 * ml):
        labels.add("M1")
    if mm_ge and ge(ml) and ge(ms + ml):
        labels.add("M2")
    if mm_ge and ge(-ml) and ge(ms + 2 * ml):
        labels.add("M3")
    if ge(ms + ml) and mm_ge:
        labels.add("MC0")
    return frozenset(labels)

def format_labels(labels) -> str:
    '''labels in the canonical order of LABELS'''
    return " ".join(label for label in LABELS if label in labels)

def in_m3_interior(m: Multiplicity) -> bool:
    '''strict version of M3'''
    has_middle = m.rank > 1
    return (m.mm > 0 or not has_middle) and m.ml < 0 and m.ms + 2 * m.ml > 0

def deform(m: Multiplicity, d: Deformation, strict: bool = False) -> Multiplicity:
    """
    Applies the (ell, ell_tilde)-deformation.

    Parameters
    ----------
    m : Multiplicity
        Base multiplicity.
    d : Deformation
        Deformation parameters.
    strict : bool, optional
        If True, reject results outside M0. Default False (raw mode).

    Returns
    -------
    Multiplicity
        ``(m_s + 2 ell, m_m + 2 ell_tilde, m_l - 2 ell)``.

    Raises
    ------
    DomainError
        In strict mode, if the result is not in M0.
    """
    out = Multiplicity(m.ms + 2 * d.ell, m.mm + 2 * d.ell_tilde, m.ml - 2 * d.ell, rank=m.rank)
    if strict and "M0" not in classify(out):
        raise DomainError(f"Deformation {d} of {m} gives {out}, which is not in M0 (requires ell_tilde >= -m_m/2).")
    return out

def ell_range(m: Multiplicity) -> tuple[float, float]:
    '''(ell_min, ell_max) = (-m_s/2, m_s/2 + m_l)'''
    return (-m.ms / 2.0, m.ms / 2.0 + m.ml)

def symmetric_ell(m: Multiplicity, ell: float) -> float:
    '''partner of ell under F_{ell} = F_{-ell + m_l - 1}'''
    return -ell + m.ml - 1.0

def decompose_m1(m0: Multiplicity) -> Optional[Decomposition]:
    """
    Writes m0 in M+ or M3 as a deformation of a multiplicity with vanishing long value.

    For m0 in M+ or M3 the result is m = (m0_s + m0_l, m0_m, 0) and ell = -m0_l / 2, with
    ell in [ell_min(m), ell_max(m)] and deform(m, (ell, 0)) == m0. The interval is open
    (``strict``) iff m0 is in M1.

    Returns
    -------
    Decomposition or None
        None if m0 lies outside M+ and M3.
    """
    labels = classify(m0)
    if "M+" not in labels and "M3" not in labels:
        return None
    m = Multiplicity(m0.ms + m0.ml, m0.mm, 0.0, rank=m0.rank)
    return Decomposition(m=m, ell=-m0.ml / 2.0, strict="M1" in labels)

def rho_2lt(rs: RootSystemBC, m: Multiplicity, d: Deformation = None) -> np.ndarray:
    """
    Hull vector rho(m(2 ell_tilde)) of the deformed boundedness criterion.

    Equal to rho(deform(m, (0, 2 ell_tilde))), i.e. rho of (m_s, m_m + 4 ell_tilde, m_l);
    it does not depend on ell. With d = None this is rho(m).
    """
    if d is None:
        return rho(rs, m)
    return rho(rs, deform(m, Deformation(0.0, 2.0 * d.ell_tilde)))

"""
catalog
=======

Geometric multiplicities of BC-type symmetric spaces and of the small K-type
deformations that realise spherical functions of non-trivial K-types as
(ell, ell_tilde)-deformed hypergeometric functions.

Each :class:`CatalogEntry` stores the base multiplicity, the deformation, the
deformed triple it must reproduce, and a reference value of the hull vector
``rho(m(2 ell_tilde))`` (which is rho(m) when ell_tilde = 0). The reference is
written in units of a named root so that the value does not depend on the
norm p of the long roots:

- ``rho_root="long"``: coordinates with respect to beta_1..beta_r,
- ``rho_root="short"``: rank one, as a multiple of the short root beta_1/2.

Usage
-----
.. code-block:: python

    from hoflow import catalog

    for entry in catalog.catalog():
        print(entry.name, entry.sigma_tau_mult, entry.rho_coords)

    entry = catalog.lookup("sp(2,1)", n=1)
    entry.partner_ell   # 0.0

Notes
-----
Entries are value objects; :func:`check_entry` recomputes the deformed triple
and the reference rho value and reports every mismatch.
"""
# builtins
import re
import logging
from dataclasses import dataclass, field
from typing import Optional

# dependencies
import numpy as np

# custom
from hoflow import config
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, Deformation, deform, ell_range, symmetric_ell, rho_2lt

@dataclass(frozen=True)
class CatalogEntry:
    '''
    Multiplicity data of one symmetric space, optionally deformed by a small K-type.

    ``partner_ell`` is the second ell producing the same function through the symmetry
    ell -> -ell + m_l - 1; ``admissible`` flags whether (ell, partner_ell) lie in
    [ell_min - 1, ell_max].
    '''
    name: str
    rank: int
    base_mult: Multiplicity
    deform: Deformation
    sigma_tau_mult: Multiplicity
    rho_coords: tuple
    source_note: str = ""
    rho_root: str = "long"
    partner_ell: Optional[float] = None
    admissible: tuple = field(default=())

    def __str__(self) -> str:
        return f"{self.name}: m={self.base_mult}, deformation={self.deform}, rank={self.rank}"

    @property
    def ell_min(self) -> float:
        return ell_range(self.base_mult)[0]

    @property
    def ell_max(self) -> float:
        return ell_range(self.base_mult)[1]

    def to_dict(self) -> dict:
        '''JSON-ready dict with stable field names.'''
        return {
            "name": self.name,
            "rank": self.rank,
            "base_mult": list(self.base_mult.as_tuple()),
            "ell": self.deform.ell,
            "ell_tilde": self.deform.ell_tilde,
            "sigma_tau_mult": list(self.sigma_tau_mult.as_tuple()),
            "rho_coords": list(self.rho_coords),
            "rho_root": self.rho_root,
            "ell_min": self.ell_min,
            "ell_max": self.ell_max,
            "partner_ell": self.partner_ell,
            "admissible": list(self.admissible),
            "source_note": self.source_note,
        }

def _entry(name: str, rank: int, base: tuple, d: Deformation = Deformation(), sigma_tau: tuple = None, rho_coords: tuple = (), note: str = "",
           rho_root: str = "long", partner: bool = False) -> CatalogEntry:
    base_mult = Multiplicity(*base, rank=rank)
    sigma_tau = base_mult if sigma_tau is None else Multiplicity(*sigma_tau, rank=rank)
    partner_ell = symmetric_ell(base_mult, d.ell) if partner else None
    admissible = ()
    if partner:
        lmin, lmax = ell_range(base_mult)
        admissible = tuple(lmin - 1 <= ell <= lmax for ell in (d.ell, partner_ell))
    return CatalogEntry(
        name=name,
        rank=rank,
        base_mult=base_mult,
        deform=d,
        sigma_tau_mult=sigma_tau,
        rho_coords=tuple(float(c) for c in rho_coords),
        source_note=note,
        rho_root=rho_root,
        partner_ell=partner_ell,
        admissible=admissible
    )

############################################# HERMITIAN SPACES #########################################
def su_pq(p: int, q: int) -> CatalogEntry:
    '''SU(p,q), p <= q; restricted root system BC_p (C_p if p == q).'''
    if not 1 <= p <= q:
        raise ValueError(f"SU(p,q) requires 1 <= p <= q, got p={p}, q={q}")
    rho_coords = [(q - p + 1) / 2 + j for j in range(p)]
    return _entry(f"SU({p},{q})", p, (2 * (q - p), 2, 1), rho_coords=rho_coords, note="Hermitian symmetric space")

def so_p2(p: int) -> CatalogEntry:
    '''SO_0(p,2), p >= 3; rank 2.'''
    if p < 3:
        raise ValueError(f"SO_0(p,2) requires p >= 3, got {p}")
    return _entry(f"SO_0({p},2)", 2, (0, p - 2, 1), rho_coords=(0.5, (p - 1) / 2), note="Hermitian symmetric space")

def so_star(n: int) -> CatalogEntry:
    '''SO*(2n), n >= 4; rank n/2 for n even (C type), (n-1)/2 for n odd (BC type).'''
    if n < 4:
        raise ValueError(f"SO*(2n) requires n >= 4, got {n}")
    if n % 2 == 0:
        rank = n // 2
        return _entry(f"SO*({2 * n})", rank, (0, 4, 1), rho_coords=[2 * j - 1.5 for j in range(1, rank + 1)], note="Hermitian symmetric space, n even")
    rank = (n - 1) // 2
    return _entry(f"SO*({2 * n})", rank, (4, 4, 1), rho_coords=[2 * j - 0.5 for j in range(1, rank + 1)], note="Hermitian symmetric space, n odd")

def sp_nr(n: int) -> CatalogEntry:
    '''Sp(n,R), rank n.'''
    if n < 1:
        raise ValueError(f"Sp(n,R) requires n >= 1, got {n}")
    return _entry(f"Sp({n},R)", n, (0, 1, 1), rho_coords=[j / 2 for j in range(1, n + 1)], note="Hermitian symmetric space")

def e6_14() -> CatalogEntry:
    return _entry("e6(-14)", 2, (8, 6, 1), rho_coords=(2.5, 5.5), note="exceptional Hermitian symmetric space")

def e7_25() -> CatalogEntry:
    return _entry("e7(-25)", 3, (0, 8, 1), rho_coords=(0.5, 4.5, 8.5), note="exceptional Hermitian symmetric space")

############################################# SMALL K-TYPES #########################################
def sp_p1(p: int, n: int) -> CatalogEntry:
    """
    Sp(p,1) with the small K-type tau_n: base (4(p-1), 3) on BC_1 and ell = n + 1.

    The deformed triple is (4p - 2 + 2n, 1 - 2n) and the partner parameter is -n + 1.
    rho is (2p + 1) times the short root.
    """
    if p < 1 or n < 0:
        raise ValueError(f"sp(p,1) tau_n requires p >= 1 and n >= 0, got p={p}, n={n}")
    return _entry(f"sp({p},1) tau_{n}", 1, (4 * (p - 1), 0, 3), Deformation(n + 1, 0.0), sigma_tau=(4 * p - 2 + 2 * n, 0, 1 - 2 * n), rho_coords=(2 * p + 1,),
                  note="small K-type of Sp(p,1)", rho_root="short", partner=True)

def so_2r1(r: int, s: int) -> CatalogEntry:
    """
    SO_0(2r,1) with the small K-type tau_s: base (0, 2r - 1) on BC_1 (type A_1) and ell = -s.

    ell = -s lies below ell_min = 0; the partner s + 2r - 2 gives the same function.
    rho is (r - 1/2) times the long root.
    """
    if r < 1 or s < 0:
        raise ValueError(f"so(2r,1) tau_s requires r >= 1 and s >= 0, got r={r}, s={s}")
    return _entry(f"so({2 * r},1) tau_{s}", 1, (0, 0, 2 * r - 1), Deformation(-s, 0.0), sigma_tau=(-2 * s, 0, 2 * r - 1 + 2 * s), rho_coords=(r - 0.5,),
                  note="small K-type of SO_0(2r,1)", rho_root="long", partner=True)

def so_pq(p: int, q: int, case: str = "i") -> CatalogEntry:
    """
    SO_0(p,q), p > q >= 3, with a small K-type.

    Base (0, 0, p - q) on BC_q. Case ``"i"`` deforms by (0, 1/2) to (0, 1, p - q), case ``"ii"``
    by (p - q, 1/2) to (2(p - q), 1, -(p - q)). The reference value is the hull vector
    rho(m(2 ell_tilde)) with long-root coordinates (p - q)/2 + (j - 1).
    """
    if not p > q >= 3:
        raise ValueError(f"so(p,q) requires p > q >= 3, got p={p}, q={q}")
    if case not in ("i", "ii"):
        raise KeyError(f"Unknown so(p,q) case {case}. Must be 'i' or 'ii'.")
    ell = 0.0 if case == "i" else float(p - q)
    sigma_tau = (0, 1, p - q) if case == "i" else (2 * (p - q), 1, -(p - q))
    rho_coords = [(p - q) / 2 + j for j in range(q)]
    return _entry(f"so({p},{q}) case {case}", q, (0, 0, p - q), Deformation(ell, 0.5), sigma_tau=sigma_tau, rho_coords=rho_coords,
                  note=f"small K-type of SO_0(p,q), case ({case})")

############################################# TABLE #########################################
def hermitian_catalog() -> list[CatalogEntry]:
    '''Hermitian symmetric spaces of the table, at the parameters used for checks.'''
    return [
        su_pq(2, 2),
        su_pq(3, 3),
        su_pq(2, 3),
        su_pq(2, 5),
        so_p2(5),
        so_star(8),
        so_star(10),
        sp_nr(2),
        sp_nr(3),
        e6_14(),
        e7_25(),
    ]

def catalog() -> list[CatalogEntry]:
    """
    The fixed multiplicity catalog.

    Returns
    -------
    list[CatalogEntry]
        Hermitian spaces, Sp(p,1) tau_n for p = 2 and n = 0..2, SO_0(4,1) tau_s for s = 0..2,
        and SO_0(5,3), SO_0(7,3) in both cases.
    """
    entries = hermitian_catalog()
    entries += [sp_p1(2, n) for n in range(3)]
    entries += [so_2r1(2, s) for s in range(3)]
    entries += [so_pq(5, 3, case) for case in ("i", "ii")]
    entries += [so_pq(7, 3, case) for case in ("i", "ii")]
    return entries

_LABEL_PATTERNS = [
    (re.compile(r"^su\((\d+),(\d+)\)$"), lambda g, n, s, case: su_pq(int(g[0]), int(g[1]))),
    (re.compile(r"^so_?0?\((\d+),2\)$"), lambda g, n, s, case: so_p2(int(g[0]))),
    (re.compile(r"^so\*\((\d+)\)$"), lambda g, n, s, case: so_star(int(g[0]) // 2)),
    (re.compile(r"^sp\((\d+),r\)$"), lambda g, n, s, case: sp_nr(int(g[0]))),
    (re.compile(r"^e6\(-14\)$"), lambda g, n, s, case: e6_14()),
    (re.compile(r"^e7\(-25\)$"), lambda g, n, s, case: e7_25()),
    (re.compile(r"^sp\((\d+),1\)$"), lambda g, n, s, case: sp_p1(int(g[0]), _required(n, "n", "sp(p,1)"))),
    (re.compile(r"^so_?0?\((\d+),1\)$"), lambda g, n, s, case: _so_odd_rank_one(int(g[0]), _required(s, "s", "so(2r,1)"))),
    (re.compile(r"^so_?0?\((\d+),(\d+)\)$"), lambda g, n, s, case: so_pq(int(g[0]), int(g[1]), case or "i")),
]

def _required(value, name: str, group: str) -> int:
    if value is None:
        raise ValueError(f"{group} needs the K-type parameter {name}")
    return int(value)

def _so_odd_rank_one(dim: int, s: int) -> CatalogEntry:
    if dim % 2:
        raise ValueError(f"so(2r,1) needs an even first index, got {dim}")
    return so_2r1(dim // 2, s)

def lookup(name: str, n: int = None, s: int = None, case: str = None) -> CatalogEntry:
    """
    Builds the catalog entry for a group label.

    Parameters
    ----------
    name : str
        Label such as ``"SU(2,3)"``, ``"SO_0(5,2)"``, ``"SO*(10)"``, ``"Sp(3,R)"``, ``"e6(-14)"``,
        ``"e7(-25)"``, ``"sp(2,1)"``, ``"so(4,1)"`` or ``"so(5,3)"``. Case and blanks are ignored.
    n : int, optional
        K-type parameter of sp(p,1).
    s : int, optional
        K-type parameter of so(2r,1).
    case : str, optional
        ``"i"`` (default) or ``"ii"`` for so(p,q).

    Raises
    ------
    KeyError
        If the label is not recognised.
    """
    label = name.replace(" ", "").lower()
    for pattern, builder in _LABEL_PATTERNS:
        match = pattern.match(label)
        if match:
            return builder(match.groups(), n, s, case)
    raise KeyError(f"Unknown group label {name}. Known forms: SU(p,q), SO_0(p,2), SO*(2n), Sp(n,R), e6(-14), e7(-25), sp(p,1), so(2r,1), so(p,q).")

def rho_reference(entry: CatalogEntry, long_norm: float = config.DEFAULT_LONG_NORM) -> np.ndarray:
    '''reference rho of an entry converted to e-coordinates'''
    unit = long_norm if entry.rho_root == "long" else long_norm / 2.0
    return unit * np.asarray(entry.rho_coords, dtype=float)

def check_entry(entry: CatalogEntry, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = 1e-12) -> list[str]:
    """
    Recomputes the deformed triple and the hull vector of an entry.

    Returns
    -------
    list[str]
        Human-readable mismatches; empty if the entry is consistent.
    """
    issues = []
    recomputed = deform(entry.base_mult, entry.deform)
    if recomputed != entry.sigma_tau_mult:
        issues.append(f"deformed triple {recomputed} differs from stored {entry.sigma_tau_mult}")
    rs = RootSystemBC(entry.rank, long_norm)
    computed = rho_2lt(rs, entry.base_mult, entry.deform)
    reference = rho_reference(entry, long_norm)
    if computed.shape != reference.shape or not np.allclose(computed, reference, rtol=0, atol=tol):
        issues.append(f"rho {computed} differs from reference {reference}")
    if issues:
        logging.warning(f"Catalog entry {entry.name} is inconsistent: {'; '.join(issues)}")
    return issues

'''Tests of hoflow.catalog'''
import numpy as np
import pytest

from hoflow.catalog import catalog, lookup, check_entry, rho_reference, su_pq, sp_p1, so_2r1, so_pq
from hoflow.multiplicity import Multiplicity, Deformation

def test_sp21_small_k_type():
    entry = lookup("sp(2,1)", n=1)
    assert entry.rank == 1
    assert entry.base_mult == Multiplicity(4, 0, 3, rank=1)
    assert entry.deform == Deformation(2.0, 0.0)
    assert entry.sigma_tau_mult == Multiplicity(8, 0, -1, rank=1)
    assert entry.partner_ell == 0.0
    assert entry.admissible == (True, True)
    np.testing.assert_allclose(rho_reference(entry), [5.0])

def test_so41_partner_parameter():
    entry = so_2r1(2, 1)
    assert entry.deform.ell == -1.0
    assert entry.partner_ell == 3.0
    # ell = -1 lies at the lower edge ell_min - 1
    assert entry.ell_min == 0.0
    assert entry.admissible == (True, True)

def test_so_pq_cases():
    first, second = so_pq(5, 3, "i"), so_pq(5, 3, "ii")
    assert first.sigma_tau_mult == Multiplicity(0, 1, 2, rank=3)
    assert second.sigma_tau_mult == Multiplicity(4, 1, -2, rank=3)
    with pytest.raises(KeyError):
        so_pq(5, 3, "iii")
    with pytest.raises(ValueError):
        so_pq(3, 3)

def test_rho_reference_scales_with_long_norm():
    entry = su_pq(2, 3)
    np.testing.assert_allclose(rho_reference(entry), [2.0, 4.0])
    np.testing.assert_allclose(rho_reference(entry, long_norm=1.0), [1.0, 2.0])

@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.name)
def test_catalog_entries_are_consistent(entry):
    assert check_entry(entry) == []
    assert check_entry(entry, long_norm=3.0) == []

def test_check_entry_reports_mismatch():
    entry = sp_p1(2, 0)
    broken = type(entry)(**{**entry.__dict__, "rho_coords": (4.0,)})
    issues = check_entry(broken)
    assert len(issues) == 1
    assert issues[0].startswith("rho")

@pytest.mark.parametrize("entry", [sp_p1(2, 1), so_2r1(2, 2), so_pq(7, 3, "ii")], ids=lambda e: e.name)
def test_check_entry_reports_wrong_deformed_triple(entry):
    ms, mm, ml = entry.sigma_tau_mult.as_tuple()
    broken = type(entry)(**{**entry.__dict__, "sigma_tau_mult": Multiplicity(ms + 2, mm, ml, rank=entry.rank)})
    issues = check_entry(broken)
    assert len(issues) == 1
    assert issues[0].startswith("deformed triple")

def test_so2r1_deformed_triples():
    assert [so_2r1(3, s).sigma_tau_mult for s in range(3)] == [Multiplicity(0, 0, 5, rank=1), Multiplicity(-2, 0, 7, rank=1), Multiplicity(-4, 0, 9, rank=1)]

@pytest.mark.parametrize("label, kwargs, name", [
    ("SU(2,3)", {}, "SU(2,3)"),
    ("SO_0(5,2)", {}, "SO_0(5,2)"),
    ("so*(10)", {}, "SO*(10)"),
    ("Sp(3, R)", {}, "Sp(3,R)"),
    ("e7(-25)", {}, "e7(-25)"),
    ("so(4,1)", {"s": 2}, "so(4,1) tau_2"),
    ("so(7,3)", {"case": "ii"}, "so(7,3) case ii"),
])
def test_lookup_labels(label, kwargs, name):
    assert lookup(label, **kwargs).name == name

def test_lookup_errors():
    with pytest.raises(KeyError):
        lookup("g2(2)")
    with pytest.raises(ValueError):
        lookup("sp(2,1)")
    with pytest.raises(ValueError):
        lookup("so(5,1)", s=0)

def test_to_dict_fields():
    payload = lookup("sp(2,1)", n=0).to_dict()
    assert payload["base_mult"] == [4.0, 0.0, 3.0]
    assert payload["sigma_tau_mult"] == [6.0, 0.0, 1.0]
    assert payload["rho_root"] == "short"
    assert payload["ell_min"] == -2.0

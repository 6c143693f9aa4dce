'''Shared fixtures of the hoflow test suite.'''
import pytest

from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity

@pytest.fixture(scope="session")
def rs1():
    return RootSystemBC(1)

@pytest.fixture(scope="session")
def rs2():
    return RootSystemBC(2)

@pytest.fixture(scope="session")
def rs3():
    return RootSystemBC(3)

@pytest.fixture
def m_standard():
    '''a multiplicity in M1 with a negative long value'''
    return Multiplicity(4, 1, -1, rank=2)

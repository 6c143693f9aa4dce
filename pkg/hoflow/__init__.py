'''Package initialization'''
from . import config
from . import errors
from . import rootsys
from . import multiplicity
from . import cfunc
from . import hcseries
from . import evaluator
from . import deformation
from . import rank_one
from . import catalog
from . import jobstarters
from . import samples
from . import runners
from . import analysis
from . import utils

__version__ = "0.1.0"

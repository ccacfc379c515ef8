from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from ._version import __version__

from warnings import filterwarnings
# show warnings issued by lbs (some categories are ignored by default)
filterwarnings('default', module=r'^lbs\.')

from . import errors
from . import diffnum
from . import tools
from . import latent
from . import icm
from . import rnd
from . import disagreement
from . import random_actions
from . import intrinsic
from . import policy
from . import envs
from . import benchmark
from . import config
from . import experiment
from . import report
from .latent import LbsModel, Transitions
from .config import ExperimentConfig
from .experiment import run_experiment

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from . import math
from . import io
from . import coverage
from . import normalize
from . import analytical

from gasket.addresses import *
from gasket.coalgebras import *
from gasket.completion import *
from gasket.euclidean import *
from gasket.exceptions import *
from gasket.loggers import configure_logging
from gasket.metrics import *
from gasket.oracle import *
from gasket.props import run_props, run_suite
from gasket.rendering import *
from gasket.settings import *
from gasket.spaces import *
from gasket.types import *
from gasket.universal_maps import *

__version__ = "0.1.0"

configure_logging()

from .config import *
from .main import *
from .reports import *

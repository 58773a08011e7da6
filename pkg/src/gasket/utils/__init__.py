from .formatting import *

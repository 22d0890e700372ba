#################
# Submodules are not imported here: `cnslab` is imported by every CLI invocation and
# numpy/pandas/sympy are slow to load. Import from cnslab.ring, cnslab.cns, ... directly.
#################
import logging

__version__ = "0.1.0"

logging.captureWarnings(True)
logging.getLogger("py.warnings").setLevel(logging.ERROR)

"""
Subcommands of the quadmanifold command line
"""

# Import command modules to register commands
from . import gen
from . import fit
from . import score
from . import evaluate
from . import sweep

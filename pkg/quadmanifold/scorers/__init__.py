"""
Outlier scorers for the quadmanifold package
"""

# Import scorer modules to register scorers
from . import quadric
from . import pca
from . import norm

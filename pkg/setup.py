# -*- mode:python; tab-width:4; c-basic-offset:4; intent-tabs-mode:nil; -*-
# ex: filetype=python tabstop=4 softtabstop=4 shiftwidth=4 expandtab autoindent smartindent

# Modules
from setuptools import setup
import os

# Setup
setup(
    name = 'PhAST',
    description = 'Physics-Attention Scaling Toolkit (PhAST)',
    long_description = \
"""
Physics-Attention Scaling Toolkit (PhAST) is a dense-algebra implementation
of Physics-Attention (slice, attend, deslice) neural PDE surrogates on
large unstructured meshes.

It provides:
 - the original, the algebraically reordered (fast) and the geometry
   tiled Physics-Attention formulations, numerically equivalent
 - analytic gradients and geometry amortized (random subset) training
 - a two-phase (physical state cache, then decoding) chunked inference
   of arbitrarily large meshes
 - a symbolic cost model and a per-step memory estimator
 - surface force integration (drag/lift coefficients) and field metrics
""",
    version = os.getenv('VERSION', '1.0.0.dev0'),
    license = 'GPL-3',
    package_dir = { '': 'python' },
    packages = [
        'PhAST', 'PhAST.Attention', 'PhAST.Cli', 'PhAST.Complexity', 'PhAST.Geometry',
        'PhAST.Inference', 'PhAST.Linalg', 'PhAST.Model', 'PhAST.Runtime', 'PhAST.Train',
    ],
    scripts = [ 'phast.py' ],
    python_requires = '>=3.8',
    install_requires = [ 'numpy>=1.20' ],
    extras_require = { 'test': [ 'pytest>=6' ] },
)

# -*- mode:python; tab-width:4; c-basic-offset:4; intent-tabs-mode:nil; -*-
# ex: filetype=python tabstop=4 softtabstop=4 shiftwidth=4 expandtab autoindent smartindent

# Physics-Attention Scaling Toolkit (PhAST)
#
# Physics-Attention Scaling Toolkit (PhAST) is free software:
# you can redistribute it and/or modify it under the terms of the GNU General
# Public License as published by the Free Software Foundation, Version 3.
#
# Physics-Attention Scaling Toolkit (PhAST) is distributed in the hope
# that it will be useful, but WITHOUT ANY WARRANTY; without even the implied
# warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.
#
# See the GNU General Public License for more details.
#
# SPDX-License-Identifier: GPL-3.0
# License-Filename: LICENSE/GPL-3.0.txt




#------------------------------------------------------------------------------
# MODULES
#------------------------------------------------------------------------------

# External
import numpy
import pytest

# Standard
import os
import os.path
import sys

# PhAST (from the source tree)
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'python'))

from PhAST.Geometry import \
     PhastGeometry_mesh
from PhAST.Linalg import \
     PhastLinalg_rng
from PhAST.Model import \
     PhastModel_config, \
     PhastModel_network, \
     phastModelParams


#------------------------------------------------------------------------------
# HOOKS
#------------------------------------------------------------------------------

def pytest_collection_modifyitems(config, items):
    if os.environ.get('PHAST_SLOW', '') not in ('', '0'):
        return
    oSkip = pytest.mark.skip(reason='slow test; set PHAST_SLOW=1 to run')
    for oItem in items:
        if 'slow' in oItem.keywords:
            oItem.add_marker(oSkip)


#------------------------------------------------------------------------------
# HELPERS
#------------------------------------------------------------------------------

def randomMesh(_iPoints, _oRng, _iFeatures = 0, _iTargets = 0):
    """
    Random box mesh, with optional features and targets
    """

    return PhastGeometry_mesh(
        _oRng.uniform((_iPoints, 3), -1.0, 2.0),
        _oRng.normal((_iPoints, _iFeatures)) if _iFeatures else None,
        _aTargets=_oRng.normal((_iPoints, _iTargets)) if _iTargets else None,
    )


def randomNetwork(_oRng, _oDtype = numpy.float64, **_dmConfig):
    """
    Network with random parameters (small default configuration)
    """

    dmConfig = dict(layers=2, heads=2, channels=16, slices=8, in_dim=3, out_dim=1, ffn_hidden=32)
    dmConfig.update(_dmConfig)
    return PhastModel_network(phastModelParams(PhastModel_config(**dmConfig), _oRng, _oDtype))


#------------------------------------------------------------------------------
# FIXTURES
#------------------------------------------------------------------------------

@pytest.fixture
def rng():
    return PhastLinalg_rng(1234)

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
# CLASSES
#------------------------------------------------------------------------------

class PhastTrain_sampler:
    """
    Geometry amortized sampling: each optimization step is trained on a
    random subset of the full mesh
    """

    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    def amortizedSample(_oMesh, _iSize, _oRng):
        """
        Draw a uniform sample without replacement of the given size

        The subset carries coordinates, features, normals, areas, targets,
        original indices and the source mesh bounding box.

        @param PhastGeometry_mesh _oMesh  Mesh
        @param int                _iSize  Subset size (n)
        @param PhastLinalg_rng    _oRng   Random number generator

        @return PhastGeometry_mesh  Subset

        @exception RuntimeError  On invalid subset size (n < 1 or n > N)
        """

        if _iSize < 1 or _iSize > _oMesh.points():
            raise RuntimeError('Invalid subset size (%d); mesh has %d points' % (_iSize, _oMesh.points()))
        return _oMesh.subset(_oRng.sample(_oMesh.points(), _iSize))

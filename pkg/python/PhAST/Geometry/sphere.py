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

# PhAST
from PhAST.Geometry.mesh import \
     PhastGeometry_mesh
from PhAST.Geometry.quadrature import \
     PhastGeometry_quadrature
from PhAST.Runtime import \
     PhastRuntime

# External
import numpy

# Standard
import errno
import json


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastGeometry_sphere:
    """
    Unit sphere meshes and manufactured fields

    Meshes carry exact outward normals (n = x) and equal quadrature weights
    (4 pi / N), such that areas sum to the sphere area.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    GOLDEN_ANGLE = numpy.pi * (3.0 - numpy.sqrt(5.0))
    REFERENCE_POINTS = 1000000
    SHEAR_SCALE = 0.1


    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    #
    # Meshes
    #

    def fibonacci(_iPoints, _oDtype = numpy.float64):
        """
        Quasi-uniform mesh (Fibonacci lattice)

        @param int  _iPoints  Points count (at least 4)
        @param type _oDtype   Floating-point type

        @return PhastGeometry_mesh  Mesh (coordinates, normals, areas)

        @exception RuntimeError  On invalid points count
        """

        if _iPoints < 4:
            raise RuntimeError('Invalid points count (%d); at least 4 points are required' % _iPoints)
        aIndex = numpy.arange(_iPoints, dtype=numpy.float64)
        aZ = 1.0 - (2.0*aIndex + 1.0) / _iPoints
        aR = numpy.sqrt(1.0 - aZ*aZ)
        aPhi = aIndex * PhastGeometry_sphere.GOLDEN_ANGLE
        aCoords = numpy.stack([aR*numpy.cos(aPhi), aR*numpy.sin(aPhi), aZ], axis=1)
        return PhastGeometry_sphere.mesh(aCoords, _oDtype)


    def random(_iPoints, _oRng, _oDtype = numpy.float64):
        """
        Area-uniform random mesh (normalized Gaussian vectors)

        @param int             _iPoints  Points count (at least 1)
        @param PhastLinalg_rng _oRng     Random number generator
        @param type            _oDtype   Floating-point type

        @return PhastGeometry_mesh  Mesh (coordinates, normals, areas)

        @exception RuntimeError  On invalid points count
        """

        if _iPoints < 1:
            raise RuntimeError('Invalid points count (%d)' % _iPoints)
        aCoords = _oRng.normal((_iPoints, 3))
        aCoords /= numpy.linalg.norm(aCoords, axis=1, keepdims=True)
        return PhastGeometry_sphere.mesh(aCoords, _oDtype)


    def mesh(_aCoords, _oDtype = numpy.float64):
        iPoints = _aCoords.shape[0]
        aCoords = _aCoords.astype(_oDtype)
        return PhastGeometry_mesh(
            aCoords,
            _aNormals=aCoords.copy(),
            _aAreas=numpy.full(iPoints, 4.0*numpy.pi / iPoints, dtype=_oDtype),
            _tBounds=(-numpy.ones(3), numpy.ones(3)),
        )


    #
    # Fields
    #

    def pressure(_aCoords):
        """
        Manufactured pressure p = sin(3x) cos(2y) + z^2

        @param numpy.ndarray _aCoords  Coordinates [N x 3]

        @return numpy.ndarray  Pressure [N x 1]
        """

        (aX, aY, aZ) = (_aCoords[:, 0], _aCoords[:, 1], _aCoords[:, 2])
        return (numpy.sin(3.0*aX) * numpy.cos(2.0*aY) + aZ*aZ)[:, None]


    def shear(_aCoords, _aNormals):
        """
        Manufactured tangential shear: the smooth field
        f = (cos(2y), sin(3z), xz) projected onto the tangent plane

        @param numpy.ndarray _aCoords   Coordinates [N x 3]
        @param numpy.ndarray _aNormals  Unit normals [N x 3]

        @return numpy.ndarray  Shear [N x 3]
        """

        (aX, aY, aZ) = (_aCoords[:, 0], _aCoords[:, 1], _aCoords[:, 2])
        aField = numpy.stack([numpy.cos(2.0*aY), numpy.sin(3.0*aZ), aX*aZ], axis=1) * PhastGeometry_sphere.SHEAR_SCALE
        return aField - numpy.sum(aField * _aNormals, axis=1, keepdims=True) * _aNormals


    def targets(_oMesh, _bShear = False):
        """
        Return the mesh with manufactured targets: pressure, and optionally
        the shear components (columns p, tau_x, tau_y, tau_z)

        @param PhastGeometry_mesh _oMesh   Mesh (3-D coordinates)
        @param bool               _bShear  Include shear

        @return PhastGeometry_mesh  Mesh with targets
        """

        if _oMesh.dims() != 3:
            raise RuntimeError('Invalid mesh; manufactured fields require 3-D coordinates')
        aTargets = PhastGeometry_sphere.pressure(_oMesh.coords)
        if _bShear:
            aTargets = numpy.concatenate([aTargets, PhastGeometry_sphere.shear(_oMesh.coords, _oMesh.normals)], axis=1)
        return _oMesh.withTargets(aTargets.astype(_oMesh.coords.dtype))


    #
    # Reference integrals
    #

    def coefficients(_oMesh, _oFlow, _bShear = False):
        """
        Integrate the manufactured fields over the given sphere mesh

        @return (numpy.ndarray, float, float)  Force [3], Cd, Cl
        """

        aShear = PhastGeometry_sphere.shear(_oMesh.coords, _oMesh.normals) if _bShear else None
        return PhastGeometry_quadrature.integrateForce(_oMesh, PhastGeometry_sphere.pressure(_oMesh.coords), aShear, _oFlow)


    def reference(_oFlow, _bShear = False, _iPoints = None):
        """
        High-resolution reference integral (quasi-uniform mesh)

        @param PhastGeometry_flow _oFlow    Free-stream constants
        @param bool               _bShear   Include shear
        @param int                _iPoints  Points count (default: REFERENCE_POINTS)

        @return dict  {'points', 'shear', 'force', 'cd', 'cl'}
        """

        iPoints = PhastGeometry_sphere.REFERENCE_POINTS if _iPoints is None else int(_iPoints)
        (aForce, fCd, fCl) = PhastGeometry_sphere.coefficients(PhastGeometry_sphere.fibonacci(iPoints), _oFlow, _bShear)
        return {'points': iPoints, 'shear': bool(_bShear), 'force': [float(f) for f in aForce], 'cd': fCd, 'cl': fCl}


    def saveReference(_sFilename, _dReference):
        """
        @exception OSError  On file I/O error
        """

        PhastRuntime.echo(json.dumps(_dReference, indent=2, sort_keys=True)+'\n', _sFilename)


    def loadReference(_sFilename):
        """
        @exception OSError  On file I/O error or malformed content
        """

        with open(_sFilename, 'r') as oFile:
            try:
                dReference = json.load(oFile)
            except ValueError as e:
                raise OSError(errno.EINVAL, 'Malformed reference integral (%s); %s' % (_sFilename, str(e)))
        for sKey in ('points', 'force', 'cd', 'cl'):
            if not isinstance(dReference, dict) or sKey not in dReference:
                raise OSError(errno.EINVAL, 'Malformed reference integral (%s); missing "%s"' % (_sFilename, sKey))
        return dReference

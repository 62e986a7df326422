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


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastGeometry_mesh:
    """
    Sampled geometry (MeshBatch)

    Attributes:
     - coords   [N x D]  coordinates
     - features [N x F]  input features (F may be zero)
     - normals  [N x 3]  unit outward normals (optional)
     - areas    [N]      quadrature weights (optional)
     - targets  [N x K]  target fields (optional)
     - indices  [N]      indices in the source mesh
     - lo, hi   [D]      coordinates bounding box of the source mesh

    Subsets and chunks carry their source mesh bounding box, such that
    coordinates normalize identically whatever subset they are drawn from.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    NORMAL_TOLERANCE = 1e-9


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _aCoords, _aFeatures = None, _aNormals = None, _aAreas = None, _aTargets = None, _aIndices = None, _tBounds = None):
        """
        Instantiate a new mesh

        @param numpy.ndarray _aCoords    Coordinates [N x D]
        @param numpy.ndarray _aFeatures  Input features [N x F] (default: none)
        @param numpy.ndarray _aNormals   Normals [N x 3] (optional)
        @param numpy.ndarray _aAreas     Areas [N] (optional)
        @param numpy.ndarray _aTargets   Targets [N x K] (optional)
        @param numpy.ndarray _aIndices   Source mesh indices [N] (default: 0..N-1)
        @param tuple         _tBounds    Source mesh (lo, hi) bounding box (default: coordinates bounding box)

        @exception RuntimeError  On inconsistent shapes
        """

        # Properties
        self.coords = numpy.asarray(_aCoords)
        if self.coords.ndim != 2:
            raise RuntimeError('Invalid coordinates dimensions (%s)' % (self.coords.shape,))
        iPoints = self.coords.shape[0]
        self.features = numpy.zeros((iPoints, 0), dtype=self.coords.dtype) if _aFeatures is None else numpy.asarray(_aFeatures)
        self.normals = None if _aNormals is None else numpy.asarray(_aNormals)
        self.areas = None if _aAreas is None else numpy.asarray(_aAreas)
        self.targets = None if _aTargets is None else numpy.asarray(_aTargets)
        self.indices = numpy.arange(iPoints) if _aIndices is None else numpy.asarray(_aIndices)
        if _tBounds is not None:
            (self.lo, self.hi) = (numpy.asarray(_tBounds[0], dtype=numpy.float64), numpy.asarray(_tBounds[1], dtype=numpy.float64))
        elif iPoints:
            (self.lo, self.hi) = (numpy.min(self.coords, axis=0).astype(numpy.float64), numpy.max(self.coords, axis=0).astype(numpy.float64))
        else:
            (self.lo, self.hi) = (None, None)

        # ... shapes
        for (sName, aArray, iDims) in [('features', self.features, 2), ('normals', self.normals, 2), ('areas', self.areas, 1), ('targets', self.targets, 2), ('indices', self.indices, 1)]:
            if aArray is None:
                continue
            if aArray.ndim != iDims or aArray.shape[0] != iPoints:
                raise RuntimeError('Invalid %s shape (%s); expected %d rows' % (sName, aArray.shape, iPoints))
        if self.normals is not None and self.normals.shape[1] != 3:
            raise RuntimeError('Invalid normals shape (%s); expected 3 columns' % (self.normals.shape,))


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def points(self):
        return self.coords.shape[0]


    def dims(self):
        return self.coords.shape[1]


    def bounds(self):
        """
        Return the source mesh bounding box

        @return tuple  (lo, hi) arrays [D] (None if unknown)
        """

        return (self.lo, self.hi)


    def verify(self):
        """
        Verify the mesh invariants (unit normals, positive areas, finite values)

        @return list  Empty if the mesh is valid, (ordered) error messages otherwise
        """

        lsErrors = list()
        for (sName, aArray) in [('coords', self.coords), ('features', self.features), ('targets', self.targets)]:
            if aArray is not None and not numpy.all(numpy.isfinite(aArray)):
                lsErrors.append('Invalid %s; non-finite entries' % sName)
        if self.normals is not None and self.points():
            fDeviation = float(numpy.max(numpy.abs(numpy.sqrt(numpy.sum(self.normals*self.normals, axis=1)) - 1.0)))
            if not fDeviation <= self.NORMAL_TOLERANCE:
                lsErrors.append('Invalid normals; unit norm deviation %g exceeds %g' % (fDeviation, self.NORMAL_TOLERANCE))
        if self.areas is not None and self.points() and not numpy.all(self.areas > 0.0):
            lsErrors.append('Invalid areas; %d non-positive area(s)' % int(numpy.sum(~(self.areas > 0.0))))
        return lsErrors


    def check(self):
        """
        Verify the mesh invariants, raising on error

        @exception RuntimeError  On invalid mesh
        """

        lsErrors = self.verify()
        if lsErrors:
            raise RuntimeError('Invalid mesh; %s' % '; '.join(lsErrors))


    def subset(self, _aIndices):
        """
        Return the mesh restricted to the given (local) indices

        @param numpy.ndarray _aIndices  Indices (into this mesh)

        @return PhastGeometry_mesh  Subset (carrying source indices and bounds)
        """

        aIndices = numpy.asarray(_aIndices, dtype=numpy.int64)
        return PhastGeometry_mesh(
            self.coords[aIndices],
            self.features[aIndices],
            None if self.normals is None else self.normals[aIndices],
            None if self.areas is None else self.areas[aIndices],
            None if self.targets is None else self.targets[aIndices],
            self.indices[aIndices],
            (self.lo, self.hi),
        )


    def slice(self, _iStart, _iStop):
        """
        Return the mesh contiguous range [start, stop)

        @param int _iStart  Start index
        @param int _iStop   Stop index (excluded)

        @return PhastGeometry_mesh  Range (carrying source indices and bounds)
        """

        return PhastGeometry_mesh(
            self.coords[_iStart:_iStop],
            self.features[_iStart:_iStop],
            None if self.normals is None else self.normals[_iStart:_iStop],
            None if self.areas is None else self.areas[_iStart:_iStop],
            None if self.targets is None else self.targets[_iStart:_iStop],
            self.indices[_iStart:_iStop],
            (self.lo, self.hi),
        )


    def chunks(self, _iChunkSize):
        """
        Iterate over the mesh in index-ordered chunks

        @param int _iChunkSize  Chunk size

        @return generator  Chunks (PhastGeometry_mesh)

        @exception RuntimeError  On invalid chunk size
        """

        if _iChunkSize is None or int(_iChunkSize) < 1:
            raise RuntimeError('Invalid chunk size (%s)' % _iChunkSize)
        for iStart in range(0, self.points(), int(_iChunkSize)):
            yield self.slice(iStart, min(iStart+int(_iChunkSize), self.points()))


    def withTargets(self, _aTargets):
        """
        Return a (shallow) copy of this mesh with the given targets

        @param numpy.ndarray _aTargets  Targets [N x K]

        @return PhastGeometry_mesh  Mesh
        """

        return PhastGeometry_mesh(self.coords, self.features, self.normals, self.areas, _aTargets, self.indices, (self.lo, self.hi))


    def withBounds(self, _tBounds):
        """
        Return a (shallow) copy of this mesh with the given source bounding box

        @param tuple _tBounds  (lo, hi) arrays [D]

        @return PhastGeometry_mesh  Mesh
        """

        return PhastGeometry_mesh(self.coords, self.features, self.normals, self.areas, self.targets, self.indices, _tBounds)


#------------------------------------------------------------------------------
# FACTORY
#------------------------------------------------------------------------------

def phastMeshConcatenate(_loMeshes):
    """
    Concatenate the given meshes (e.g. chunks) into one

    @param list _loMeshes  Meshes (sharing the same columns layout)

    @return PhastGeometry_mesh  Mesh (with the first mesh bounds)

    @exception RuntimeError  On empty list or inconsistent columns
    """

    if not _loMeshes:
        raise RuntimeError('Invalid mesh list; at least one mesh is required')

    def concatenate(_sName):
        laArrays = [getattr(oMesh, _sName) for oMesh in _loMeshes]
        if all([aArray is None for aArray in laArrays]):
            return None
        if any([aArray is None for aArray in laArrays]):
            raise RuntimeError('Inconsistent mesh columns (%s)' % _sName)
        return numpy.concatenate(laArrays, axis=0)

    return PhastGeometry_mesh(
        concatenate('coords'), concatenate('features'), concatenate('normals'),
        concatenate('areas'), concatenate('targets'), concatenate('indices'),
        _loMeshes[0].bounds() if _loMeshes[0].lo is not None else None,
    )

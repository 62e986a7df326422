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
from PhAST import \
     PHAST_CSV_FORMAT
from PhAST.Geometry.mesh import \
     PhastGeometry_mesh

# External
import numpy

# Standard
import errno
import os
import os.path


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastGeometry_layout:
    """
    Mesh file columns layout

    Header columns, in order:
      x[,y[,z]]   coordinates
      [,f1..fF]   input features
      [,nx,ny,nz] normals
      [,area]     quadrature weights
      [,t1..tK]   targets (or predictions)
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    COORDINATES = ('x', 'y', 'z')
    NORMALS = ('nx', 'ny', 'nz')
    AREA = 'area'


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _iDims, _iFeatures = 0, _bNormals = False, _bAreas = False, _iTargets = 0):

        # Properties
        self.dims = int(_iDims)
        self.features = int(_iFeatures)
        self.normals = bool(_bNormals)
        self.areas = bool(_bAreas)
        self.targets = int(_iTargets)


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def columns(self):
        lsColumns = list(self.COORDINATES[:self.dims])
        lsColumns += ['f%d' % (i+1) for i in range(self.features)]
        if self.normals:
            lsColumns += list(self.NORMALS)
        if self.areas:
            lsColumns.append(self.AREA)
        lsColumns += ['t%d' % (i+1) for i in range(self.targets)]
        return lsColumns


    def header(self):
        return ','.join(self.columns())


    def mesh(self, _aRows, _tBounds = None, _aIndices = None):
        """
        Return the mesh of the given rows

        @param numpy.ndarray _aRows     Rows [N x columns]
        @param tuple         _tBounds   Source mesh bounding box (None for the rows one)
        @param numpy.ndarray _aIndices  Source mesh indices (None for 0..N-1)

        @return PhastGeometry_mesh  Mesh
        """

        iColumn = 0
        aCoords = _aRows[:, iColumn:iColumn+self.dims]
        iColumn += self.dims
        aFeatures = _aRows[:, iColumn:iColumn+self.features]
        iColumn += self.features
        aNormals = None
        if self.normals:
            aNormals = _aRows[:, iColumn:iColumn+3]
            iColumn += 3
        aAreas = None
        if self.areas:
            aAreas = _aRows[:, iColumn]
            iColumn += 1
        aTargets = _aRows[:, iColumn:iColumn+self.targets] if self.targets else None
        return PhastGeometry_mesh(aCoords, aFeatures, aNormals, aAreas, aTargets, _aIndices, _tBounds)


    def rows(self, _oMesh, _aTargets = None):
        """
        Return the rows of the given mesh

        @param PhastGeometry_mesh _oMesh     Mesh
        @param numpy.ndarray      _aTargets  Targets (None for the mesh ones)

        @return numpy.ndarray  Rows [N x columns]
        """

        laColumns = [_oMesh.coords, _oMesh.features]
        if self.normals:
            laColumns.append(_oMesh.normals)
        if self.areas:
            laColumns.append(_oMesh.areas[:, None])
        if self.targets:
            laColumns.append(_oMesh.targets if _aTargets is None else _aTargets)
        return numpy.concatenate([numpy.asarray(a, dtype=numpy.float64) for a in laColumns], axis=1)


#------------------------------------------------------------------------------
# FACTORY
#------------------------------------------------------------------------------

def phastMeshLayout(_oMesh, _iTargets = None):
    """
    Return the layout of the given mesh

    @param PhastGeometry_mesh _oMesh     Mesh
    @param int                _iTargets  Targets columns count (None for the mesh targets)

    @return PhastGeometry_layout  Layout
    """

    if _iTargets is None:
        _iTargets = 0 if _oMesh.targets is None else _oMesh.targets.shape[1]
    return PhastGeometry_layout(_oMesh.dims(), _oMesh.features.shape[1], _oMesh.normals is not None, _oMesh.areas is not None, _iTargets)


def phastHeaderLayout(_sHeader):
    """
    Parse the given header line

    @param str _sHeader  Header line (without line terminator)

    @return PhastGeometry_layout  Layout

    @exception ValueError  On invalid header
    """

    lsColumns = [s.strip() for s in _sHeader.split(',')]
    iDims = 0
    while iDims < len(lsColumns) and iDims < 3 and lsColumns[iDims] == PhastGeometry_layout.COORDINATES[iDims]:
        iDims += 1
    if not iDims:
        raise ValueError('expected leading coordinates columns (x[,y[,z]])')
    lsRest = lsColumns[iDims:]

    def numbered(_sPrefix):
        iCount = 0
        while iCount < len(lsRest) and lsRest[iCount] == '%s%d' % (_sPrefix, iCount+1):
            iCount += 1
        del lsRest[:iCount]
        return iCount

    iFeatures = numbered('f')
    bNormals = lsRest[:3] == list(PhastGeometry_layout.NORMALS)
    if bNormals:
        del lsRest[:3]
    bAreas = lsRest[:1] == [PhastGeometry_layout.AREA]
    if bAreas:
        del lsRest[:1]
    iTargets = numbered('t')
    if lsRest:
        raise ValueError('unexpected column "%s"' % lsRest[0])
    return PhastGeometry_layout(iDims, iFeatures, bNormals, bAreas, iTargets)


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastGeometry_writer:
    """
    Streaming mesh file writer (context manager)

    Reals are written with 17 significant digits, for an exact binary64
    round-trip.
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _sFilename, _oLayout):
        """
        @param str                  _sFilename  File name
        @param PhastGeometry_layout _oLayout    Columns layout
        """

        # Properties
        self._sFilename = _sFilename
        self.layout = _oLayout
        self._oFile = None
        self.points = 0


    def __enter__(self):
        self.open()
        return self


    def __exit__(self, _oType, _oValue, _oTraceback):
        self.close()


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def open(self):
        """
        @exception OSError  On file I/O error
        """

        sDirectory = os.path.dirname(self._sFilename)
        if sDirectory:
            os.makedirs(sDirectory, exist_ok=True)
        self._oFile = open(self._sFilename, 'w', encoding='utf-8', newline='\n')
        self._oFile.write(self.layout.header()+'\n')


    def write(self, _oMesh, _aTargets = None):
        """
        Append the given mesh (chunk) rows

        @param PhastGeometry_mesh _oMesh     Mesh
        @param numpy.ndarray      _aTargets  Targets (None for the mesh ones)

        @exception OSError  On file I/O error
        """

        aRows = self.layout.rows(_oMesh, _aTargets)
        if aRows.shape[0]:
            numpy.savetxt(self._oFile, aRows, fmt=PHAST_CSV_FORMAT, delimiter=',')
        self.points += aRows.shape[0]


    def close(self):
        if self._oFile is not None:
            self._oFile.close()
            self._oFile = None


class PhastGeometry_reader:
    """
    Mesh file reader, whole or chunked (MeshStream)

    Chunks are yielded in index order and carry the whole file bounding box
    (computed by a first streaming pass), such that they normalize as the
    whole mesh does.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    READ_CHUNK_SIZE = 65536


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _sFilename, _oDtype = numpy.float64):
        """
        @param str  _sFilename  File name
        @param type _oDtype     Floating-point type
        """

        # Properties
        self._sFilename = _sFilename
        self._oDtype = _oDtype
        self.layout = None
        self._tBounds = None
        self._iPoints = None


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def _error(self, _iLine, _iOffset, _sMessage):
        return OSError(errno.EINVAL, 'Malformed mesh file (%s); line %d, byte offset %d: %s' % (self._sFilename, _iLine, _iOffset, _sMessage))


    def _rows(self, _iChunkSize):
        """
        Iterate over the file rows, in blocks

        @return generator  (first index, rows array) pairs

        @exception OSError  On file I/O error or malformed content
        """

        with open(self._sFilename, 'rb') as oFile:
            bHeader = oFile.readline()
            if not bHeader.endswith(b'\n'):
                raise self._error(1, 0, 'missing or truncated header')
            try:
                self.layout = phastHeaderLayout(bHeader.decode('utf-8').rstrip('\r\n'))
            except (UnicodeDecodeError, ValueError) as e:
                raise self._error(1, 0, 'invalid header; %s' % str(e))
            iColumns = len(self.layout.columns())
            (iLine, iOffset, iIndex) = (1, len(bHeader), 0)
            lafRows = list()
            for bRow in oFile:
                iLine += 1
                if not bRow.endswith(b'\n'):
                    raise self._error(iLine, iOffset, 'truncated row')
                try:
                    lfRow = [float(s) for s in bRow.decode('utf-8').rstrip('\r\n').split(',')]
                except (UnicodeDecodeError, ValueError) as e:
                    raise self._error(iLine, iOffset, 'invalid value; %s' % str(e))
                if len(lfRow) != iColumns:
                    raise self._error(iLine, iOffset, '%d values, expected %d' % (len(lfRow), iColumns))
                lafRows.append(lfRow)
                iOffset += len(bRow)
                if len(lafRows) == _iChunkSize:
                    yield (iIndex, numpy.array(lafRows, dtype=numpy.float64))
                    iIndex += len(lafRows)
                    lafRows = list()
            if lafRows:
                yield (iIndex, numpy.array(lafRows, dtype=numpy.float64))


    def bounds(self):
        """
        Return the file coordinates bounding box (first streaming pass)

        @return tuple  (lo, hi) arrays [D] (None if the file has no rows)

        @exception OSError  On file I/O error or malformed content
        """

        if self._tBounds is None:
            (aLo, aHi, iPoints) = (None, None, 0)
            for (iIndex, aRows) in self._rows(self.READ_CHUNK_SIZE):
                aCoords = aRows[:, :self.layout.dims]
                aLo = numpy.min(aCoords, axis=0) if aLo is None else numpy.minimum(aLo, numpy.min(aCoords, axis=0))
                aHi = numpy.max(aCoords, axis=0) if aHi is None else numpy.maximum(aHi, numpy.max(aCoords, axis=0))
                iPoints += aRows.shape[0]
            self._tBounds = (aLo, aHi)
            self._iPoints = iPoints
        return self._tBounds


    def points(self):
        self.bounds()
        return self._iPoints


    def chunks(self, _iChunkSize):
        """
        Iterate over the file in index-ordered chunks

        @param int _iChunkSize  Chunk size

        @return generator  Chunks (PhastGeometry_mesh)

        @exception RuntimeError  On invalid chunk size
        @exception OSError       On file I/O error or malformed content
        """

        if _iChunkSize is None or int(_iChunkSize) < 1:
            raise RuntimeError('Invalid chunk size (%s)' % _iChunkSize)
        tBounds = self.bounds()
        for (iIndex, aRows) in self._rows(int(_iChunkSize)):
            yield self.layout.mesh(aRows.astype(self._oDtype), tBounds, numpy.arange(iIndex, iIndex+aRows.shape[0]))


    def read(self):
        """
        Read the whole file

        @return PhastGeometry_mesh  Mesh

        @exception OSError  On file I/O error or malformed content
        """

        laRows = [aRows for (iIndex, aRows) in self._rows(self.READ_CHUNK_SIZE)]
        iColumns = len(self.layout.columns())
        aRows = numpy.concatenate(laRows, axis=0) if laRows else numpy.zeros((0, iColumns))
        return self.layout.mesh(aRows.astype(self._oDtype))


#------------------------------------------------------------------------------
# FACTORY
#------------------------------------------------------------------------------

def phastMeshWrite(_sFilename, _oMesh, _aTargets = None):
    """
    Write the given mesh

    @param str                _sFilename  File name
    @param PhastGeometry_mesh _oMesh      Mesh
    @param numpy.ndarray      _aTargets   Targets (None for the mesh ones)

    @return int  Points count

    @exception OSError  On file I/O error
    """

    oLayout = phastMeshLayout(_oMesh, None if _aTargets is None else _aTargets.shape[1])
    with PhastGeometry_writer(_sFilename, oLayout) as oWriter:
        oWriter.write(_oMesh, _aTargets)
    return oWriter.points


def phastMeshRead(_sFilename, _oDtype = numpy.float64):
    """
    Read the given mesh file

    @exception OSError  On file I/O error or malformed content
    """

    return PhastGeometry_reader(_sFilename, _oDtype).read()

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
from PhAST.Model import \
     PhastModel_checkpoint

# External
import numpy

# Standard
import errno
import os
import os.path
import shutil
import tempfile


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastInference_plan:
    """
    Chunks plan (ChunkPlan): K disjoint, index-ordered ranges covering 0..N-1
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _iPoints, _iChunkSize):
        """
        @param int _iPoints     Points count (N)
        @param int _iChunkSize  Chunk size (at least 1)

        @exception RuntimeError  On invalid chunk size
        """

        if _iChunkSize is None or int(_iChunkSize) < 1:
            raise RuntimeError('Invalid chunk size (%s)' % _iChunkSize)

        # Properties
        self.points = int(_iPoints)
        self.chunk_size = int(_iChunkSize)
        self.ranges = [(iStart, min(iStart+self.chunk_size, self.points)) for iStart in range(0, self.points, self.chunk_size)]


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def count(self):
        return len(self.ranges)


class PhastInference_cache:
    """
    Physical state cache (StateCache): per layer, per head output states
    s'_out [M x C_h], along with the fingerprint of the parameters it was
    built with and the source mesh bounding box
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    KIND_CACHE = 'phast-cache'


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _sFingerprint, _llaStates, _tBounds, _iPoints = 0, _iChunkSize = 0):
        """
        @param str   _sFingerprint  Parameters fingerprint
        @param list  _llaStates     Per layer, per head output states [M x C_h]
        @param tuple _tBounds       Source mesh bounding box (lo, hi)
        @param int   _iPoints       Source mesh points count
        @param int   _iChunkSize    Chunk size used to build the cache
        """

        # Properties
        self.fingerprint = _sFingerprint
        self.states = _llaStates
        self.lo = numpy.asarray(_tBounds[0], dtype=numpy.float64)
        self.hi = numpy.asarray(_tBounds[1], dtype=numpy.float64)
        self.points = int(_iPoints)
        self.chunk_size = int(_iChunkSize)


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def layers(self):
        return len(self.states)


    def heads(self):
        return len(self.states[0]) if self.states else 0


    def bounds(self):
        return (self.lo, self.hi)


    def save(self, _sBasename):
        """
        Save the cache: JSON manifest + little-endian binary of all output
        states, in layer-major order

        @param str _sBasename  Basename

        @return str  Manifest path

        @exception OSError  On file I/O error
        """

        (iSlices, iChannelsHead) = self.states[0][0].shape if self.heads() else (0, 0)
        dManifest = {
            'kind': self.KIND_CACHE,
            'fingerprint': self.fingerprint,
            'layers': self.layers(),
            'heads': self.heads(),
            'slices': iSlices,
            'head_channels': iChannelsHead,
            'points': self.points,
            'chunk_size': self.chunk_size,
            'bounds': {'lo': [float(f) for f in self.lo], 'hi': [float(f) for f in self.hi]},
        }
        ltTensors = [
            ('layer%d.head%d.s_out' % (iLayer, iHead), aSout)
            for (iLayer, laSout) in enumerate(self.states) for (iHead, aSout) in enumerate(laSout)
        ]
        return PhastModel_checkpoint().writeTensors(_sBasename, dManifest, ltTensors)


#------------------------------------------------------------------------------
# FACTORY
#------------------------------------------------------------------------------

def phastCacheLoad(_sBasename):
    """
    Load a cache

    @param str _sBasename  Basename

    @return PhastInference_cache  Cache

    @exception OSError  On file I/O error or malformed content
    """

    (dManifest, ltTensors) = PhastModel_checkpoint().readTensors(_sBasename, PhastInference_cache.KIND_CACHE)
    try:
        (iLayers, iHeads) = (int(dManifest['layers']), int(dManifest['heads']))
        tShape = (int(dManifest['slices']), int(dManifest['head_channels']))
        tBounds = (dManifest['bounds']['lo'], dManifest['bounds']['hi'])
        sFingerprint = dManifest['fingerprint']
    except (KeyError, TypeError, ValueError) as e:
        raise OSError(errno.EINVAL, 'Malformed cache manifest (%s); %s' % (_sBasename, str(e)))
    daTensors = dict(ltTensors)
    llaStates = list()
    for iLayer in range(iLayers):
        laSout = list()
        for iHead in range(iHeads):
            sName = 'layer%d.head%d.s_out' % (iLayer, iHead)
            if sName not in daTensors or daTensors[sName].shape != tShape:
                raise OSError(errno.EINVAL, 'Malformed cache (%s); missing or invalid "%s" states' % (_sBasename, sName))
            laSout.append(daTensors[sName])
        llaStates.append(laSout)
    return PhastInference_cache(sFingerprint, llaStates, tBounds, dManifest.get('points', 0), dManifest.get('chunk_size', 0))


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastInference_store:
    """
    Chunk features trajectory store, in memory or spilled to a scratch
    directory (one .npy file per chunk)
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _sSpillDir = None):
        """
        @param str _sSpillDir  Spill directory (None or empty for in-memory)
        """

        # Properties
        self._sDirectory = None
        self._daChunks = dict()
        if _sSpillDir:
            os.makedirs(_sSpillDir, exist_ok=True)
            self._sDirectory = tempfile.mkdtemp(prefix='phast-', dir=_sSpillDir)


    def __enter__(self):
        return self


    def __exit__(self, _oType, _oValue, _oTraceback):
        self.clear()


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def spilled(self):
        return self._sDirectory is not None


    def _path(self, _iChunk):
        return os.path.join(self._sDirectory, 'chunk%06d.npy' % _iChunk)


    def put(self, _iChunk, _aX):
        if self._sDirectory is None:
            self._daChunks[_iChunk] = _aX
        else:
            numpy.save(self._path(_iChunk), _aX)


    def get(self, _iChunk):
        if self._sDirectory is None:
            return self._daChunks[_iChunk]
        return numpy.load(self._path(_iChunk))


    def clear(self):
        self._daChunks = dict()
        if self._sDirectory is not None:
            shutil.rmtree(self._sDirectory, ignore_errors=True)
            self._sDirectory = None

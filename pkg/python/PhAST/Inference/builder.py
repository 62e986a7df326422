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
from PhAST.Attention import \
     PhastAttention, \
     PhastAttention_accumulator
from PhAST.Geometry import \
     PhastGeometry_metrics
from PhAST.Inference.cache import \
     PhastInference_plan, \
     PhastInference_cache, \
     PhastInference_store
from PhAST.Runtime import \
     PhastMismatchError, \
     PhastObject

# External
import numpy


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastInference_builder(PhastObject):
    """
    Decoupled inference: state cache construction and full mesh decoding

    The cache is built one layer frontier at a time. All chunks are first
    embedded into the trajectory store. Then, for each layer l:
     - sweep A: every chunk's layer-normalized features contribute to the
       per-head (s_raw, d) accumulators; states are then finalized
       (Linear1, attention, Linear3) into s'_out(l)
     - sweep B: every chunk's features are advanced through layer l,
       decoded against s'_out(l) (skipped for the last layer)
    Only one chunk's features are resident at a time when the store is
    spilled to disk.

    Decoding runs each query point through the block structure, with every
    Physics-Attention sub-layer replaced by Softmax(Linear2(x)) s'_out(l).
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _oNetwork, _iChunkSize = 4096, _sSpillDir = None):
        """
        @param PhastModel_network _oNetwork    Network
        @param int                _iChunkSize  Chunk size
        @param str                _sSpillDir   Trajectory store spill directory (None for in-memory)

        @exception RuntimeError  On invalid chunk size
        """
        PhastObject.__init__(self)

        if _iChunkSize is None or int(_iChunkSize) < 1:
            raise RuntimeError('Invalid chunk size (%s)' % _iChunkSize)

        # Properties
        self.network = _oNetwork
        self.chunk_size = int(_iChunkSize)
        self._sSpillDir = _sSpillDir


    def _tag(self):
        return 'I'


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    #
    # Cache
    #

    def build(self, _oStream, _oCounter = None):
        """
        Build the state cache from the given mesh stream

        @param object _oStream   Mesh stream, providing bounds() and chunks(size)
                                 (e.g. PhastGeometry_mesh, PhastGeometry_reader)
        @param object _oCounter  Operations counter (ignored if None)

        @return PhastInference_cache  Cache

        @exception RuntimeError       On empty stream
        @exception PhastNumericError  On degenerate slice
        @exception OSError            On stream I/O error
        """

        oNetwork = self.network
        oConfig = oNetwork.config
        tBounds = _oStream.bounds()
        if tBounds[0] is None:
            raise RuntimeError('Invalid mesh stream; no points')

        with PhastInference_store(self._sSpillDir) as oStore:

            # Embedding
            (iChunks, iPoints) = (0, 0)
            for oChunk in _oStream.chunks(self.chunk_size):
                if not oChunk.points():
                    continue
                oStore.put(iChunks, oNetwork.embed(oNetwork.inputs(oChunk.withBounds(tBounds))))
                iChunks += 1
                iPoints += oChunk.points()
            if not iPoints:
                raise RuntimeError('Invalid mesh stream; no points')
            if self._iVerbose: self._INFO('Building state cache (N=%d, chunks=%d, layers=%d)' % (iPoints, iChunks, oConfig.layers))

            # Layers
            llaStates = list()
            iChannelsHead = oConfig.headChannels()
            for iLayer in range(oConfig.layers):
                loHeads = oNetwork.params.heads(iLayer)

                # ... sweep A
                loAccumulators = [PhastAttention_accumulator(oConfig.slices, iChannelsHead, oNetwork.params.dtype()) for oHead in loHeads]
                for iChunk in range(iChunks):
                    aA = oNetwork.normalizedAttentionInput(iLayer, oStore.get(iChunk))
                    for (iHead, oHead) in enumerate(loHeads):
                        aXh = numpy.ascontiguousarray(aA[:, iHead*iChannelsHead:(iHead+1)*iChannelsHead])
                        loAccumulators[iHead].add(PhastAttention.sliceWeights(aXh, oHead, _oCounter), aXh, _oCounter)
                laSout = list()
                for (iHead, oHead) in enumerate(loHeads):
                    try:
                        aS = PhastAttention.project(loAccumulators[iHead], oHead, _oCounter)
                    except RuntimeError as e:
                        raise e.__class__('Layer %d; %s' % (iLayer, str(e))) from e
                    aSprime = PhastAttention.statesAttention(aS, oHead, _oCounter)
                    laSout.append(PhastAttention.outputStates(aSprime, oHead, _oCounter))
                llaStates.append(laSout)
                if self._iVerbose: self._DEBUG('Layer %d states cached' % iLayer)

                # ... sweep B
                if iLayer < oConfig.layers - 1:
                    for iChunk in range(iChunks):
                        aX = oNetwork.attentionDecoded(iLayer, oStore.get(iChunk), laSout, _oCounter)
                        oStore.put(iChunk, oNetwork.ffn(iLayer, aX))

        return PhastInference_cache(oNetwork.params.fingerprint(), llaStates, tBounds, iPoints, self.chunk_size)


    #
    # Decoding
    #

    def check(self, _oCache):
        """
        Verify the cache matches the network parameters

        @exception PhastMismatchError  On fingerprint or layout mismatch
        """

        sFingerprint = self.network.params.fingerprint()
        if _oCache.fingerprint != sFingerprint:
            raise PhastMismatchError('Cache fingerprint (%s) does not match model fingerprint (%s)' % (_oCache.fingerprint, sFingerprint))
        if _oCache.layers() != self.network.config.layers or (_oCache.layers() and _oCache.heads() != self.network.config.heads):
            raise PhastMismatchError('Cache layout (%d layers, %d heads) does not match model' % (_oCache.layers(), _oCache.heads()))


    def decodePoints(self, _oCache, _oQuery, _oCounter = None):
        """
        Decode the given query points against the cache

        Each output row depends only on its query point and the cache.

        @param PhastInference_cache _oCache    Cache
        @param PhastGeometry_mesh   _oQuery    Query points
        @param object               _oCounter  Operations counter (ignored if None)

        @return numpy.ndarray  Predictions [N_q x out_dim]

        @exception PhastMismatchError  On fingerprint mismatch
        """

        self.check(_oCache)
        oNetwork = self.network
        oQuery = _oQuery.withBounds(_oCache.bounds())
        oPlan = PhastInference_plan(oQuery.points(), self.chunk_size)
        aY = numpy.empty((oQuery.points(), oNetwork.config.out_dim), dtype=oNetwork.params.dtype())
        for (iStart, iStop) in oPlan.ranges:
            aX = oNetwork.embed(oNetwork.inputs(oQuery.slice(iStart, iStop)))
            for iLayer in range(oNetwork.config.layers):
                aX = oNetwork.attentionDecoded(iLayer, aX, _oCache.states[iLayer], _oCounter)
                aX = oNetwork.ffn(iLayer, aX)
            aY[iStart:iStop] = oNetwork.head(aX)
        return aY


    def decodeStream(self, _oCache, _oStream, _fSink = None, _oCounter = None):
        """
        Decode the given query stream, chunk by chunk

        @param PhastInference_cache _oCache    Cache
        @param object               _oStream   Query stream, providing chunks(size)
        @param callable             _fSink     Output sink: (chunk index, chunk, predictions) (ignored if None)
        @param object               _oCounter  Operations counter (ignored if None)

        @return dict  Summary {'points', 'chunks'}

        @exception PhastMismatchError  On fingerprint mismatch
        @exception OSError             On stream or sink I/O error (naming the chunk index)
        """

        self.check(_oCache)
        dSummary = {'points': 0, 'chunks': 0}
        oIterator = iter(_oStream.chunks(self.chunk_size))
        while True:
            iChunk = dSummary['chunks']
            try:
                oChunk = next(oIterator)
            except StopIteration:
                break
            except OSError as e:
                raise OSError(e.errno, 'Chunk %d; %s' % (iChunk, e.strerror or str(e))) from e
            aY = self.decodePoints(_oCache, oChunk, _oCounter)
            if _fSink is not None:
                try:
                    _fSink(iChunk, oChunk, aY)
                except OSError as e:
                    raise OSError(e.errno, 'Chunk %d; %s' % (iChunk, e.strerror or str(e))) from e
            dSummary['points'] += oChunk.points()
            dSummary['chunks'] += 1
        if self._iVerbose: self._INFO('Decoded %d points (%d chunks)' % (dSummary['points'], dSummary['chunks']))
        return dSummary


    #
    # Fidelity
    #

    def fidelity(self, _oMesh, _lfFractions, _oRng):
        """
        Fidelity sweep: caches built from nested random subsets of the mesh,
        each evaluated on the full mesh

        @param PhastGeometry_mesh _oMesh       Mesh (with targets)
        @param list               _lfFractions Subset fractions (in (0, 1])
        @param PhastLinalg_rng    _oRng        Random number generator

        @return list  (fraction, subset points, full mesh relative L2) tuples

        @exception RuntimeError  On missing targets or invalid fraction
        """

        if _oMesh.targets is None:
            raise RuntimeError('Invalid mesh; targets are required for the fidelity sweep')
        aPermutation = _oRng.permutation(_oMesh.points())
        ltFidelity = list()
        for fFraction in _lfFractions:
            if not 0.0 < fFraction <= 1.0:
                raise RuntimeError('Invalid subset fraction (%s)' % fFraction)
            iPoints = max(1, int(round(fFraction * _oMesh.points())))
            oCache = self.build(_oMesh.subset(numpy.sort(aPermutation[:iPoints])))
            aY = self.decodePoints(oCache, _oMesh)
            ltFidelity.append((fFraction, iPoints, PhastGeometry_metrics.relL2(aY, _oMesh.targets)))
        return ltFidelity

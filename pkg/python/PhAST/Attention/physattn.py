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
from PhAST.Linalg import \
     PhastLinalg
from PhAST.Runtime import \
     PhastNumericError

# External
import numpy

# Standard
from concurrent.futures import \
     ThreadPoolExecutor


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastAttention_accumulator:
    """
    Running (s_raw, d) slice accumulator

    Accumulates per-tile (or per-chunk) contributions:
      s_raw += w_t^T x_t
      d     += column sums of w_t
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _iSlices, _iChannels, _oDtype = numpy.float64):

        # Properties
        self.s_raw = numpy.zeros((_iSlices, _iChannels), dtype=_oDtype)
        self.d = numpy.zeros(_iSlices, dtype=_oDtype)
        self.tiles_seen = 0


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def add(self, _aW, _aX, _oCounter = None):
        """
        Accumulate the contribution of the given tile

        @param numpy.ndarray _aW        Tile slice weights [N_t x M]
        @param numpy.ndarray _aX        Tile features [N_t x C_h]
        @param object        _oCounter  Operations counter (ignored if None)
        """

        self.addRaw(PhastLinalg.matmulTN(_aW, _aX, _oCounter, 'slice'), numpy.sum(_aW, axis=0))


    def addRaw(self, _aSraw, _aD):
        """
        Accumulate an already computed (s_raw, d) contribution

        @param numpy.ndarray _aSraw  Contribution to s_raw [M x C_h]
        @param numpy.ndarray _aD     Contribution to d [M]
        """

        self.s_raw += _aSraw
        self.d += _aD
        self.tiles_seen += 1


    def normalized(self):
        """
        Return s_raw d^-1

        @return numpy.ndarray  Normalized states [M x C_h]

        @exception PhastNumericError  On degenerate slice (d_jj below 1e-30)
        """

        PhastAttention.checkSlices(self.d)
        return self.s_raw / self.d[:, None]


class PhastAttention:
    """
    Physics-Attention (single head and multi-head)

    Three mathematically equivalent formulations are available:
     - 'original': s = (w d^-1)^T Linear1(x); x_out = Linear3(w s')
     - 'fast':     s = Linear1(d^-1 w^T x);   x_out = w Linear3(s')
     - 'tiled':    'fast', with w computed tile by tile and (s_raw, d)
                   accumulated; w is never materialized for all points

    Operations record multiply-adds under the labels: 'linear1', 'linear2',
    'slice', 'attention', 'linear3', 'deslice'.

    When a tape (dictionary) is given, the intermediates required by the
    backward pass are stored in it and reported as retained buffers.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    MODES = ('original', 'fast', 'tiled')
    DEGENERATE_SLICE = 1e-30


    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    def checkMode(_sMode):
        """
        Check the given mode

        @param str _sMode  Mode

        @exception RuntimeError  On invalid mode
        """

        if _sMode not in PhastAttention.MODES:
            raise RuntimeError('Invalid Physics-Attention mode (%s); expected one of: %s' % (_sMode, '|'.join(PhastAttention.MODES)))


    def checkSlices(_aD):
        """
        Check the slices normalization diagonal

        @param numpy.ndarray _aD  Normalization diagonal [M]

        @exception PhastNumericError  On degenerate slice
        """

        iDegenerate = int(numpy.sum(~(_aD >= PhastAttention.DEGENERATE_SLICE)))
        if iDegenerate:
            raise PhastNumericError('Degenerate slice(s); %d slice(s) with weight sum below %g' % (iDegenerate, PhastAttention.DEGENERATE_SLICE))


    def tiles(_iPoints, _iTileSize):
        """
        Return the tiles index ranges (last tile may be short)

        @param int _iPoints    Points count (N)
        @param int _iTileSize  Tile size (N_t); clamped to N

        @return list  List of (start, stop) ranges

        @exception RuntimeError  On invalid tile size
        """

        if _iTileSize is None or int(_iTileSize) <= 0:
            raise RuntimeError('Invalid tile size (%s)' % _iTileSize)
        iTileSize = min(int(_iTileSize), max(_iPoints, 1))
        return [(iStart, min(iStart+iTileSize, _iPoints)) for iStart in range(0, _iPoints, iTileSize)]


    #--------------------------------------------------------------------------
    # SINGLE HEAD
    #--------------------------------------------------------------------------

    def sliceWeights(_aX, _oHead, _oCounter = None):
        """
        Slice weights w = Softmax(Linear2(x))

        @param numpy.ndarray       _aX        Features [N x C_h]
        @param PhastAttention_head _oHead     Head parameters
        @param object              _oCounter  Operations counter (ignored if None)

        @return numpy.ndarray  Row-stochastic slice weights [N x M]
        """

        aW = PhastLinalg.softmaxRows(PhastLinalg.linear(_aX, _oHead.w2, _oHead.b2, _oCounter, 'linear2'), _oCounter, 'linear2')
        if _oCounter is not None:
            _oCounter.buffer('w', aW.size)
        return aW


    def sliceOriginal(_aX, _oHead, _oCounter = None, _dTape = None):
        """
        Original slice: x_proj = Linear1(x); w = Softmax(Linear2(x));
        s = (w d^-1)^T x_proj

        @param numpy.ndarray       _aX        Features [N x C_h]
        @param PhastAttention_head _oHead     Head parameters
        @param object              _oCounter  Operations counter (ignored if None)
        @param dict                _dTape     Backward tape (ignored if None)

        @return (numpy.ndarray, numpy.ndarray)  States [M x C_h], slice weights [N x M]

        @exception RuntimeError       On empty input
        @exception PhastNumericError  On degenerate slice
        """

        if _aX.shape[0] < 1:
            raise RuntimeError('Invalid input; at least one point is required')
        aXproj = PhastLinalg.linear(_aX, _oHead.w1, _oHead.b1, _oCounter, 'linear1')
        aW = PhastAttention.sliceWeights(_aX, _oHead, _oCounter)
        aD = numpy.sum(aW, axis=0)
        PhastAttention.checkSlices(aD)
        aS = PhastLinalg.matmulTN(aW, aXproj, _oCounter, 'slice') / aD[:, None]
        if _dTape is not None:
            _dTape.update({'x_proj': aXproj, 'w': aW, 'd': aD, 's': aS})
            if _oCounter is not None:
                _oCounter.retain('x_proj', aXproj.size)
                _oCounter.retain('w', aW.size)
                _oCounter.retain('d', aD.size)
                _oCounter.retain('s', aS.size)
        return (aS, aW)


    def sliceFast(_aX, _oHead, _oCounter = None, _dTape = None):
        """
        Fast slice: w = Softmax(Linear2(x)); s_raw = w^T x;
        s = Linear1(s_raw d^-1)

        The projected features x_proj [N x C_h] are never materialized.

        @param numpy.ndarray       _aX        Features [N x C_h]
        @param PhastAttention_head _oHead     Head parameters
        @param object              _oCounter  Operations counter (ignored if None)
        @param dict                _dTape     Backward tape (ignored if None)

        @return (numpy.ndarray, numpy.ndarray)  States [M x C_h], slice weights [N x M]

        @exception RuntimeError       On empty input
        @exception PhastNumericError  On degenerate slice
        """

        if _aX.shape[0] < 1:
            raise RuntimeError('Invalid input; at least one point is required')
        aW = PhastAttention.sliceWeights(_aX, _oHead, _oCounter)
        oAccumulator = PhastAttention_accumulator(_oHead.slices(), _oHead.channels(), _aX.dtype)
        oAccumulator.add(aW, _aX, _oCounter)
        aS = PhastAttention.project(oAccumulator, _oHead, _oCounter, _dTape)
        if _dTape is not None:
            _dTape['w'] = aW
            if _oCounter is not None:
                _oCounter.retain('w', aW.size)
        return (aS, aW)


    def sliceLiteral(_aX, _oHead, _oCounter = None):
        """
        Fast slice with Linear1 applied before normalization:
        s = Linear1(w^T x) d^-1

        Equal to the original slice only when Linear1 has no bias.

        @param numpy.ndarray       _aX        Features [N x C_h]
        @param PhastAttention_head _oHead     Head parameters
        @param object              _oCounter  Operations counter (ignored if None)

        @return numpy.ndarray  States [M x C_h]
        """

        aW = PhastAttention.sliceWeights(_aX, _oHead, _oCounter)
        aD = numpy.sum(aW, axis=0)
        PhastAttention.checkSlices(aD)
        aSraw = PhastLinalg.matmulTN(aW, _aX, _oCounter, 'slice')
        return PhastLinalg.linear(aSraw, _oHead.w1, _oHead.b1, _oCounter, 'linear1') / aD[:, None]


    def project(_oAccumulator, _oHead, _oCounter = None, _dTape = None):
        """
        Finalize accumulated states: s = Linear1(s_raw d^-1)

        @param PhastAttention_accumulator _oAccumulator  Slice accumulator
        @param PhastAttention_head        _oHead         Head parameters
        @param object                     _oCounter      Operations counter (ignored if None)
        @param dict                       _dTape         Backward tape (ignored if None)

        @return numpy.ndarray  States [M x C_h]

        @exception PhastNumericError  On degenerate slice
        """

        aSnorm = _oAccumulator.normalized()
        aS = PhastLinalg.linear(aSnorm, _oHead.w1, _oHead.b1, _oCounter, 'linear1')
        if _dTape is not None:
            _dTape.update({'s_raw': _oAccumulator.s_raw, 'd': _oAccumulator.d, 's_norm': aSnorm, 's': aS})
            if _oCounter is not None:
                for sName in ['s_raw', 'd', 's_norm', 's']:
                    _oCounter.retain(sName, _dTape[sName].size)
        return aS


    def desliceOriginal(_aSprime, _aW, _oHead, _oCounter = None, _dTape = None):
        """
        Original deslice: x_out = Linear3(w s')

        @param numpy.ndarray       _aSprime   States [M x C_h]
        @param numpy.ndarray       _aW        Slice weights [N x M]
        @param PhastAttention_head _oHead     Head parameters
        @param object              _oCounter  Operations counter (ignored if None)
        @param dict                _dTape     Backward tape (ignored if None)

        @return numpy.ndarray  Output features [N x C_h]
        """

        aXdesliced = PhastLinalg.matmul(_aW, _aSprime, _oCounter, 'deslice')
        aXout = PhastLinalg.linear(aXdesliced, _oHead.w3, _oHead.b3, _oCounter, 'linear3')
        if _dTape is not None:
            _dTape['x_desliced'] = aXdesliced
            if _oCounter is not None:
                _oCounter.retain('x_desliced', aXdesliced.size)
                _oCounter.retain('x_out', aXout.size)
        return aXout


    def desliceFast(_aSprime, _aW, _oHead, _oCounter = None, _dTape = None):
        """
        Fast deslice: x_out = w Linear3(s')

        Equal to the original deslice, bias included, since w is
        row-stochastic.

        @param numpy.ndarray       _aSprime   States [M x C_h]
        @param numpy.ndarray       _aW        Slice weights [N x M]
        @param PhastAttention_head _oHead     Head parameters
        @param object              _oCounter  Operations counter (ignored if None)
        @param dict                _dTape     Backward tape (ignored if None)

        @return numpy.ndarray  Output features [N x C_h]
        """

        aSout = PhastAttention.outputStates(_aSprime, _oHead, _oCounter, _dTape)
        aXout = PhastLinalg.matmul(_aW, aSout, _oCounter, 'deslice')
        if _dTape is not None and _oCounter is not None:
            _oCounter.retain('x_out', aXout.size)
        return aXout


    def outputStates(_aSprime, _oHead, _oCounter = None, _dTape = None):
        """
        Output states s'_out = Linear3(s')

        @param numpy.ndarray       _aSprime   States [M x C_h]
        @param PhastAttention_head _oHead     Head parameters
        @param object              _oCounter  Operations counter (ignored if None)
        @param dict                _dTape     Backward tape (ignored if None)

        @return numpy.ndarray  Output states [M x C_h]
        """

        aSout = PhastLinalg.linear(_aSprime, _oHead.w3, _oHead.b3, _oCounter, 'linear3')
        if _dTape is not None:
            _dTape['s_out'] = aSout
            if _oCounter is not None:
                _oCounter.retain('s_out', aSout.size)
        return aSout


    def statesAttention(_aS, _oHead, _oCounter = None, _dTape = None):
        """
        Scaled dot-product self-attention over the M state tokens:
        s' = Softmax(Q K^T / sqrt(C_h)) V W_o

        @param numpy.ndarray       _aS        States [M x C_h]
        @param PhastAttention_head _oHead     Head parameters
        @param object              _oCounter  Operations counter (ignored if None)
        @param dict                _dTape     Backward tape (ignored if None)

        @return numpy.ndarray  Attended states [M x C_h]
        """

        fScale = 1.0 / numpy.sqrt(_aS.shape[1])
        aQ = PhastLinalg.matmul(_aS, _oHead.wq, _oCounter, 'attention')
        aK = PhastLinalg.matmul(_aS, _oHead.wk, _oCounter, 'attention')
        aV = PhastLinalg.matmul(_aS, _oHead.wv, _oCounter, 'attention')
        aA = PhastLinalg.softmaxRows(PhastLinalg.matmulNT(aQ, aK, _oCounter, 'attention') * fScale, _oCounter, 'attention')
        aO = PhastLinalg.matmul(aA, aV, _oCounter, 'attention')
        aSprime = PhastLinalg.matmul(aO, _oHead.wo, _oCounter, 'attention')
        if _dTape is not None:
            _dTape['attention'] = {'q': aQ, 'k': aK, 'v': aV, 'a': aA, 'o': aO, 'scale': fScale}
            _dTape['s_prime'] = aSprime
            if _oCounter is not None:
                _oCounter.retain('attention', aQ.size + aK.size + aV.size + aA.size + aO.size)
                _oCounter.retain('s_prime', aSprime.size)
        return aSprime


    def accumulate(_aX, _oHead, _iTileSize, _oCounter = None, _bParallel = False):
        """
        Accumulate (s_raw, d) over tiles; only one tile of slice weights is
        resident at a time (unless parallel)

        In parallel mode, per-tile contributions are computed by a thread pool
        and reduced in tile-index order, which yields the sequential result.

        @param numpy.ndarray       _aX         Features [N x C_h]
        @param PhastAttention_head _oHead      Head parameters
        @param int                 _iTileSize  Tile size (N_t)
        @param object              _oCounter   Operations counter (ignored if None)
        @param bool                _bParallel  Process tiles in parallel

        @return PhastAttention_accumulator  Accumulated (s_raw, d)
        """

        ltTiles = PhastAttention.tiles(_aX.shape[0], _iTileSize)
        oAccumulator = PhastAttention_accumulator(_oHead.slices(), _oHead.channels(), _aX.dtype)

        def contribution(_tTile):
            aXt = _aX[_tTile[0]:_tTile[1]]
            aWt = PhastAttention.sliceWeights(aXt, _oHead, _oCounter)
            return (PhastLinalg.matmulTN(aWt, aXt, _oCounter, 'slice'), numpy.sum(aWt, axis=0))

        if _bParallel and len(ltTiles) > 1:
            with ThreadPoolExecutor() as oExecutor:
                ltContributions = list(oExecutor.map(contribution, ltTiles))
            for (aSraw, aD) in ltContributions:
                oAccumulator.addRaw(aSraw, aD)
        else:
            for tTile in ltTiles:
                (aSraw, aD) = contribution(tTile)
                oAccumulator.addRaw(aSraw, aD)
        return oAccumulator


    def physattnTiled(_aX, _oHead, _iTileSize, _oCounter = None, _dTape = None, _bParallel = False):
        """
        Tiled Physics-Attention (faster slice/deslice with geometry slice tiling)

        First tile loop accumulates (s_raw, d); states are then finalized
        (Linear1, attention, Linear3) and the second tile loop recomputes each
        tile slice weights to emit x_out^(t) = w^(t) s'_out.

        @param numpy.ndarray       _aX         Features [N x C_h]
        @param PhastAttention_head _oHead      Head parameters
        @param int                 _iTileSize  Tile size (N_t)
        @param object              _oCounter   Operations counter (ignored if None)
        @param dict                _dTape      Backward tape (ignored if None)
        @param bool                _bParallel  Process tiles in parallel

        @return numpy.ndarray  Output features [N x C_h]

        @exception RuntimeError       On invalid tile size
        @exception PhastNumericError  On degenerate slice
        """

        if _aX.shape[0] < 1:
            raise RuntimeError('Invalid input; at least one point is required')
        ltTiles = PhastAttention.tiles(_aX.shape[0], _iTileSize)

        # Slice
        oAccumulator = PhastAttention.accumulate(_aX, _oHead, _iTileSize, _oCounter, _bParallel)
        aS = PhastAttention.project(oAccumulator, _oHead, _oCounter, _dTape)

        # States
        aSprime = PhastAttention.statesAttention(aS, _oHead, _oCounter, _dTape)
        aSout = PhastAttention.outputStates(aSprime, _oHead, _oCounter, _dTape)

        # Deslice
        aXout = numpy.empty(_aX.shape, dtype=_aX.dtype)
        for (iStart, iStop) in ltTiles:
            aWt = PhastAttention.sliceWeights(_aX[iStart:iStop], _oHead, _oCounter)
            aXout[iStart:iStop] = PhastLinalg.matmul(aWt, aSout, _oCounter, 'deslice')
        if _dTape is not None:
            _dTape['tiles'] = ltTiles
            if _oCounter is not None:
                _oCounter.retain('x_out', aXout.size)
        return aXout


    def physattn(_aX, _oHead, _sMode = 'fast', _iTileSize = None, _oCounter = None, _dTape = None, _bParallel = False):
        """
        Single-head Physics-Attention, in the given mode

        @param numpy.ndarray       _aX         Features [N x C_h]
        @param PhastAttention_head _oHead      Head parameters
        @param str                 _sMode      Mode ('original', 'fast' or 'tiled')
        @param int                 _iTileSize  Tile size ('tiled' mode only)
        @param object              _oCounter   Operations counter (ignored if None)
        @param dict                _dTape      Backward tape (ignored if None)
        @param bool                _bParallel  Process tiles in parallel ('tiled' mode only)

        @return numpy.ndarray  Output features [N x C_h]
        """

        PhastAttention.checkMode(_sMode)
        if _dTape is not None:
            _dTape['mode'] = _sMode
        if _sMode == 'original':
            (aS, aW) = PhastAttention.sliceOriginal(_aX, _oHead, _oCounter, _dTape)
            aSprime = PhastAttention.statesAttention(aS, _oHead, _oCounter, _dTape)
            return PhastAttention.desliceOriginal(aSprime, aW, _oHead, _oCounter, _dTape)
        elif _sMode == 'fast':
            (aS, aW) = PhastAttention.sliceFast(_aX, _oHead, _oCounter, _dTape)
            aSprime = PhastAttention.statesAttention(aS, _oHead, _oCounter, _dTape)
            return PhastAttention.desliceFast(aSprime, aW, _oHead, _oCounter, _dTape)
        return PhastAttention.physattnTiled(_aX, _oHead, _iTileSize if _iTileSize is not None else _aX.shape[0], _oCounter, _dTape, _bParallel)


    #--------------------------------------------------------------------------
    # MULTI-HEAD
    #--------------------------------------------------------------------------

    def headChannels(_iChannels, _iHeads):
        """
        Return the per-head channels count

        @param int _iChannels  Channels count (C)
        @param int _iHeads     Heads count (H)

        @return int  Per-head channels count (C_h = C/H)

        @exception RuntimeError  If C is not divisible by H
        """

        if _iHeads < 1 or _iChannels % _iHeads:
            raise RuntimeError('Channels count (%d) is not divisible by heads count (%d)' % (_iChannels, _iHeads))
        return _iChannels // _iHeads


    def multihead(_aX, _loHeads, _sMode = 'fast', _iTileSize = None, _oCounter = None, _ldTapes = None, _bParallel = False):
        """
        Multi-head Physics-Attention: channels are split into H contiguous
        blocks, each processed by its own head, and outputs concatenated

        @param numpy.ndarray _aX         Features [N x C]
        @param list          _loHeads    Heads parameters (H entries)
        @param str           _sMode      Mode ('original', 'fast' or 'tiled')
        @param int           _iTileSize  Tile size ('tiled' mode only)
        @param object        _oCounter   Operations counter (ignored if None)
        @param list          _ldTapes    Per-head backward tapes, filled in (ignored if None)
        @param bool          _bParallel  Process tiles in parallel

        @return numpy.ndarray  Output features [N x C]

        @exception RuntimeError  On channels/heads mismatch
        """

        iChannelsHead = PhastAttention.headChannels(_aX.shape[1], len(_loHeads))
        aXout = numpy.empty(_aX.shape, dtype=_aX.dtype)
        for (iHead, oHead) in enumerate(_loHeads):
            if oHead.channels() != iChannelsHead:
                raise RuntimeError('Head %d channels (%d) mismatch input channels (%d/%d)' % (iHead, oHead.channels(), _aX.shape[1], len(_loHeads)))
            dTape = None
            if _ldTapes is not None:
                dTape = dict()
                _ldTapes.append(dTape)
            aXh = numpy.ascontiguousarray(_aX[:, iHead*iChannelsHead:(iHead+1)*iChannelsHead])
            aXout[:, iHead*iChannelsHead:(iHead+1)*iChannelsHead] = PhastAttention.physattn(aXh, oHead, _sMode, _iTileSize, _oCounter, dTape, _bParallel)
        return aXout


    def decode(_aX, _loHeads, _laSout, _oCounter = None):
        """
        Multi-head decoding against output states: x_out = Softmax(Linear2(x)) s'_out
        (per head)

        @param numpy.ndarray _aX        Features [N x C]
        @param list          _loHeads   Heads parameters (H entries)
        @param list          _laSout    Per-head output states s'_out [M x C_h]
        @param object        _oCounter  Operations counter (ignored if None)

        @return numpy.ndarray  Output features [N x C]
        """

        iChannelsHead = PhastAttention.headChannels(_aX.shape[1], len(_loHeads))
        aXout = numpy.empty(_aX.shape, dtype=_aX.dtype)
        for (iHead, oHead) in enumerate(_loHeads):
            aXh = numpy.ascontiguousarray(_aX[:, iHead*iChannelsHead:(iHead+1)*iChannelsHead])
            aW = PhastAttention.sliceWeights(aXh, oHead, _oCounter)
            aXout[:, iHead*iChannelsHead:(iHead+1)*iChannelsHead] = PhastLinalg.matmul(aW, _laSout[iHead], _oCounter, 'deslice')
        return aXout

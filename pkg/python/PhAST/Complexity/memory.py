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
from PhAST.Runtime import \
     PhastObject, \
     PhastRuntime


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastComplexity_memory(PhastObject):
    """
    Activation memory model of Physics-Attention

    Buffers are accounted per head and per layer, under the same names the
    Physics-Attention kernels use when reporting retained buffers; each
    buffer is flagged by what its size scales with:
     - 'N':     number of points
     - 'N_t':   tile size
     - 'const': neither (slices/channels only)

    In training, retained buffers of all heads and layers are alive at once
    (backward tape); the transient tile slice weights add one tile on top.
    In inference, only one head's buffers are alive at a time.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    VARIANTS = ('original', 'optimized', 'tiled')


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self):
        PhastObject.__init__(self)


    def _tag(self):
        return 'CX'


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def buffers(self, _sVariant, _iPoints, _iSlices, _iChannelsHead, _iTileSize = None, _bCheckpoint = True):
        """
        Return the buffers of one head of one layer

        @param str  _sVariant       Variant ('original', 'optimized' or 'tiled')
        @param int  _iPoints        Points count (N)
        @param int  _iSlices        Slices count (M)
        @param int  _iChannelsHead  Per-head channels count (C_h)
        @param int  _iTileSize      Tile size (N_t; 'tiled' only)
        @param bool _bCheckpoint    Recompute tile slice weights ('tiled' only)

        @return list  List of (name, elements, scaling, retained) tuples

        @exception RuntimeError  On invalid variant
        """

        (N, M, C) = (_iPoints, _iSlices, _iChannelsHead)
        iAttention = M*M + 4*M*C
        if _sVariant == 'original':
            return [
                ('x_proj', N*C, 'N', True),
                ('w', N*M, 'N', True),
                ('d', M, 'const', True),
                ('s', M*C, 'const', True),
                ('attention', iAttention, 'const', True),
                ('s_prime', M*C, 'const', True),
                ('x_desliced', N*C, 'N', True),
                ('x_out', N*C, 'N', True),
            ]
        elif _sVariant in ('optimized', 'tiled'):
            ltBuffers = [
                ('s_raw', M*C, 'const', True),
                ('d', M, 'const', True),
                ('s_norm', M*C, 'const', True),
                ('s', M*C, 'const', True),
                ('attention', iAttention, 'const', True),
                ('s_prime', M*C, 'const', True),
                ('s_out', M*C, 'const', True),
                ('x_out', N*C, 'N', True),
            ]
            if _sVariant == 'optimized':
                ltBuffers.insert(0, ('w', N*M, 'N', True))
            elif _bCheckpoint:
                iTileSize = min(N if _iTileSize is None else int(_iTileSize), N)
                ltBuffers.insert(0, ('w', iTileSize*M, 'N_t', False))
            else:
                ltBuffers.insert(0, ('w', N*M, 'N', True))
            return ltBuffers
        raise RuntimeError('Invalid memory model variant (%s); expected one of: %s' % (_sVariant, '|'.join(self.VARIANTS)))


    def estimate(self, _sVariant, _iPoints, _iSlices, _iChannels, _iHeads = 1, _iLayers = 1, _iTileSize = None, _bTraining = True, _bCheckpoint = True, _sPrecision = 'f64'):
        """
        Estimate the peak activation memory of the Physics-Attention stack

        @param str  _sVariant     Variant ('original', 'optimized' or 'tiled')
        @param int  _iPoints      Points count (N)
        @param int  _iSlices      Slices count (M)
        @param int  _iChannels    Channels count (C; split among heads)
        @param int  _iHeads       Heads count (H)
        @param int  _iLayers      Layers count (L)
        @param int  _iTileSize    Tile size (N_t; 'tiled' only; defaults to N)
        @param bool _bTraining    Account for the backward tape
        @param bool _bCheckpoint  Recompute tile slice weights ('tiled' only)
        @param str  _sPrecision   Precision ('f64' or 'f32')

        @return dict  Estimate: 'peak_bytes', 'retained_bytes', 'transient_bytes',
                      'breakdown' (list of dict: name, elements, bytes, scaling, retained)

        @exception RuntimeError  On invalid dimensions
        """

        for (sName, iValue) in [('N', _iPoints), ('M', _iSlices), ('C', _iChannels), ('H', _iHeads), ('L', _iLayers)]:
            if iValue is None or int(iValue) < 1:
                raise RuntimeError('Invalid memory model dimension %s (%s)' % (sName, iValue))
        if _iChannels % _iHeads:
            raise RuntimeError('Channels count (%d) is not divisible by heads count (%d)' % (_iChannels, _iHeads))
        if _iTileSize is not None and not 0 < int(_iTileSize) <= _iPoints:
            raise RuntimeError('Invalid tile size (%s); expected 1..%d' % (_iTileSize, _iPoints))
        iBytes = PhastRuntime.dtype(_sPrecision)(0).itemsize
        ltBuffers = self.buffers(_sVariant, _iPoints, _iSlices, _iChannels // _iHeads, _iTileSize, _bCheckpoint)

        # Retained buffers are alive for all heads/layers in training, for one head otherwise
        iCopies = _iHeads * _iLayers if _bTraining else 1
        ldBreakdown = list()
        iRetained = 0
        iTransient = 0
        for (sName, iElements, sScaling, bRetained) in ltBuffers:
            bKept = bRetained and _bTraining
            iTotal = iElements * (iCopies if bKept else 1)
            ldBreakdown.append({
                'name': sName,
                'elements': iTotal,
                'bytes': iTotal * iBytes,
                'scaling': sScaling,
                'retained': bKept,
            })
            if bKept:
                iRetained += iTotal
            else:
                iTransient += iTotal
        if self._iVerbose: self._DEBUG('Memory estimate (%s): retained=%d, transient=%d elements' % (_sVariant, iRetained, iTransient))
        return {
            'variant': _sVariant,
            'peak_bytes': (iRetained + iTransient) * iBytes,
            'retained_bytes': iRetained * iBytes,
            'transient_bytes': iTransient * iBytes,
            'breakdown': ldBreakdown,
        }


    def toString(self, _dEstimate):
        """
        Return the given estimate as a human-friendly table

        @param dict _dEstimate  Estimate (see estimate())

        @return str  Table
        """

        s = '%-12s %-14s %-16s %-6s %s\n' % ('Buffer', 'Elements', 'Bytes', 'Scale', 'Retained')
        for dBuffer in _dEstimate['breakdown']:
            s += '%-12s %-14d %-16d %-6s %s\n' % (dBuffer['name'], dBuffer['elements'], dBuffer['bytes'], dBuffer['scaling'], 'yes' if dBuffer['retained'] else 'no')
        s += 'Peak: %d bytes (retained %d, transient %d)\n' % (_dEstimate['peak_bytes'], _dEstimate['retained_bytes'], _dEstimate['transient_bytes'])
        return s

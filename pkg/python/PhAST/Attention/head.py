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

class PhastAttention_head:
    """
    Physics-Attention head parameters

    Parameters (per-head channels C_h, slices M):
     - w1 [C_h x C_h], b1 [C_h]: Linear1 (projection)
     - w2 [C_h x M],   b2 [M]:   Linear2 (slice logits)
     - w3 [C_h x C_h], b3 [C_h]: Linear3 (output projection)
     - wq, wk, wv, wo [C_h x C_h]: states self-attention

    Linear1 and Linear3 biases are None when biases are disabled.
    Arrays are held by reference; the model parameters own them.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    WEIGHTS = ('w1', 'b1', 'w2', 'b2', 'w3', 'b3', 'wq', 'wk', 'wv', 'wo')
    BIASES = ('b1', 'b3')


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _daWeights):
        """
        Instantiate a head from its weights

        @param dict _daWeights  Weights (see WEIGHTS); missing biases are disabled

        @exception RuntimeError  On inconsistent shapes
        """

        # Properties
        self.w1 = _daWeights['w1']
        self.b1 = _daWeights.get('b1', None)
        self.w2 = _daWeights['w2']
        self.b2 = _daWeights['b2']
        self.w3 = _daWeights['w3']
        self.b3 = _daWeights.get('b3', None)
        self.wq = _daWeights['wq']
        self.wk = _daWeights['wk']
        self.wv = _daWeights['wv']
        self.wo = _daWeights['wo']

        # ... verify
        lsErrors = self.verify()
        if lsErrors:
            raise RuntimeError('Invalid head parameters; %s' % '; '.join(lsErrors))


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def channels(self):
        """
        Return the per-head channels count (C_h)

        @return int  Channels count
        """

        return self.w1.shape[0]


    def slices(self):
        """
        Return the slices count (M)

        @return int  Slices count
        """

        return self.w2.shape[1]


    def hasBias(self):
        """
        Return whether Linear1/Linear3 carry biases

        @return bool  True if biases are enabled
        """

        return self.b1 is not None


    def weights(self):
        """
        Return the head weights (enabled ones only)

        @return dict  Weights
        """

        return {sName: getattr(self, sName) for sName in self.WEIGHTS if getattr(self, sName) is not None}


    def verify(self):
        """
        Verify the parameters shapes

        @return list  Empty if shapes are consistent, (ordered) error messages otherwise
        """

        lsErrors = list()
        iC = self.w1.shape[0] if self.w1.ndim == 2 else -1
        iM = self.w2.shape[1] if self.w2.ndim == 2 else -1
        dtShapes = {
            'w1': (iC, iC), 'w2': (iC, iM), 'b2': (iM,), 'w3': (iC, iC),
            'wq': (iC, iC), 'wk': (iC, iC), 'wv': (iC, iC), 'wo': (iC, iC),
        }
        if (self.b1 is None) != (self.b3 is None):
            lsErrors.append('Linear1 and Linear3 biases must be both enabled or disabled')
        if self.b1 is not None:
            dtShapes['b1'] = (iC,)
            dtShapes['b3'] = (iC,)
        for sName in sorted(dtShapes):
            if getattr(self, sName).shape != dtShapes[sName]:
                lsErrors.append('Invalid "%s" shape (%s); expected %s' % (sName, getattr(self, sName).shape, dtShapes[sName]))
        return lsErrors


#------------------------------------------------------------------------------
# FACTORY
#------------------------------------------------------------------------------

def phastHeadShapes(_iChannels, _iSlices, _bBias = True):
    """
    Return the shapes and fan-in of each head weight, in parameter order

    @param int  _iChannels  Per-head channels count (C_h)
    @param int  _iSlices    Slices count (M)
    @param bool _bBias      Enable Linear1/Linear3 biases

    @return list  List of (name, shape, fan-in) tuples
    """

    ltShapes = [
        ('w1', (_iChannels, _iChannels), _iChannels),
        ('b1', (_iChannels,), _iChannels),
        ('w2', (_iChannels, _iSlices), _iChannels),
        ('b2', (_iSlices,), _iChannels),
        ('w3', (_iChannels, _iChannels), _iChannels),
        ('b3', (_iChannels,), _iChannels),
        ('wq', (_iChannels, _iChannels), _iChannels),
        ('wk', (_iChannels, _iChannels), _iChannels),
        ('wv', (_iChannels, _iChannels), _iChannels),
        ('wo', (_iChannels, _iChannels), _iChannels),
    ]
    if not _bBias:
        ltShapes = [tShape for tShape in ltShapes if tShape[0] not in PhastAttention_head.BIASES]
    return ltShapes


def phastHead(_iChannels, _iSlices, _oRng, _bBias = True, _oDtype = numpy.float64):
    """
    Create a new head with uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights

    @param int             _iChannels  Per-head channels count (C_h)
    @param int             _iSlices    Slices count (M)
    @param PhastLinalg_rng _oRng       Random number generator
    @param bool            _bBias      Enable Linear1/Linear3 biases
    @param type            _oDtype     Floating-point type

    @return PhastAttention_head  Head
    """

    daWeights = dict()
    for (sName, tShape, iFanIn) in phastHeadShapes(_iChannels, _iSlices, _bBias):
        fBound = 1.0 / numpy.sqrt(iFanIn)
        daWeights[sName] = _oRng.uniform(tShape, -fBound, fBound, _oDtype)
    return PhastAttention_head(daWeights)

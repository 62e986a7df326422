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

class PhastTrain_adamw:
    """
    AdamW optimizer (decoupled weight decay)

    Weight decay applies to weight matrices only (not to biases nor
    normalization parameters). Parameters are updated in place.
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _ltParams, _fLr = 1e-3, _tBetas = (0.9, 0.999), _fEps = 1e-8, _fWeightDecay = 0.05):
        """
        Instantiate a new optimizer

        @param list  _ltParams      (name, array) pairs to optimize
        @param float _fLr           Learning rate (default)
        @param tuple _tBetas        Moments decay rates
        @param float _fEps          Denominator regularization
        @param float _fWeightDecay  Decoupled weight decay
        """

        # Properties
        self._ltParams = list(_ltParams)
        self._fLr = float(_fLr)
        (self._fBeta1, self._fBeta2) = (float(_tBetas[0]), float(_tBetas[1]))
        self._fEps = float(_fEps)
        self._fWeightDecay = float(_fWeightDecay)
        self._iStep = 0
        self._daM = {sName: numpy.zeros_like(aParam) for (sName, aParam) in self._ltParams}
        self._daV = {sName: numpy.zeros_like(aParam) for (sName, aParam) in self._ltParams}


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def steps(self):
        return self._iStep


    def step(self, _daGrads, _fLr = None):
        """
        Perform one optimization step

        @param dict  _daGrads  Gradients (name -> array)
        @param float _fLr      Learning rate (None for default)
        """

        fLr = self._fLr if _fLr is None else float(_fLr)
        self._iStep += 1
        fCorrection1 = 1.0 - self._fBeta1**self._iStep
        fCorrection2 = 1.0 - self._fBeta2**self._iStep
        for (sName, aParam) in self._ltParams:
            aGrad = _daGrads[sName]
            aM = self._daM[sName]
            aV = self._daV[sName]
            aM *= self._fBeta1
            aM += (1.0 - self._fBeta1) * aGrad
            aV *= self._fBeta2
            aV += (1.0 - self._fBeta2) * aGrad * aGrad
            if fLr == 0.0:
                continue
            if self._fWeightDecay and aParam.ndim == 2:
                aParam -= fLr * self._fWeightDecay * aParam
            aParam -= fLr * (aM / fCorrection1) / (numpy.sqrt(aV / fCorrection2) + self._fEps)


    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    def clipGlobalNorm(_daGrads, _fMaxNorm):
        """
        Clip the gradients global norm (in place)

        @param dict  _daGrads   Gradients (name -> array)
        @param float _fMaxNorm  Maximum global norm (0 = no clipping)

        @return float  Global norm before clipping
        """

        fNorm = float(numpy.sqrt(sum([float(numpy.sum(aGrad*aGrad)) for aGrad in _daGrads.values()])))
        if _fMaxNorm > 0.0 and fNorm > _fMaxNorm:
            fScale = _fMaxNorm / fNorm
            for aGrad in _daGrads.values():
                aGrad *= fScale
        return fNorm


class PhastTrain_schedule:
    """
    Learning rate schedule: linear warm-up then cosine decay to a floor
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _fLr, _fLrMin, _iSteps, _fWarmup = 0.05):
        """
        @param float _fLr      Peak learning rate
        @param float _fLrMin   Floor learning rate (clamped to the peak one)
        @param int   _iSteps   Total steps count
        @param float _fWarmup  Warm-up fraction of all steps
        """

        # Properties
        self._fLr = float(_fLr)
        self._fLrMin = min(float(_fLrMin), self._fLr)
        self._iSteps = max(int(_iSteps), 1)
        self._iWarmup = int(numpy.ceil(float(_fWarmup) * self._iSteps))


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def lr(self, _iStep):
        """
        Return the learning rate of the given (0-based) step

        @param int _iStep  Step index

        @return float  Learning rate
        """

        if _iStep < self._iWarmup:
            return self._fLr * (_iStep + 1) / self._iWarmup
        iDecay = self._iSteps - self._iWarmup
        fProgress = min(max((_iStep - self._iWarmup) / max(iDecay - 1, 1), 0.0), 1.0)
        return self._fLrMin + 0.5 * (self._fLr - self._fLrMin) * (1.0 + numpy.cos(numpy.pi * fProgress))

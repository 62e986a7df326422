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
     PhastAttention_head, \
     phastHeadShapes

# External
import numpy

# Standard
import hashlib
import json


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastModel_params:
    """
    Model parameters (ModelParams)

    Parameters are held in an ordered dictionary, named:
     - embed.w1, embed.b1, embed.w2, embed.b2
     - layer<l>.ln1.gain, layer<l>.ln1.shift
     - layer<l>.head<h>.<w1|b1|w2|b2|w3|b3|wq|wk|wv|wo>
     - layer<l>.ln2.gain, layer<l>.ln2.shift
     - layer<l>.ffn.w1, layer<l>.ffn.b1, layer<l>.ffn.w2, layer<l>.ffn.b2
     - head.w, head.b
    The order above is the parameters (and checkpoint) order.

    Target standardization statistics (mean, standard deviation) are not
    learnable; they are carried along and undone on the model output.
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _oConfig, _daParams, _aTargetMean = None, _aTargetStd = None):
        """
        Instantiate parameters from the given arrays

        @param PhastModel_config _oConfig      Model configuration
        @param dict              _daParams     Parameters (name -> array)
        @param numpy.ndarray     _aTargetMean  Target mean [out_dim] (default: zeros)
        @param numpy.ndarray     _aTargetStd   Target standard deviation [out_dim] (default: ones)

        @exception RuntimeError  On missing/unexpected parameter or shape mismatch
        """

        # Properties
        self.config = _oConfig
        self._daParams = dict()
        ltShapes = phastModelShapes(_oConfig)
        lsExpected = [tShape[0] for tShape in ltShapes]
        lsUnexpected = sorted(set(_daParams) - set(lsExpected))
        if lsUnexpected:
            raise RuntimeError('Unexpected parameter(s): %s' % ', '.join(lsUnexpected))
        for (sName, tShape, iFanIn, sInit) in ltShapes:
            if sName not in _daParams:
                raise RuntimeError('Missing parameter "%s"' % sName)
            aParam = _daParams[sName]
            if aParam.shape != tShape:
                raise RuntimeError('Invalid parameter "%s" shape (%s); expected %s' % (sName, aParam.shape, tShape))
            self._daParams[sName] = aParam
        oDtype = self._daParams[lsExpected[0]].dtype if lsExpected else numpy.float64
        self.target_mean = numpy.zeros(_oConfig.out_dim, dtype=oDtype) if _aTargetMean is None else numpy.asarray(_aTargetMean, dtype=oDtype)
        self.target_std = numpy.ones(_oConfig.out_dim, dtype=oDtype) if _aTargetStd is None else numpy.asarray(_aTargetStd, dtype=oDtype)
        if self.target_mean.shape != (_oConfig.out_dim,) or self.target_std.shape != (_oConfig.out_dim,):
            raise RuntimeError('Invalid target normalization shape; expected (%d,)' % _oConfig.out_dim)
        if not numpy.all(self.target_std > 0.0):
            raise RuntimeError('Invalid target normalization; standard deviation must be positive')

        # ... heads (sharing the parameters arrays)
        self._lloHeads = list()
        for iLayer in range(_oConfig.layers):
            loHeads = list()
            for iHead in range(_oConfig.heads):
                sPrefix = 'layer%d.head%d.' % (iLayer, iHead)
                loHeads.append(PhastAttention_head({sName[len(sPrefix):]: aParam for (sName, aParam) in self._daParams.items() if sName.startswith(sPrefix)}))
            self._lloHeads.append(loHeads)


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def __getitem__(self, _sName):
        return self._daParams[_sName]


    def __contains__(self, _sName):
        return _sName in self._daParams


    def names(self):
        """
        Return the parameters names, in parameters order

        @return list  Names
        """

        return list(self._daParams)


    def items(self):
        """
        Return the (name, array) pairs, in parameters order

        @return list  (name, array) pairs
        """

        return list(self._daParams.items())


    def count(self):
        """
        Return the number of scalar parameters

        @return int  Parameters count
        """

        return sum([aParam.size for aParam in self._daParams.values()])


    def dtype(self):
        """
        Return the parameters floating-point type

        @return numpy.dtype  Floating-point type
        """

        return self.target_mean.dtype


    def heads(self, _iLayer):
        """
        Return the given layer's heads (sharing the parameters arrays)

        @param int _iLayer  Layer index

        @return list  Heads (PhastAttention_head)
        """

        return self._lloHeads[_iLayer]


    def copy(self):
        """
        Return a deep copy of the parameters

        @return PhastModel_params  Parameters
        """

        return PhastModel_params(
            self.config,
            {sName: aParam.copy() for (sName, aParam) in self._daParams.items()},
            self.target_mean.copy(), self.target_std.copy()
        )


    def zeros(self):
        """
        Return zero-filled arrays matching the parameters (gradients store)

        @return dict  Zeros (name -> array), in parameters order
        """

        return {sName: numpy.zeros_like(aParam) for (sName, aParam) in self._daParams.items()}


    def tensors(self):
        """
        Return all tensors to persist, in checkpoint order (parameters, then
        target normalization)

        @return list  (name, array) pairs
        """

        return self.items() + [('norm.target_mean', self.target_mean), ('norm.target_std', self.target_std)]


    def fingerprint(self):
        """
        Return the 64-bit fingerprint of the parameters and configuration

        @return str  Fingerprint (hexadecimal)
        """

        oHash = hashlib.blake2b(digest_size=8)
        oHash.update(json.dumps(self.config.toDict(), sort_keys=True).encode('utf-8'))
        for (sName, aTensor) in self.tensors():
            oHash.update(sName.encode('utf-8'))
            oHash.update(numpy.ascontiguousarray(aTensor, dtype=aTensor.dtype.newbyteorder('<')).tobytes())
        return oHash.hexdigest()


#------------------------------------------------------------------------------
# FACTORY
#------------------------------------------------------------------------------

def phastModelShapes(_oConfig):
    """
    Return the parameters shapes, in parameters order

    @param PhastModel_config _oConfig  Model configuration

    @return list  List of (name, shape, fan-in, init) tuples; init is one of
                  'uniform', 'ones' or 'zeros'
    """

    (C, F) = (_oConfig.channels, _oConfig.ffn_hidden)
    ltShapes = [
        ('embed.w1', (_oConfig.in_dim, C), _oConfig.in_dim, 'uniform'),
        ('embed.b1', (C,), _oConfig.in_dim, 'uniform'),
        ('embed.w2', (C, C), C, 'uniform'),
        ('embed.b2', (C,), C, 'uniform'),
    ]
    for iLayer in range(_oConfig.layers):
        sLayer = 'layer%d.' % iLayer
        ltShapes += [
            (sLayer+'ln1.gain', (C,), C, 'ones'),
            (sLayer+'ln1.shift', (C,), C, 'zeros'),
        ]
        for iHead in range(_oConfig.heads):
            ltShapes += [
                ('%shead%d.%s' % (sLayer, iHead, sName), tShape, iFanIn, 'uniform')
                for (sName, tShape, iFanIn) in phastHeadShapes(_oConfig.headChannels(), _oConfig.slices, _oConfig.bias)
            ]
        ltShapes += [
            (sLayer+'ln2.gain', (C,), C, 'ones'),
            (sLayer+'ln2.shift', (C,), C, 'zeros'),
            (sLayer+'ffn.w1', (C, F), C, 'uniform'),
            (sLayer+'ffn.b1', (F,), C, 'uniform'),
            (sLayer+'ffn.w2', (F, C), F, 'uniform'),
            (sLayer+'ffn.b2', (C,), F, 'uniform'),
        ]
    ltShapes += [
        ('head.w', (C, _oConfig.out_dim), C, 'uniform'),
        ('head.b', (_oConfig.out_dim,), C, 'uniform'),
    ]
    return ltShapes


def phastParamCount(_oConfig):
    """
    Return the exact number of scalar parameters of the given configuration

    @param PhastModel_config _oConfig  Model configuration

    @return int  Parameters count
    """

    return sum([int(numpy.prod(tShape[1])) for tShape in phastModelShapes(_oConfig)])


def phastModelParams(_oConfig, _oRng, _oDtype = numpy.float64):
    """
    Create new parameters, with uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))
    weights and identity layer normalizations (drawn in parameters order)

    @param PhastModel_config _oConfig  Model configuration
    @param PhastLinalg_rng   _oRng     Random number generator
    @param type              _oDtype   Floating-point type

    @return PhastModel_params  Parameters

    @exception RuntimeError  On invalid configuration
    """

    _oConfig.check()
    daParams = dict()
    for (sName, tShape, iFanIn, sInit) in phastModelShapes(_oConfig):
        if sInit == 'ones':
            daParams[sName] = numpy.ones(tShape, dtype=_oDtype)
        elif sInit == 'zeros':
            daParams[sName] = numpy.zeros(tShape, dtype=_oDtype)
        else:
            fBound = 1.0 / numpy.sqrt(iFanIn)
            daParams[sName] = _oRng.uniform(tShape, -fBound, fBound, _oDtype)
    return PhastModel_params(_oConfig, daParams)

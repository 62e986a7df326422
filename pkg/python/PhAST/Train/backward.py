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
     PhastAttention
from PhAST.Linalg import \
     PhastLinalg
from PhAST.Runtime import \
     PhastNumericError

# External
import numpy


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastTrain_backward:
    """
    Exact reverse-mode differentiation of the network, from the forward
    tape (see PhastModel_network.forward)

    In 'tiled' mode, per-tile slice weights are never stored: they are
    recomputed tile by tile (twice) during the backward pass, such that no
    [N x M] buffer is ever resident.
    """

    #--------------------------------------------------------------------------
    # LOSS
    #--------------------------------------------------------------------------

    def loss(_aPrediction, _aTarget):
        """
        Relative L2 loss |y_hat - y| / |y| and its gradient

        @param numpy.ndarray _aPrediction  Prediction [N x K]
        @param numpy.ndarray _aTarget      Target [N x K]

        @return (float, numpy.ndarray)  Loss, gradient w.r.t. the prediction [N x K]

        @exception RuntimeError       On shape mismatch
        @exception PhastNumericError  On zero-norm target
        """

        if _aPrediction.shape != _aTarget.shape:
            raise RuntimeError('Invalid target shape (%s); expected %s' % (_aTarget.shape, _aPrediction.shape))
        fTarget = PhastLinalg.frobenius(_aTarget)
        if fTarget == 0.0:
            raise PhastNumericError('Degenerate target; zero norm')
        aResidual = _aPrediction - _aTarget
        fResidual = PhastLinalg.frobenius(aResidual)
        if fResidual == 0.0:
            return (0.0, numpy.zeros_like(aResidual))
        return (fResidual / fTarget, aResidual / (fResidual * fTarget))


    #--------------------------------------------------------------------------
    # PHYSICS-ATTENTION (single head)
    #--------------------------------------------------------------------------

    def statesAttention(_aGrad, _aS, _oHead, _dTape, _daGrads):
        """
        Backward of the states self-attention

        @param numpy.ndarray       _aGrad    Gradient w.r.t. s' [M x C_h]
        @param numpy.ndarray       _aS       States s [M x C_h]
        @param PhastAttention_head _oHead    Head parameters
        @param dict                _dTape    Head tape
        @param dict                _daGrads  Head gradients (accumulated)

        @return numpy.ndarray  Gradient w.r.t. s [M x C_h]
        """

        dA = _dTape['attention']
        _daGrads['wo'] += PhastLinalg.matmulTN(dA['o'], _aGrad)
        aGradO = PhastLinalg.matmulNT(_aGrad, _oHead.wo)
        aGradA = PhastLinalg.matmulNT(aGradO, dA['v'])
        aGradV = PhastLinalg.matmulTN(dA['a'], aGradO)
        aGradZ = PhastLinalg.softmaxRowsBackward(dA['a'], aGradA) * dA['scale']
        aGradQ = PhastLinalg.matmul(aGradZ, dA['k'])
        aGradK = PhastLinalg.matmulTN(aGradZ, dA['q'])
        _daGrads['wq'] += PhastLinalg.matmulTN(_aS, aGradQ)
        _daGrads['wk'] += PhastLinalg.matmulTN(_aS, aGradK)
        _daGrads['wv'] += PhastLinalg.matmulTN(_aS, aGradV)
        return PhastLinalg.matmulNT(aGradQ, _oHead.wq) + PhastLinalg.matmulNT(aGradK, _oHead.wk) + PhastLinalg.matmulNT(aGradV, _oHead.wv)


    def sliceWeights(_aX, _aW, _aGradW, _oHead, _daGrads):
        """
        Backward of the slice weights w = Softmax(Linear2(x))

        @return numpy.ndarray  Gradient w.r.t. x (through Linear2) [N x C_h]
        """

        aGradZ = PhastLinalg.softmaxRowsBackward(_aW, _aGradW)
        _daGrads['w2'] += PhastLinalg.matmulTN(_aX, aGradZ)
        _daGrads['b2'] += numpy.sum(aGradZ, axis=0)
        return PhastLinalg.matmulNT(aGradZ, _oHead.w2)


    def project(_aGradS, _oHead, _dTape, _daGrads):
        """
        Backward of the states finalization s = Linear1(s_raw d^-1)

        @return (numpy.ndarray, numpy.ndarray)  Gradients w.r.t. s_raw [M x C_h] and d [M]
        """

        (aSnorm, aD) = (_dTape['s_norm'], _dTape['d'])
        _daGrads['w1'] += PhastLinalg.matmulTN(aSnorm, _aGradS)
        if _oHead.hasBias():
            _daGrads['b1'] += numpy.sum(_aGradS, axis=0)
        aGradSnorm = PhastLinalg.matmulNT(_aGradS, _oHead.w1)
        return (aGradSnorm / aD[:, None], -numpy.sum(aGradSnorm * aSnorm, axis=1) / aD)


    def outputStates(_aGradSout, _oHead, _dTape, _daGrads):
        """
        Backward of the output states s'_out = Linear3(s')

        @return numpy.ndarray  Gradient w.r.t. s' [M x C_h]
        """

        _daGrads['w3'] += PhastLinalg.matmulTN(_dTape['s_prime'], _aGradSout)
        if _oHead.hasBias():
            _daGrads['b3'] += numpy.sum(_aGradSout, axis=0)
        return PhastLinalg.matmulNT(_aGradSout, _oHead.w3)


    def physattnOriginal(_aGradY, _aX, _oHead, _dTape, _daGrads):
        (aW, aD, aS) = (_dTape['w'], _dTape['d'], _dTape['s'])

        # Deslice
        _daGrads['w3'] += PhastLinalg.matmulTN(_dTape['x_desliced'], _aGradY)
        if _oHead.hasBias():
            _daGrads['b3'] += numpy.sum(_aGradY, axis=0)
        aGradXd = PhastLinalg.matmulNT(_aGradY, _oHead.w3)
        aGradW = PhastLinalg.matmulNT(aGradXd, _dTape['s_prime'])
        aGradSprime = PhastLinalg.matmulTN(aW, aGradXd)

        # States
        aGradS = PhastTrain_backward.statesAttention(aGradSprime, aS, _oHead, _dTape, _daGrads)

        # Slice
        aGradT = aGradS / aD[:, None]
        aGradW += PhastLinalg.matmulNT(_dTape['x_proj'], aGradT) - (numpy.sum(aGradS * aS, axis=1) / aD)[None, :]
        aGradXproj = PhastLinalg.matmul(aW, aGradT)
        _daGrads['w1'] += PhastLinalg.matmulTN(_aX, aGradXproj)
        if _oHead.hasBias():
            _daGrads['b1'] += numpy.sum(aGradXproj, axis=0)
        return PhastLinalg.matmulNT(aGradXproj, _oHead.w1) + PhastTrain_backward.sliceWeights(_aX, aW, aGradW, _oHead, _daGrads)


    def physattnFast(_aGradY, _aX, _oHead, _dTape, _daGrads):
        (aW, aSout) = (_dTape['w'], _dTape['s_out'])

        # Deslice
        aGradW = PhastLinalg.matmulNT(_aGradY, aSout)
        aGradSprime = PhastTrain_backward.outputStates(PhastLinalg.matmulTN(aW, _aGradY), _oHead, _dTape, _daGrads)

        # States
        aGradS = PhastTrain_backward.statesAttention(aGradSprime, _dTape['s'], _oHead, _dTape, _daGrads)

        # Slice
        (aGradSraw, aGradD) = PhastTrain_backward.project(aGradS, _oHead, _dTape, _daGrads)
        aGradW += PhastLinalg.matmulNT(_aX, aGradSraw) + aGradD[None, :]
        return PhastLinalg.matmul(aW, aGradSraw) + PhastTrain_backward.sliceWeights(_aX, aW, aGradW, _oHead, _daGrads)


    def physattnTiled(_aGradY, _aX, _oHead, _dTape, _daGrads, _oCounter = None):
        """
        Backward of the tiled Physics-Attention; slice weights are recomputed
        per tile (first sweep: output states gradient; second sweep: inputs
        and Linear2 gradients)
        """

        ltTiles = _dTape['tiles']
        aSout = _dTape['s_out']

        # Deslice (first sweep)
        aGradSout = numpy.zeros_like(aSout)
        for (iStart, iStop) in ltTiles:
            aWt = PhastAttention.sliceWeights(_aX[iStart:iStop], _oHead, _oCounter)
            aGradSout += PhastLinalg.matmulTN(aWt, _aGradY[iStart:iStop])
        aGradSprime = PhastTrain_backward.outputStates(aGradSout, _oHead, _dTape, _daGrads)

        # States
        aGradS = PhastTrain_backward.statesAttention(aGradSprime, _dTape['s'], _oHead, _dTape, _daGrads)
        (aGradSraw, aGradD) = PhastTrain_backward.project(aGradS, _oHead, _dTape, _daGrads)

        # Slice (second sweep)
        aGradX = numpy.empty_like(_aX)
        for (iStart, iStop) in ltTiles:
            aXt = _aX[iStart:iStop]
            aWt = PhastAttention.sliceWeights(aXt, _oHead, _oCounter)
            aGradWt = PhastLinalg.matmulNT(_aGradY[iStart:iStop], aSout) + PhastLinalg.matmulNT(aXt, aGradSraw) + aGradD[None, :]
            aGradX[iStart:iStop] = PhastLinalg.matmul(aWt, aGradSraw) + PhastTrain_backward.sliceWeights(aXt, aWt, aGradWt, _oHead, _daGrads)
        return aGradX


    def physattn(_aGradY, _aX, _oHead, _dTape, _daGrads, _oCounter = None):
        """
        Backward of the single-head Physics-Attention (mode from the tape)

        @param numpy.ndarray       _aGradY    Gradient w.r.t. the output [N x C_h]
        @param numpy.ndarray       _aX        Head input [N x C_h]
        @param PhastAttention_head _oHead     Head parameters
        @param dict                _dTape     Head tape
        @param dict                _daGrads   Head gradients (short names; accumulated)
        @param object              _oCounter  Operations counter, for recomputed buffers (ignored if None)

        @return numpy.ndarray  Gradient w.r.t. the input [N x C_h]
        """

        sMode = _dTape['mode']
        if sMode == 'original':
            return PhastTrain_backward.physattnOriginal(_aGradY, _aX, _oHead, _dTape, _daGrads)
        elif sMode == 'fast':
            return PhastTrain_backward.physattnFast(_aGradY, _aX, _oHead, _dTape, _daGrads)
        return PhastTrain_backward.physattnTiled(_aGradY, _aX, _oHead, _dTape, _daGrads, _oCounter)


    #--------------------------------------------------------------------------
    # NETWORK
    #--------------------------------------------------------------------------

    def layer(_iLayer, _aGradX, _oParams, _dTape, _daGrads, _oCounter = None):
        """
        Backward of one block (attention and feed-forward sub-layers)

        @return numpy.ndarray  Gradient w.r.t. the block input [N x C]
        """

        sLayer = 'layer%d.' % _iLayer

        # Feed-forward
        _daGrads[sLayer+'ffn.w2'] += PhastLinalg.matmulTN(_dTape['f_h'], _aGradX)
        _daGrads[sLayer+'ffn.b2'] += numpy.sum(_aGradX, axis=0)
        aGradZ = PhastLinalg.matmulNT(_aGradX, _oParams[sLayer+'ffn.w2']) * PhastLinalg.geluGrad(_dTape['f_z'])
        _daGrads[sLayer+'ffn.w1'] += PhastLinalg.matmulTN(_dTape['f_in'], aGradZ)
        _daGrads[sLayer+'ffn.b1'] += numpy.sum(aGradZ, axis=0)
        aGradF = PhastLinalg.matmulNT(aGradZ, _oParams[sLayer+'ffn.w1'])
        (aGradNorm, aGradGain, aGradShift) = PhastLinalg.layerNormBackward(_dTape['ln2_xhat'], _dTape['ln2_rstd'], _oParams[sLayer+'ln2.gain'], aGradF)
        _daGrads[sLayer+'ln2.gain'] += aGradGain
        _daGrads[sLayer+'ln2.shift'] += aGradShift
        aGradMid = _aGradX + aGradNorm

        # Attention
        aA = _dTape['a_in']
        loHeads = _oParams.heads(_iLayer)
        iChannelsHead = aA.shape[1] // len(loHeads)
        aGradA = numpy.empty_like(aA)
        for (iHead, oHead) in enumerate(loHeads):
            sPrefix = '%shead%d.' % (sLayer, iHead)
            daHead = {sName[len(sPrefix):]: aGrad for (sName, aGrad) in _daGrads.items() if sName.startswith(sPrefix)}
            tColumns = (iHead*iChannelsHead, (iHead+1)*iChannelsHead)
            aGradA[:, tColumns[0]:tColumns[1]] = PhastTrain_backward.physattn(
                numpy.ascontiguousarray(aGradMid[:, tColumns[0]:tColumns[1]]),
                numpy.ascontiguousarray(aA[:, tColumns[0]:tColumns[1]]),
                oHead, _dTape['heads'][iHead], daHead, _oCounter
            )
        (aGradNorm, aGradGain, aGradShift) = PhastLinalg.layerNormBackward(_dTape['ln1_xhat'], _dTape['ln1_rstd'], _oParams[sLayer+'ln1.gain'], aGradA)
        _daGrads[sLayer+'ln1.gain'] += aGradGain
        _daGrads[sLayer+'ln1.shift'] += aGradShift
        return aGradMid + aGradNorm


    def network(_aGradY, _oParams, _dTape, _oCounter = None):
        """
        Backward of the whole network

        @param numpy.ndarray     _aGradY    Gradient w.r.t. the (de-standardized) output [N x out_dim]
        @param PhastModel_params _oParams   Parameters
        @param dict              _dTape     Network tape
        @param object            _oCounter  Operations counter (ignored if None)

        @return dict  Gradients (name -> array), in parameters order
        """

        daGrads = _oParams.zeros()

        # Head
        aGradYn = _aGradY * _oParams.target_std
        daGrads['head.w'] += PhastLinalg.matmulTN(_dTape['x_final'], aGradYn)
        daGrads['head.b'] += numpy.sum(aGradYn, axis=0)
        aGradX = PhastLinalg.matmulNT(aGradYn, _oParams['head.w'])

        # Layers
        for iLayer in reversed(range(len(_dTape['layers']))):
            try:
                aGradX = PhastTrain_backward.layer(iLayer, aGradX, _oParams, _dTape['layers'][iLayer], daGrads, _oCounter)
            except RuntimeError as e:
                raise e.__class__('Layer %d; %s' % (iLayer, str(e))) from e

        # Embedding
        dEmbed = _dTape['embed']
        daGrads['embed.w2'] += PhastLinalg.matmulTN(dEmbed['h1'], aGradX)
        daGrads['embed.b2'] += numpy.sum(aGradX, axis=0)
        aGradZ = PhastLinalg.matmulNT(aGradX, _oParams['embed.w2']) * PhastLinalg.geluGrad(dEmbed['z1'])
        daGrads['embed.w1'] += PhastLinalg.matmulTN(dEmbed['input'], aGradZ)
        daGrads['embed.b1'] += numpy.sum(aGradZ, axis=0)
        return daGrads


    def step(_oNetwork, _oMesh, _aTargets = None, _sMode = None, _iTileSize = None, _oCounter = None, _bParallel = False):
        """
        Forward pass, relative L2 loss and exact gradients

        @param PhastModel_network _oNetwork   Network
        @param PhastGeometry_mesh _oMesh      Mesh (subset)
        @param numpy.ndarray      _aTargets   Targets [N x out_dim] (default: mesh targets)
        @param str                _sMode      Physics-Attention mode (None for configured mode)
        @param int                _iTileSize  Tile size (None for configured tile size)
        @param object             _oCounter   Operations counter (ignored if None)
        @param bool               _bParallel  Process tiles in parallel

        @return (float, dict)  Loss, gradients (name -> array); all-zero
                gradients if the prediction is exact

        @exception RuntimeError       On missing targets or shape mismatch
        @exception PhastNumericError  On degenerate slice or zero-norm target
        """

        aTargets = _oMesh.targets if _aTargets is None else _aTargets
        if aTargets is None:
            raise RuntimeError('Invalid mesh; targets are required for training')
        dTape = dict()
        aY = _oNetwork.forward(_oMesh, _sMode, _iTileSize, _oCounter, dTape, _bParallel)
        (fLoss, aGradY) = PhastTrain_backward.loss(aY, numpy.asarray(aTargets, dtype=aY.dtype))
        if fLoss == 0.0:
            return (0.0, _oNetwork.params.zeros())
        return (fLoss, PhastTrain_backward.network(aGradY, _oNetwork.params, dTape, _oCounter))

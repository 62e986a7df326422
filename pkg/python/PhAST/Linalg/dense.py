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

class PhastLinalg:
    """
    Dense (row-major) numeric kernels

    Matrices are 2-dimensional C-contiguous numpy arrays. Products are
    computed with non-BLAS einsum loops so that the accumulation order of
    each output entry depends only on the inner dimension; results are thus
    identical whatever the number of rows processed at once (tiles, chunks,
    single points).

    All kernels accept an optional counter object, exposing:
     - madd(op, count): multiply-adds performed by the kernel
     - flop(op, count): other (elementwise) floating-point operations
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    # Softmax FLOPs per element (exp, sub, sum-share, div)
    SOFTMAX_FLOPS = 4

    # GELU (tanh approximation)
    GELU_K = numpy.sqrt(2.0 / numpy.pi)
    GELU_C = 0.044715


    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    def matrix(_mValues, _oDtype = numpy.float64):
        """
        Return the given values as a C-contiguous 2-dimensional matrix

        @param any  _mValues  Values (nested lists or array)
        @param type _oDtype   Floating-point type

        @return numpy.ndarray  Matrix

        @exception RuntimeError  On invalid dimensions or non-finite entries
        """

        aMatrix = numpy.ascontiguousarray(_mValues, dtype=_oDtype)
        if aMatrix.ndim == 1:
            aMatrix = aMatrix.reshape(1, -1)
        if aMatrix.ndim != 2:
            raise RuntimeError('Invalid matrix dimensions (%s)' % (aMatrix.shape,))
        if not numpy.all(numpy.isfinite(aMatrix)):
            raise RuntimeError('Invalid matrix; non-finite entries')
        return aMatrix


    def matmul(_aA, _aB, _oCounter = None, _sOp = 'matmul'):
        """
        Matrix product c[i][k] = sum_j a[i][j]*b[j][k]

        @param numpy.ndarray _aA       Left matrix [P x Q]
        @param numpy.ndarray _aB       Right matrix [Q x R]
        @param object        _oCounter Operations counter (ignored if None)
        @param str           _sOp      Operation label (for counter)

        @return numpy.ndarray  Product [P x R]

        @exception RuntimeError  On dimension mismatch
        """

        if _aA.ndim != 2 or _aB.ndim != 2 or _aA.shape[1] != _aB.shape[0]:
            raise RuntimeError('Matrix dimension mismatch (%s x %s)' % (_aA.shape, _aB.shape))
        if _oCounter is not None:
            _oCounter.madd(_sOp, _aA.shape[0]*_aA.shape[1]*_aB.shape[1])
        return numpy.einsum('ij,jk->ik', _aA, _aB, optimize=False)


    def matmulTN(_aA, _aB, _oCounter = None, _sOp = 'matmulTN'):
        """
        Transposed matrix product c[i][k] = sum_j a[j][i]*b[j][k]

        The transpose of A is never materialized.

        @param numpy.ndarray _aA       Left matrix [Q x P] (used transposed)
        @param numpy.ndarray _aB       Right matrix [Q x R]
        @param object        _oCounter Operations counter (ignored if None)
        @param str           _sOp      Operation label (for counter)

        @return numpy.ndarray  Product [P x R]

        @exception RuntimeError  On dimension mismatch
        """

        if _aA.ndim != 2 or _aB.ndim != 2 or _aA.shape[0] != _aB.shape[0]:
            raise RuntimeError('Matrix dimension mismatch (%s^T x %s)' % (_aA.shape, _aB.shape))
        if _oCounter is not None:
            _oCounter.madd(_sOp, _aA.shape[0]*_aA.shape[1]*_aB.shape[1])
        return numpy.einsum('ji,jk->ik', _aA, _aB, optimize=False)


    def matmulNT(_aA, _aB, _oCounter = None, _sOp = 'matmulNT'):
        """
        Transposed matrix product c[i][k] = sum_j a[i][j]*b[k][j]

        @param numpy.ndarray _aA       Left matrix [P x Q]
        @param numpy.ndarray _aB       Right matrix [R x Q] (used transposed)
        @param object        _oCounter Operations counter (ignored if None)
        @param str           _sOp      Operation label (for counter)

        @return numpy.ndarray  Product [P x R]

        @exception RuntimeError  On dimension mismatch
        """

        if _aA.ndim != 2 or _aB.ndim != 2 or _aA.shape[1] != _aB.shape[1]:
            raise RuntimeError('Matrix dimension mismatch (%s x %s^T)' % (_aA.shape, _aB.shape))
        if _oCounter is not None:
            _oCounter.madd(_sOp, _aA.shape[0]*_aA.shape[1]*_aB.shape[0])
        return numpy.einsum('ij,kj->ik', _aA, _aB, optimize=False)


    def linear(_aX, _aW, _aB = None, _oCounter = None, _sOp = 'linear'):
        """
        Affine map y = x.W (+ b)

        @param numpy.ndarray _aX       Input [P x Q]
        @param numpy.ndarray _aW       Weights [Q x R]
        @param numpy.ndarray _aB       Bias [R] (ignored if None)
        @param object        _oCounter Operations counter (ignored if None)
        @param str           _sOp      Operation label (for counter)

        @return numpy.ndarray  Output [P x R]
        """

        aY = PhastLinalg.matmul(_aX, _aW, _oCounter, _sOp)
        if _aB is not None:
            aY += _aB
        return aY


    def softmaxRows(_aZ, _oCounter = None, _sOp = 'softmax'):
        """
        Row-wise softmax, with per-row max-subtraction

        @param numpy.ndarray _aZ       Logits [P x Q]
        @param object        _oCounter Operations counter (ignored if None)
        @param str           _sOp      Operation label (for counter)

        @return numpy.ndarray  Row-stochastic matrix [P x Q]

        @exception RuntimeError  On non-finite input
        """

        if not numpy.all(numpy.isfinite(_aZ)):
            raise RuntimeError('Invalid softmax input; non-finite entries')
        if _oCounter is not None:
            _oCounter.flop(_sOp, PhastLinalg.SOFTMAX_FLOPS*_aZ.size)
        aE = numpy.exp(_aZ - numpy.max(_aZ, axis=1, keepdims=True))
        return aE / numpy.sum(aE, axis=1, keepdims=True)


    def softmaxRowsBackward(_aP, _aGradP):
        """
        Backward of the row-wise softmax

        @param numpy.ndarray _aP      Softmax output [P x Q]
        @param numpy.ndarray _aGradP  Gradient w.r.t. the output [P x Q]

        @return numpy.ndarray  Gradient w.r.t. the logits [P x Q]
        """

        return _aP * (_aGradP - numpy.sum(_aGradP * _aP, axis=1, keepdims=True))


    def layerNorm(_aX, _aGain, _aShift, _fEps = 1e-5):
        """
        Row-wise layer normalization

        @param numpy.ndarray _aX      Input [P x C]
        @param numpy.ndarray _aGain   Gain [C]
        @param numpy.ndarray _aShift  Shift [C]
        @param float         _fEps    Variance regularization (> 0)

        @return numpy.ndarray  Normalized output [P x C]
        """

        return PhastLinalg.layerNormStats(_aX, _aGain, _aShift, _fEps)[0]


    def layerNormStats(_aX, _aGain, _aShift, _fEps = 1e-5):
        """
        Row-wise layer normalization, also returning the statistics required
        by its backward

        @param numpy.ndarray _aX      Input [P x C]
        @param numpy.ndarray _aGain   Gain [C]
        @param numpy.ndarray _aShift  Shift [C]
        @param float         _fEps    Variance regularization (> 0)

        @return (numpy.ndarray, numpy.ndarray, numpy.ndarray)  Output [P x C],
                normalized input (before gain/shift) [P x C], reciprocal
                standard deviation [P x 1]

        @exception RuntimeError  On invalid epsilon
        """

        if not _fEps > 0.0:
            raise RuntimeError('Invalid layer normalization epsilon (%s)' % _fEps)
        aMean = numpy.mean(_aX, axis=1, keepdims=True)
        aCentered = _aX - aMean
        aVar = numpy.mean(aCentered * aCentered, axis=1, keepdims=True)
        aRstd = 1.0 / numpy.sqrt(aVar + _fEps)
        aXhat = aCentered * aRstd
        return (aXhat * _aGain + _aShift, aXhat, aRstd)


    def layerNormBackward(_aXhat, _aRstd, _aGain, _aGradY):
        """
        Backward of the row-wise layer normalization

        @param numpy.ndarray _aXhat   Normalized input [P x C]
        @param numpy.ndarray _aRstd   Reciprocal standard deviation [P x 1]
        @param numpy.ndarray _aGain   Gain [C]
        @param numpy.ndarray _aGradY  Gradient w.r.t. the output [P x C]

        @return (numpy.ndarray, numpy.ndarray, numpy.ndarray)  Gradients w.r.t.
                input [P x C], gain [C] and shift [C]
        """

        aGradGain = numpy.sum(_aGradY * _aXhat, axis=0)
        aGradShift = numpy.sum(_aGradY, axis=0)
        aGradXhat = _aGradY * _aGain
        aGradX = _aRstd * (
            aGradXhat
            - numpy.mean(aGradXhat, axis=1, keepdims=True)
            - _aXhat * numpy.mean(aGradXhat * _aXhat, axis=1, keepdims=True)
        )
        return (aGradX, aGradGain, aGradShift)


    def gelu(_aX):
        """
        GELU activation (tanh approximation)

        @param numpy.ndarray _aX  Input

        @return numpy.ndarray  Output
        """

        return 0.5 * _aX * (1.0 + numpy.tanh(PhastLinalg.GELU_K * (_aX + PhastLinalg.GELU_C * _aX**3)))


    def geluGrad(_aX):
        """
        Derivative of the GELU activation (tanh approximation)

        @param numpy.ndarray _aX  Input

        @return numpy.ndarray  Derivative (elementwise)
        """

        aT = numpy.tanh(PhastLinalg.GELU_K * (_aX + PhastLinalg.GELU_C * _aX**3))
        return 0.5 * (1.0 + aT) + 0.5 * _aX * (1.0 - aT*aT) * PhastLinalg.GELU_K * (1.0 + 3.0 * PhastLinalg.GELU_C * _aX**2)


    def frobenius(_aA):
        """
        Frobenius norm

        @param numpy.ndarray _aA  Matrix

        @return float  Norm
        """

        return float(numpy.sqrt(numpy.sum(_aA * _aA)))


    def relativeError(_aA, _aReference):
        """
        Relative Frobenius error |A - R| / |R| (absolute error if |R| is zero)

        @param numpy.ndarray _aA          Matrix
        @param numpy.ndarray _aReference  Reference matrix

        @return float  Relative error
        """

        fReference = PhastLinalg.frobenius(_aReference)
        fError = PhastLinalg.frobenius(_aA - _aReference)
        if fReference == 0.0:
            return fError
        return fError / fReference

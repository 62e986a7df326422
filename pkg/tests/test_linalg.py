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
     PhastLinalg, \
     PhastLinalg_rng

# External
import numpy
import pytest


#------------------------------------------------------------------------------
# TESTS: products
#------------------------------------------------------------------------------

def test_matmul_trivial():
    aA = numpy.arange(9.0).reshape(3, 3)
    assert numpy.array_equal(PhastLinalg.matmul(numpy.eye(3), aA), aA)
    assert PhastLinalg.matmul(numpy.array([[2.0]]), numpy.array([[3.0]]))[0, 0] == 6.0


def test_matmul_triple_loop(rng):
    aA = rng.normal((5, 4))
    aB = rng.normal((4, 3))
    aC = numpy.zeros((5, 3))
    for i in range(5):
        for k in range(3):
            for j in range(4):
                aC[i, k] += aA[i, j] * aB[j, k]
    assert PhastLinalg.relativeError(PhastLinalg.matmul(aA, aB), aC) <= 1e-12


def test_matmul_mismatch():
    with pytest.raises(RuntimeError, match=r'\(2, 3\) x \(2, 3\)'):
        PhastLinalg.matmul(numpy.ones((2, 3)), numpy.ones((2, 3)))


def test_matmul_transposed(rng):
    aA = rng.normal((7, 4))
    aB = rng.normal((7, 5))
    assert PhastLinalg.relativeError(PhastLinalg.matmulTN(aA, aB), aA.T @ aB) <= 1e-12
    aC = rng.normal((6, 4))
    assert PhastLinalg.relativeError(PhastLinalg.matmulNT(aA, aC), aA @ aC.T) <= 1e-12
    with pytest.raises(RuntimeError):
        PhastLinalg.matmulTN(aA, aC)


def test_matmul_associativity(rng):
    (aA, aB, aC) = (rng.normal((8, 8)), rng.normal((8, 8)), rng.normal((8, 8)))
    fBound = 1e-10 * PhastLinalg.frobenius(aA) * PhastLinalg.frobenius(aB) * PhastLinalg.frobenius(aC)
    aLeft = PhastLinalg.matmul(PhastLinalg.matmul(aA, aB), aC)
    aRight = PhastLinalg.matmul(aA, PhastLinalg.matmul(aB, aC))
    assert PhastLinalg.frobenius(aLeft - aRight) <= fBound


def test_matmul_row_blocks(rng):
    # Results do not depend on how many rows are processed at once
    aA = rng.normal((50, 12))
    aB = rng.normal((12, 6))
    aFull = PhastLinalg.matmul(aA, aB)
    aBlocks = numpy.concatenate([PhastLinalg.matmul(aA[i:i+7], aB) for i in range(0, 50, 7)])
    assert numpy.array_equal(aFull, aBlocks)


def test_counter():
    class Counter:
        def __init__(self):
            self.madds = dict()
        def madd(self, _sOp, _iCount):
            self.madds[_sOp] = self.madds.get(_sOp, 0) + _iCount
    oCounter = Counter()
    PhastLinalg.matmul(numpy.ones((5, 4)), numpy.ones((4, 3)), oCounter, 'op')
    PhastLinalg.matmulTN(numpy.ones((4, 5)), numpy.ones((4, 3)), oCounter, 'op')
    assert oCounter.madds == {'op': 120}


#------------------------------------------------------------------------------
# TESTS: softmax
#------------------------------------------------------------------------------

def test_softmax_trivial():
    assert numpy.array_equal(PhastLinalg.softmaxRows(numpy.zeros((1, 2))), numpy.array([[0.5, 0.5]]))
    assert numpy.array_equal(PhastLinalg.softmaxRows(numpy.array([[3.0], [-7.0], [1e3]])), numpy.ones((3, 1)))


def test_softmax_shift_invariance(rng):
    aZ = rng.normal((6, 9), 3.0)
    aP = PhastLinalg.softmaxRows(aZ)
    assert numpy.max(numpy.abs(PhastLinalg.softmaxRows(aZ + 1000.0) - aP)) <= 1e-12
    assert numpy.max(numpy.abs(numpy.sum(aP, axis=1) - 1.0)) <= 1e-12
    assert numpy.all(aP >= 0.0)


def test_softmax_nan():
    with pytest.raises(RuntimeError):
        PhastLinalg.softmaxRows(numpy.array([[0.0, numpy.nan]]))


def test_softmax_backward(rng):
    aZ = rng.normal((3, 5))
    aGrad = rng.normal((3, 5))
    aAnalytic = PhastLinalg.softmaxRowsBackward(PhastLinalg.softmaxRows(aZ), aGrad)
    aNumeric = numpy.zeros_like(aZ)
    for (i, j) in numpy.ndindex(*aZ.shape):
        aDelta = numpy.zeros_like(aZ)
        aDelta[i, j] = 1e-6
        aNumeric[i, j] = numpy.sum(aGrad * (PhastLinalg.softmaxRows(aZ + aDelta) - PhastLinalg.softmaxRows(aZ - aDelta))) / 2e-6
    assert PhastLinalg.relativeError(aAnalytic, aNumeric) <= 1e-7


#------------------------------------------------------------------------------
# TESTS: layer normalization and activation
#------------------------------------------------------------------------------

def test_layernorm_trivial(rng):
    aOnes = numpy.ones(4)
    assert numpy.array_equal(PhastLinalg.layerNorm(numpy.full((2, 4), 3.5), aOnes, numpy.zeros(4)), numpy.zeros((2, 4)))
    aShift = rng.normal((4,))
    aY = PhastLinalg.layerNorm(rng.normal((3, 4)), numpy.zeros(4), aShift)
    assert numpy.array_equal(aY, numpy.tile(aShift, (3, 1)))


def test_layernorm_statistics(rng):
    fEps = 1e-8
    aY = PhastLinalg.layerNorm(rng.normal((4, 8), 10.0), numpy.ones(8), numpy.zeros(8), fEps)
    assert numpy.max(numpy.abs(numpy.mean(aY, axis=1))) <= 1e-12
    assert numpy.max(numpy.abs(numpy.var(aY, axis=1) - 1.0)) <= 2*fEps


def test_layernorm_eps():
    with pytest.raises(RuntimeError):
        PhastLinalg.layerNorm(numpy.ones((1, 2)), numpy.ones(2), numpy.zeros(2), 0.0)


def test_gelu_grad(rng):
    aX = rng.normal((20,), 2.0)
    aNumeric = (PhastLinalg.gelu(aX + 1e-6) - PhastLinalg.gelu(aX - 1e-6)) / 2e-6
    assert numpy.max(numpy.abs(PhastLinalg.geluGrad(aX) - aNumeric)) <= 1e-8


def test_matrix():
    assert PhastLinalg.matrix([1.0, 2.0]).shape == (1, 2)
    with pytest.raises(RuntimeError):
        PhastLinalg.matrix([[numpy.inf]])


#------------------------------------------------------------------------------
# TESTS: random numbers
#------------------------------------------------------------------------------

def test_rng_reproducible():
    (oRng1, oRng2) = (PhastLinalg_rng(42), PhastLinalg_rng(42))
    assert numpy.array_equal(oRng1.normal((5, 5)), oRng2.normal((5, 5)))
    assert numpy.array_equal(oRng1.uniform((3,)), oRng2.uniform((3,)))
    assert numpy.array_equal(PhastLinalg_rng(42).child(3).normal((4,)), PhastLinalg_rng(42).child(3).normal((4,)))
    assert not numpy.array_equal(PhastLinalg_rng(42).child(1).normal((4,)), PhastLinalg_rng(42).child(2).normal((4,)))
    assert PhastLinalg_rng(42).child(1).seed() == 42


def test_rng_sample():
    aSample = PhastLinalg_rng(0).sample(20, 20)
    assert sorted(aSample.tolist()) == list(range(20))
    with pytest.raises(RuntimeError):
        PhastLinalg_rng(0).sample(20, 21)
    with pytest.raises(RuntimeError):
        PhastLinalg_rng(0).sample(20, 0)
    with pytest.raises(RuntimeError):
        PhastLinalg_rng(-1)


def test_rng_dtype():
    assert PhastLinalg_rng(0).normal((2, 2), 1.0, numpy.float32).dtype == numpy.float32

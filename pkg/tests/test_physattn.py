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
     PhastAttention_accumulator, \
     PhastAttention_head, \
     phastHead
from PhAST.Complexity import \
     PhastComplexity_counters
from PhAST.Linalg import \
     PhastLinalg, \
     PhastLinalg_rng
from PhAST.Runtime import \
     PhastNumericError

# External
import numpy
import pytest


#------------------------------------------------------------------------------
# HELPERS
#------------------------------------------------------------------------------

def case(_iSeed, _iPoints, _iChannels, _iSlices, _bBias = True):
    oRng = PhastLinalg_rng(_iSeed)
    oHead = phastHead(_iChannels, _iSlices, oRng.child(0), _bBias)
    return (oRng.child(1).normal((_iPoints, _iChannels)), oHead)


#------------------------------------------------------------------------------
# TESTS: slice
#------------------------------------------------------------------------------

def test_slice_direct_summation():
    (aX, oHead) = case(1, 64, 8, 4)
    (aS, aW) = PhastAttention.sliceOriginal(aX, oHead)
    aXproj = aX @ oHead.w1 + oHead.b1
    aExpected = numpy.zeros((4, 8))
    for j in range(4):
        fD = 0.0
        for i in range(64):
            fD += aW[i, j]
        for c in range(8):
            fSum = 0.0
            for i in range(64):
                fSum += aW[i, j] * aXproj[i, c]
            aExpected[j, c] = fSum / fD
    assert PhastLinalg.relativeError(aS, aExpected) <= 1e-12


@pytest.mark.parametrize('bBias', [False, True])
def test_slice_fast(bBias):
    (aX, oHead) = case(2, 4096, 32, 16, bBias)
    (aSoriginal, aW) = PhastAttention.sliceOriginal(aX, oHead)
    (aSfast, aW2) = PhastAttention.sliceFast(aX, oHead)
    assert PhastLinalg.relativeError(aSfast, aSoriginal) <= 1e-12
    assert numpy.array_equal(aW, aW2)


def test_slice_literal():
    # Linear1 before normalization only matches without bias
    (aX, oHead) = case(3, 256, 8, 4, False)
    assert PhastLinalg.relativeError(PhastAttention.sliceLiteral(aX, oHead), PhastAttention.sliceOriginal(aX, oHead)[0]) <= 1e-12
    (aX, oHead) = case(3, 256, 8, 4, True)
    assert PhastLinalg.relativeError(PhastAttention.sliceLiteral(aX, oHead), PhastAttention.sliceOriginal(aX, oHead)[0]) > 1e-6


def test_slice_weights_stochastic():
    (aX, oHead) = case(4, 100, 8, 5)
    aW = PhastAttention.sliceWeights(aX, oHead)
    assert aW.shape == (100, 5)
    assert numpy.max(numpy.abs(numpy.sum(aW, axis=1) - 1.0)) <= 1e-12


def test_slice_single_slice():
    # M=1: every point fully belongs to the one slice
    (aX, oHead) = case(5, 30, 4, 1)
    (aS, aW) = PhastAttention.sliceOriginal(aX, oHead)
    assert numpy.allclose(aW, 1.0)
    assert PhastLinalg.relativeError(aS, numpy.mean(aX @ oHead.w1 + oHead.b1, axis=0, keepdims=True)) <= 1e-12


def test_slice_empty():
    (aX, oHead) = case(6, 10, 4, 2)
    with pytest.raises(RuntimeError):
        PhastAttention.sliceOriginal(aX[:0], oHead)
    with pytest.raises(RuntimeError):
        PhastAttention.sliceFast(aX[:0], oHead)
    with pytest.raises(RuntimeError):
        PhastAttention.physattn(aX[:0], oHead, 'tiled', 4)


def test_slice_degenerate():
    with pytest.raises(PhastNumericError):
        PhastAttention.checkSlices(numpy.array([1.0, 0.0]))
    oAccumulator = PhastAttention_accumulator(2, 3)
    oAccumulator.addRaw(numpy.ones((2, 3)), numpy.array([2.0, 1e-40]))
    with pytest.raises(PhastNumericError):
        oAccumulator.normalized()


def test_slice_degenerate_underflow():
    # One slice never wins: its weights underflow to zero everywhere
    (aX, oHead) = case(7, 16, 4, 2)
    aX = numpy.abs(aX) + 1.0
    daWeights = oHead.weights()
    daWeights['w2'] = numpy.array([[1e4, -1e4]] * 4)
    daWeights['b2'] = numpy.zeros(2)
    oHead = PhastAttention_head(daWeights)
    for sMode in PhastAttention.MODES:
        with pytest.raises(PhastNumericError):
            PhastAttention.physattn(aX, oHead, sMode, 5)


#------------------------------------------------------------------------------
# TESTS: states and deslice
#------------------------------------------------------------------------------

def test_deslice_fast():
    (aX, oHead) = case(8, 500, 8, 4)
    (aS, aW) = PhastAttention.sliceFast(aX, oHead)
    aSprime = PhastAttention.statesAttention(aS, oHead)
    aOriginal = PhastAttention.desliceOriginal(aSprime, aW, oHead)
    assert PhastLinalg.relativeError(PhastAttention.desliceFast(aSprime, aW, oHead), aOriginal) <= 1e-12
    aExpected = numpy.zeros((500, 8))
    aXdesliced = aW @ aSprime
    for i in range(500):
        aExpected[i] = aXdesliced[i] @ oHead.w3 + oHead.b3
    assert PhastLinalg.relativeError(aOriginal, aExpected) <= 1e-12


def test_states_attention_enumeration():
    (aX, oHead) = case(9, 10, 2, 3)
    aS = PhastLinalg_rng(9).child(2).normal((3, 2))
    aQ = aS @ oHead.wq
    aK = aS @ oHead.wk
    aV = aS @ oHead.wv
    aExpected = numpy.zeros((3, 2))
    for j in range(3):
        lfScores = [sum([aQ[j, c] * aK[k, c] for c in range(2)]) / numpy.sqrt(2.0) for k in range(3)]
        lfExp = [numpy.exp(f - max(lfScores)) for f in lfScores]
        fSum = sum(lfExp)
        aO = sum([lfExp[k] / fSum * aV[k] for k in range(3)])
        aExpected[j] = aO @ oHead.wo
    assert PhastLinalg.relativeError(PhastAttention.statesAttention(aS, oHead), aExpected) <= 1e-12


def test_deslice_one_hot():
    # Each point fully assigned to one slice takes that slice output state
    (aX, oHead) = case(12, 40, 8, 5)
    aSprime = PhastLinalg_rng(12).child(2).normal((5, 8))
    liSlices = [i % 5 for i in range(40)]
    aW = numpy.zeros((40, 5))
    aW[numpy.arange(40), liSlices] = 1.0
    aExpected = numpy.array([aSprime[j] @ oHead.w3 + oHead.b3 for j in liSlices])
    assert PhastLinalg.relativeError(PhastAttention.desliceOriginal(aSprime, aW, oHead), aExpected) <= 1e-12
    assert PhastLinalg.relativeError(PhastAttention.desliceFast(aSprime, aW, oHead), aExpected) <= 1e-12


def test_states_attention_zero_keys():
    # Uniform attention: every state receives the mean value
    (aX, oHead) = case(13, 200, 8, 6)
    daWeights = oHead.weights()
    daWeights['wk'] = numpy.zeros_like(oHead.wk)
    oHead = PhastAttention_head(daWeights)
    aS = PhastLinalg_rng(13).child(2).normal((6, 8))
    aExpected = numpy.mean(aS @ oHead.wv, axis=0) @ oHead.wo
    aSprime = PhastAttention.statesAttention(aS, oHead)
    for j in range(6):
        assert PhastLinalg.relativeError(aSprime[j], aExpected) <= 1e-12
    for sMode in ('original', 'fast', 'tiled'):
        aXout = PhastAttention.physattn(aX, oHead, sMode, 32)
        assert numpy.max(numpy.abs(aXout - aXout[0])) <= 1e-12 * numpy.max(numpy.abs(aXout[0])), sMode


#------------------------------------------------------------------------------
# TESTS: formulations equivalence
#------------------------------------------------------------------------------

def test_tiled_sizes():
    (aX, oHead) = case(10, 1000, 16, 8)
    aOriginal = PhastAttention.physattn(aX, oHead, 'original')
    aFast = PhastAttention.physattn(aX, oHead, 'fast')
    assert PhastLinalg.relativeError(aFast, aOriginal) <= 1e-10
    for iTileSize in (1000, 250, 125, 7):
        aTiled = PhastAttention.physattn(aX, oHead, 'tiled', iTileSize)
        assert PhastLinalg.relativeError(aTiled, aOriginal) <= 1e-10
        assert PhastLinalg.relativeError(aTiled, aFast) <= 1e-10


def test_tiled_oversized():
    (aX, oHead) = case(11, 50, 8, 4)
    assert PhastLinalg.relativeError(PhastAttention.physattn(aX, oHead, 'tiled', 10**6), PhastAttention.physattn(aX, oHead, 'fast')) <= 1e-12


@pytest.mark.parametrize('iSeed', range(20))
def test_tiled_single_tile_bitwise(iSeed):
    (aX, oHead) = case(200 + iSeed, 64 * (1 + iSeed % 4), 16, 8)
    assert numpy.array_equal(PhastAttention.physattn(aX, oHead, 'tiled', aX.shape[0]), PhastAttention.physattn(aX, oHead, 'fast'))


@pytest.mark.parametrize('iSeed', range(100))
def test_equivalence_seeds(iSeed):
    iPoints = (64, 256, 1024, 2048)[iSeed % 4] if iSeed < 8 else (64, 256)[iSeed % 2]
    (aX, oHead) = case(100 + iSeed, iPoints, 16, 8)
    aOriginal = PhastAttention.physattn(aX, oHead, 'original')
    assert PhastLinalg.relativeError(PhastAttention.physattn(aX, oHead, 'fast'), aOriginal) <= 1e-10
    for iTileSize in (iPoints, iPoints // 4, iPoints // 8, 7):
        assert PhastLinalg.relativeError(PhastAttention.physattn(aX, oHead, 'tiled', iTileSize), aOriginal) <= 1e-10


def test_tiled_parallel():
    (aX, oHead) = case(12, 999, 8, 4)
    aSequential = PhastAttention.physattn(aX, oHead, 'tiled', 100)
    assert numpy.array_equal(PhastAttention.physattn(aX, oHead, 'tiled', 100, None, None, True), aSequential)


def test_tiles():
    assert PhastAttention.tiles(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert PhastAttention.tiles(10, 100) == [(0, 10)]
    with pytest.raises(RuntimeError):
        PhastAttention.tiles(10, 0)


def test_mode_invalid():
    (aX, oHead) = case(13, 10, 4, 2)
    with pytest.raises(RuntimeError, match='mode'):
        PhastAttention.physattn(aX, oHead, 'bogus')


#------------------------------------------------------------------------------
# TESTS: multi-head
#------------------------------------------------------------------------------

def test_multihead():
    oRng = PhastLinalg_rng(14)
    loHeads = [phastHead(8, 4, oRng.child(i)) for i in range(4)]
    aX = oRng.child(9).normal((300, 32))
    aOriginal = PhastAttention.multihead(aX, loHeads, 'original')
    assert PhastLinalg.relativeError(PhastAttention.multihead(aX, loHeads, 'fast'), aOriginal) <= 1e-10
    assert PhastLinalg.relativeError(PhastAttention.multihead(aX, loHeads, 'tiled', 37), aOriginal) <= 1e-10
    # Heads act on contiguous channel blocks
    assert PhastLinalg.relativeError(aOriginal[:, 8:16], PhastAttention.physattn(numpy.ascontiguousarray(aX[:, 8:16]), loHeads[1], 'original')) <= 1e-14


def test_multihead_permutation():
    # Reordering heads (and their input blocks) reorders the output blocks
    oRng = PhastLinalg_rng(21)
    loHeads = [phastHead(4, 3, oRng.child(i)) for i in range(3)]
    aX = oRng.child(9).normal((120, 12))
    liOrder = [2, 0, 1]
    aColumns = numpy.concatenate([numpy.arange(4*i, 4*(i+1)) for i in liOrder])
    for sMode in ('original', 'fast', 'tiled'):
        aOut = PhastAttention.multihead(aX, loHeads, sMode, 50)
        aOutPermuted = PhastAttention.multihead(aX[:, aColumns], [loHeads[i] for i in liOrder], sMode, 50)
        assert numpy.array_equal(aOutPermuted, aOut[:, aColumns]), sMode


def test_multihead_mismatch():
    oRng = PhastLinalg_rng(15)
    loHeads = [phastHead(8, 4, oRng) for i in range(3)]
    with pytest.raises(RuntimeError, match='divisible'):
        PhastAttention.multihead(numpy.ones((5, 32)), loHeads)


def test_decode():
    # Decoding against the output states reproduces the fast formulation
    oRng = PhastLinalg_rng(16)
    loHeads = [phastHead(4, 3, oRng.child(i)) for i in range(2)]
    aX = oRng.child(5).normal((40, 8))
    laTapes = list()
    aFast = PhastAttention.multihead(aX, loHeads, 'fast', None, None, laTapes)
    aDecoded = PhastAttention.decode(aX, loHeads, [dTape['s_out'] for dTape in laTapes])
    assert PhastLinalg.relativeError(aDecoded, aFast) <= 1e-14


#------------------------------------------------------------------------------
# TESTS: buffers
#------------------------------------------------------------------------------

def test_tiled_buffers():
    (aX, oHead) = case(17, 800, 8, 16)
    oCounter = PhastComplexity_counters()
    dTape = dict()
    PhastAttention.physattn(aX, oHead, 'tiled', 100, oCounter, dTape)
    assert oCounter.peak('w') == 100 * 16
    assert 'w' not in oCounter.retainedNames()
    assert 'w' not in dTape
    oCounter = PhastComplexity_counters()
    PhastAttention.physattn(aX, oHead, 'fast', None, oCounter, dict())
    assert oCounter.retained('w') == 800 * 16

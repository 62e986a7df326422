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
     phastHead
from PhAST.Complexity import \
     PhastComplexity_costmodel, \
     PhastComplexity_counters, \
     PhastComplexity_memory
from PhAST.Linalg import \
     PhastLinalg_rng

# External
import pytest


#------------------------------------------------------------------------------
# HELPERS
#------------------------------------------------------------------------------

# Counters mode -> cost model variant
VARIANT = {'original': 'original', 'fast': 'optimized', 'tiled': 'tiled'}

def count(_sMode, _iPoints, _iSlices, _iChannels, _iHeads, _iTileSize, _iSeed):
    oRng = PhastLinalg_rng(_iSeed)
    loHeads = [phastHead(_iChannels // _iHeads, _iSlices, oRng.child(i)) for i in range(_iHeads)]
    oCounter = PhastComplexity_counters()
    PhastAttention.multihead(oRng.child(99).normal((_iPoints, _iChannels)), loHeads, _sMode, _iTileSize, oCounter)
    return oCounter


#------------------------------------------------------------------------------
# TESTS: cost model
#------------------------------------------------------------------------------

def test_n_related_terms():
    oCostModel = PhastComplexity_costmodel()
    oOriginal = oCostModel.report('original', 1000, 32, 64)
    oOptimized = oCostModel.report('optimized', 1000, 32, 64)
    assert (oOriginal.n_related_time, oOriginal.n_related_space) == (5, 4)
    assert (oOptimized.n_related_time, oOptimized.n_related_space) == (3, 2)
    assert [oTerm.op_name for oTerm in oCostModel.terms('original') if oTerm.n_dependent] == ['linear1', 'linear2', 'slice', 'deslice', 'linear3']
    assert [oTerm.op_name for oTerm in oCostModel.terms('optimized') if oTerm.n_dependent] == ['linear2', 'slice', 'deslice']


def test_attention_n_independent():
    oCostModel = PhastComplexity_costmodel()
    for sVariant in PhastComplexity_costmodel.VARIANTS:
        assert oCostModel.report(sVariant, 10, 16, 32).madds('attention') == oCostModel.report(sVariant, 10**6, 16, 32).madds('attention')
        assert not [oTerm for oTerm in oCostModel.terms(sVariant) if oTerm.op_name == 'attention'][0].n_dependent


def test_flops_ratio():
    oCostModel = PhastComplexity_costmodel()
    fOriginal = oCostModel.report('original', 10**6, 64, 256, 8).totalFlops()
    fOptimized = oCostModel.report('optimized', 10**6, 64, 256, 8).totalFlops()
    assert fOptimized / fOriginal <= 0.85
    assert fOptimized / fOriginal == pytest.approx(0.754, abs=0.01)


def test_crossover():
    # Optimized beats original once C >= M (N >> M)
    oCostModel = PhastComplexity_costmodel()
    for (iSlices, iChannels) in [(8, 8), (8, 16), (16, 64), (32, 32)]:
        assert oCostModel.report('optimized', 10**5, iSlices, iChannels).totalFlops() < oCostModel.report('original', 10**5, iSlices, iChannels).totalFlops()


def test_tiled_linear2_twice():
    oCostModel = PhastComplexity_costmodel()
    oOptimized = oCostModel.report('optimized', 5000, 16, 32)
    oTiled = oCostModel.report('tiled', 5000, 16, 32, 1, 1, 500)
    assert oTiled.madds('linear2') == 2 * oOptimized.madds('linear2')
    assert oTiled.madds('slice') == oOptimized.madds('slice')


def test_stack_scaling():
    oCostModel = PhastComplexity_costmodel()
    oSingle = oCostModel.report('optimized', 2000, 16, 32, 4, 1)
    oStack = oCostModel.report('optimized', 2000, 16, 32, 4, 3)
    assert oStack.totalFlops() == 3 * oSingle.totalFlops()
    assert oStack.madds() == oSingle.madds()
    assert sum([tRow[2] for tRow in oStack.rows()]) == oStack.totalFlops()
    assert sum([tRow[3] for tRow in oStack.rows()]) == oStack.totalBytes()
    assert oCostModel.report('optimized', 2000, 16, 32, 4, 3, None, 'f32').totalBytes() * 2 == oStack.totalBytes()
    assert 'N-Related Terms' in oStack.toString()


def test_costmodel_invalid():
    oCostModel = PhastComplexity_costmodel()
    with pytest.raises(RuntimeError):
        oCostModel.report('bogus', 10, 4, 8)
    with pytest.raises(RuntimeError):
        oCostModel.report('original', 0, 4, 8)
    with pytest.raises(RuntimeError):
        oCostModel.report('original', 10, 4, 9, 2)


#------------------------------------------------------------------------------
# TESTS: counters vs cost model
#------------------------------------------------------------------------------

CONFIGS = [
    (iPoints, iSlices, iChannels)
    for iPoints in (17, 200, 1000, 4096)
    for (iSlices, iChannels) in ((2, 4), (4, 8), (8, 8), (16, 32), (3, 12))
]

@pytest.mark.parametrize('sMode', ['original', 'fast', 'tiled'])
@pytest.mark.parametrize('iHeads', [1, 2])
@pytest.mark.parametrize('tConfig', CONFIGS)
def test_counters_match(sMode, iHeads, tConfig):
    (iPoints, iSlices, iChannels) = tConfig
    iTileSize = max(1, iPoints // 3) if sMode == 'tiled' else None
    oCounter = count(sMode, iPoints, iSlices, iChannels, iHeads, iTileSize, iPoints + iSlices)
    oReport = PhastComplexity_costmodel().report(VARIANT[sMode], iPoints, iSlices, iChannels, iHeads, 1, iTileSize)
    assert oCounter.madds() == iHeads * oReport.madds()
    assert oCounter.flops() == oReport.totalFlops()
    for sOp in oCounter.operations():
        assert oCounter.madds(sOp) == iHeads * oReport.madds(sOp)


#------------------------------------------------------------------------------
# TESTS: memory model
#------------------------------------------------------------------------------

def test_memory_tiles():
    oMemory = PhastComplexity_memory()
    liPeaks = [
        oMemory.estimate('tiled', 800000, 32, 64, 2, 2, iTileSize)['peak_bytes']
        for iTileSize in (800000, 200000, 100000, 20000, 10000, 5000)
    ]
    assert liPeaks == sorted(liPeaks, reverse=True)
    assert liPeaks[-1] < liPeaks[0]


def test_memory_no_retained_weights():
    dEstimate = PhastComplexity_memory().estimate('tiled', 100000, 32, 64, 2, 3, 1000)
    for dBuffer in dEstimate['breakdown']:
        if dBuffer['retained'] and dBuffer['scaling'] == 'N':
            assert dBuffer['elements'] == 100000 * 32 * 2 * 3
    dW = [dBuffer for dBuffer in dEstimate['breakdown'] if dBuffer['name'] == 'w'][0]
    assert not dW['retained']
    assert dW['scaling'] == 'N_t'
    assert dW['bytes'] == 1000 * 32 * 8
    assert dEstimate['peak_bytes'] == dEstimate['retained_bytes'] + dEstimate['transient_bytes']


def test_memory_variants():
    oMemory = PhastComplexity_memory()
    iOriginal = oMemory.estimate('original', 100000, 32, 64)['peak_bytes']
    iOptimized = oMemory.estimate('optimized', 100000, 32, 64)['peak_bytes']
    iTiled = oMemory.estimate('tiled', 100000, 32, 64, 1, 1, 1000)['peak_bytes']
    assert iTiled < iOptimized < iOriginal
    # Without checkpointing, tiles do not help the backward tape
    assert oMemory.estimate('tiled', 100000, 32, 64, 1, 1, 1000, True, False)['peak_bytes'] == iOptimized
    assert oMemory.estimate('tiled', 100000, 32, 64, 1, 1, 1000, True, True, 'f32')['peak_bytes'] * 2 == iTiled


def test_memory_counters():
    # Counted retained buffers match the model, per head
    oCounter = PhastComplexity_counters()
    oRng = PhastLinalg_rng(3)
    oHead = phastHead(8, 4, oRng.child(0))
    PhastAttention.physattn(oRng.child(1).normal((300, 8)), oHead, 'tiled', 50, oCounter, dict())
    for dBuffer in PhastComplexity_memory().estimate('tiled', 300, 4, 8, 1, 1, 50)['breakdown']:
        if dBuffer['retained']:
            assert oCounter.retained(dBuffer['name']) == dBuffer['elements']
        else:
            assert oCounter.peak(dBuffer['name']) == dBuffer['elements']


def test_memory_invalid():
    oMemory = PhastComplexity_memory()
    with pytest.raises(RuntimeError):
        oMemory.estimate('bogus', 10, 4, 8)
    with pytest.raises(RuntimeError):
        oMemory.estimate('tiled', 10, 4, 8, 1, 1, 11)


def test_counters_accounting():
    oCounter = PhastComplexity_counters()
    oCounter.madd('slice', 10)
    oCounter.madd('slice', 5)
    oCounter.flop('attention', 8)
    oCounter.buffer('w', 40)
    oCounter.buffer('w', 30)
    oCounter.retain('x', 7)
    oCounter.retain('x', 7)
    assert oCounter.madds('slice') == 15
    assert oCounter.flops() == 2 * 15 + 8
    assert oCounter.peak('w') == 40
    assert oCounter.retained('x') == 14
    assert oCounter.retained() == 14
    oCounter.reset()
    assert oCounter.madds() == 0
    assert oCounter.flops() == 0
    assert oCounter.peak('w') == 0
    assert oCounter.retained() == 0
    assert oCounter.retainedNames() == []

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
from PhAST.Complexity import \
     PhastComplexity_counters
from PhAST.Geometry import \
     PhastGeometry_reader, \
     phastMeshWrite
from PhAST.Inference import \
     PhastInference_builder, \
     PhastInference_plan, \
     phastCacheLoad
from PhAST.Linalg import \
     PhastLinalg, \
     PhastLinalg_rng
from PhAST.Runtime import \
     PhastMismatchError

# External
import numpy
import pytest

# Standard
import os
import os.path

# Tests
from conftest import randomMesh, randomNetwork


#------------------------------------------------------------------------------
# TESTS: plan
#------------------------------------------------------------------------------

def test_plan():
    oPlan = PhastInference_plan(10, 4)
    assert oPlan.ranges == [(0, 4), (4, 8), (8, 10)]
    assert oPlan.count() == 3
    assert PhastInference_plan(0, 4).count() == 0
    with pytest.raises(RuntimeError):
        PhastInference_plan(10, 0)


#------------------------------------------------------------------------------
# TESTS: cache build and decode
#------------------------------------------------------------------------------

def test_chunk_sizes(rng):
    oNetwork = randomNetwork(rng.child(0))
    oMesh = randomMesh(999, rng.child(1))
    aForward = oNetwork.forward(oMesh, 'fast')
    oReference = None
    for iChunkSize in (999, 333, 100, 7):
        oBuilder = PhastInference_builder(oNetwork, iChunkSize)
        oCache = oBuilder.build(oMesh)
        assert oCache.points == 999
        assert PhastLinalg.relativeError(oBuilder.decodePoints(oCache, oMesh), aForward) <= 1e-9
        if oReference is None:
            oReference = oCache
        for iLayer in range(2):
            for iHead in range(2):
                assert PhastLinalg.relativeError(oCache.states[iLayer][iHead], oReference.states[iLayer][iHead]) <= 1e-9


def test_decode_forward(rng):
    oMesh = randomMesh(500, rng.child(1), 2)
    oNetwork = randomNetwork(rng.child(0), layers=4, in_dim=5)
    oBuilder = PhastInference_builder(oNetwork, 128)
    aDecoded = oBuilder.decodePoints(oBuilder.build(oMesh), oMesh)
    assert PhastLinalg.relativeError(aDecoded, oNetwork.forward(oMesh, 'original')) <= 1e-9


def test_decode_rows(rng):
    # Each prediction depends only on its own query point
    oNetwork = randomNetwork(rng.child(0))
    oMesh = randomMesh(300, rng.child(1))
    oBuilder = PhastInference_builder(oNetwork, 64)
    oCache = oBuilder.build(oMesh)
    aY = oBuilder.decodePoints(oCache, oMesh)
    aIndices = numpy.array([5, 299, 17, 0])
    assert PhastLinalg.relativeError(oBuilder.decodePoints(oCache, oMesh.subset(aIndices)), aY[aIndices]) <= 1e-12
    assert PhastLinalg.relativeError(PhastInference_builder(oNetwork, 1).decodePoints(oCache, oMesh), aY) <= 1e-12


def test_decode_cost(rng):
    # Decoding cost does not depend on the source mesh size
    oNetwork = randomNetwork(rng.child(0))
    oQuery = randomMesh(50, rng.child(2))
    liMadds = list()
    for iPoints in (100, 2000):
        oBuilder = PhastInference_builder(oNetwork, 256)
        oCache = oBuilder.build(randomMesh(iPoints, rng.child(iPoints)))
        oCounter = PhastComplexity_counters()
        oBuilder.decodePoints(oCache, oQuery, oCounter)
        liMadds.append(oCounter.madds())
        assert oCounter.madds('slice') == 0
        assert oCounter.madds('attention') == 0
    assert liMadds[0] == liMadds[1]
    assert liMadds[0] > 0


def test_decode_mismatch(rng):
    oMesh = randomMesh(100, rng.child(1))
    oBuilder = PhastInference_builder(randomNetwork(PhastLinalg_rng(1)))
    oCache = oBuilder.build(oMesh)
    with pytest.raises(PhastMismatchError):
        PhastInference_builder(randomNetwork(PhastLinalg_rng(2))).decodePoints(oCache, oMesh)
    with pytest.raises(PhastMismatchError):
        PhastInference_builder(randomNetwork(PhastLinalg_rng(1), numpy.float32)).decodePoints(oCache, oMesh)


def test_cache_no_layers(rng):
    oNetwork = randomNetwork(rng.child(0), layers=0)
    oMesh = randomMesh(100, rng.child(1))
    oBuilder = PhastInference_builder(oNetwork, 30)
    oCache = oBuilder.build(oMesh)
    assert oCache.layers() == 0
    assert oCache.heads() == 0
    assert PhastLinalg.relativeError(oBuilder.decodePoints(oCache, oMesh), oNetwork.forward(oMesh)) <= 1e-12


def test_build_empty(rng):
    oBuilder = PhastInference_builder(randomNetwork(rng))
    with pytest.raises(RuntimeError, match='no points'):
        oBuilder.build(randomMesh(0, rng))
    with pytest.raises(RuntimeError):
        PhastInference_builder(randomNetwork(rng), 0)


#------------------------------------------------------------------------------
# TESTS: persistence and streaming
#------------------------------------------------------------------------------

def test_cache_save_load(rng, tmp_path):
    oNetwork = randomNetwork(rng.child(0))
    oMesh = randomMesh(200, rng.child(1))
    oBuilder = PhastInference_builder(oNetwork, 50)
    oCache = oBuilder.build(oMesh)
    sBasename = os.path.join(str(tmp_path), 'cache')
    oCache.save(sBasename)
    oLoaded = phastCacheLoad(sBasename)
    assert oLoaded.fingerprint == oCache.fingerprint
    assert (oLoaded.layers(), oLoaded.heads(), oLoaded.points) == (2, 2, 200)
    for iLayer in range(2):
        for iHead in range(2):
            assert numpy.array_equal(oLoaded.states[iLayer][iHead], oCache.states[iLayer][iHead])
    assert numpy.array_equal(oBuilder.decodePoints(oLoaded, oMesh), oBuilder.decodePoints(oCache, oMesh))


def test_cache_load_malformed(tmp_path):
    sBasename = os.path.join(str(tmp_path), 'cache')
    with open(sBasename+'.json', 'w') as oFile:
        oFile.write('{not json')
    with pytest.raises(OSError, match='Malformed'):
        phastCacheLoad(sBasename)


def test_spill(rng, tmp_path):
    oNetwork = randomNetwork(rng.child(0))
    oMesh = randomMesh(400, rng.child(1))
    sSpill = os.path.join(str(tmp_path), 'spill')
    oSpilled = PhastInference_builder(oNetwork, 64, sSpill).build(oMesh)
    oInMemory = PhastInference_builder(oNetwork, 64).build(oMesh)
    for iLayer in range(2):
        for iHead in range(2):
            assert numpy.array_equal(oSpilled.states[iLayer][iHead], oInMemory.states[iLayer][iHead])
    assert os.listdir(sSpill) == []


def test_stream(rng, tmp_path):
    oNetwork = randomNetwork(rng.child(0))
    oMesh = randomMesh(700, rng.child(1))
    sMesh = os.path.join(str(tmp_path), 'mesh.csv')
    phastMeshWrite(sMesh, oMesh)
    oBuilder = PhastInference_builder(oNetwork, 100)
    oCache = oBuilder.build(PhastGeometry_reader(sMesh))
    oInMemory = oBuilder.build(oMesh)
    for iLayer in range(2):
        for iHead in range(2):
            assert PhastLinalg.relativeError(oCache.states[iLayer][iHead], oInMemory.states[iLayer][iHead]) <= 1e-12
    aForward = oNetwork.forward(oMesh)
    laChunks = list()
    dSummary = oBuilder.decodeStream(oCache, PhastGeometry_reader(sMesh), lambda iChunk, oChunk, aY: laChunks.append((iChunk, oChunk.indices[0], aY)))
    assert dSummary == {'points': 700, 'chunks': 7}
    assert [(iChunk, iFirst) for (iChunk, iFirst, aY) in laChunks] == [(i, 100*i) for i in range(7)]
    assert PhastLinalg.relativeError(numpy.concatenate([aY for (iChunk, iFirst, aY) in laChunks], axis=0), aForward) <= 1e-9


def test_stream_sink_error(rng, tmp_path):
    oNetwork = randomNetwork(rng.child(0))
    oMesh = randomMesh(50, rng.child(1))
    oBuilder = PhastInference_builder(oNetwork, 20)
    oCache = oBuilder.build(oMesh)

    def sink(_iChunk, _oChunk, _aY):
        if _iChunk == 1:
            raise OSError(28, 'No space left on device')

    with pytest.raises(OSError, match='Chunk 1'):
        oBuilder.decodeStream(oCache, oMesh, sink)


#------------------------------------------------------------------------------
# TESTS: fidelity
#------------------------------------------------------------------------------

def test_fidelity(rng):
    oNetwork = randomNetwork(rng.child(0))
    oMesh = randomMesh(400, rng.child(1), 0, 1)
    oBuilder = PhastInference_builder(oNetwork, 100)
    ltFidelity = oBuilder.fidelity(oMesh, [0.1, 0.5, 1.0], rng.child(2))
    assert [(fFraction, iPoints) for (fFraction, iPoints, fError) in ltFidelity] == [(0.1, 40), (0.5, 200), (1.0, 400)]
    aForward = oNetwork.forward(oMesh)
    fFull = numpy.linalg.norm(aForward - oMesh.targets) / numpy.linalg.norm(oMesh.targets)
    assert ltFidelity[-1][2] == pytest.approx(fFull, rel=1e-9)
    with pytest.raises(RuntimeError):
        oBuilder.fidelity(oMesh, [1.5], rng)
    with pytest.raises(RuntimeError, match='targets'):
        oBuilder.fidelity(randomMesh(10, rng), [0.5], rng)

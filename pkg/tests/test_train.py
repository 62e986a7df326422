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
     PhastGeometry_mesh, \
     PhastGeometry_sphere
from PhAST.Linalg import \
     PhastLinalg, \
     PhastLinalg_rng
from PhAST.Runtime import \
     PhastNumericError
from PhAST.Train import \
     PhastTrain_adamw, \
     PhastTrain_backward, \
     PhastTrain_config, \
     PhastTrain_sampler, \
     PhastTrain_schedule, \
     PhastTrain_trainer

# External
import numpy
import pytest

# Standard
import os.path

# Tests
from conftest import randomMesh, randomNetwork


#------------------------------------------------------------------------------
# HELPERS
#------------------------------------------------------------------------------

def smoothMesh(_iPoints, _oRng):
    aCoords = _oRng.uniform((_iPoints, 3), -1.0, 1.0)
    aTargets = (numpy.sin(3.0 * aCoords[:, 0]) + numpy.cos(2.0 * aCoords[:, 1]) * aCoords[:, 2])[:, None]
    return PhastGeometry_mesh(aCoords, _aTargets=aTargets)


def finiteDifferences(_oNetwork, _oMesh, _sName, _liEntries, _sMode = 'fast', _iTileSize = None, _fStep = 1e-5):
    aParam = _oNetwork.params[_sName]
    lfGrads = list()
    for iEntry in _liEntries:
        tIndex = numpy.unravel_index(iEntry, aParam.shape)
        fValue = aParam[tIndex]
        aParam[tIndex] = fValue + _fStep
        fPlus = PhastTrain_backward.loss(_oNetwork.forward(_oMesh, _sMode, _iTileSize), _oMesh.targets)[0]
        aParam[tIndex] = fValue - _fStep
        fMinus = PhastTrain_backward.loss(_oNetwork.forward(_oMesh, _sMode, _iTileSize), _oMesh.targets)[0]
        aParam[tIndex] = fValue
        lfGrads.append((fPlus - fMinus) / (2.0 * _fStep))
    return numpy.array(lfGrads)


#------------------------------------------------------------------------------
# TESTS: loss
#------------------------------------------------------------------------------

def test_loss():
    aTarget = numpy.array([[3.0], [4.0]])
    (fLoss, aGrad) = PhastTrain_backward.loss(numpy.array([[3.0], [5.0]]), aTarget)
    assert fLoss == pytest.approx(0.2)
    assert numpy.allclose(aGrad, numpy.array([[0.0], [1.0]]) / 5.0)
    (fLoss, aGrad) = PhastTrain_backward.loss(aTarget.copy(), aTarget)
    assert fLoss == 0.0
    assert not numpy.any(aGrad)


def test_loss_errors():
    with pytest.raises(PhastNumericError):
        PhastTrain_backward.loss(numpy.ones((3, 1)), numpy.zeros((3, 1)))
    with pytest.raises(RuntimeError):
        PhastTrain_backward.loss(numpy.ones((3, 1)), numpy.ones((3, 2)))


#------------------------------------------------------------------------------
# TESTS: gradients
#------------------------------------------------------------------------------

@pytest.mark.parametrize('sMode, iTileSize', [('original', None), ('fast', None), ('tiled', 7)])
def test_gradients_finite_differences(rng, sMode, iTileSize):
    oNetwork = randomNetwork(rng.child(0), layers=2, heads=2, channels=8, slices=4, ffn_hidden=16)
    oMesh = randomMesh(32, rng.child(1), 0, 1)
    (fLoss, daGrads) = PhastTrain_backward.step(oNetwork, oMesh, None, sMode, iTileSize)
    assert fLoss > 0.0
    oPick = PhastLinalg_rng(5)
    for (sName, aParam) in oNetwork.params.items():
        liEntries = oPick.sample(aParam.size, min(6, aParam.size))
        aNumeric = finiteDifferences(oNetwork, oMesh, sName, liEntries, sMode, iTileSize)
        aAnalytic = daGrads[sName].reshape(-1)[liEntries]
        fError = numpy.linalg.norm(aNumeric - aAnalytic) / max(numpy.linalg.norm(aAnalytic), 1e-4)
        assert fError <= 1e-5, '%s/%s' % (sMode, sName)


def test_gradients_modes(rng):
    oNetwork = randomNetwork(rng.child(0), layers=2, heads=2, channels=8, slices=4, ffn_hidden=16)
    oMesh = randomMesh(64, rng.child(1), 0, 1)
    (fLoss, daFast) = PhastTrain_backward.step(oNetwork, oMesh, None, 'fast')
    for (sMode, iTileSize) in [('original', None), ('tiled', 7), ('tiled', 64)]:
        (fLossMode, daGrads) = PhastTrain_backward.step(oNetwork, oMesh, None, sMode, iTileSize)
        assert fLossMode == pytest.approx(fLoss, rel=1e-10)
        for (sName, aGrad) in daFast.items():
            assert PhastLinalg.relativeError(daGrads[sName], aGrad) <= 1e-8, '%s/%s' % (sMode, sName)


def test_gradients_tiled_buffers(rng):
    oNetwork = randomNetwork(rng.child(0))
    oMesh = randomMesh(200, rng.child(1), 0, 1)
    oCounter = PhastComplexity_counters()
    PhastTrain_backward.step(oNetwork, oMesh, None, 'tiled', 25, oCounter)
    assert 'w' not in oCounter.retainedNames()
    assert oCounter.peak('w') == 25 * 8
    oCounter = PhastComplexity_counters()
    PhastTrain_backward.step(oNetwork, oMesh, None, 'fast', None, oCounter)
    assert oCounter.retained('w') == 2 * 2 * 200 * 8


def test_step_errors(rng):
    oNetwork = randomNetwork(rng.child(0))
    with pytest.raises(RuntimeError, match='targets'):
        PhastTrain_backward.step(oNetwork, randomMesh(10, rng.child(1)))


#------------------------------------------------------------------------------
# TESTS: sampler
#------------------------------------------------------------------------------

def test_sampler(rng):
    oMesh = randomMesh(100, rng.child(0), 2, 1)
    oSubset = PhastTrain_sampler.amortizedSample(oMesh, 30, rng.child(1))
    assert oSubset.points() == 30
    assert len(set(oSubset.indices.tolist())) == 30
    assert numpy.array_equal(oSubset.coords, oMesh.coords[oSubset.indices])
    assert numpy.array_equal(oSubset.targets, oMesh.targets[oSubset.indices])
    assert numpy.array_equal(oSubset.bounds()[0], oMesh.bounds()[0])
    oFull = PhastTrain_sampler.amortizedSample(oMesh, 100, rng.child(2))
    assert sorted(oFull.indices.tolist()) == list(range(100))


def test_sampler_uniform():
    oMesh = PhastGeometry_mesh(numpy.arange(10.0)[:, None])
    oRng = PhastLinalg_rng(11)
    aFrequencies = numpy.zeros(10)
    iDraws = 40000
    for i in range(iDraws):
        aFrequencies[PhastTrain_sampler.amortizedSample(oMesh, 3, oRng).indices] += 1
    assert numpy.max(numpy.abs(aFrequencies / iDraws - 0.3)) <= 0.01


def test_sampler_errors(rng):
    oMesh = randomMesh(10, rng)
    for iSize in (0, 11):
        with pytest.raises(RuntimeError):
            PhastTrain_sampler.amortizedSample(oMesh, iSize, rng)


#------------------------------------------------------------------------------
# TESTS: optimizer
#------------------------------------------------------------------------------

def test_adamw_decay():
    # Zero gradients: only matrices decay
    daParams = {'w': numpy.ones((2, 2)), 'b': numpy.ones(2)}
    oOptimizer = PhastTrain_adamw(list(daParams.items()), 0.1, (0.9, 0.999), 1e-8, 0.5)
    oOptimizer.step({'w': numpy.zeros((2, 2)), 'b': numpy.zeros(2)})
    assert numpy.allclose(daParams['w'], 0.95)
    assert numpy.array_equal(daParams['b'], numpy.ones(2))
    assert oOptimizer.steps() == 1


def test_adamw_step():
    # First step moves each entry by lr against its gradient sign
    aParam = numpy.array([1.0, -2.0, 3.0])
    oOptimizer = PhastTrain_adamw([('p', aParam)], 0.01, (0.9, 0.999), 1e-12, 0.0)
    oOptimizer.step({'p': numpy.array([0.5, -4.0, 1e-3])})
    assert numpy.allclose(aParam, [0.99, -1.99, 2.99])
    oOptimizer.step({'p': numpy.ones(3)}, 0.0)
    assert numpy.allclose(aParam, [0.99, -1.99, 2.99])


def test_adamw_quadratic():
    # Minimize (theta - 1.5)^2 from theta = 0
    fTarget = 1.5
    aTheta = numpy.zeros(1)
    oOptimizer = PhastTrain_adamw([('theta', aTheta)], 0.1, (0.9, 0.999), 1e-8, 0.0)
    iReached = None
    for i in range(500):
        oOptimizer.step({'theta': 2.0 * (aTheta - fTarget)})
        if iReached is None and abs(aTheta[0] - fTarget) <= 1e-3:
            iReached = oOptimizer.steps()
    assert iReached is not None and iReached <= 500
    assert abs(aTheta[0] - fTarget) <= 1e-3


def test_clip():
    daGrads = {'a': numpy.array([3.0]), 'b': numpy.array([4.0])}
    assert PhastTrain_adamw.clipGlobalNorm(daGrads, 1.0) == pytest.approx(5.0)
    assert daGrads['a'][0] == pytest.approx(0.6)
    assert daGrads['b'][0] == pytest.approx(0.8)
    daGrads = {'a': numpy.array([3.0]), 'b': numpy.array([4.0])}
    assert PhastTrain_adamw.clipGlobalNorm(daGrads, 0.0) == pytest.approx(5.0)
    assert daGrads['a'][0] == 3.0
    assert PhastTrain_adamw.clipGlobalNorm(daGrads, 10.0) == pytest.approx(5.0)
    assert daGrads['b'][0] == 4.0


def test_schedule():
    oSchedule = PhastTrain_schedule(1.0, 0.1, 100, 0.05)
    assert oSchedule.lr(0) == pytest.approx(0.2)
    assert oSchedule.lr(4) == pytest.approx(1.0)
    assert oSchedule.lr(5) == pytest.approx(1.0)
    assert oSchedule.lr(99) == pytest.approx(0.1)
    lfLr = [oSchedule.lr(i) for i in range(5, 100)]
    assert lfLr == sorted(lfLr, reverse=True)
    # Floor is clamped to the peak
    assert PhastTrain_schedule(0.01, 0.1, 10, 0.0).lr(9) == pytest.approx(0.01)
    assert PhastTrain_schedule(0.01, 0.0, 10, 0.0).lr(0) == pytest.approx(0.01)


#------------------------------------------------------------------------------
# TESTS: trainer
#------------------------------------------------------------------------------

def trainer(_iSeed = 0, **_dmConfig):
    dmConfig = dict(seed=_iSeed, epochs=60, lr=5e-3, lr_min=1e-4, warmup=0.1, weight_decay=0.01, subset_size=128, grad_clip=1.0, val_every=0)
    dmConfig.update(_dmConfig)
    oNetwork = randomNetwork(PhastLinalg_rng(_iSeed), layers=1, heads=2, channels=16, slices=4, ffn_hidden=32)
    return PhastTrain_trainer(oNetwork, PhastTrain_config(**dmConfig), 64)


def test_trainer_decrease():
    oMesh = smoothMesh(256, PhastLinalg_rng(3))
    ldMetrics = trainer(epochs=100).train([oMesh])
    assert len(ldMetrics) == 100
    assert ldMetrics[-1]['step'] == 100
    assert ldMetrics[-1]['train_loss'] < 0.8 * ldMetrics[0]['train_loss']
    assert ldMetrics[0]['val_relL2'] is None
    assert ldMetrics[-1]['val_relL2'] is not None


def test_trainer_reproducible():
    loMeshes = [smoothMesh(150, PhastLinalg_rng(4)), smoothMesh(200, PhastLinalg_rng(5))]
    oTrainer1 = trainer(epochs=3, subset_size=100)
    oTrainer2 = trainer(epochs=3, subset_size=100)
    ldMetrics1 = oTrainer1.train(loMeshes)
    ldMetrics2 = oTrainer2.train(loMeshes)
    assert ldMetrics1 == ldMetrics2
    assert ldMetrics1[-1]['step'] == 6
    assert oTrainer1.network.params.fingerprint() == oTrainer2.network.params.fingerprint()


def test_trainer_log(tmp_path):
    sLog = os.path.join(str(tmp_path), 'metrics.csv')
    trainer(epochs=4, subset_size=50, val_every=2).train([smoothMesh(80, PhastLinalg_rng(6))], None, sLog)
    with open(sLog, 'r') as oFile:
        lsLines = oFile.read().splitlines()
    assert lsLines[0] == 'step,epoch,lr,train_loss,val_relL2'
    assert len(lsLines) == 5
    assert lsLines[1].startswith('1,1,')
    assert lsLines[1].endswith(',')
    assert not lsLines[2].endswith(',')


def test_trainer_normalization():
    oMesh = smoothMesh(100, PhastLinalg_rng(7))
    oMesh = oMesh.withTargets(oMesh.targets * 3.0 + 10.0)
    oTrainer = trainer(epochs=1, subset_size=50)
    oTrainer.train([oMesh])
    assert oTrainer.network.params.target_mean[0] == pytest.approx(numpy.mean(oMesh.targets))
    assert oTrainer.network.params.target_std[0] == pytest.approx(numpy.std(oMesh.targets))


def test_trainer_no_epochs(tmp_path):
    sLog = os.path.join(str(tmp_path), 'metrics.csv')
    oTrainer = trainer(epochs=0)
    assert oTrainer.train([smoothMesh(200, PhastLinalg_rng(8))], None, sLog) == []
    assert not os.path.exists(sLog)


def test_trainer_errors(rng):
    oTrainer = trainer()
    with pytest.raises(RuntimeError):
        oTrainer.train([])
    with pytest.raises(RuntimeError, match='targets'):
        oTrainer.train([randomMesh(200, rng)])
    with pytest.raises(RuntimeError, match='subset size'):
        oTrainer.train([smoothMesh(100, rng)])
    with pytest.raises(RuntimeError):
        trainer(lr=-1.0)


@pytest.mark.slow
def test_trainer_sphere():
    oMesh = PhastGeometry_sphere.targets(PhastGeometry_sphere.fibonacci(20000))
    oConfig = PhastTrain_config(seed=0, epochs=200, lr=3e-3, subset_size=2048, val_every=0)
    lfUntrained = list()
    lldMetrics = list()
    lsFingerprints = list()
    for iRun in range(2):
        oNetwork = randomNetwork(PhastLinalg_rng(0), layers=2, heads=4, channels=32, slices=16, ffn_hidden=64)
        oTrainer = PhastTrain_trainer(oNetwork, oConfig, 4096, 'tiled', 512)
        lfUntrained.append(oTrainer.validate([oMesh]))
        lldMetrics.append(oTrainer.train([oMesh]))
        lsFingerprints.append(oNetwork.params.fingerprint())
    ldMetrics = lldMetrics[0]
    assert len(ldMetrics) == 200
    fUntrained = lfUntrained[0]
    fFinal = ldMetrics[-1]['val_relL2']
    assert fFinal <= 0.2
    assert fFinal * 10.0 <= fUntrained
    # Bitwise reproducible
    assert lfUntrained[0] == lfUntrained[1]
    assert lldMetrics[0] == lldMetrics[1]
    assert lsFingerprints[0] == lsFingerprints[1]

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
from PhAST.Geometry import \
     PhastGeometry_metrics
from PhAST.Inference import \
     PhastInference_builder
from PhAST.Linalg import \
     PhastLinalg_rng
from PhAST.Runtime import \
     PhastNumericError, \
     PhastObject, \
     PhastRuntime
from PhAST.Train.backward import \
     PhastTrain_backward
from PhAST.Train.optimizer import \
     PhastTrain_adamw, \
     PhastTrain_schedule
from PhAST.Train.sampler import \
     PhastTrain_sampler

# External
import numpy

# Standard
import os
import os.path


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastTrain_trainer(PhastObject):
    """
    Geometry amortized training loop

    Each step draws a new random subset of one training mesh, computes the
    relative L2 loss and its exact gradients, clips the gradients global
    norm and performs an AdamW update at the scheduled learning rate.
    Validation decodes full meshes through the state cache, such that
    validation meshes may exceed the training capacity.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    LOG_COLUMNS = ('step', 'epoch', 'lr', 'train_loss', 'val_relL2')


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _oNetwork, _oConfig, _iChunkSize = 4096, _sMode = None, _iTileSize = None, _bParallel = False):
        """
        @param PhastModel_network _oNetwork    Network (parameters updated in place)
        @param PhastTrain_config  _oConfig     Training configuration
        @param int                _iChunkSize  Validation cache chunk size
        @param str                _sMode       Physics-Attention mode (None for configured mode)
        @param int                _iTileSize   Tile size (None for configured tile size)
        @param bool               _bParallel   Process tiles in parallel

        @exception RuntimeError  On invalid configuration
        """
        PhastObject.__init__(self)

        _oConfig.check()

        # Properties
        self.network = _oNetwork
        self.config = _oConfig
        self._iChunkSize = _iChunkSize
        self._sMode = _sMode
        self._iTileSize = _iTileSize
        self._bParallel = _bParallel


    def _tag(self):
        return 'T'


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def normalizeTargets(self, _loMeshes):
        """
        Set the model target standardization from the given meshes targets
        (constant columns keep a unit standard deviation)

        @param list _loMeshes  Training meshes
        """

        aTargets = numpy.concatenate([oMesh.targets for oMesh in _loMeshes], axis=0).astype(numpy.float64)
        aStd = numpy.std(aTargets, axis=0)
        oParams = self.network.params
        oParams.target_mean[:] = numpy.mean(aTargets, axis=0)
        oParams.target_std[:] = numpy.where(aStd > 0.0, aStd, 1.0)
        if self._iVerbose: self._DEBUG('Target standardization: mean=%s, std=%s' % (oParams.target_mean, oParams.target_std))


    def validate(self, _loMeshes):
        """
        Mean full mesh relative L2 error, decoded through the state cache

        @param list _loMeshes  Meshes (with targets)

        @return float  Mean relative L2 error
        """

        oBuilder = PhastInference_builder(self.network, self._iChunkSize)
        ltPairs = list()
        for oMesh in _loMeshes:
            ltPairs.append((oBuilder.decodePoints(oBuilder.build(oMesh), oMesh), oMesh.targets))
        return PhastGeometry_metrics.meanRelL2(ltPairs)


    def log(self, _sFilename, _dRow):
        """
        Append the given row to the metrics log (header written first if
        the file is new)

        @exception OSError  On file I/O error
        """

        sLine = ','.join([
            str(_dRow['step']), str(_dRow['epoch']), PhastRuntime.formatReal(_dRow['lr']), PhastRuntime.formatReal(_dRow['train_loss']),
            '' if _dRow['val_relL2'] is None else PhastRuntime.formatReal(_dRow['val_relL2']),
        ])+'\n'
        if not os.path.exists(_sFilename) or not os.path.getsize(_sFilename):
            sLine = ','.join(self.LOG_COLUMNS)+'\n'+sLine
        PhastRuntime.echo(sLine, _sFilename, 'a')


    def train(self, _loTrain, _loValidation = None, _sLogFile = None):
        """
        Train the network

        @param list _loTrain       Training meshes (with targets)
        @param list _loValidation  Validation meshes (None to validate on the training meshes)
        @param str  _sLogFile      Metrics log (CSV) file (ignored if None)

        @return list  Per-epoch metrics (dict: step, epoch, lr, train_loss, val_relL2)

        @exception RuntimeError       On empty dataset or invalid subset size
        @exception PhastNumericError  On diverging loss (naming the step)
        """

        if not _loTrain:
            raise RuntimeError('Invalid dataset; at least one training mesh is required')
        for (iMesh, oMesh) in enumerate(_loTrain):
            if oMesh.targets is None:
                raise RuntimeError('Invalid training mesh %d; targets are required' % iMesh)
            if self.config.subset_size > oMesh.points():
                raise RuntimeError('Invalid subset size (%d); training mesh %d has %d points' % (self.config.subset_size, iMesh, oMesh.points()))
        loValidation = _loValidation if _loValidation else _loTrain
        oConfig = self.config
        oParams = self.network.params
        if oConfig.normalize_targets:
            self.normalizeTargets(_loTrain)

        oRng = PhastLinalg_rng(oConfig.seed)
        oSampleRng = oRng.child(1)
        oOrderRng = oRng.child(2)
        iSteps = oConfig.epochs * len(_loTrain)
        oSchedule = PhastTrain_schedule(oConfig.lr, oConfig.lr_min, iSteps, oConfig.warmup)
        oOptimizer = PhastTrain_adamw(oParams.items(), oConfig.lr, oConfig.betas, oConfig.eps, oConfig.weight_decay)
        if self._iVerbose: self._INFO('Training (%d meshes, %d epochs, %d steps, subset size %d)' % (len(_loTrain), oConfig.epochs, iSteps, oConfig.subset_size))

        ldMetrics = list()
        iStep = 0
        for iEpoch in range(oConfig.epochs):
            liOrder = oOrderRng.permutation(len(_loTrain)) if len(_loTrain) > 1 else [0]
            lfLosses = list()
            for iMesh in liOrder:
                fLr = oSchedule.lr(iStep)
                oSubset = PhastTrain_sampler.amortizedSample(_loTrain[iMesh], oConfig.subset_size, oSampleRng)
                (fLoss, daGrads) = PhastTrain_backward.step(self.network, oSubset, None, self._sMode, self._iTileSize, None, self._bParallel)
                if not numpy.isfinite(fLoss):
                    raise PhastNumericError('Diverging loss (%s) at step %d' % (fLoss, iStep))
                fGradNorm = PhastTrain_adamw.clipGlobalNorm(daGrads, oConfig.grad_clip)
                oOptimizer.step(daGrads, fLr)
                if self._iVerbose >= PhastRuntime.VERBOSE_TRACE: self._TRACE('Step %d: lr=%s, loss=%s, grad_norm=%s' % (iStep, fLr, fLoss, fGradNorm))
                lfLosses.append(fLoss)
                iStep += 1

            bValidate = iEpoch == oConfig.epochs - 1 or (oConfig.val_every and not (iEpoch + 1) % oConfig.val_every)
            dRow = {
                'step': iStep,
                'epoch': iEpoch + 1,
                'lr': fLr,
                'train_loss': float(numpy.mean(lfLosses)),
                'val_relL2': self.validate(loValidation) if bValidate else None,
            }
            ldMetrics.append(dRow)
            if self._iVerbose: self._INFO('Epoch %d: train_loss=%s, val_relL2=%s' % (dRow['epoch'], dRow['train_loss'], dRow['val_relL2']))
            if _sLogFile:
                self.log(_sLogFile, dRow)
        return ldMetrics

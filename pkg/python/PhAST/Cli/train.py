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
from PhAST.Cli import \
     PhastCli_phast
from PhAST.Geometry import \
     phastMeshRead
from PhAST.Linalg import \
     PhastLinalg_rng
from PhAST.Model import \
     PhastModel_checkpoint, \
     PhastModel_network, \
     phastModelParams
from PhAST.Runtime import \
     PhastRuntime
from PhAST.Train import \
     PhastTrain_trainer

# Standard
import os
import os.path
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_train(PhastCli_phast):
    """
    PhAST command-line utility - Command 'train'
    """

    #--------------------------------------------------------------------------
    # METHODS
    #--------------------------------------------------------------------------

    #
    # Arguments
    #

    def _initArgumentParser(self, _sCommand = None):
        """
        Create the arguments parser (and help generator)

        @param str _sCommand  Command name
        """

        # Parent
        PhastCli_phast._initArgumentParser(
            self,
            _sCommand,
            textwrap.dedent('''
                synopsis:
                  train a model on the given meshes (geometry amortized
                  training); writes the checkpoint (model.json, model.bin)
                  and the per-epoch metrics (metrics.csv)

                  the model input/output widths are derived from the first
                  training mesh (coordinates + features, targets)
            ''')
        )

        # Arguments
        self._addOptionMode(self._oArgumentParser)
        self._addOptionTileSize(self._oArgumentParser)
        self._addOptionChunkSize(self._oArgumentParser)
        self._addOptionParallel(self._oArgumentParser)
        self._oArgumentParser.add_argument(
            '--epochs', type=int, metavar='<epochs>',
            help='epochs count (overrides the configuration)'
        )
        self._oArgumentParser.add_argument(
            '--subset-size', type=int, metavar='<points>', dest='subset_size',
            help='training subset size (overrides the configuration)'
        )
        self._oArgumentParser.add_argument(
            '--validation', type=str, metavar='<mesh-file>', action='append', default=list(),
            help='validation mesh file (may be repeated; default: training meshes)'
        )
        self._oArgumentParser.add_argument(
            'meshes', type=str, metavar='<mesh-file>', nargs='+',
            help='training mesh file(s), with targets'
        )


    #
    # Execution
    #

    def execute(self, _sCommand = None, _lArguments = None):
        """
        Execute the command

        @param str  _sCommand    Command name
        @param list _lArguments  Command arguments

        @return int  0 on success, non-zero in case of failure
        """

        # Arguments
        self._initArgumentParser(_sCommand)
        self._initArguments(_lArguments)

        # Train
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            oConfig.set('train', 'epochs', self._oArguments.epochs)
            oConfig.set('train', 'subset_size', self._oArguments.subset_size)
            oDtype = oConfig.dtype()

            # ... data
            loTrain = [phastMeshRead(sMesh, oDtype) for sMesh in self._oArguments.meshes]
            loValidation = [phastMeshRead(sMesh, oDtype) for sMesh in self._oArguments.validation]
            oFirst = loTrain[0]
            if oFirst.targets is None:
                raise RuntimeError('Invalid training mesh (%s); targets are required' % self._oArguments.meshes[0])
            oConfig.set('model', 'in_dim', oFirst.dims() + oFirst.features.shape[1])
            oConfig.set('model', 'out_dim', oFirst.targets.shape[1])
            lsErrors = oConfig.verify()
            if lsErrors:
                self._errors(lsErrors)
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)

            # ... model
            oModelConfig = oConfig.modelConfig()
            oParams = phastModelParams(oModelConfig, PhastLinalg_rng(oConfig.get('PhAST', 'seed')).child(0), oDtype)
            oNetwork = PhastModel_network(oParams)
            oNetwork.VERBOSE(self._oArguments.verbose)

            # ... training
            oTrainer = PhastTrain_trainer(
                oNetwork, oConfig.trainConfig(), oConfig.get('inference', 'chunk_size'),
                None, None, oConfig.get('PhAST', 'parallel'),
            )
            oTrainer.VERBOSE(self._oArguments.verbose)
            sMetrics = os.path.join(sDirectory, 'metrics.csv')
            if os.path.exists(sMetrics):
                os.remove(sMetrics)
            ldMetrics = oTrainer.train(loTrain, loValidation, sMetrics)

            # ... checkpoint
            oCheckpoint = PhastModel_checkpoint()
            oCheckpoint.VERBOSE(self._oArguments.verbose)
            sCheckpoint = oCheckpoint.save(os.path.join(sDirectory, 'model'), oParams)

            if ldMetrics:
                dLast = ldMetrics[-1]
                self._stdout('epochs=%d\nsteps=%d\ntrain_loss=%s\nval_relL2=%s\n' % (
                    dLast['epoch'], dLast['step'], PhastRuntime.formatReal(dLast['train_loss']), PhastRuntime.formatReal(dLast['val_relL2'])))
            self._stdout('checkpoint=%s\nmetrics=%s\n' % (sCheckpoint, sMetrics))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

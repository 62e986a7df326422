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
     phastMeshRead, \
     phastMeshWrite
from PhAST.Runtime import \
     PhastRuntime

# External
import numpy

# Standard
import os.path
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_infer(PhastCli_phast):
    """
    PhAST command-line utility - Command 'infer'
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
                  predict the given mesh in a single (monolithic) forward
                  pass; writes the mesh with predictions (predictions.csv)
            ''')
        )

        # Arguments
        self._addOptionCheckpoint(self._oArgumentParser)
        self._addOptionMode(self._oArgumentParser)
        self._addOptionTileSize(self._oArgumentParser)
        self._addOptionParallel(self._oArgumentParser)
        self._addArgumentMesh(self._oArgumentParser)


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

        # Infer
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oNetwork = self._loadNetwork(self._oArguments.checkpoint, oConfig)
            oMesh = phastMeshRead(self._oArguments.mesh, oConfig.dtype())
            if oMesh.points():
                aY = oNetwork.forward(oMesh, self._oArguments.mode, self._oArguments.tile_size or None, None, None, oConfig.get('PhAST', 'parallel'))
            else:
                aY = numpy.zeros((0, oNetwork.config.out_dim), dtype=oNetwork.params.dtype())
            sPredictions = os.path.join(sDirectory, 'predictions.csv')
            phastMeshWrite(sPredictions, oMesh.withTargets(None), aY)
            self._stdout('points=%d\npredictions=%s\n' % (aY.shape[0], sPredictions))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

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
from PhAST import \
     PHAST_CSV_FORMAT
from PhAST.Attention import \
     PhastAttention
from PhAST.Cli import \
     PhastCli_phast
from PhAST.Geometry import \
     phastMeshRead
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

class PhastCli_export_slices(PhastCli_phast):
    """
    PhAST command-line utility - Command 'export-slices'
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
                  export the per-point slice weights of the given layer and
                  head, along with the hard (argmax) state assignment;
                  writes slices.csv

                  columns: index,x[,y[,z]],w1..wM,state
            ''')
        )

        # Arguments
        self._addOptionCheckpoint(self._oArgumentParser)
        self._addOptionMode(self._oArgumentParser)
        self._addOptionTileSize(self._oArgumentParser)
        self._oArgumentParser.add_argument(
            '--layer', type=int, metavar='<index>', default=0,
            help='layer index (default: 0)'
        )
        self._oArgumentParser.add_argument(
            '--head', type=int, metavar='<index>', default=0,
            help='head index (default: 0)'
        )
        self._addArgumentMesh(self._oArgumentParser)


    #
    # Helpers
    #

    def sliceWeights(self, _oNetwork, _oMesh, _iLayer, _iHead, _sMode = None, _iTileSize = None):
        """
        Return the slice weights of the given layer and head

        @return numpy.ndarray  Row-stochastic slice weights [N x M]

        @exception RuntimeError  On invalid layer or head index
        """

        oModelConfig = _oNetwork.config
        if not 0 <= _iLayer < oModelConfig.layers:
            raise RuntimeError('Invalid layer index (%d); expected 0..%d' % (_iLayer, oModelConfig.layers-1))
        if not 0 <= _iHead < oModelConfig.heads:
            raise RuntimeError('Invalid head index (%d); expected 0..%d' % (_iHead, oModelConfig.heads-1))
        sMode = _oNetwork.mode(_sMode)
        aX = _oNetwork.embed(_oNetwork.inputs(_oMesh))
        iTileSize = _iTileSize or oModelConfig.tileSize(aX.shape[0])
        for iLayer in range(_iLayer):
            aX = _oNetwork.ffn(iLayer, _oNetwork.attention(iLayer, aX, sMode, iTileSize))
        iChannelsHead = oModelConfig.headChannels()
        aA = _oNetwork.normalizedAttentionInput(_iLayer, aX)
        aXh = numpy.ascontiguousarray(aA[:, _iHead*iChannelsHead:(_iHead+1)*iChannelsHead])
        return PhastAttention.sliceWeights(aXh, _oNetwork.params.heads(_iLayer)[_iHead])


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

        # Export
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oNetwork = self._loadNetwork(self._oArguments.checkpoint, oConfig)
            oMesh = phastMeshRead(self._oArguments.mesh, oConfig.dtype())
            if not oMesh.points():
                raise RuntimeError('Invalid mesh (%s); no points' % self._oArguments.mesh)
            aW = self.sliceWeights(oNetwork, oMesh, self._oArguments.layer, self._oArguments.head, self._oArguments.mode, self._oArguments.tile_size)

            lsColumns = ['index'] + ['x', 'y', 'z'][:oMesh.dims()] + ['w%d' % (i+1) for i in range(aW.shape[1])] + ['state']
            aRows = numpy.concatenate([
                oMesh.indices[:, None].astype(numpy.float64),
                oMesh.coords.astype(numpy.float64),
                aW.astype(numpy.float64),
                numpy.argmax(aW, axis=1)[:, None].astype(numpy.float64),
            ], axis=1)
            sSlices = os.path.join(sDirectory, 'slices.csv')
            with open(sSlices, 'w', encoding='utf-8', newline='\n') as oFile:
                oFile.write(','.join(lsColumns)+'\n')
                numpy.savetxt(oFile, aRows, fmt=PHAST_CSV_FORMAT, delimiter=',')
            self._stdout('points=%d\nslices=%d\nexport=%s\n' % (aW.shape[0], aW.shape[1], sSlices))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

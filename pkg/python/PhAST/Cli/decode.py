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
     PhastGeometry_layout, \
     PhastGeometry_reader, \
     PhastGeometry_writer
from PhAST.Inference import \
     PhastInference_builder, \
     phastCacheLoad
from PhAST.Runtime import \
     PhastRuntime

# Standard
import os.path
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_decode(PhastCli_phast):
    """
    PhAST command-line utility - Command 'decode'
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
                  decode the given query points against a state cache,
                  streaming them chunk by chunk; writes the query points with
                  predictions (predictions.csv)

                  a query file holding only its header line yields an empty
                  output (header only)
            ''')
        )

        # Arguments
        self._addOptionCheckpoint(self._oArgumentParser)
        self._addOptionChunkSize(self._oArgumentParser)
        self._oArgumentParser.add_argument(
            '-K', '--cache', type=str, metavar='<cache>', required=True,
            help='state cache (basename or manifest path)'
        )
        self._addArgumentMesh(self._oArgumentParser, 'query mesh file')


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

        # Decode
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oNetwork = self._loadNetwork(self._oArguments.checkpoint, oConfig)
            oCache = phastCacheLoad(self._oArguments.cache)
            oBuilder = PhastInference_builder(oNetwork, oConfig.get('inference', 'chunk_size'))
            oBuilder.VERBOSE(self._oArguments.verbose)
            oBuilder.check(oCache)

            oReader = PhastGeometry_reader(self._oArguments.mesh, oConfig.dtype())
            oReader.bounds()
            oLayout = PhastGeometry_layout(
                oReader.layout.dims, oReader.layout.features, oReader.layout.normals, oReader.layout.areas,
                oNetwork.config.out_dim,
            )
            sPredictions = os.path.join(sDirectory, 'predictions.csv')
            with PhastGeometry_writer(sPredictions, oLayout) as oWriter:
                dSummary = oBuilder.decodeStream(oCache, oReader, lambda iChunk, oChunk, aY: oWriter.write(oChunk, aY))
            self._stdout('points=%d\nchunks=%d\npredictions=%s\n' % (dSummary['points'], dSummary['chunks'], sPredictions))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

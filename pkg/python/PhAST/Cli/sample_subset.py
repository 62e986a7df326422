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
from PhAST.Linalg import \
     PhastLinalg_rng
from PhAST.Runtime import \
     PhastRuntime
from PhAST.Train import \
     PhastTrain_sampler

# Standard
import os.path
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_sample_subset(PhastCli_phast):
    """
    PhAST command-line utility - Command 'sample-subset'
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
                  draw a uniform random subset (without replacement) of the
                  given mesh, as geometry amortized training does; writes
                  subset.csv (all columns) and subset_indices.csv (source
                  mesh indices, in sampling order)
            ''')
        )

        # Arguments
        self._oArgumentParser.add_argument(
            '-n', '--size', type=int, metavar='<points>', required=True,
            help='subset size'
        )
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

        # Sample
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oMesh = phastMeshRead(self._oArguments.mesh, oConfig.dtype())
            oSubset = PhastTrain_sampler.amortizedSample(oMesh, self._oArguments.size, PhastLinalg_rng(oConfig.get('PhAST', 'seed')))
            sSubset = os.path.join(sDirectory, 'subset.csv')
            phastMeshWrite(sSubset, oSubset)
            sIndices = os.path.join(sDirectory, 'subset_indices.csv')
            PhastRuntime.echo('index\n'+''.join(['%d\n' % i for i in oSubset.indices]), sIndices)
            self._stdout('points=%d\nsubset=%s\nindices=%s\n' % (oSubset.points(), sSubset, sIndices))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

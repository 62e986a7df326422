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
from PhAST.Complexity import \
     PhastComplexity_costmodel
from PhAST.Runtime import \
     PhastRuntime

# Standard
import os.path
import sys
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_flops(PhastCli_phast):
    """
    PhAST command-line utility - Command 'flops'
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
                  report the Physics-Attention cost model (original, optimized
                  and tiled variants) of the configured model, for the whole
                  stack (all heads, all layers); writes flops.csv

                  columns: variant,op,time_flops,space_bytes,n_dependent
            ''')
        )

        # Arguments
        self._addOptionTileSize(self._oArgumentParser)
        self._oArgumentParser.add_argument(
            '-N', '--points', type=int, metavar='<points>', default=1000000,
            help='points count (default: 1000000)'
        )
        self._oArgumentParser.add_argument(
            '--table', action='store_true',
            help='also print the symbolic complexity tables (on standard error)'
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

        # Report
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oModelConfig = oConfig.modelConfig()
            iPoints = self._oArguments.points
            iTileSize = oModelConfig.tileSize(iPoints)

            oCostModel = PhastComplexity_costmodel()
            oCostModel.VERBOSE(self._oArguments.verbose)
            sReport = 'variant,op,time_flops,space_bytes,n_dependent\n'
            dfTotals = dict()
            for sVariant in PhastComplexity_costmodel.VARIANTS:
                oReport = oCostModel.report(
                    sVariant, iPoints, oModelConfig.slices, oModelConfig.channels, oModelConfig.heads, oModelConfig.layers,
                    iTileSize if sVariant == 'tiled' else None, oConfig.get('PhAST', 'precision'),
                )
                for (sRowVariant, sOp, iFlops, iBytes, bDependent) in oReport.rows():
                    sReport += '%s,%s,%d,%d,%d\n' % (sRowVariant, sOp, iFlops, iBytes, 1 if bDependent else 0)
                dfTotals[sVariant] = oReport.totalFlops()
                if self._oArguments.table:
                    sys.stderr.write(oReport.toString()+'\n')
            PhastRuntime.echo(sReport, os.path.join(sDirectory, 'flops.csv'))
            self._stdout(sReport)
            if self._oArguments.verbose >= PhastRuntime.VERBOSE_INFO:
                sys.stderr.write('INFO[CX] FLOPs ratio (optimized/original): %s\n' % PhastRuntime.formatReal(dfTotals['optimized'] / dfTotals['original']))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

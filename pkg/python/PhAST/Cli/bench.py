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
     PhastComplexity_counters, \
     PhastComplexity_memory
from PhAST.Geometry import \
     PhastGeometry_sphere
from PhAST.Linalg import \
     PhastLinalg_rng
from PhAST.Model import \
     PhastModel_network, \
     phastModelParams
from PhAST.Runtime import \
     PhastRuntime

# Standard
import os.path
import textwrap
import time


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_bench(PhastCli_phast):
    """
    PhAST command-line utility - Command 'bench'
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
                  measure the forward pass latency (best of repeats) of the
                  configured model, with random parameters, on a random sphere
                  mesh, for the original and fast modes and the tiled mode at
                  each tile size; writes bench.csv

                  columns: mode,tile_size,points,seconds,flops,model_peak_bytes
                  (latency is informational; it depends on the hardware)
            ''')
        )

        # Arguments
        self._addOptionParallel(self._oArgumentParser)
        self._oArgumentParser.add_argument(
            '-N', '--points', type=int, metavar='<points>', default=16384,
            help='points count (default: 16384)'
        )
        self._oArgumentParser.add_argument(
            '--tile-sizes', type=str, metavar='<N_t,...>', dest='tile_sizes', default=None,
            help='tiled mode tile sizes (default: N/2,N/4,N/8,N/16)'
        )
        self._oArgumentParser.add_argument(
            '--repeats', type=int, metavar='<count>', default=3,
            help='repeats per configuration (default: 3)'
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

        # Benchmark
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oDtype = oConfig.dtype()
            iPoints = self._oArguments.points
            if iPoints < 1 or self._oArguments.repeats < 1:
                raise RuntimeError('Invalid benchmark; points and repeats must be positive')
            if self._oArguments.tile_sizes is None:
                liTileSizes = [max(iPoints // i, 1) for i in (2, 4, 8, 16)]
            else:
                liTileSizes = PhastRuntime.parseList(self._oArguments.tile_sizes, int)
            if any([iTileSize < 1 for iTileSize in liTileSizes]):
                raise RuntimeError('Invalid tile sizes (%s)' % self._oArguments.tile_sizes)

            # Sphere meshes provide 3-D coordinates and no features
            oModelConfig = oConfig.modelConfig().copy(in_dim=3)
            oRng = PhastLinalg_rng(oConfig.get('PhAST', 'seed'))
            oNetwork = PhastModel_network(phastModelParams(oModelConfig, oRng.child(0), oDtype))
            oMesh = PhastGeometry_sphere.random(iPoints, oRng.child(1), oDtype)
            oMemory = PhastComplexity_memory()

            sReport = 'mode,tile_size,points,seconds,flops,model_peak_bytes\n'
            ltRuns = [('original', iPoints), ('fast', iPoints)] + [('tiled', min(iTileSize, iPoints)) for iTileSize in liTileSizes]
            for (sMode, iTileSize) in ltRuns:
                oCounter = PhastComplexity_counters()
                oNetwork.forward(oMesh, sMode, iTileSize, oCounter, None, oConfig.get('PhAST', 'parallel'))
                lfSeconds = list()
                for iRepeat in range(self._oArguments.repeats):
                    fStart = time.perf_counter()
                    oNetwork.forward(oMesh, sMode, iTileSize, None, None, oConfig.get('PhAST', 'parallel'))
                    lfSeconds.append(time.perf_counter() - fStart)
                dEstimate = oMemory.estimate(
                    'optimized' if sMode == 'fast' else sMode, iPoints, oModelConfig.slices, oModelConfig.channels,
                    oModelConfig.heads, oModelConfig.layers, iTileSize if sMode == 'tiled' else None, False, True,
                    oConfig.get('PhAST', 'precision'),
                )
                sReport += '%s,%d,%d,%s,%d,%d\n' % (sMode, iTileSize, iPoints, PhastRuntime.formatReal(min(lfSeconds)), oCounter.flops(), dEstimate['peak_bytes'])
            PhastRuntime.echo(sReport, os.path.join(sDirectory, 'bench.csv'))
            self._stdout(sReport)

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

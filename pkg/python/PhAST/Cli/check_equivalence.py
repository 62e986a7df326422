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
from PhAST.Attention import \
     PhastAttention, \
     phastHead
from PhAST.Cli import \
     PhastCli_phast
from PhAST.Geometry import \
     PhastGeometry_sphere
from PhAST.Inference import \
     PhastInference_builder
from PhAST.Linalg import \
     PhastLinalg, \
     PhastLinalg_rng
from PhAST.Model import \
     PhastModel_config, \
     PhastModel_network, \
     phastModelParams
from PhAST.Runtime import \
     PhastRuntime

# Standard
import os.path
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_check_equivalence(PhastCli_phast):
    """
    PhAST command-line utility - Command 'check-equivalence'
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    TOLERANCE_HEAD = 1e-10
    TOLERANCE_STACK = 1e-9


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
                  verify that the original, fast and tiled Physics-Attention
                  formulations agree (single head, on random inputs), and that
                  the full stack agrees across modes and with cached decoding;
                  prints the worst-case relative difference per comparison
                  (equivalence.csv) and exits with code 3 on failure
            ''')
        )

        # Arguments
        self._addOptionParallel(self._oArgumentParser)
        self._oArgumentParser.add_argument(
            '--seeds', type=int, metavar='<count>', default=100,
            help='random seeds count (default: 100)'
        )
        self._oArgumentParser.add_argument(
            '--sizes', type=str, metavar='<N,...>', default='64,256,1024,2048',
            help='points counts (default: 64,256,1024,2048)'
        )
        self._oArgumentParser.add_argument(
            '--stack-points', type=int, metavar='<points>', dest='stack_points', default=512,
            help='full stack check points count (default: 512; 0 to skip)'
        )


    #
    # Checks
    #

    def _checkHeads(self, _liSizes, _iSeeds, _oDtype, _bParallel):
        """
        Single head equivalence, over all seeds and sizes

        @return dict  Worst-case relative difference per comparison
        """

        dfWorst = dict()

        def record(_sComparison, _fError):
            dfWorst[_sComparison] = max(dfWorst.get(_sComparison, 0.0), _fError)

        for iSeed in range(_iSeeds):
            oRng = PhastLinalg_rng(iSeed)
            for iPoints in _liSizes:
                oHead = phastHead(16, 8, oRng, True, _oDtype)
                aX = oRng.normal((iPoints, 16), 1.0, _oDtype)
                aOriginal = PhastAttention.physattn(aX, oHead, 'original')
                aFast = PhastAttention.physattn(aX, oHead, 'fast')
                record('head:fast~original', PhastLinalg.relativeError(aFast, aOriginal))
                for iTileSize in sorted(set([iPoints, max(iPoints // 4, 1), max(iPoints // 8, 1), 7])):
                    aTiled = PhastAttention.physattn(aX, oHead, 'tiled', iTileSize, None, None, _bParallel)
                    record('head:tiled(N/%s)~original' % self._tileLabel(iPoints, iTileSize), PhastLinalg.relativeError(aTiled, aOriginal))
        return dfWorst


    def _tileLabel(self, _iPoints, _iTileSize):
        if _iTileSize == 7:
            return '7'
        return 'N' if _iTileSize == _iPoints else '%d' % (_iPoints // _iTileSize)


    def _checkStack(self, _iPoints, _iSeed, _oDtype, _bParallel):
        """
        Full stack equivalence: modes and cached decoding

        @return dict  Relative difference per comparison
        """

        oConfig = PhastModel_config(layers=2, heads=2, channels=16, slices=8, in_dim=3, out_dim=1, ffn_hidden=32)
        oNetwork = PhastModel_network(phastModelParams(oConfig, PhastLinalg_rng(_iSeed), _oDtype))
        oMesh = PhastGeometry_sphere.random(_iPoints, PhastLinalg_rng(_iSeed).child(1), _oDtype)
        aOriginal = oNetwork.forward(oMesh, 'original')
        dfErrors = {
            'stack:fast~original': PhastLinalg.relativeError(oNetwork.forward(oMesh, 'fast'), aOriginal),
            'stack:tiled~original': PhastLinalg.relativeError(oNetwork.forward(oMesh, 'tiled', max(_iPoints // 8, 1), None, None, _bParallel), aOriginal),
        }
        oBuilder = PhastInference_builder(oNetwork, max(_iPoints // 3, 1))
        dfErrors['stack:cached~original'] = PhastLinalg.relativeError(oBuilder.decodePoints(oBuilder.build(oMesh), oMesh), aOriginal)
        return dfErrors


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

        # Check
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oDtype = oConfig.dtype()
            bParallel = oConfig.get('PhAST', 'parallel')
            liSizes = PhastRuntime.parseList(self._oArguments.sizes, int)
            if not liSizes or min(liSizes) < 1 or self._oArguments.seeds < 1:
                raise RuntimeError('Invalid equivalence suite; at least one seed and positive sizes are required')

            # f32 agreement is bounded by its own rounding
            fScale = 1.0 if oDtype == PhastRuntime.dtype('f64') else 1e5
            ltResults = [
                (sComparison, fError, self.TOLERANCE_HEAD*fScale)
                for (sComparison, fError) in sorted(self._checkHeads(liSizes, self._oArguments.seeds, oDtype, bParallel).items())
            ]
            if self._oArguments.stack_points:
                ltResults += [
                    (sComparison, fError, self.TOLERANCE_STACK*fScale)
                    for (sComparison, fError) in sorted(self._checkStack(self._oArguments.stack_points, oConfig.get('PhAST', 'seed'), oDtype, bParallel).items())
                ]

            sReport = 'comparison,worst_rel_diff,tolerance,status\n'
            bPassed = True
            for (sComparison, fError, fTolerance) in ltResults:
                bOk = fError <= fTolerance
                bPassed = bPassed and bOk
                sReport += '%s,%s,%s,%s\n' % (sComparison, PhastRuntime.formatReal(fError), PhastRuntime.formatReal(fTolerance), 'pass' if bOk else 'FAIL')
            PhastRuntime.echo(sReport, os.path.join(sDirectory, 'equivalence.csv'))
            self._stdout(sReport)
            if not bPassed:
                (sComparison, fError, fTolerance) = max(ltResults, key=lambda t: t[1] / t[2])
                self._errors(['Equivalence check failed; worst case: %s = %s (tolerance %s)' % (sComparison, PhastRuntime.formatReal(fError), PhastRuntime.formatReal(fTolerance))])
                return PhastRuntime.EXIT_MISMATCH

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

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
     PhastGeometry_metrics, \
     PhastGeometry_quadrature, \
     phastMeshRead
from PhAST.Runtime import \
     PhastRuntime

# Standard
import os.path
import sys
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_integrate(PhastCli_phast):
    """
    PhAST command-line utility - Command 'integrate'
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
                  integrate the surface force of the given prediction file(s)
                  and derive the drag and lift coefficients (Cd, Cl), using
                  the [flow] constants; files must carry normals and areas,
                  and either 1 (p) or 4 (p, tau_x, tau_y, tau_z) target columns

                  given matching ground truth file(s), also report the field
                  metrics per sample (relative L2, R2, MAE) and the
                  coefficients R2 and MAE across samples; writes integrate.csv
            ''')
        )

        # Arguments
        self._oArgumentParser.add_argument(
            '--truth', type=str, metavar='<mesh-file>', action='append', default=list(),
            help='ground truth file (may be repeated; one per prediction file, in order)'
        )
        self._oArgumentParser.add_argument(
            'predictions', type=str, metavar='<mesh-file>', nargs='+',
            help='prediction file(s)'
        )


    #
    # Helpers
    #

    def _coefficients(self, _sFilename, _oFlow, _oDtype):
        """
        @return tuple  (mesh, Cd, Cl)

        @exception RuntimeError  On invalid columns
        """

        oMesh = phastMeshRead(_sFilename, _oDtype)
        if oMesh.targets is None or oMesh.targets.shape[1] not in (1, 4):
            raise RuntimeError('Invalid surface fields (%s); expected 1 (p) or 4 (p, tau) target columns' % _sFilename)
        aShear = oMesh.targets[:, 1:4] if oMesh.targets.shape[1] == 4 else None
        (aForce, fCd, fCl) = PhastGeometry_quadrature.integrateForce(oMesh, oMesh.targets[:, 0], aShear, _oFlow)
        return (oMesh, fCd, fCl)


    def _format(self, _mValue):
        return '' if _mValue is None else PhastRuntime.formatReal(_mValue)


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

        # Integrate
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oFlow = oConfig.flowConstants()
            oDtype = oConfig.dtype()
            lsPredictions = self._oArguments.predictions
            lsTruths = self._oArguments.truth
            if lsTruths and len(lsTruths) != len(lsPredictions):
                raise RuntimeError('Invalid ground truth files count (%d); expected %d' % (len(lsTruths), len(lsPredictions)))

            sReport = 'sample,cd,cl' + (',cd_true,cl_true,rel_l2' if lsTruths else '') + '\n'
            ltCoefficients = list()
            for (iSample, sPrediction) in enumerate(lsPredictions):
                (oPrediction, fCd, fCl) = self._coefficients(sPrediction, oFlow, oDtype)
                sReport += '%d,%s,%s' % (iSample, PhastRuntime.formatReal(fCd), PhastRuntime.formatReal(fCl))
                if lsTruths:
                    (oTruth, fCdTrue, fClTrue) = self._coefficients(lsTruths[iSample], oFlow, oDtype)
                    dMetrics = PhastGeometry_metrics.metrics(oPrediction.targets, oTruth.targets)
                    ltCoefficients.append(((fCd, fCl), (fCdTrue, fClTrue)))
                    sReport += ',%s,%s,%s' % (PhastRuntime.formatReal(fCdTrue), PhastRuntime.formatReal(fClTrue), PhastRuntime.formatReal(dMetrics['rel_l2']))
                    if self._oArguments.verbose >= PhastRuntime.VERBOSE_INFO:
                        sys.stderr.write('INFO[G] Sample %d: field R2=%s, MAE=%s\n' % (iSample, ','.join([self._format(f) for f in dMetrics['r2']]), ','.join([self._format(f) for f in dMetrics['mae']])))
                sReport += '\n'
            PhastRuntime.echo(sReport, os.path.join(sDirectory, 'integrate.csv'))
            self._stdout(sReport)

            # Coefficients accuracy, across samples
            if ltCoefficients:
                aPredicted = [t[0] for t in ltCoefficients]
                aTrue = [t[1] for t in ltCoefficients]
                lfR2 = PhastGeometry_metrics.r2(aPredicted, aTrue)
                lfMae = PhastGeometry_metrics.mae(aPredicted, aTrue)
                self._stdout('cd_r2=%s\ncd_mae=%s\ncl_r2=%s\ncl_mae=%s\n' % (
                    self._format(lfR2[0]), self._format(lfMae[0]), self._format(lfR2[1]), self._format(lfMae[1])))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

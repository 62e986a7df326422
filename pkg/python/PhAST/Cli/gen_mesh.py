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
     PhastGeometry_sphere, \
     phastMeshWrite
from PhAST.Linalg import \
     PhastLinalg_rng
from PhAST.Runtime import \
     PhastRuntime

# Standard
import os.path
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_gen_mesh(PhastCli_phast):
    """
    PhAST command-line utility - Command 'gen-mesh'
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
                  generate a unit sphere mesh carrying manufactured fields
                  (mesh.csv) and the high-resolution reference integral of
                  its force coefficients (reference.json)
            ''')
        )

        # Arguments
        self._oArgumentParser.add_argument(
            '-N', '--points', type=int, metavar='<points>', default=20000,
            help='points count (default: 20000)'
        )
        self._oArgumentParser.add_argument(
            '--kind', type=str, metavar='<kind>', choices=['fibonacci', 'random'], default='fibonacci',
            help='sampling: quasi-uniform (fibonacci) or area-uniform random (default: fibonacci)'
        )
        self._oArgumentParser.add_argument(
            '--shear', action='store_true',
            help='add the manufactured wall shear stress targets'
        )
        self._oArgumentParser.add_argument(
            '--reference-points', type=int, metavar='<points>', dest='reference_points',
            default=PhastGeometry_sphere.REFERENCE_POINTS,
            help='reference integral points count (default: %d; 0 to skip)' % PhastGeometry_sphere.REFERENCE_POINTS
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

        # Generate mesh
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oDtype = oConfig.dtype()

            if self._oArguments.kind == 'random':
                oMesh = PhastGeometry_sphere.random(self._oArguments.points, PhastLinalg_rng(oConfig.get('PhAST', 'seed')), oDtype)
            else:
                oMesh = PhastGeometry_sphere.fibonacci(self._oArguments.points, oDtype)
            oMesh = PhastGeometry_sphere.targets(oMesh, self._oArguments.shear)
            sMesh = os.path.join(sDirectory, 'mesh.csv')
            phastMeshWrite(sMesh, oMesh)
            self._stdout('mesh=%s\npoints=%d\n' % (sMesh, oMesh.points()))

            if self._oArguments.reference_points:
                dReference = PhastGeometry_sphere.reference(oConfig.flowConstants(), self._oArguments.shear, self._oArguments.reference_points)
                sReference = os.path.join(sDirectory, 'reference.json')
                PhastGeometry_sphere.saveReference(sReference, dReference)
                self._stdout('reference=%s\ncd=%s\ncl=%s\n' % (sReference, PhastRuntime.formatReal(dReference['cd']), PhastRuntime.formatReal(dReference['cl'])))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

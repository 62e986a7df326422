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
     PhastGeometry_reader
from PhAST.Inference import \
     PhastInference_builder
from PhAST.Runtime import \
     PhastRuntime

# Standard
import os.path
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_cache(PhastCli_phast):
    """
    PhAST command-line utility - Command 'cache'
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
                  build the physical state cache of the given mesh, streaming
                  it chunk by chunk; writes the cache (cache.json, cache.bin)
            ''')
        )

        # Arguments
        self._addOptionCheckpoint(self._oArgumentParser)
        self._addOptionChunkSize(self._oArgumentParser)
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

        # Build cache
        try:
            oConfig = self._initConfig()
            if oConfig is None:
                return PhastRuntime.EXIT_INPUT
            sDirectory = self._initOutput(oConfig)
            oNetwork = self._loadNetwork(self._oArguments.checkpoint, oConfig)
            oBuilder = PhastInference_builder(oNetwork, oConfig.get('inference', 'chunk_size'), oConfig.get('inference', 'spill_dir') or None)
            oBuilder.VERBOSE(self._oArguments.verbose)
            oCache = oBuilder.build(PhastGeometry_reader(self._oArguments.mesh, oConfig.dtype()))
            sCache = oCache.save(os.path.join(sDirectory, 'cache'))
            self._stdout('points=%d\nlayers=%d\nheads=%d\nfingerprint=%s\ncache=%s\n' % (
                oCache.points, oCache.layers(), oCache.heads(), oCache.fingerprint, sCache))

        except (OSError, RuntimeError) as e:
            return self._failure(e)

        # Done
        return PhastRuntime.EXIT_SUCCESS

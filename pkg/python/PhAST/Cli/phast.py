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
     PHAST_VERSION, \
     PHAST_CONFIG_FILE
from PhAST.Runtime import \
     PhastMismatchError, \
     PhastRuntime, \
     PhastRuntime_config

# Standard
import argparse
import os
import re
import sys
import textwrap


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastCli_phast:
    """
    PhAST command-line utility (main entry point)
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    # Command-line overrides: (section, key, argument)
    OVERRIDES = (
        ('PhAST', 'seed', 'seed'),
        ('PhAST', 'precision', 'precision'),
        ('PhAST', 'out_dir', 'out'),
        ('model', 'mode', 'mode'),
        ('model', 'tile_size', 'tile_size'),
        ('inference', 'chunk_size', 'chunk_size'),
    )


    #--------------------------------------------------------------------------
    # METHODS
    #--------------------------------------------------------------------------

    #
    # Arguments (to be used by actual commands)
    #

    def _initArgumentParser(self, _sCommand = None, _sSynopsis = None):
        """
        Create the arguments parser (and help generator)

        @param str _sCommand   Command name
        @param str _sSynopsis  Additional help (synopsis)
        """

        # Command
        if _sCommand is None:
            _sCommand = sys.argv[0].split(os.sep)[-1]

        # Create argument parser
        if _sSynopsis is None:
            self._oArgumentParser = argparse.ArgumentParser(
                prog=_sCommand
            )
        else:
            self._oArgumentParser = argparse.ArgumentParser(
                prog=_sCommand,
                formatter_class=argparse.RawDescriptionHelpFormatter,
                epilog=_sSynopsis
            )

        # Standard arguments
        self._addOptionVersion(self._oArgumentParser)
        self._addOptionConfig(self._oArgumentParser)
        self._addOptionVerbose(self._oArgumentParser)
        self._addOptionSilent(self._oArgumentParser)
        self._addOptionSeed(self._oArgumentParser)
        self._addOptionPrecision(self._oArgumentParser)
        self._addOptionOut(self._oArgumentParser)


    def _initArguments(self, _lArguments = None):
        """
        Parse the command-line arguments

        @param list _lArguments  Command arguments
        """

        self._oArguments = self._oArgumentParser.parse_args(_lArguments)


    def _addOptionVersion(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '-v', '--version', action='version',
            version=('PhAST - %s\n' % PHAST_VERSION)
        )


    def _addOptionConfig(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '-C', '--config', type=str, metavar='<config-file>',
            default=None,
            help='run configuration file (default: %s, if it exists)' % PHAST_CONFIG_FILE
        )


    def _addOptionSilent(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '-S', '--silent', action='store_true',
            help='mute all standard output messages'
        )


    def _addOptionVerbose(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '-V', '--verbose', type=int, metavar='<verbose-level>', default=0,
            help='set standard error verbosity level; 0=NONE ... %d=TRACE (default: 0)' % PhastRuntime.VERBOSE_TRACE
        )


    def _addOptionSeed(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '--seed', type=int, metavar='<seed>',
            help='random number generator seed'
        )


    def _addOptionPrecision(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '--precision', type=str, metavar='<precision>', choices=sorted(PhastRuntime.PRECISION_DTYPE),
            help='floating-point precision (f64|f32)'
        )


    def _addOptionOut(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '-o', '--out', type=str, metavar='<directory>',
            help='output directory'
        )


    def _addOptionMode(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '--mode', type=str, metavar='<mode>', choices=['original', 'fast', 'tiled'],
            help='Physics-Attention mode (original|fast|tiled)'
        )


    def _addOptionTileSize(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '--tile-size', type=int, metavar='<points>', dest='tile_size',
            help='geometry slice tile size (0 = untiled)'
        )


    def _addOptionChunkSize(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '--chunk-size', type=int, metavar='<points>', dest='chunk_size',
            help='inference chunk size'
        )


    def _addOptionParallel(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '--parallel', action='store_true',
            help='process tiles in parallel'
        )


    def _addOptionCheckpoint(self, _oArgumentParser):
        _oArgumentParser.add_argument(
            '-M', '--checkpoint', type=str, metavar='<checkpoint>', required=True,
            help='model checkpoint (basename or manifest path)'
        )


    def _addArgumentMesh(self, _oArgumentParser, _sHelp = 'mesh file'):
        _oArgumentParser.add_argument(
            'mesh', type=str, metavar='<mesh-file>',
            help=_sHelp
        )


    #
    # Helpers (to be used by actual commands)
    #

    def _stdout(self, _sString):
        if not self._oArguments.silent:
            sys.stdout.write(_sString)


    def _errors(self, _lsErrors):
        if self._oArguments.verbose >= PhastRuntime.VERBOSE_DEBUG:
            for sError in _lsErrors:
                sys.stderr.write('%s\n' % sError)
        else:
            sys.stderr.write('%s\n' % _lsErrors[-1])


    def _failure(self, _eError):
        """
        Report the given error and return the matching exit code

        @param Exception _eError  Error

        @return int  Exit code
        """

        sys.stderr.write('%s\n' % str(_eError))
        if isinstance(_eError, PhastMismatchError):
            return PhastRuntime.EXIT_MISMATCH
        return PhastRuntime.EXIT_INPUT


    def _initConfig(self):
        """
        Load the run configuration and apply the command-line overrides

        @return PhastRuntime_config  Configuration (None on error, reported)

        @exception RuntimeError  On invalid override
        """

        oConfig = PhastRuntime_config(self._oArguments.config)
        oConfig.VERBOSE(self._oArguments.verbose)
        lsErrors = oConfig.load()
        if lsErrors:
            self._errors(lsErrors)
            return None
        for (sSection, sKey, sArgument) in self.OVERRIDES:
            oConfig.set(sSection, sKey, getattr(self._oArguments, sArgument, None))
        if getattr(self._oArguments, 'parallel', False):
            oConfig.set('PhAST', 'parallel', True)
        lsErrors = oConfig.verify()
        if lsErrors:
            self._errors(lsErrors)
            return None
        return oConfig


    def _initOutput(self, _oConfig):
        """
        Create the output directory and write the resolved run configuration
        into it

        @return str  Output directory

        @exception OSError  On file I/O error
        """

        sDirectory = _oConfig.get('PhAST', 'out_dir')
        os.makedirs(sDirectory, exist_ok=True)
        _oConfig.save(sDirectory)
        return sDirectory


    def _loadNetwork(self, _sCheckpoint, _oConfig):
        """
        Load the given checkpoint, cast to the configured precision

        @return PhastModel_network  Network

        @exception OSError       On file I/O error or malformed checkpoint
        @exception RuntimeError  On invalid parameters
        """

        from PhAST.Model import \
             PhastModel_checkpoint, \
             PhastModel_network, \
             PhastModel_params

        oCheckpoint = PhastModel_checkpoint()
        oCheckpoint.VERBOSE(self._oArguments.verbose)
        oParams = oCheckpoint.load(_sCheckpoint)
        oDtype = _oConfig.dtype()
        if oParams.dtype() != oDtype:
            oParams = PhastModel_params(
                oParams.config,
                {sName: aParam.astype(oDtype) for (sName, aParam) in oParams.items()},
                oParams.target_mean, oParams.target_std,
            )
        oNetwork = PhastModel_network(oParams)
        oNetwork.VERBOSE(self._oArguments.verbose)
        return oNetwork


    #
    # Execution
    #

    def _help(self):
        """
        Show help (on stdout)
        """

        sys.stdout.write('usage: phast <command> [<options>]\n')
        sys.stdout.write(
            textwrap.dedent('''
                commands:
                  gen-mesh
                    generate a manufactured sphere mesh (and reference integral)
                  sample-subset
                    draw a random subset of a mesh
                  train
                    train a model (geometry amortized training)
                  infer
                    predict a mesh (monolithic forward pass)
                  cache
                    build the physical state cache of a mesh
                  decode
                    decode query points against a state cache
                  integrate
                    integrate surface forces (drag/lift coefficients) and metrics
                  export-slices
                    export per-point slice weights
                  check-equivalence
                    verify the Physics-Attention formulations equivalence
                  flops
                    report the Physics-Attention cost model
                  bench
                    measure forward latency across modes and tile sizes

                help:
                  phast <command> --help
            ''')
        )


    def execute(self, _lArguments = None):
        """
        Execute the command

        @param list _lArguments  Command-line arguments (default: sys.argv[1:])

        @return int  0 on success, non-zero in case of failure
        """

        lArguments = sys.argv[1:] if _lArguments is None else list(_lArguments)

        # Check arguments
        if not lArguments:
            sys.stderr.write('ERROR: Too few arguments\n')
            return PhastRuntime.EXIT_INPUT
        elif lArguments[0] in ['help', '--help', '-h']:
            self._help()
            return PhastRuntime.EXIT_SUCCESS

        # Instantiate command
        sCommand = lArguments[0]
        if re.search('[^a-z-]', sCommand):
            sys.stderr.write('ERROR: Invalid command\n')
            return PhastRuntime.EXIT_INPUT
        sModule = sCommand.replace('-', '_')
        if sModule == 'phast':
            sys.stderr.write('ERROR: Invalid command\n')
            return PhastRuntime.EXIT_INPUT
        try:
            oCommand = getattr(
                __import__(
                    'PhAST.Cli.%s' % sModule,
                    fromlist=['PhAST'],
                    level=0
                ),
                'PhastCli_%s' % sModule
            )
        except (ImportError, AttributeError):
            sys.stderr.write('ERROR: Invalid command\n')
            return PhastRuntime.EXIT_INPUT

        # Execute command
        try:
            return oCommand().execute('phast %s' % sCommand, lArguments[1:])
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else PhastRuntime.EXIT_INPUT
        except Exception as e:
            sys.stderr.write('ERROR: Internal error; %s: %s\n' % (e.__class__.__name__, str(e)))
            return PhastRuntime.EXIT_INTERNAL

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

# External
import numpy

# Standard
import os
import sys


#------------------------------------------------------------------------------
# EXCEPTIONS
#------------------------------------------------------------------------------

class PhastMismatchError(RuntimeError):
    """
    Verification failure (fingerprint mismatch, tolerance exceeded)
    """
    pass


class PhastNumericError(RuntimeError):
    """
    Numerical degeneracy (degenerate slice, zero-norm target, diverging loss)
    """
    pass


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastRuntime:
    """
    Global runtime environment and resources
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    # Verbosity
    VERBOSE_NONE = 0
    VERBOSE_ERROR = 1
    VERBOSE_WARNING = 2
    VERBOSE_INFO = 3
    VERBOSE_DEBUG = 4
    VERBOSE_TRACE = 5

    # Exit codes
    EXIT_SUCCESS = 0
    EXIT_INTERNAL = 1
    EXIT_INPUT = 2
    EXIT_MISMATCH = 3

    # Precision
    PRECISION_DTYPE = {
        'f64': numpy.float64,
        'f32': numpy.float32,
        }


    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    def echo(_sString, _sFilename, _sMode = 'w', _bTrace = False):
        """
        Echo the given string into the given file

        @param str _sString    String to echo
        @param str _sFilename  File to echo into
        @param str _sMode      File opening mode
        @param bool _bTrace    Print TRACE message to standard error

        @exception OSError  On file I/O error
        """
        if _bTrace: sys.stderr.write('TRACE[echo] %d characters > %s (%s)\n' % (len(_sString), _sFilename, _sMode))

        # Make sure the parent directory exists
        sDirectory = os.path.dirname(_sFilename)
        if sDirectory:
            os.makedirs(sDirectory, exist_ok=True)

        # Open file
        with open(_sFilename, _sMode) as oFile:
            oFile.write(_sString)


    def dtype(_sPrecision):
        """
        Return the numpy floating-point type matching the given precision

        @param str _sPrecision  Precision ('f64' or 'f32')

        @return type  numpy scalar type

        @exception RuntimeError  On invalid precision
        """

        try:
            return PhastRuntime.PRECISION_DTYPE[_sPrecision]
        except KeyError:
            raise RuntimeError('Invalid precision (%s); expected one of: %s' % (_sPrecision, ', '.join(sorted(PhastRuntime.PRECISION_DTYPE))))


    def formatReal(_fValue):
        """
        Format the given real with 17 significant digits (exact f64 round-trip)

        @param float _fValue  Real value

        @return str  Formatted value
        """

        return PHAST_CSV_FORMAT % _fValue


    def parseBool(_mBool):
        """
        Parse the given boolean string/value

        The following (lower-cased) string or values will resolve to True:
         - 'true' or 't'
         - 'yes' or 'y'
         - 'on'
         - '1'
         - bool = True
         - int != 0

        @param str|int|bool _mBool  Boolean string/value

        @return bool  Parsed boolean value
        """

        tBool = type(_mBool)
        if tBool is bool:
            return _mBool
        elif tBool is int:
            return _mBool != 0
        elif tBool is str:
            return _mBool.strip().lower() in ['true', 't', 'yes', 'y', 'on', '1']
        return False


    def parseList(_sList, _fCastFunction = None, _sItemSeparator = ','):
        """
        Parse the given list string

        A list string looks like:
          "value1[,...,valueN]"
        Value will be cast with the given function

        @param str _sList           List string
        @param str _fCastFunction   Cast function (ingored if None)
        @param str _sItemSeparator  Character separating each list item

        @return list  Parsed list

        @exception RuntimeError  On parse error
        """

        lmList = list()
        if _sList is None or not len(_sList):
            return lmList
        for mValue in _sList.split(_sItemSeparator):
            mValue = mValue.strip()
            if not len(mValue):
                continue
            if _fCastFunction is not None:
                try:
                    mValue = _fCastFunction(mValue)
                except (NameError, ValueError, TypeError) as e:
                    raise RuntimeError('Failed to cast list value (%s)' % mValue)
            lmList.append(mValue)
        return lmList



class PhastObject:
    """
    Generic (virtual) object class, providing verbosity-controlled messages
    on standard error
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self):

        # ... debugging
        self._iVerbose = PhastRuntime.VERBOSE_NONE


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    #
    # Debugging
    #

    def VERBOSE(self, _iVerbose):
        """
        Set verbosity level

        @param int _iVerbose  Verbosity level (self PhastRuntime.VERBOSE_* constants)
        """

        self._iVerbose = _iVerbose


    def _tag(self):
        """
        Return the message tag (component identifier)

        @return str  Message tag
        """

        return '-'


    def _ERROR(self, _sMessage):
        """
        Print ERROR message to standard error

        @param str _sMessage  Message to print
        """

        if(self._iVerbose >= PhastRuntime.VERBOSE_ERROR):
            sys.stderr.write('ERROR[%s] %s\n' % (self._tag(), _sMessage.replace('\n', '¬')))


    def _WARNING(self, _sMessage):
        """
        Print WARNING message to standard error

        @param str _sMessage  Message to print
        """

        if(self._iVerbose >= PhastRuntime.VERBOSE_WARNING):
            sys.stderr.write('WARNING[%s] %s\n' % (self._tag(), _sMessage.replace('\n', '¬')))


    def _INFO(self, _sMessage):
        """
        Print INFO message to standard error

        @param str _sMessage  Message to print
        """

        if(self._iVerbose >= PhastRuntime.VERBOSE_INFO):
            sys.stderr.write('INFO[%s] %s\n' % (self._tag(), _sMessage.replace('\n', '¬')))


    def _DEBUG(self, _sMessage):
        """
        Print DEBUG message to standard error

        @param str _sMessage  Message to print
        """

        if(self._iVerbose >= PhastRuntime.VERBOSE_DEBUG):
            sys.stderr.write('DEBUG[%s] %s\n' % (self._tag(), _sMessage.replace('\n', '¬')))


    def _TRACE(self, _sMessage):
        """
        Print TRACE message to standard error

        @param str _sMessage  Message to print
        """

        if(self._iVerbose >= PhastRuntime.VERBOSE_TRACE):
            sys.stderr.write('TRACE[%s] %s\n' % (self._tag(), _sMessage.replace('\n', '¬')))

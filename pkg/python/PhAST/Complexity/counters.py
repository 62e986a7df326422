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

# Standard
import threading


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastComplexity_counters:
    """
    Per-invocation operations and buffers counters

    Kernels report:
     - multiply-adds, per operation label
     - other floating-point operations, per operation label
     - transient buffers (peak element count, per buffer name)
     - buffers retained for the backward pass (element count, per buffer name)

    Counters are plain objects passed along the call chain; there is no
    global state.
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self):

        # Properties
        self._diMadds = dict()
        self._diFlops = dict()
        self._diPeak = dict()
        self._diRetained = dict()
        self._oLock = threading.Lock()


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    #
    # Setters
    #

    def madd(self, _sOp, _iCount):
        """
        Record multiply-adds

        @param str _sOp     Operation label
        @param int _iCount  Multiply-adds count
        """

        with self._oLock:
            self._diMadds[_sOp] = self._diMadds.get(_sOp, 0) + int(_iCount)


    def flop(self, _sOp, _iCount):
        """
        Record (non multiply-add) floating-point operations

        @param str _sOp     Operation label
        @param int _iCount  FLOPs count
        """

        with self._oLock:
            self._diFlops[_sOp] = self._diFlops.get(_sOp, 0) + int(_iCount)


    def buffer(self, _sName, _iElements):
        """
        Record a transient buffer allocation (peak is kept)

        @param str _sName      Buffer name
        @param int _iElements  Buffer size (elements)
        """

        with self._oLock:
            self._diPeak[_sName] = max(self._diPeak.get(_sName, 0), int(_iElements))


    def retain(self, _sName, _iElements):
        """
        Record a buffer retained for the backward pass

        @param str _sName      Buffer name
        @param int _iElements  Buffer size (elements)
        """

        with self._oLock:
            self._diRetained[_sName] = self._diRetained.get(_sName, 0) + int(_iElements)


    def reset(self):
        """
        Reset all counters
        """

        with self._oLock:
            self._diMadds.clear()
            self._diFlops.clear()
            self._diPeak.clear()
            self._diRetained.clear()


    #
    # Getters
    #

    def madds(self, _sOp = None):
        """
        Return the multiply-adds count (for the given operation or in total)

        @param str _sOp  Operation label (None for total)

        @return int  Multiply-adds count
        """

        if _sOp is None:
            return sum(self._diMadds.values())
        return self._diMadds.get(_sOp, 0)


    def flops(self, _sOp = None):
        """
        Return the total floating-point operations count, multiply-adds
        counting for 2 FLOPs

        @param str _sOp  Operation label (None for total)

        @return int  FLOPs count
        """

        if _sOp is None:
            return 2*sum(self._diMadds.values()) + sum(self._diFlops.values())
        return 2*self._diMadds.get(_sOp, 0) + self._diFlops.get(_sOp, 0)


    def operations(self):
        """
        Return the operation labels seen so far

        @return list  Sorted operation labels
        """

        return sorted(set(self._diMadds) | set(self._diFlops))


    def peak(self, _sName):
        """
        Return the peak size of the given transient buffer

        @param str _sName  Buffer name

        @return int  Peak size (elements; 0 if never allocated)
        """

        return self._diPeak.get(_sName, 0)


    def retained(self, _sName = None):
        """
        Return the retained size (for the given buffer or in total)

        @param str _sName  Buffer name (None for total)

        @return int  Retained size (elements)
        """

        if _sName is None:
            return sum(self._diRetained.values())
        return self._diRetained.get(_sName, 0)


    def retainedNames(self):
        """
        Return the names of retained buffers

        @return list  Sorted buffer names
        """

        return sorted(self._diRetained)

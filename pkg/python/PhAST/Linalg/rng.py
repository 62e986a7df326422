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

# External
import numpy


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastLinalg_rng:
    """
    Seeded random number generator

    Backed by numpy's PCG64 bit generator, whose output sequence is fully
    determined by the seed, independently of the platform.
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _iSeed = 0):
        """
        Instantiate a new generator

        @param int _iSeed  Seed (non-negative)
        """

        # Properties
        if int(_iSeed) < 0:
            raise RuntimeError('Invalid seed (%s)' % _iSeed)
        self._iSeed = int(_iSeed)
        self._oGenerator = numpy.random.Generator(numpy.random.PCG64(self._iSeed))


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def seed(self):
        """
        Return the seed this generator was created with

        @return int  Seed
        """

        return self._iSeed


    def child(self, _iStream):
        """
        Return an independent generator derived from this generator's seed

        @param int _iStream  Stream index

        @return PhastLinalg_rng  Child generator
        """

        oChild = PhastLinalg_rng(self._iSeed)
        oChild._oGenerator = numpy.random.Generator(numpy.random.PCG64([self._iSeed, int(_iStream)]))
        return oChild


    def uniform(self, _tShape, _fLow = 0.0, _fHigh = 1.0, _oDtype = numpy.float64):
        """
        Return uniformly distributed values in [low, high)

        @param tuple _tShape  Output shape
        @param float _fLow    Lower bound
        @param float _fHigh   Upper bound
        @param type  _oDtype  Floating-point type

        @return numpy.ndarray  Values
        """

        return self._oGenerator.uniform(_fLow, _fHigh, _tShape).astype(_oDtype)


    def normal(self, _tShape, _fScale = 1.0, _oDtype = numpy.float64):
        """
        Return normally distributed values (zero mean)

        @param tuple _tShape  Output shape
        @param float _fScale  Standard deviation
        @param type  _oDtype  Floating-point type

        @return numpy.ndarray  Values
        """

        return (self._oGenerator.standard_normal(_tShape) * _fScale).astype(_oDtype)


    def permutation(self, _iCount):
        """
        Return a random permutation of 0..count-1

        @param int _iCount  Count

        @return numpy.ndarray  Permuted indices
        """

        return self._oGenerator.permutation(_iCount)


    def sample(self, _iCount, _iSize):
        """
        Return a uniform sample without replacement of size indices among
        0..count-1 (in random order)

        @param int _iCount  Population size
        @param int _iSize   Sample size

        @return numpy.ndarray  Sampled indices

        @exception RuntimeError  On invalid sample size
        """

        if _iSize < 1 or _iSize > _iCount:
            raise RuntimeError('Invalid sample size (%d); population size is %d' % (_iSize, _iCount))
        return self._oGenerator.choice(_iCount, size=_iSize, replace=False)

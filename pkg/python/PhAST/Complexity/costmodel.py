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
from PhAST.Linalg import \
     PhastLinalg
from PhAST.Runtime import \
     PhastObject, \
     PhastRuntime


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastComplexity_term:
    """
    Cost term of one Physics-Attention operation

    Costs are polynomials over the symbols N (points), N_t (tile size),
    M (slices) and C (per-head channels); each monomial is a
    (coefficient, {symbol: exponent}) tuple. Time polynomials count
    multiply-adds; softmax FLOPs are carried separately. Space polynomials
    count elements.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    N_SYMBOLS = ('N', 'N_t')


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _sOp, _sLabel, _sTimeOrder, _sSpaceOrder, _ltMadds, _ltSoftmax, _ltSpace):
        """
        Instantiate a new cost term

        @param str  _sOp          Operation name (counters label)
        @param str  _sLabel       Operation label (as displayed in complexity tables)
        @param str  _sTimeOrder   Time complexity (big-O display)
        @param str  _sSpaceOrder  Space complexity (big-O display)
        @param list _ltMadds      Multiply-adds polynomial
        @param list _ltSoftmax    Softmax elements polynomial
        @param list _ltSpace      Space polynomial
        """

        # Properties
        self.op_name = _sOp
        self.label = _sLabel
        self.time_order = _sTimeOrder
        self.space_order = _sSpaceOrder
        self.madds_poly = _ltMadds
        self.softmax_poly = _ltSoftmax
        self.space_poly = _ltSpace
        self.n_dependent = self._dependsOnN(_ltMadds + _ltSoftmax)
        self.n_dependent_space = self._dependsOnN(_ltSpace)


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def _dependsOnN(self, _ltPoly):
        for (iCoefficient, diExponents) in _ltPoly:
            for sSymbol in self.N_SYMBOLS:
                if diExponents.get(sSymbol, 0) > 0:
                    return True
        return False


    def _evaluate(self, _ltPoly, _diValues):
        iTotal = 0
        for (iCoefficient, diExponents) in _ltPoly:
            iMonomial = iCoefficient
            for (sSymbol, iExponent) in diExponents.items():
                iMonomial *= _diValues[sSymbol]**iExponent
            iTotal += iMonomial
        return iTotal


    def madds(self, _diValues):
        """
        Evaluate the multiply-adds count

        @param dict _diValues  Symbols values

        @return int  Multiply-adds
        """

        return self._evaluate(self.madds_poly, _diValues)


    def timeFlops(self, _diValues):
        """
        Evaluate the time cost in FLOPs (multiply-add = 2 FLOPs, softmax =
        4 FLOPs per element)

        @param dict _diValues  Symbols values

        @return int  FLOPs
        """

        return 2*self._evaluate(self.madds_poly, _diValues) + PhastLinalg.SOFTMAX_FLOPS*self._evaluate(self.softmax_poly, _diValues)


    def space(self, _diValues):
        """
        Evaluate the space cost

        @param dict _diValues  Symbols values

        @return int  Elements
        """

        return self._evaluate(self.space_poly, _diValues)


class PhastComplexity_report:
    """
    Cost report of one Physics-Attention variant
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _sVariant, _loTerms, _diValues, _iHeads, _iLayers, _iBytes):

        # Properties
        self.variant = _sVariant
        self.terms = _loTerms
        self.values = _diValues
        self.heads = _iHeads
        self.layers = _iLayers
        self.bytes = _iBytes
        self.n_related_time = len([oTerm for oTerm in _loTerms if oTerm.n_dependent])
        self.n_related_space = len([oTerm for oTerm in _loTerms if oTerm.n_dependent_space])


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def madds(self, _sOp = None):
        """
        Return the multiply-adds of one head of one layer (for the given
        operation or in total)

        @param str _sOp  Operation name (None for total)

        @return int  Multiply-adds
        """

        return sum([oTerm.madds(self.values) for oTerm in self.terms if _sOp is None or oTerm.op_name == _sOp])


    def totalFlops(self):
        """
        Return the time cost of the whole stack (all heads, all layers)

        @return int  FLOPs
        """

        return self.heads * self.layers * sum([oTerm.timeFlops(self.values) for oTerm in self.terms])


    def totalBytes(self):
        """
        Return the summed space cost of the whole stack (all heads, all layers)

        @return int  Bytes
        """

        return self.bytes * self.heads * self.layers * sum([oTerm.space(self.values) for oTerm in self.terms])


    def rows(self):
        """
        Return the report rows: (variant, op, time_flops, space_bytes, n_dependent)
        for the whole stack (all heads, all layers)

        @return list  Rows
        """

        iScale = self.heads * self.layers
        return [
            (self.variant, oTerm.op_name, iScale*oTerm.timeFlops(self.values), iScale*self.bytes*oTerm.space(self.values), oTerm.n_dependent)
            for oTerm in self.terms
        ]


    def toString(self):
        """
        Return the report as a human-friendly table

        @return str  Report
        """

        s = '%s Physics-Attention (N=%d, N_t=%d, M=%d, C_h=%d, H=%d, L=%d)\n' % (
            self.variant, self.values['N'], self.values['N_t'], self.values['M'], self.values['C'], self.heads, self.layers)
        s += '%-28s %-14s %-14s\n' % ('Operation', 'Time', 'Space')
        for oTerm in self.terms:
            s += '%-28s %-14s %-14s\n' % (oTerm.label, oTerm.time_order, oTerm.space_order)
        s += '%-28s %-14d %-14d\n' % ('N-Related Terms', self.n_related_time, self.n_related_space)
        return s


class PhastComplexity_costmodel(PhastObject):
    """
    Symbolic time/space cost model of Physics-Attention

    Variants:
     - 'original':  Linear1 on all points, (w d^-1)^T x_proj, Linear3 on all points
     - 'optimized': faster slice and deslice (Linear1/Linear3 in the slice domain)
     - 'tiled':     'optimized' with geometry slice tiling (slice weights
                    computed twice, tile by tile; O(N_t M) weights storage)

    The per-operation multiply-adds match exactly what the Physics-Attention
    kernels report to the operations counters.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    VARIANTS = ('original', 'optimized', 'tiled')


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self):
        PhastObject.__init__(self)


    def _tag(self):
        return 'CX'


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def terms(self, _sVariant):
        """
        Return the cost terms of the given variant

        @param str _sVariant  Variant ('original', 'optimized' or 'tiled')

        @return list  Cost terms (PhastComplexity_term)

        @exception RuntimeError  On invalid variant
        """

        # Shared: states attention (Q, K, V, O projections + scores + mixing)
        oAttention = PhastComplexity_term(
            'attention', 'Attention(s)', 'O(M^2 C)', 'O(M^2+MC)',
            [(4, {'M': 1, 'C': 2}), (2, {'M': 2, 'C': 1})],
            [(1, {'M': 2})],
            [(1, {'M': 2}), (4, {'M': 1, 'C': 1})],
        )

        if _sVariant == 'original':
            return [
                PhastComplexity_term(
                    'linear1', 'Linear1(x)', 'O(N C^2)', 'O(NC)',
                    [(1, {'N': 1, 'C': 2})], [], [(1, {'N': 1, 'C': 1})]),
                PhastComplexity_term(
                    'linear2', 'Softmax(Linear2(x))', 'O(NCM)', 'O(NM)',
                    [(1, {'N': 1, 'C': 1, 'M': 1})], [(1, {'N': 1, 'M': 1})], [(1, {'N': 1, 'M': 1})]),
                PhastComplexity_term(
                    'slice', '(w d^-1)^T x_proj', 'O(NMC)', 'O(MC)',
                    [(1, {'N': 1, 'M': 1, 'C': 1})], [], [(1, {'M': 1, 'C': 1}), (1, {'M': 1})]),
                oAttention,
                PhastComplexity_term(
                    'deslice', 'w s\'', 'O(NMC)', 'O(NC)',
                    [(1, {'N': 1, 'M': 1, 'C': 1})], [], [(1, {'M': 1, 'C': 1}), (1, {'N': 1, 'C': 1})]),
                PhastComplexity_term(
                    'linear3', 'Linear3(w s\')', 'O(N C^2)', 'O(NC)',
                    [(1, {'N': 1, 'C': 2})], [], [(1, {'N': 1, 'C': 1})]),
            ]

        elif _sVariant in ('optimized', 'tiled'):
            bTiled = _sVariant == 'tiled'
            sPoints = 'N_t' if bTiled else 'N'
            return [
                PhastComplexity_term(
                    'linear2', 'Softmax(Linear2(x))', 'O(NCM)', 'O(%sM)' % sPoints,
                    [(2 if bTiled else 1, {'N': 1, 'C': 1, 'M': 1})],
                    [(2 if bTiled else 1, {'N': 1, 'M': 1})],
                    [(1, {sPoints: 1, 'M': 1})]),
                PhastComplexity_term(
                    'slice', 'w^T x', 'O(NMC)', 'O(MC)',
                    [(1, {'N': 1, 'M': 1, 'C': 1})], [], [(1, {'M': 1, 'C': 1}), (1, {'M': 1})]),
                PhastComplexity_term(
                    'linear1', 'Linear1(s_raw d^-1)', 'O(M C^2)', 'O(MC)',
                    [(1, {'M': 1, 'C': 2})], [], [(2, {'M': 1, 'C': 1})]),
                oAttention,
                PhastComplexity_term(
                    'linear3', 'Linear3(s\')', 'O(M C^2)', 'O(MC)',
                    [(1, {'M': 1, 'C': 2})], [], [(2, {'M': 1, 'C': 1})]),
                PhastComplexity_term(
                    'deslice', 'w s\'_out', 'O(NMC)', 'O(NC)',
                    [(1, {'N': 1, 'M': 1, 'C': 1})], [], [(1, {'N': 1, 'C': 1})]),
            ]

        raise RuntimeError('Invalid cost model variant (%s); expected one of: %s' % (_sVariant, '|'.join(self.VARIANTS)))


    def report(self, _sVariant, _iPoints, _iSlices, _iChannels, _iHeads = 1, _iLayers = 1, _iTileSize = None, _sPrecision = 'f64'):
        """
        Evaluate the cost model of the given variant at the given configuration

        @param str _sVariant    Variant ('original', 'optimized' or 'tiled')
        @param int _iPoints     Points count (N)
        @param int _iSlices     Slices count (M)
        @param int _iChannels   Channels count (C; split among heads)
        @param int _iHeads      Heads count (H)
        @param int _iLayers     Layers count (L)
        @param int _iTileSize   Tile size (N_t; defaults to N)
        @param str _sPrecision  Precision ('f64' or 'f32')

        @return PhastComplexity_report  Cost report

        @exception RuntimeError  On invalid dimensions
        """

        for (sName, iValue) in [('N', _iPoints), ('M', _iSlices), ('C', _iChannels), ('H', _iHeads), ('L', _iLayers)]:
            if iValue is None or int(iValue) < 1:
                raise RuntimeError('Invalid cost model dimension %s (%s)' % (sName, iValue))
        if _iChannels % _iHeads:
            raise RuntimeError('Channels count (%d) is not divisible by heads count (%d)' % (_iChannels, _iHeads))
        iTileSize = _iPoints if _iTileSize is None else min(int(_iTileSize), _iPoints)
        if iTileSize < 1:
            raise RuntimeError('Invalid tile size (%s)' % _iTileSize)
        diValues = {'N': int(_iPoints), 'N_t': iTileSize, 'M': int(_iSlices), 'C': int(_iChannels) // int(_iHeads)}
        iBytes = PhastRuntime.dtype(_sPrecision)(0).itemsize
        if self._iVerbose: self._DEBUG('Evaluating %s cost model at %s' % (_sVariant, diValues))
        return PhastComplexity_report(_sVariant, self.terms(_sVariant), diValues, int(_iHeads), int(_iLayers), iBytes)

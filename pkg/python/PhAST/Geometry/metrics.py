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
from PhAST.Runtime import \
     PhastNumericError

# External
import numpy


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastGeometry_metrics:
    """
    Field and coefficient accuracy metrics:
     - relative L2: |y_hat - y| / |y| (jointly over all columns)
     - R2: 1 - sum (y - y_hat)^2 / sum (y - y_mean)^2 (per column)
     - MAE: mean |y - y_hat| (per column)
    """

    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    def columns(_aPrediction, _aTruth):
        aPrediction = numpy.asarray(_aPrediction, dtype=numpy.float64)
        aTruth = numpy.asarray(_aTruth, dtype=numpy.float64)
        if aPrediction.shape != aTruth.shape:
            raise RuntimeError('Invalid prediction shape (%s); expected %s' % (aPrediction.shape, aTruth.shape))
        if aTruth.ndim == 1:
            return (aPrediction[:, None], aTruth[:, None])
        return (aPrediction, aTruth)


    def relL2(_aPrediction, _aTruth):
        """
        Relative L2 error

        @return float  Error

        @exception PhastNumericError  On zero-norm truth
        """

        (aPrediction, aTruth) = PhastGeometry_metrics.columns(_aPrediction, _aTruth)
        fTruth = float(numpy.linalg.norm(aTruth))
        if fTruth == 0.0:
            raise PhastNumericError('Degenerate truth; zero norm')
        return float(numpy.linalg.norm(aPrediction - aTruth)) / fTruth


    def meanRelL2(_ltPairs):
        """
        Mean relative L2 error over several samples

        @param list _ltPairs  (prediction, truth) pairs

        @return float  Mean error

        @exception RuntimeError  On empty list
        """

        if not _ltPairs:
            raise RuntimeError('Invalid samples list; at least one sample is required')
        return float(numpy.mean([PhastGeometry_metrics.relL2(aPrediction, aTruth) for (aPrediction, aTruth) in _ltPairs]))


    def r2(_aPrediction, _aTruth):
        """
        Coefficient of determination, per column

        @return list  R2 per column (None where the truth is constant or has
                      less than two samples)
        """

        (aPrediction, aTruth) = PhastGeometry_metrics.columns(_aPrediction, _aTruth)
        lfR2 = list()
        for iColumn in range(aTruth.shape[1]):
            aColumn = aTruth[:, iColumn]
            fTotal = float(numpy.sum((aColumn - numpy.mean(aColumn))**2)) if aColumn.size else 0.0
            if aColumn.size < 2 or fTotal == 0.0:
                lfR2.append(None)
                continue
            lfR2.append(1.0 - float(numpy.sum((aColumn - aPrediction[:, iColumn])**2)) / fTotal)
        return lfR2


    def mae(_aPrediction, _aTruth):
        """
        Mean absolute error, per column

        @return list  MAE per column
        """

        (aPrediction, aTruth) = PhastGeometry_metrics.columns(_aPrediction, _aTruth)
        if not aTruth.shape[0]:
            return [0.0] * aTruth.shape[1]
        return [float(f) for f in numpy.mean(numpy.abs(aTruth - aPrediction), axis=0)]


    def metrics(_aPrediction, _aTruth):
        """
        All metrics

        @return dict  {'rel_l2': float, 'r2': list, 'mae': list}
        """

        return {
            'rel_l2': PhastGeometry_metrics.relL2(_aPrediction, _aTruth),
            'r2': PhastGeometry_metrics.r2(_aPrediction, _aTruth),
            'mae': PhastGeometry_metrics.mae(_aPrediction, _aTruth),
        }

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

class PhastGeometry_flow:
    """
    Free-stream constants (FlowConstants)

    Drag and lift directions are normalized at construction.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    KEYS = ('p_inf', 'rho_inf', 'v_inf', 'a_ref', 'drag_dir', 'lift_dir')


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, p_inf = 0.0, rho_inf = 1.0, v_inf = 1.0, a_ref = 1.0, drag_dir = (1.0, 0.0, 0.0), lift_dir = (0.0, 0.0, 1.0)):

        # Properties
        self.p_inf = float(p_inf)
        self.rho_inf = float(rho_inf)
        self.v_inf = float(v_inf)
        self.a_ref = float(a_ref)
        self.drag_dir = PhastGeometry_flow.unit(drag_dir)
        self.lift_dir = PhastGeometry_flow.unit(lift_dir)


    def __str__(self):
        return ''.join(['%s=%s\n' % (sKey, getattr(self, sKey)) for sKey in self.KEYS])


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def verify(self):
        """
        Verify the constants

        @return list  Empty if constants are valid, (ordered) error messages otherwise
        """

        lsErrors = list()
        for sKey in ('rho_inf', 'v_inf', 'a_ref'):
            if not getattr(self, sKey) > 0.0:
                lsErrors.append('Invalid "%s" value (%s); expected positive real' % (sKey, getattr(self, sKey)))
        for sKey in ('drag_dir', 'lift_dir'):
            aDirection = getattr(self, sKey)
            if aDirection.shape != (3,) or not numpy.all(numpy.isfinite(aDirection)):
                lsErrors.append('Invalid "%s" value; expected non-zero 3-vector' % sKey)
        return lsErrors


    def check(self):
        """
        @exception RuntimeError  On invalid constants
        """

        lsErrors = self.verify()
        if lsErrors:
            raise RuntimeError('Invalid flow constants; %s' % '; '.join(lsErrors))


    def dynamicPressure(self):
        """
        Return the reference force scale 1/2 rho_inf v_inf^2 A_ref

        @return float  Scale
        """

        return 0.5 * self.rho_inf * self.v_inf**2 * self.a_ref


    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    def unit(_mVector):
        aVector = numpy.asarray(_mVector, dtype=numpy.float64).reshape(-1)
        fNorm = float(numpy.linalg.norm(aVector))
        if fNorm == 0.0:
            return numpy.full(aVector.shape, numpy.nan)
        return aVector / fNorm


class PhastGeometry_quadrature:
    """
    Surface quadrature of the aerodynamic force:

      F = sum_i [ -(p_i - p_inf) n_i + tau_i ] dS_i
      Cd = F.d / (1/2 rho_inf v_inf^2 A_ref);  Cl = F.l / (...)
    """

    #--------------------------------------------------------------------------
    # HELPERS
    #--------------------------------------------------------------------------

    def integrateForce(_oMesh, _aPressure, _aShear, _oFlow):
        """
        Integrate the surface force and derive drag and lift coefficients

        @param PhastGeometry_mesh _oMesh      Mesh (with normals and areas)
        @param numpy.ndarray      _aPressure  Pressure [N] (or [N x 1])
        @param numpy.ndarray      _aShear     Wall shear stress [N x 3] (None for zero)
        @param PhastGeometry_flow _oFlow      Free-stream constants

        @return (numpy.ndarray, float, float)  Force [3], Cd, Cl

        @exception RuntimeError  On missing normals/areas or shape mismatch
        """

        if _oMesh.normals is None or _oMesh.areas is None:
            raise RuntimeError('Invalid mesh; normals and areas are required for force integration')
        _oFlow.check()
        aPressure = numpy.asarray(_aPressure, dtype=numpy.float64).reshape(-1)
        if aPressure.shape[0] != _oMesh.points():
            raise RuntimeError('Invalid pressure length (%d); expected %d' % (aPressure.shape[0], _oMesh.points()))
        aTraction = -(aPressure - _oFlow.p_inf)[:, None] * _oMesh.normals
        if _aShear is not None:
            aShear = numpy.asarray(_aShear, dtype=numpy.float64)
            if aShear.shape != (_oMesh.points(), 3):
                raise RuntimeError('Invalid shear shape (%s); expected (%d, 3)' % (aShear.shape, _oMesh.points()))
            aTraction = aTraction + aShear
        aForce = numpy.sum(aTraction * _oMesh.areas[:, None], axis=0)
        fScale = _oFlow.dynamicPressure()
        return (aForce, float(aForce @ _oFlow.drag_dir) / fScale, float(aForce @ _oFlow.lift_dir) / fScale)


    def normalsSum(_oMesh):
        """
        Return the closed-surface residual sum_i n_i dS_i (zero for an exact
        closed surface quadrature)

        @return numpy.ndarray  Residual [3]
        """

        if _oMesh.normals is None or _oMesh.areas is None:
            raise RuntimeError('Invalid mesh; normals and areas are required')
        return numpy.sum(_oMesh.normals * _oMesh.areas[:, None], axis=0)


    def convergence(_fReference, _liSizes, _fEstimate, _oRng, _iRepeats = 1):
        """
        Quadrature error versus sample size

        The error at each size is the root-mean-square of |estimate - reference|
        over the given repeats (each repeat drawing an independent sample).

        @param float           _fReference  Reference value
        @param list            _liSizes     Sample sizes (N_s)
        @param callable        _fEstimate   Estimator: (N_s, rng) -> float
        @param PhastLinalg_rng _oRng        Random number generator
        @param int             _iRepeats    Repeats per size

        @return list  (N_s, error) pairs

        @exception RuntimeError  On invalid sizes or repeats
        """

        if len(_liSizes) < 1 or _iRepeats < 1:
            raise RuntimeError('Invalid convergence study; at least one size and one repeat are required')
        ltErrors = list()
        for (iIndex, iSize) in enumerate(_liSizes):
            oRng = _oRng.child(iIndex)
            lfErrors = [_fEstimate(iSize, oRng) - _fReference for iRepeat in range(_iRepeats)]
            ltErrors.append((iSize, float(numpy.sqrt(numpy.mean(numpy.square(lfErrors))))))
        return ltErrors


    def fitSlope(_ltErrors):
        """
        Least-squares slope of log(error) versus log(N_s); zero errors are
        excluded from the fit

        @param list _ltErrors  (N_s, error) pairs

        @return float  Slope (None if less than two non-zero errors remain)
        """

        ltFit = [(iSize, fError) for (iSize, fError) in _ltErrors if fError > 0.0]
        if len(ltFit) < 2:
            return None
        aLogSizes = numpy.log([float(t[0]) for t in ltFit])
        aLogErrors = numpy.log([t[1] for t in ltFit])
        return float(numpy.polyfit(aLogSizes, aLogErrors, 1)[0])

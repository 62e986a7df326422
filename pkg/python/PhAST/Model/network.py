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
from PhAST.Attention import \
     PhastAttention
from PhAST.Linalg import \
     PhastLinalg
from PhAST.Runtime import \
     PhastObject

# External
import numpy


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastModel_network(PhastObject):
    """
    Physics-Attention network: point embedding, L pre-norm Physics-Attention blocks
    and output head

      x0 = Embed(coords' | features)            (2-layer GELU MLP)
      for each layer:
        x = x + MultiHeadPhysAttn(LN1(x))
        x = x + FFN(LN2(x))                     (2-layer GELU MLP)
      y = Head(x) * target_std + target_mean

    Coordinates are min-max normalized to [0, 1] per axis (using the source
    mesh bounding box) and multiplied by the configured scale factor.

    When a tape (dictionary) is given, forward intermediates required by the
    backward pass are stored in it.
    """

    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _oParams):
        """
        Instantiate a network over the given parameters

        @param PhastModel_params _oParams  Parameters
        """
        PhastObject.__init__(self)

        # Properties
        self.params = _oParams
        self.config = _oParams.config


    def _tag(self):
        return 'M'


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    #
    # Input
    #

    def inputs(self, _oMesh):
        """
        Return the embedding input: normalized coordinates and input features

        @param PhastGeometry_mesh _oMesh  Mesh

        @return numpy.ndarray  Input [N x C_in]

        @exception RuntimeError  On input width mismatch or unknown bounds
        """

        iColumns = _oMesh.coords.shape[1] + _oMesh.features.shape[1]
        if iColumns != self.config.in_dim:
            raise RuntimeError('Invalid input; mesh provides %d columns (coordinates + features), model expects %d' % (iColumns, self.config.in_dim))
        oDtype = self.params.dtype()
        if not _oMesh.points():
            return numpy.zeros((0, self.config.in_dim), dtype=oDtype)
        (aLo, aHi) = _oMesh.bounds()
        if aLo is None:
            raise RuntimeError('Invalid input; unknown mesh bounding box')
        aRange = aHi - aLo
        aScale = numpy.where(aRange > 0.0, 1.0 / numpy.where(aRange > 0.0, aRange, 1.0), 0.0) * self.config.coord_scale
        aCoords = (_oMesh.coords - aLo) * aScale
        return numpy.ascontiguousarray(numpy.concatenate([aCoords, _oMesh.features], axis=1), dtype=oDtype)


    #
    # Sub-layers
    #

    def embed(self, _aInput, _dTape = None):
        """
        Point embedding (C_in -> C)

        @param numpy.ndarray _aInput  Input [N x C_in]
        @param dict          _dTape   Backward tape (ignored if None)

        @return numpy.ndarray  Features [N x C]
        """

        aZ1 = PhastLinalg.linear(_aInput, self.params['embed.w1'], self.params['embed.b1'])
        aH1 = PhastLinalg.gelu(aZ1)
        aX = PhastLinalg.linear(aH1, self.params['embed.w2'], self.params['embed.b2'])
        if _dTape is not None:
            _dTape.update({'input': _aInput, 'z1': aZ1, 'h1': aH1})
        return aX


    def attention(self, _iLayer, _aX, _sMode, _iTileSize = None, _oCounter = None, _dTape = None, _bParallel = False):
        """
        Attention sub-layer: x + MultiHeadPhysAttn(LN1(x))

        @param int           _iLayer     Layer index
        @param numpy.ndarray _aX         Features [N x C]
        @param str           _sMode      Physics-Attention mode
        @param int           _iTileSize  Tile size ('tiled' mode only)
        @param object        _oCounter   Operations counter (ignored if None)
        @param dict          _dTape      Backward tape (ignored if None)
        @param bool          _bParallel  Process tiles in parallel

        @return numpy.ndarray  Features [N x C]
        """

        sLayer = 'layer%d.' % _iLayer
        (aA, aXhat, aRstd) = PhastLinalg.layerNormStats(_aX, self.params[sLayer+'ln1.gain'], self.params[sLayer+'ln1.shift'], self.config.ln_eps)
        ldHeads = None if _dTape is None else list()
        aY = _aX + PhastAttention.multihead(aA, self.params.heads(_iLayer), _sMode, _iTileSize, _oCounter, ldHeads, _bParallel)
        if _dTape is not None:
            _dTape.update({'x_in': _aX, 'ln1_xhat': aXhat, 'ln1_rstd': aRstd, 'a_in': aA, 'heads': ldHeads})
        return aY


    def attentionDecoded(self, _iLayer, _aX, _laSout, _oCounter = None):
        """
        Attention sub-layer, decoded against cached output states:
        x + Softmax(Linear2(LN1(x))) s'_out (per head)

        @param int           _iLayer    Layer index
        @param numpy.ndarray _aX        Features [N x C]
        @param list          _laSout    Per-head cached output states [M x C_h]
        @param object        _oCounter  Operations counter (ignored if None)

        @return numpy.ndarray  Features [N x C]
        """

        sLayer = 'layer%d.' % _iLayer
        aA = PhastLinalg.layerNorm(_aX, self.params[sLayer+'ln1.gain'], self.params[sLayer+'ln1.shift'], self.config.ln_eps)
        return _aX + PhastAttention.decode(aA, self.params.heads(_iLayer), _laSout, _oCounter)


    def normalizedAttentionInput(self, _iLayer, _aX):
        """
        Return the (layer-normalized) attention input of the given layer

        @param int           _iLayer  Layer index
        @param numpy.ndarray _aX      Features [N x C]

        @return numpy.ndarray  Normalized features [N x C]
        """

        sLayer = 'layer%d.' % _iLayer
        return PhastLinalg.layerNorm(_aX, self.params[sLayer+'ln1.gain'], self.params[sLayer+'ln1.shift'], self.config.ln_eps)


    def ffn(self, _iLayer, _aX, _dTape = None):
        """
        Feed-forward sub-layer: x + FFN(LN2(x))

        @param int           _iLayer  Layer index
        @param numpy.ndarray _aX      Features [N x C]
        @param dict          _dTape   Backward tape (ignored if None)

        @return numpy.ndarray  Features [N x C]
        """

        sLayer = 'layer%d.' % _iLayer
        (aF, aXhat, aRstd) = PhastLinalg.layerNormStats(_aX, self.params[sLayer+'ln2.gain'], self.params[sLayer+'ln2.shift'], self.config.ln_eps)
        aZ = PhastLinalg.linear(aF, self.params[sLayer+'ffn.w1'], self.params[sLayer+'ffn.b1'])
        aH = PhastLinalg.gelu(aZ)
        aY = _aX + PhastLinalg.linear(aH, self.params[sLayer+'ffn.w2'], self.params[sLayer+'ffn.b2'])
        if _dTape is not None:
            _dTape.update({'x_mid': _aX, 'ln2_xhat': aXhat, 'ln2_rstd': aRstd, 'f_in': aF, 'f_z': aZ, 'f_h': aH})
        return aY


    def head(self, _aX, _dTape = None):
        """
        Output head (C -> out_dim), with target de-standardization

        @param numpy.ndarray _aX     Features [N x C]
        @param dict          _dTape  Backward tape (ignored if None)

        @return numpy.ndarray  Output [N x out_dim]
        """

        aY = PhastLinalg.linear(_aX, self.params['head.w'], self.params['head.b'])
        if _dTape is not None:
            _dTape['x_final'] = _aX
        return aY * self.params.target_std + self.params.target_mean


    #
    # Network
    #

    def mode(self, _sMode = None):
        """
        Return the effective Physics-Attention mode

        @param str _sMode  Mode (None for configured mode)

        @return str  Mode
        """

        sMode = self.config.mode if _sMode is None else _sMode
        PhastAttention.checkMode(sMode)
        return sMode


    def forward(self, _oMesh, _sMode = None, _iTileSize = None, _oCounter = None, _dTape = None, _bParallel = False):
        """
        Network forward pass

        @param PhastGeometry_mesh _oMesh      Mesh
        @param str                _sMode      Physics-Attention mode (None for configured mode)
        @param int                _iTileSize  Tile size (None for configured tile size)
        @param object             _oCounter   Operations counter (ignored if None)
        @param dict               _dTape      Backward tape (ignored if None)
        @param bool               _bParallel  Process tiles in parallel

        @return numpy.ndarray  Output [N x out_dim]

        @exception RuntimeError       On input mismatch (naming the layer index)
        @exception PhastNumericError  On degenerate slice
        """

        sMode = self.mode(_sMode)
        aInput = self.inputs(_oMesh)
        iTileSize = _iTileSize if _iTileSize is not None else self.config.tileSize(aInput.shape[0])
        if self._iVerbose: self._DEBUG('Forward pass (N=%d, mode=%s, tile_size=%d)' % (aInput.shape[0], sMode, iTileSize))

        dEmbed = None if _dTape is None else dict()
        aX = self.embed(aInput, dEmbed)
        ldLayers = None if _dTape is None else list()
        for iLayer in range(self.config.layers):
            dLayer = None if _dTape is None else dict()
            try:
                aX = self.attention(iLayer, aX, sMode, iTileSize, _oCounter, dLayer, _bParallel)
                aX = self.ffn(iLayer, aX, dLayer)
            except RuntimeError as e:
                raise e.__class__('Layer %d; %s' % (iLayer, str(e))) from e
            if _dTape is not None:
                ldLayers.append(dLayer)
        if _dTape is not None:
            _dTape.update({'mode': sMode, 'tile_size': iTileSize, 'embed': dEmbed, 'layers': ldLayers})
        return self.head(aX, _dTape)

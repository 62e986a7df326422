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


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastModel_config:
    """
    Model configuration

    Attributes:
     - layers (L), heads (H), channels (C), slices (M)
     - in_dim (C_in; coordinates and input features, concatenated)
     - out_dim, ffn_hidden
     - mode ('original', 'fast' or 'tiled') and tile_size (0 = untiled)
     - bias (Linear1/Linear3 biases), coord_scale (post min-max scaling)
     - ln_eps (layer normalization epsilon)
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    KEYS = ('layers', 'heads', 'channels', 'slices', 'in_dim', 'out_dim', 'ffn_hidden', 'mode', 'tile_size', 'bias', 'coord_scale', 'ln_eps')


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, layers = 2, heads = 2, channels = 32, slices = 16, in_dim = 3, out_dim = 1, ffn_hidden = 64,
                 mode = 'fast', tile_size = 0, bias = True, coord_scale = 1.0, ln_eps = 1e-5):

        # Properties
        self.layers = int(layers)
        self.heads = int(heads)
        self.channels = int(channels)
        self.slices = int(slices)
        self.in_dim = int(in_dim)
        self.out_dim = int(out_dim)
        self.ffn_hidden = int(ffn_hidden)
        self.mode = str(mode)
        self.tile_size = int(tile_size)
        self.bias = bool(bias)
        self.coord_scale = float(coord_scale)
        self.ln_eps = float(ln_eps)


    def __str__(self):
        return self.toString()


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def toString(self):
        """
        Return the configuration in a human-friendly string

        @return str  Configuration
        """

        return ''.join(['%s=%s\n' % (sKey, getattr(self, sKey)) for sKey in self.KEYS])


    def toDict(self):
        """
        Return the configuration as a (JSON-serializable) dictionary

        @return dict  Configuration
        """

        return {sKey: getattr(self, sKey) for sKey in self.KEYS}


    def copy(self, **_dmOverrides):
        """
        Return a copy of this configuration, with the given overrides

        @return PhastModel_config  Configuration
        """

        dmConfig = self.toDict()
        dmConfig.update(_dmOverrides)
        return PhastModel_config(**dmConfig)


    def verify(self):
        """
        Verify the configuration

        @return list  Empty if configuration is valid, (ordered) error messages otherwise
        """

        lsErrors = list()
        for sKey in ('heads', 'channels', 'slices', 'in_dim', 'out_dim', 'ffn_hidden'):
            if getattr(self, sKey) < 1:
                lsErrors.append('Invalid "%s" value (%s); expected positive integer' % (sKey, getattr(self, sKey)))
        if self.layers < 0:
            lsErrors.append('Invalid "layers" value (%s); expected non-negative integer' % self.layers)
        if self.heads >= 1 and self.channels % self.heads:
            lsErrors.append('Channels count (%d) is not divisible by heads count (%d)' % (self.channels, self.heads))
        if self.mode not in PhastAttention.MODES:
            lsErrors.append('Invalid "mode" value (%s); expected one of: %s' % (self.mode, '|'.join(PhastAttention.MODES)))
        if self.tile_size < 0:
            lsErrors.append('Invalid "tile_size" value (%s); expected non-negative integer (0 = untiled)' % self.tile_size)
        if not self.coord_scale > 0.0:
            lsErrors.append('Invalid "coord_scale" value (%s); expected positive real' % self.coord_scale)
        if not self.ln_eps > 0.0:
            lsErrors.append('Invalid "ln_eps" value (%s); expected positive real' % self.ln_eps)
        return lsErrors


    def check(self):
        """
        Verify the configuration, raising on error

        @exception RuntimeError  On invalid configuration
        """

        lsErrors = self.verify()
        if lsErrors:
            raise RuntimeError('Invalid model configuration; %s' % '; '.join(lsErrors))


    def headChannels(self):
        """
        Return the per-head channels count (C_h)

        @return int  Per-head channels count
        """

        return PhastAttention.headChannels(self.channels, self.heads)


    def tileSize(self, _iPoints):
        """
        Return the effective tile size for the given points count

        @param int _iPoints  Points count (N)

        @return int  Tile size (N if untiled)
        """

        if self.tile_size <= 0:
            return max(_iPoints, 1)
        return min(self.tile_size, max(_iPoints, 1))


#------------------------------------------------------------------------------
# FACTORY
#------------------------------------------------------------------------------

def phastModelConfig(_dmConfig):
    """
    Create a model configuration from the given dictionary

    @param dict _dmConfig  Configuration (see PhastModel_config.KEYS)

    @return PhastModel_config  Configuration

    @exception RuntimeError  On unknown key or invalid configuration
    """

    lsUnknown = sorted(set(_dmConfig) - set(PhastModel_config.KEYS))
    if lsUnknown:
        raise RuntimeError('Unknown model configuration key(s): %s' % ', '.join(lsUnknown))
    oConfig = PhastModel_config(**_dmConfig)
    oConfig.check()
    return oConfig

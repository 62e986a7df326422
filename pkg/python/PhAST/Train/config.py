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
# CLASSES
#------------------------------------------------------------------------------

class PhastTrain_config:
    """
    Training configuration

    Optimizer is AdamW; learning rate follows a linear warm-up (fraction
    of all steps) then a cosine decay down to lr_min.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    KEYS = ('seed', 'epochs', 'lr', 'lr_min', 'warmup', 'weight_decay', 'betas', 'eps', 'subset_size', 'grad_clip', 'normalize_targets', 'val_every')
    OPTIMIZER = 'adamw'


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, seed = 0, epochs = 200, lr = 1e-3, lr_min = 1e-6, warmup = 0.05, weight_decay = 0.05, betas = (0.9, 0.999),
                 eps = 1e-8, subset_size = 2048, grad_clip = 1.0, normalize_targets = True, val_every = 1):

        # Properties
        self.seed = int(seed)
        self.epochs = int(epochs)
        self.lr = float(lr)
        self.lr_min = float(lr_min)
        self.warmup = float(warmup)
        self.weight_decay = float(weight_decay)
        self.betas = tuple([float(f) for f in betas])
        self.eps = float(eps)
        self.subset_size = int(subset_size)
        self.grad_clip = float(grad_clip)
        self.normalize_targets = bool(normalize_targets)
        self.val_every = int(val_every)


    def __str__(self):
        return self.toString()


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def toString(self):
        return ''.join(['%s=%s\n' % (sKey, getattr(self, sKey)) for sKey in self.KEYS])


    def toDict(self):
        return {sKey: getattr(self, sKey) for sKey in self.KEYS}


    def verify(self):
        """
        Verify the configuration

        @return list  Empty if configuration is valid, (ordered) error messages otherwise
        """

        lsErrors = list()
        if self.seed < 0:
            lsErrors.append('Invalid "seed" value (%s); expected non-negative integer' % self.seed)
        if self.epochs < 0:
            lsErrors.append('Invalid "epochs" value (%s); expected non-negative integer' % self.epochs)
        if self.lr < 0.0:
            lsErrors.append('Invalid "lr" value (%s); expected non-negative real' % self.lr)
        if self.lr_min < 0.0:
            lsErrors.append('Invalid "lr_min" value (%s); expected non-negative real' % self.lr_min)
        if not 0.0 <= self.warmup < 1.0:
            lsErrors.append('Invalid "warmup" value (%s); expected fraction in [0, 1)' % self.warmup)
        if self.weight_decay < 0.0:
            lsErrors.append('Invalid "weight_decay" value (%s); expected non-negative real' % self.weight_decay)
        if len(self.betas) != 2 or not all([0.0 <= f < 1.0 for f in self.betas]):
            lsErrors.append('Invalid "betas" value (%s); expected two reals in [0, 1)' % (self.betas,))
        if not self.eps > 0.0:
            lsErrors.append('Invalid "eps" value (%s); expected positive real' % self.eps)
        if self.subset_size < 1:
            lsErrors.append('Invalid "subset_size" value (%s); expected positive integer' % self.subset_size)
        if self.grad_clip < 0.0:
            lsErrors.append('Invalid "grad_clip" value (%s); expected non-negative real (0 = no clipping)' % self.grad_clip)
        if self.val_every < 0:
            lsErrors.append('Invalid "val_every" value (%s); expected non-negative integer (0 = last epoch only)' % self.val_every)
        return lsErrors


    def check(self):
        """
        Verify the configuration, raising on error

        @exception RuntimeError  On invalid configuration
        """

        lsErrors = self.verify()
        if lsErrors:
            raise RuntimeError('Invalid training configuration; %s' % '; '.join(lsErrors))

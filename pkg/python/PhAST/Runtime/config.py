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
     PHAST_CONFIG_FILE, \
     PHAST_OUTPUT_DIR, \
     PHAST_RUNCONFIG_FILE, \
     PHAST_PRECISION
from PhAST.Runtime.runtime import \
     PhastObject, \
     PhastRuntime

# Standard
import configparser
import os
import os.path


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastRuntime_config(PhastObject):
    """
    Run configuration object

    Settings are organized in sections, each setting having a type and a
    default value; the configuration file (INI syntax) and command-line
    overrides are merged on top of the defaults.
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    # Settings: section -> [(key, type, default)]
    #   types: 'int', 'float', 'bool', 'str', 'floats' (comma-separated list)
    SETTINGS = {
        'PhAST': [
            ('seed', 'int', 0),
            ('precision', 'str', PHAST_PRECISION),
            ('parallel', 'bool', False),
            ('out_dir', 'str', PHAST_OUTPUT_DIR),
        ],
        'model': [
            ('layers', 'int', 2),
            ('heads', 'int', 2),
            ('channels', 'int', 32),
            ('slices', 'int', 16),
            ('in_dim', 'int', 3),
            ('out_dim', 'int', 1),
            ('ffn_hidden', 'int', 64),
            ('mode', 'str', 'fast'),
            ('tile_size', 'int', 0),
            ('bias', 'bool', True),
            ('coord_scale', 'float', 1.0),
            ('ln_eps', 'float', 1e-5),
        ],
        'train': [
            ('epochs', 'int', 200),
            ('lr', 'float', 1e-3),
            ('lr_min', 'float', 1e-6),
            ('warmup', 'float', 0.05),
            ('weight_decay', 'float', 0.05),
            ('betas', 'floats', [0.9, 0.999]),
            ('eps', 'float', 1e-8),
            ('subset_size', 'int', 2048),
            ('grad_clip', 'float', 1.0),
            ('normalize_targets', 'bool', True),
            ('val_every', 'int', 1),
        ],
        'inference': [
            ('chunk_size', 'int', 4096),
            ('spill_dir', 'str', ''),
        ],
        'flow': [
            ('p_inf', 'float', 0.0),
            ('rho_inf', 'float', 1.0),
            ('v_inf', 'float', 1.0),
            ('a_ref', 'float', 1.0),
            ('drag_dir', 'floats', [1.0, 0.0, 0.0]),
            ('lift_dir', 'floats', [0.0, 0.0, 1.0]),
        ],
    }


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self, _sConfigFile = None):
        PhastObject.__init__(self)

        # Properties
        self._sConfigFile = _sConfigFile
        self._ddConfig = dict()
        for sSection in self.SETTINGS:
            self._ddConfig[sSection] = {tSetting[0]: tSetting[2] for tSetting in self.SETTINGS[sSection]}


    def __str__(self):
        return self.toString()


    def _tag(self):
        return 'C'


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    def toString(self):
        """
        Return the configuration (INI syntax)

        @return str  Configuration
        """

        s = ''
        for sSection in self.SETTINGS:
            s += '[%s]\n' % sSection
            for (sKey, sType, mDefault) in self.SETTINGS[sSection]:
                mValue = self._ddConfig[sSection][sKey]
                if sType == 'floats':
                    s += '%s=%s\n' % (sKey, ','.join([PhastRuntime.formatReal(f) for f in mValue]))
                elif sType == 'float':
                    s += '%s=%s\n' % (sKey, PhastRuntime.formatReal(mValue))
                elif sType == 'bool':
                    s += '%s=%s\n' % (sKey, 'true' if mValue else 'false')
                else:
                    s += '%s=%s\n' % (sKey, mValue)
            s += '\n'
        return s


    #
    # Setters
    #

    def __cast(self, _sSection, _sKey, _mValue):
        for (sKey, sType, mDefault) in self.SETTINGS[_sSection]:
            if sKey != _sKey:
                continue
            if not isinstance(_mValue, str):
                return _mValue
            try:
                if sType == 'int':
                    return int(_mValue)
                elif sType == 'float':
                    return float(_mValue)
                elif sType == 'bool':
                    return PhastRuntime.parseBool(_mValue)
                elif sType == 'floats':
                    return PhastRuntime.parseList(_mValue, float)
                return _mValue.strip()
            except ValueError as e:
                raise RuntimeError('[%s] Invalid "%s" value (%s); expected %s' % (_sSection, _sKey, _mValue, sType))
        raise RuntimeError('[%s] Unknown setting "%s"' % (_sSection, _sKey))


    def load(self):
        """
        Load the configuration from disk (if any)

        Without an explicit file, the default configuration file is loaded
        only if it exists.

        @return list  Empty if configuration is successfully loaded, (ordered) error messages otherwise
        """
        if self._iVerbose: self._INFO('Loading configuration')
        lsErrors = list()

        sConfigFile = self._sConfigFile
        if sConfigFile is None:
            if not os.path.isfile(PHAST_CONFIG_FILE):
                if self._iVerbose: self._DEBUG('No configuration file; using defaults')
                return lsErrors
            sConfigFile = PHAST_CONFIG_FILE

        try:

            # Load configuration from file
            with open(sConfigFile, 'r') as oFile:
                oConfig = configparser.RawConfigParser()
                oConfig.read_file(oFile, sConfigFile)

            # Parse sections
            for sSection in oConfig.sections():
                if sSection not in self.SETTINGS:
                    lsErrors.append('<%s> Unknown configuration section [%s]' % (sConfigFile, sSection))
                    continue
                for (sKey, sValue) in oConfig.items(sSection):
                    try:
                        self._ddConfig[sSection][sKey] = self.__cast(sSection, sKey, sValue)
                    except RuntimeError as e:
                        lsErrors.append('<%s> %s' % (sConfigFile, str(e)))

            # Done
            if self._iVerbose: self._INFO('Configuration loaded (%s)' % sConfigFile)

        except (OSError, configparser.Error) as e:
            if self._iVerbose: self._ERROR(str(e))
            lsErrors.append('<%s> %s' % (sConfigFile, str(e)))

        # Verify
        if not lsErrors:
            lsErrors.extend(self.verify())

        # Done
        return lsErrors


    def set(self, _sSection, _sKey, _mValue):
        """
        Override the given setting (ignored if value is None)

        @param str _sSection  Section
        @param str _sKey      Key
        @param any _mValue    Value (string values are cast to the setting type)

        @exception RuntimeError  On unknown setting or invalid value
        """

        if _mValue is None:
            return
        if _sSection not in self.SETTINGS:
            raise RuntimeError('Unknown configuration section [%s]' % _sSection)
        self._ddConfig[_sSection][_sKey] = self.__cast(_sSection, _sKey, _mValue)
        if self._iVerbose: self._DEBUG('Setting override: [%s] %s=%s' % (_sSection, _sKey, _mValue))


    def verify(self):
        """
        Verify the configuration

        @return list  Empty if configuration is valid, (ordered) error messages otherwise
        """

        lsErrors = list()
        dPhast = self._ddConfig['PhAST']
        if dPhast['seed'] < 0:
            lsErrors.append('[PhAST] Invalid "seed" value (%s); expected non-negative integer' % dPhast['seed'])
        if dPhast['precision'] not in PhastRuntime.PRECISION_DTYPE:
            lsErrors.append('[PhAST] Invalid "precision" value (%s); expected one of: %s' % (dPhast['precision'], ', '.join(sorted(PhastRuntime.PRECISION_DTYPE))))
        if self._ddConfig['inference']['chunk_size'] < 1:
            lsErrors.append('[inference] Invalid "chunk_size" value (%s); expected positive integer' % self._ddConfig['inference']['chunk_size'])
        for (sSection, oConfig) in [('model', self.modelConfig), ('train', self.trainConfig), ('flow', self.flowConstants)]:
            try:
                lsErrors.extend(['[%s] %s' % (sSection, sError) for sError in oConfig(False).verify()])
            except RuntimeError as e:
                lsErrors.append('[%s] %s' % (sSection, str(e)))
        return lsErrors


    #
    # Getters
    #

    def get(self, _sSection, _sKey):
        """
        Return the given setting

        @param str _sSection  Section
        @param str _sKey      Key

        @return any  Value
        """

        return self._ddConfig[_sSection][_sKey]


    def section(self, _sSection):
        """
        Return (a copy of) the given section settings

        @param str _sSection  Section

        @return dict  Settings
        """

        return dict(self._ddConfig[_sSection])


    def dtype(self):
        """
        Return the configured floating-point type

        @return type  numpy scalar type
        """

        return PhastRuntime.dtype(self._ddConfig['PhAST']['precision'])


    def modelConfig(self, _bVerify = True):
        """
        Return the model configuration

        @param bool _bVerify  Verify the configuration

        @return PhastModel_config  Model configuration

        @exception RuntimeError  On invalid configuration
        """

        from PhAST.Model import PhastModel_config
        oConfig = PhastModel_config(**self._ddConfig['model'])
        if _bVerify:
            oConfig.check()
        return oConfig


    def trainConfig(self, _bVerify = True):
        """
        Return the training configuration

        @param bool _bVerify  Verify the configuration

        @return PhastTrain_config  Training configuration

        @exception RuntimeError  On invalid configuration
        """

        from PhAST.Train import PhastTrain_config
        oConfig = PhastTrain_config(seed=self._ddConfig['PhAST']['seed'], **self._ddConfig['train'])
        if _bVerify:
            oConfig.check()
        return oConfig


    def flowConstants(self, _bVerify = True):
        """
        Return the flow constants

        @param bool _bVerify  Verify the constants

        @return PhastGeometry_flow  Flow constants

        @exception RuntimeError  On invalid constants
        """

        from PhAST.Geometry import PhastGeometry_flow
        oFlow = PhastGeometry_flow(**self._ddConfig['flow'])
        if _bVerify:
            oFlow.check()
        return oFlow


    #
    # Provenance
    #

    def save(self, _sDirectory):
        """
        Write the resolved configuration into the given (output) directory

        @param str _sDirectory  Output directory

        @return str  Written file (path)

        @exception OSError  On file I/O error
        """

        sFile = os.path.join(_sDirectory, PHAST_RUNCONFIG_FILE)
        PhastRuntime.echo(self.toString(), sFile, 'w', self._iVerbose >= PhastRuntime.VERBOSE_TRACE)
        if self._iVerbose: self._DEBUG('Run configuration written (%s)' % sFile)
        return sFile

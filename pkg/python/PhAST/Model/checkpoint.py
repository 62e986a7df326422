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
from PhAST.Model.config import \
     phastModelConfig
from PhAST.Model.params import \
     PhastModel_params
from PhAST.Runtime import \
     PhastObject, \
     PhastRuntime

# External
import numpy

# Standard
import errno
import json
import os
import os.path


#------------------------------------------------------------------------------
# CLASSES
#------------------------------------------------------------------------------

class PhastModel_checkpoint(PhastObject):
    """
    Tensors persistence: JSON manifest + little-endian raw binary blob

    A tensors file <basename> consists of:
     - <basename>.json: manifest, including the tensors table
       (name -> shape, dtype, byte_offset), in blob order
     - <basename>.bin:  tensors raw data, little-endian, concatenated
    """

    #--------------------------------------------------------------------------
    # CONSTANTS
    #--------------------------------------------------------------------------

    FORMAT_VERSION = 1
    KIND_CHECKPOINT = 'phast-checkpoint'


    #--------------------------------------------------------------------------
    # CONSTRUCTORS
    #--------------------------------------------------------------------------

    def __init__(self):
        PhastObject.__init__(self)


    def _tag(self):
        return 'CK'


    #--------------------------------------------------------------------------
    # METHODS: self
    #--------------------------------------------------------------------------

    #
    # Tensors
    #

    def paths(self, _sBasename):
        """
        Return the manifest and blob paths of the given tensors file

        @param str _sBasename  Basename (a trailing '.json' is ignored)

        @return tuple  (manifest path, blob path)
        """

        if _sBasename.endswith('.json'):
            _sBasename = _sBasename[:-len('.json')]
        return ('%s.json' % _sBasename, '%s.bin' % _sBasename)


    def writeTensors(self, _sBasename, _dManifest, _ltTensors):
        """
        Write the given tensors and manifest

        @param str  _sBasename  Basename
        @param dict _dManifest  Manifest (the tensors table is added)
        @param list _ltTensors  (name, array) pairs

        @return str  Manifest path

        @exception OSError  On file I/O error
        """

        (sManifest, sBlob) = self.paths(_sBasename)
        sDirectory = os.path.dirname(sManifest)
        if sDirectory:
            os.makedirs(sDirectory, exist_ok=True)
        ldTable = list()
        iOffset = 0
        with open(sBlob, 'wb') as oFile:
            for (sName, aTensor) in _ltTensors:
                sDtype = aTensor.dtype.newbyteorder('<').str
                abData = numpy.ascontiguousarray(aTensor, dtype=sDtype).tobytes()
                ldTable.append({'name': sName, 'shape': list(aTensor.shape), 'dtype': sDtype, 'byte_offset': iOffset})
                oFile.write(abData)
                iOffset += len(abData)
        dManifest = dict(_dManifest)
        dManifest['format_version'] = self.FORMAT_VERSION
        dManifest['blob'] = os.path.basename(sBlob)
        dManifest['blob_bytes'] = iOffset
        dManifest['tensors'] = ldTable
        PhastRuntime.echo(json.dumps(dManifest, indent=2, sort_keys=True)+'\n', sManifest, 'w', self._iVerbose >= PhastRuntime.VERBOSE_TRACE)
        if self._iVerbose: self._DEBUG('Tensors written (%s; %d tensors, %d bytes)' % (sManifest, len(ldTable), iOffset))
        return sManifest


    def readTensors(self, _sBasename, _sKind = None):
        """
        Read tensors and manifest

        @param str _sBasename  Basename
        @param str _sKind      Expected manifest kind (ignored if None)

        @return tuple  (manifest, list of (name, array) pairs)

        @exception OSError  On file I/O error or malformed content
        """

        (sManifest, sBlob) = self.paths(_sBasename)
        with open(sManifest, 'r') as oFile:
            try:
                dManifest = json.load(oFile)
            except ValueError as e:
                raise OSError(errno.EINVAL, 'Malformed manifest (%s); %s' % (sManifest, str(e)))
        if not isinstance(dManifest, dict) or dManifest.get('format_version') != self.FORMAT_VERSION:
            raise OSError(errno.EINVAL, 'Unsupported manifest (%s); expected format version %d' % (sManifest, self.FORMAT_VERSION))
        if _sKind is not None and dManifest.get('kind') != _sKind:
            raise OSError(errno.EINVAL, 'Invalid manifest kind (%s); expected "%s"' % (dManifest.get('kind'), _sKind))
        with open(os.path.join(os.path.dirname(sManifest), dManifest.get('blob', os.path.basename(sBlob))), 'rb') as oFile:
            abBlob = oFile.read()
        if len(abBlob) != dManifest.get('blob_bytes', -1):
            raise OSError(errno.EINVAL, 'Truncated or oversized blob (%s); %d bytes, expected %s' % (sBlob, len(abBlob), dManifest.get('blob_bytes')))
        ltTensors = list()
        try:
            for dTensor in dManifest['tensors']:
                oDtype = numpy.dtype(dTensor['dtype'])
                tShape = tuple(dTensor['shape'])
                iBytes = int(numpy.prod(tShape)) * oDtype.itemsize
                iOffset = int(dTensor['byte_offset'])
                if iOffset < 0 or iOffset + iBytes > len(abBlob):
                    raise OSError(errno.EINVAL, 'Invalid tensor "%s" byte range (%d+%d); blob is %d bytes' % (dTensor['name'], iOffset, iBytes, len(abBlob)))
                aTensor = numpy.frombuffer(abBlob, dtype=oDtype, count=int(numpy.prod(tShape)), offset=iOffset).reshape(tShape)
                ltTensors.append((dTensor['name'], aTensor.astype(oDtype.newbyteorder('='))))
        except (KeyError, TypeError) as e:
            raise OSError(errno.EINVAL, 'Malformed tensors table (%s); %s' % (sManifest, str(e)))
        if self._iVerbose: self._DEBUG('Tensors read (%s; %d tensors)' % (sManifest, len(ltTensors)))
        return (dManifest, ltTensors)


    #
    # Model
    #

    def save(self, _sBasename, _oParams):
        """
        Save the given model parameters (checkpoint)

        @param str               _sBasename  Basename
        @param PhastModel_params _oParams    Parameters

        @return str  Manifest path

        @exception OSError  On file I/O error
        """

        dManifest = {
            'kind': self.KIND_CHECKPOINT,
            'config': _oParams.config.toDict(),
            'fingerprint': _oParams.fingerprint(),
            'param_count': _oParams.count(),
        }
        if self._iVerbose: self._INFO('Saving checkpoint (%s)' % _sBasename)
        return self.writeTensors(_sBasename, dManifest, _oParams.tensors())


    def load(self, _sBasename):
        """
        Load model parameters (checkpoint)

        @param str _sBasename  Basename

        @return PhastModel_params  Parameters

        @exception OSError       On file I/O error or malformed content
        @exception RuntimeError  On invalid configuration or parameters
        """

        if self._iVerbose: self._INFO('Loading checkpoint (%s)' % _sBasename)
        (dManifest, ltTensors) = self.readTensors(_sBasename, self.KIND_CHECKPOINT)
        oConfig = phastModelConfig(dManifest.get('config', {}))
        daTensors = dict(ltTensors)
        aTargetMean = daTensors.pop('norm.target_mean', None)
        aTargetStd = daTensors.pop('norm.target_std', None)
        oParams = PhastModel_params(oConfig, daTensors, aTargetMean, aTargetStd)
        if dManifest.get('fingerprint') != oParams.fingerprint():
            raise OSError(errno.EINVAL, 'Corrupted checkpoint (%s); fingerprint mismatch' % _sBasename)
        return oParams

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
from PhAST.Geometry import \
     PhastGeometry_flow, \
     PhastGeometry_mesh, \
     PhastGeometry_metrics, \
     PhastGeometry_quadrature, \
     PhastGeometry_reader, \
     PhastGeometry_sphere, \
     phastHeaderLayout, \
     phastMeshConcatenate, \
     phastMeshRead, \
     phastMeshWrite
from PhAST.Linalg import \
     PhastLinalg_rng
from PhAST.Runtime import \
     PhastNumericError

# External
import numpy
import pytest

# Standard
import os.path

# Tests
from conftest import randomMesh


#------------------------------------------------------------------------------
# HELPERS
#------------------------------------------------------------------------------

def write(_sDirectory, _sContent):
    sFilename = os.path.join(str(_sDirectory), 'mesh.csv')
    with open(sFilename, 'wb') as oFile:
        oFile.write(_sContent.encode('utf-8'))
    return sFilename


#------------------------------------------------------------------------------
# TESTS: mesh
#------------------------------------------------------------------------------

def test_mesh_subset(rng):
    oMesh = randomMesh(20, rng, 2, 1)
    oSubset = oMesh.subset([3, 1, 7])
    assert oSubset.points() == 3
    assert oSubset.indices.tolist() == [3, 1, 7]
    assert numpy.array_equal(oSubset.features, oMesh.features[[3, 1, 7]])
    assert numpy.array_equal(oSubset.bounds()[1], oMesh.bounds()[1])
    oNested = oSubset.subset([2])
    assert oNested.indices.tolist() == [7]


def test_mesh_chunks(rng):
    oMesh = randomMesh(10, rng)
    loChunks = list(oMesh.chunks(4))
    assert [oChunk.points() for oChunk in loChunks] == [4, 4, 2]
    assert loChunks[2].indices.tolist() == [8, 9]
    for oChunk in loChunks:
        assert numpy.array_equal(oChunk.bounds()[0], oMesh.bounds()[0])
    oJoined = phastMeshConcatenate(loChunks)
    assert numpy.array_equal(oJoined.coords, oMesh.coords)
    with pytest.raises(RuntimeError):
        list(oMesh.chunks(0))


def test_mesh_verify():
    aCoords = numpy.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert PhastGeometry_mesh(aCoords, _aNormals=aCoords, _aAreas=numpy.ones(2)).verify() == []
    lsErrors = PhastGeometry_mesh(aCoords, _aNormals=aCoords * 2.0, _aAreas=numpy.array([1.0, 0.0])).verify()
    assert len(lsErrors) == 2
    assert 'normals' in lsErrors[0]
    assert 'areas' in lsErrors[1]
    with pytest.raises(RuntimeError, match='non-finite'):
        PhastGeometry_mesh(numpy.array([[numpy.nan, 0.0]])).check()
    with pytest.raises(RuntimeError):
        PhastGeometry_mesh(aCoords, _aTargets=numpy.ones((3, 1)))


#------------------------------------------------------------------------------
# TESTS: mesh files
#------------------------------------------------------------------------------

def test_mesh_file(rng, tmp_path):
    oMesh = PhastGeometry_sphere.targets(PhastGeometry_sphere.random(50, rng), True)
    oMesh = PhastGeometry_mesh(oMesh.coords, rng.normal((50, 2)), oMesh.normals, oMesh.areas, oMesh.targets)
    sFilename = os.path.join(str(tmp_path), 'mesh.csv')
    assert phastMeshWrite(sFilename, oMesh) == 50
    with open(sFilename, 'r') as oFile:
        assert oFile.readline() == 'x,y,z,f1,f2,nx,ny,nz,area,t1,t2,t3,t4\n'
    oRead = phastMeshRead(sFilename)
    for sName in ('coords', 'features', 'normals', 'areas', 'targets'):
        assert numpy.array_equal(getattr(oRead, sName), getattr(oMesh, sName)), sName
    assert phastMeshRead(sFilename, numpy.float32).coords.dtype == numpy.float32


def test_mesh_file_predictions(rng, tmp_path):
    oMesh = randomMesh(5, rng, 0, 2)
    sFilename = os.path.join(str(tmp_path), 'mesh.csv')
    phastMeshWrite(sFilename, oMesh.withTargets(None), numpy.zeros((5, 1)))
    oRead = phastMeshRead(sFilename)
    assert oRead.targets.shape == (5, 1)
    assert oRead.dims() == 3


def test_mesh_file_reader(rng, tmp_path):
    oMesh = randomMesh(25, rng)
    sFilename = os.path.join(str(tmp_path), 'mesh.csv')
    phastMeshWrite(sFilename, oMesh)
    oReader = PhastGeometry_reader(sFilename)
    assert oReader.points() == 25
    loChunks = list(oReader.chunks(10))
    assert [oChunk.points() for oChunk in loChunks] == [10, 10, 5]
    assert loChunks[1].indices.tolist() == list(range(10, 20))
    assert numpy.array_equal(loChunks[2].bounds()[0], oMesh.bounds()[0])
    assert numpy.array_equal(loChunks[2].bounds()[1], oMesh.bounds()[1])


def test_mesh_file_header_only(tmp_path):
    oMesh = phastMeshRead(write(tmp_path, 'x,y,z,t1\n'))
    assert oMesh.points() == 0
    assert oMesh.targets.shape == (0, 1)
    assert PhastGeometry_reader(write(tmp_path, 'x,y\n')).bounds() == (None, None)


@pytest.mark.parametrize('sContent, sError', [
    ('', 'line 1, byte offset 0: missing or truncated header'),
    ('x,y,z', 'missing or truncated header'),
    ('a,b\n', 'invalid header'),
    ('x,y,z,t1,q\n', 'unexpected column "q"'),
    ('x,y\n1,2\n1,2,3\n', 'line 3, byte offset 8: 3 values, expected 2'),
    ('x,y\n1,2\n1,bogus\n', 'line 3, byte offset 8: invalid value'),
    ('x,y\n1,2\n3,4', 'line 3, byte offset 8: truncated row'),
])
def test_mesh_file_malformed(tmp_path, sContent, sError):
    with pytest.raises(OSError) as oError:
        phastMeshRead(write(tmp_path, sContent))
    assert 'Malformed mesh file' in str(oError.value)
    assert sError in str(oError.value)


def test_header_layout():
    oLayout = phastHeaderLayout('x,y,f1,f2,f3,area,t1')
    assert (oLayout.dims, oLayout.features, oLayout.normals, oLayout.areas, oLayout.targets) == (2, 3, False, True, 1)
    assert oLayout.header() == 'x,y,f1,f2,f3,area,t1'


#------------------------------------------------------------------------------
# TESTS: sphere and quadrature
#------------------------------------------------------------------------------

@pytest.mark.parametrize('sKind', ['fibonacci', 'random'])
def test_sphere(sKind):
    if sKind == 'fibonacci':
        oMesh = PhastGeometry_sphere.fibonacci(10000)
    else:
        oMesh = PhastGeometry_sphere.random(10000, PhastLinalg_rng(1))
    assert oMesh.verify() == []
    assert numpy.max(numpy.abs(numpy.linalg.norm(oMesh.coords, axis=1) - 1.0)) <= 1e-12
    assert numpy.sum(oMesh.areas) == pytest.approx(4.0 * numpy.pi, rel=1e-12)
    assert numpy.array_equal(oMesh.bounds()[0], -numpy.ones(3))


def test_sphere_normals_sum():
    assert numpy.linalg.norm(PhastGeometry_quadrature.normalsSum(PhastGeometry_sphere.fibonacci(10000))) <= 1e-2
    with pytest.raises(RuntimeError):
        PhastGeometry_quadrature.normalsSum(PhastGeometry_mesh(numpy.zeros((2, 3))))


def test_sphere_targets():
    oMesh = PhastGeometry_sphere.targets(PhastGeometry_sphere.fibonacci(100), True)
    assert oMesh.targets.shape == (100, 4)
    # Shear is tangential
    assert numpy.max(numpy.abs(numpy.sum(oMesh.targets[:, 1:] * oMesh.normals, axis=1))) <= 1e-14
    with pytest.raises(RuntimeError):
        PhastGeometry_sphere.fibonacci(3)
    with pytest.raises(RuntimeError):
        PhastGeometry_sphere.targets(PhastGeometry_mesh(numpy.zeros((2, 2))))


def test_force_uniform_pressure():
    # A uniform pressure over a closed surface yields no force
    oMesh = PhastGeometry_sphere.fibonacci(20000)
    oFlow = PhastGeometry_flow()
    (aForce, fCd, fCl) = PhastGeometry_quadrature.integrateForce(oMesh, numpy.full(20000, 3.0), None, oFlow)
    assert numpy.linalg.norm(aForce) <= 1e-2
    (aForce, fCd, fCl) = PhastGeometry_quadrature.integrateForce(oMesh, numpy.full(20000, 3.0), None, PhastGeometry_flow(p_inf=3.0))
    assert not numpy.any(aForce)


def test_force_coefficients():
    oMesh = PhastGeometry_mesh(
        numpy.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
        _aNormals=numpy.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
        _aAreas=numpy.array([2.0, 1.0]),
    )
    oFlow = PhastGeometry_flow(p_inf=1.0, rho_inf=2.0, v_inf=1.0, a_ref=0.5)
    (aForce, fCd, fCl) = PhastGeometry_quadrature.integrateForce(oMesh, numpy.array([0.0, 3.0]), numpy.array([[0.0, 1.0, 0.0], [0.5, 0.0, 0.0]]), oFlow)
    assert numpy.allclose(aForce, [2.5, 2.0, -2.0])
    assert fCd == pytest.approx(5.0)
    assert fCl == pytest.approx(-4.0)
    with pytest.raises(RuntimeError, match='normals and areas'):
        PhastGeometry_quadrature.integrateForce(PhastGeometry_mesh(numpy.zeros((2, 3))), numpy.zeros(2), None, oFlow)
    with pytest.raises(RuntimeError):
        PhastGeometry_quadrature.integrateForce(oMesh, numpy.zeros(3), None, oFlow)


def test_convergence():
    oFlow = PhastGeometry_flow()
    fReference = PhastGeometry_sphere.coefficients(PhastGeometry_sphere.fibonacci(200000), oFlow)[1]

    def estimate(_iSize, _oRng):
        return PhastGeometry_sphere.coefficients(PhastGeometry_sphere.random(_iSize, _oRng), oFlow)[1]

    ltErrors = PhastGeometry_quadrature.convergence(fReference, [100, 1000, 10000], estimate, PhastLinalg_rng(2), 30)
    assert [iSize for (iSize, fError) in ltErrors] == [100, 1000, 10000]
    fSlope = PhastGeometry_quadrature.fitSlope(ltErrors)
    assert -0.7 <= fSlope <= -0.3
    assert PhastGeometry_quadrature.fitSlope([(10, 0.0), (100, 1.0)]) is None


def test_reference(tmp_path):
    dReference = PhastGeometry_sphere.reference(PhastGeometry_flow(), True, 1000)
    assert dReference['points'] == 1000
    sFilename = os.path.join(str(tmp_path), 'reference.json')
    PhastGeometry_sphere.saveReference(sFilename, dReference)
    assert PhastGeometry_sphere.loadReference(sFilename) == dReference
    with open(sFilename, 'w') as oFile:
        oFile.write('{"points": 10}')
    with pytest.raises(OSError, match='missing "force"'):
        PhastGeometry_sphere.loadReference(sFilename)


def test_flow_verify():
    assert PhastGeometry_flow().verify() == []
    assert numpy.allclose(PhastGeometry_flow(drag_dir=(2.0, 0.0, 0.0)).drag_dir, [1.0, 0.0, 0.0])
    lsErrors = PhastGeometry_flow(rho_inf=0.0, drag_dir=(0.0, 0.0, 0.0)).verify()
    assert len(lsErrors) == 2
    assert 'drag_dir' in lsErrors[1]
    assert PhastGeometry_flow(rho_inf=2.0, v_inf=3.0, a_ref=0.5).dynamicPressure() == pytest.approx(4.5)


#------------------------------------------------------------------------------
# TESTS: metrics
#------------------------------------------------------------------------------

def test_metrics(rng):
    aTruth = rng.normal((100, 2))
    assert PhastGeometry_metrics.relL2(aTruth, aTruth) == 0.0
    assert PhastGeometry_metrics.relL2(numpy.zeros((100, 2)), aTruth) == pytest.approx(1.0)
    assert PhastGeometry_metrics.relL2(2.0 * aTruth, aTruth) == pytest.approx(1.0)
    assert PhastGeometry_metrics.r2(aTruth, aTruth) == [1.0, 1.0]
    assert PhastGeometry_metrics.mae(aTruth + 0.5, aTruth) == pytest.approx([0.5, 0.5])
    assert PhastGeometry_metrics.meanRelL2([(aTruth, aTruth), (numpy.zeros((100, 2)), aTruth)]) == pytest.approx(0.5)
    dMetrics = PhastGeometry_metrics.metrics(aTruth[:, 0], aTruth[:, 0])
    assert dMetrics['rel_l2'] == 0.0
    assert dMetrics['r2'] == [1.0]


def test_metrics_r2():
    aTruth = numpy.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
    aPrediction = numpy.array([[1.0, 5.0], [2.0, 5.0], [4.0, 5.0]])
    lfR2 = PhastGeometry_metrics.r2(aPrediction, aTruth)
    assert lfR2[0] == pytest.approx(0.5)
    assert lfR2[1] is None
    # Mean predictor scores zero
    assert PhastGeometry_metrics.r2(numpy.full(3, 2.0), aTruth[:, 0]) == [pytest.approx(0.0)]


def test_metrics_errors():
    with pytest.raises(PhastNumericError):
        PhastGeometry_metrics.relL2(numpy.ones(3), numpy.zeros(3))
    with pytest.raises(RuntimeError):
        PhastGeometry_metrics.relL2(numpy.ones(3), numpy.ones(4))
    with pytest.raises(RuntimeError):
        PhastGeometry_metrics.meanRelL2([])

import math

import numpy as np
import pytest

from sepcurv import (
    MeshError,
    SeparableSurface,
    build_mesh,
    parse_function,
    write_curvature_csv,
    write_obj,
)


def sphere3(radius=1.0):
    return SeparableSurface(
        (
            parse_function("x^2"),
            parse_function("x^2"),
            parse_function(f"x^2 - {radius * radius!r}"),
        )
    )


def paraboloid_cylinder():
    # x3 = x1^2 + x2: one curved slot, affine elsewhere, so K = 0 everywhere
    return SeparableSurface(
        (parse_function("x^2"), parse_function("x"), parse_function("-x"))
    )


def replicate_faces(nx, ny, alive):
    """Expected vertex ids and faces for a given grid occupancy pattern."""
    ids = {}
    for r in range(nx):
        for c in range(ny):
            if alive[r][c]:
                ids[(r, c)] = len(ids)
    faces = []
    tri_cells = 0
    for r in range(nx - 1):
        for c in range(ny - 1):
            quad = [
                ids.get((r, c)),
                ids.get((r + 1, c)),
                ids.get((r + 1, c + 1)),
                ids.get((r, c + 1)),
            ]
            live = [v for v in quad if v is not None]
            if len(live) == 4:
                faces.append((quad[0], quad[1], quad[2]))
                faces.append((quad[0], quad[2], quad[3]))
            elif len(live) == 3:
                faces.append(tuple(live))
                tri_cells += 1
    return ids, faces, tri_cells


def test_full_coverage_sphere_mesh():
    surface = sphere3()
    mesh = build_mesh(surface, [(-0.4, 0.4), (-0.4, 0.4)], (6, 7), (0.1, 1.01))
    assert len(mesh.vertices) == 6 * 7
    assert mesh.dropped == 0
    assert len(mesh.faces) == 2 * 5 * 6
    assert len(mesh.curvatures) == len(mesh.vertices)

    # row-major vertex order over the (x1, x2) grid
    a_vals = np.linspace(-0.4, 0.4, 6)
    b_vals = np.linspace(-0.4, 0.4, 7)
    for idx, (x, y, z) in enumerate(mesh.vertices):
        assert x == a_vals[idx // 7]
        assert y == b_vals[idx % 7]
        assert z > 0.0
        assert abs(x * x + y * y + z * z - 1.0) <= 1e-12

    for k in mesh.curvatures:
        assert abs(k - 1.0) <= 1e-9

    # each full cell splits into two triangles sharing the (r, c) corner
    assert mesh.faces[0] == (0, 7, 8)
    assert mesh.faces[1] == (0, 8, 1)
    for face in mesh.faces:
        assert len(set(face)) == 3
        assert all(0 <= v < len(mesh.vertices) for v in face)


def test_partial_coverage_drops_and_triangulates():
    surface = sphere3()
    nx = ny = 8
    mesh = build_mesh(surface, [(-1.2, 1.2), (-1.2, 1.2)], (nx, ny), (0.1, 1.01))

    # a node lifts iff the height solve lands inside the bracket:
    # 1 - a^2 - b^2 in [0.1^2, 1.01^2], i.e. a^2 + b^2 <= 0.99
    vals = np.linspace(-1.2, 1.2, nx)
    alive = [[vals[r] ** 2 + vals[c] ** 2 <= 0.99 for c in range(ny)] for r in range(nx)]
    ids, faces, tri_cells = replicate_faces(nx, ny, alive)

    assert mesh.dropped == nx * ny - len(ids)
    assert mesh.dropped > 0
    assert len(mesh.vertices) == len(ids)
    assert list(mesh.faces) == faces
    assert tri_cells > 0                   # 3-corner cells emit one triangle

    for (x, y, z), k in zip(mesh.vertices, mesh.curvatures):
        assert abs(x * x + y * y + z * z - 1.0) <= 1e-12
        assert abs(k - 1.0) <= 1e-9


def test_flat_mesh_curvatures_exactly_zero():
    mesh = build_mesh(
        paraboloid_cylinder(), [(-1.0, 1.0), (-1.0, 1.0)], (5, 5), (-10.0, 10.0)
    )
    assert len(mesh.vertices) == 25
    assert mesh.dropped == 0
    assert set(mesh.curvatures) == {0.0}
    for x1, x2, x3 in mesh.vertices:
        assert abs(x1 * x1 + x2 - x3) <= 1e-12


def test_height_slot_respected():
    surface = SeparableSurface(
        (
            parse_function("x^2 - 1.0"),
            parse_function("x^2"),
            parse_function("x^2"),
        ),
        height=1,
    )
    mesh = build_mesh(surface, [(-0.3, 0.3), (-0.3, 0.3)], (4, 4), (0.1, 1.01))
    assert len(mesh.vertices) == 16
    a_vals = np.linspace(-0.3, 0.3, 4)
    for idx, (x1, x2, x3) in enumerate(mesh.vertices):
        assert x2 == a_vals[idx // 4]      # grid runs over the non-height slots
        assert x3 == a_vals[idx % 4]
        assert x1 > 0.0
        assert abs(x1 * x1 + x2 * x2 + x3 * x3 - 1.0) <= 1e-12


def test_too_few_vertices_is_mesh_error():
    with pytest.raises(MeshError, match="only 0 grid nodes.*need at least 3"):
        build_mesh(sphere3(), [(2.0, 3.0), (2.0, 3.0)], (4, 4), (0.1, 1.01))


def test_build_mesh_validation():
    four = SeparableSurface(tuple(parse_function("x^2") for _ in range(4)))
    with pytest.raises(ValueError, match="3-coordinate surface"):
        build_mesh(four, [(-1.0, 1.0), (-1.0, 1.0)], (4, 4), (-1.0, 1.0))
    with pytest.raises(ValueError, match="expected 2 ranges"):
        build_mesh(sphere3(), [(-0.4, 0.4)], (4, 4), (0.1, 1.01))
    with pytest.raises(ValueError, match="at least 2x2"):
        build_mesh(sphere3(), [(-0.4, 0.4), (-0.4, 0.4)], (1, 5), (0.1, 1.01))


def test_write_obj_format(tmp_path):
    mesh = build_mesh(sphere3(), [(-0.4, 0.4), (-0.4, 0.4)], (4, 5), (0.1, 1.01))
    path = tmp_path / "mesh.obj"
    write_obj(str(path), mesh)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(mesh.vertices) + len(mesh.faces)

    for line, vertex in zip(lines, mesh.vertices):
        tag, *coords = line.split(" ")
        assert tag == "v"
        assert tuple(float(c) for c in coords) == vertex

    for line, face in zip(lines[len(mesh.vertices):], mesh.faces):
        tag, *idxs = line.split(" ")
        assert tag == "f"
        assert tuple(int(s) for s in idxs) == tuple(v + 1 for v in face)
        assert all(1 <= int(s) <= len(mesh.vertices) for s in idxs)


def test_write_curvature_csv_format(tmp_path):
    mesh = build_mesh(sphere3(2.0), [(-0.5, 0.5), (-0.5, 0.5)], (3, 3), (0.2, 2.02))
    path = tmp_path / "mesh_curvature.csv"
    write_curvature_csv(str(path), mesh)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "vertex,k"
    assert len(lines) == 1 + len(mesh.curvatures)
    for row, (idx, k) in zip(lines[1:], enumerate(mesh.curvatures, start=1)):
        vid, cell = row.split(",")
        assert int(vid) == idx
        assert cell == repr(k)
        assert abs(float(cell) - 0.25) <= 1e-9

#!/usr/bin/env python3
"""Generate the built-in tiling files under data/tilings/.

Cell coordinates are exact rationals in the lattice basis of each tiling.
Render outlines are derived from standard polygon/polyhedron geometry and
converted back to exact rationals; 3D face lists come from a convex hull.

Usage: python3 tools/gen_tilings.py [OUTDIR]
"""

import itertools
import json
import math
import os
import sys
from fractions import Fraction as F

import numpy as np
from scipy.spatial import ConvexHull


def rs(x):
    x = F(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def pt(p):
    return [rs(c) for c in p]


def identity(d):
    return [[1 if i == j else 0 for j in range(d)] for i in range(d)]


def signed_perms(d):
    out = []
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1, -1), repeat=d):
            m = [[0] * d for _ in range(d)]
            for i in range(d):
                m[i][perm[i]] = signs[i]
            out.append(m)
    # identity first
    out.sort(key=lambda m: m != identity(d))
    return out


def orient(linear, offset):
    return {"linear": [[rs(v) for v in row] for row in linear], "offset": pt(offset)}


def with_centering(linears, shifts):
    """Coset representatives: point-group matrices times centering shifts."""
    out = []
    for s in shifts:
        for m in linears:
            out.append(orient(m, s))
    return out


def hull_faces(verts):
    """Outward-oriented face index lists of a convex polyhedron."""
    arr = np.array([[float(c) for c in v] for v in verts])
    hull = ConvexHull(arr)
    center = arr.mean(axis=0)
    faces = {}
    for eq in hull.equations:
        key = tuple(np.round(eq, 9))
        if key in faces:
            continue
        normal, off = eq[:3], eq[3]
        idx = [i for i, v in enumerate(arr) if abs(normal @ v + off) < 1e-9]
        fc = arr[idx].mean(axis=0)
        u = arr[idx[0]] - fc
        u /= np.linalg.norm(u)
        w = np.cross(normal, u)
        idx.sort(key=lambda i: math.atan2((arr[i] - fc) @ w, (arr[i] - fc) @ u))
        assert normal @ (fc - center) > 0
        faces[key] = idx
    return list(faces.values())


def render3(verts):
    return {"vertices": [pt(v) for v in verts], "faces": hull_faces(verts)}


def write(outdir, spec):
    path = os.path.join(outdir, spec["name"] + ".json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(spec, f, indent=1)
        f.write("\n")


def square():
    h = F(1, 2)
    return {
        "name": "square",
        "dim": 2,
        "orientations": [orient(m, [0, 0]) for m in signed_perms(2)],
        "orbits": [{
            "id": 0,
            "rep": pt([0, 0]),
            "neighbors": [pt(p) for p in ([1, 0], [0, 1], [-1, 0], [0, -1])],
            "render": {"vertices": [pt(p) for p in ([-h, -h], [h, -h], [h, h], [-h, h])]},
        }],
        "embedding": [[1.0, 0.0], [0.0, 1.0]],
        "metadata": {"description": "square tiling (polyominoes)", "oeis_free": "A000105"},
    }


def cubic():
    h = F(1, 2)
    cube = [list(v) for v in itertools.product((-h, h), repeat=3)]
    axis = [[s if i == j else 0 for j in range(3)] for i in range(3) for s in (1, -1)]
    return {
        "name": "cubic",
        "dim": 3,
        "orientations": [orient(m, [0, 0, 0]) for m in signed_perms(3)],
        "orbits": [{"id": 0, "rep": pt([0, 0, 0]), "neighbors": [pt(p) for p in axis],
                    "render": render3(cube)}],
        "embedding": identity(3),
        "metadata": {"description": "cubic honeycomb (polycubes)", "oeis_free": "A038119"},
    }


def snub_trihexagonal():
    # Lattice basis b1 = (5, sqrt3), b2 = (1, 3 sqrt3); rotation by 60 degrees.
    r3 = math.sqrt(3)
    basis = np.array([[5.0, r3], [1.0, 3 * r3]])  # rows are basis images

    def cart(p):
        return float(p[0]) * basis[0] + float(p[1]) * basis[1]

    def lat(x):
        sol = np.linalg.solve(basis.T, x)
        return [F(v).limit_denominator(21) for v in sol]

    a = [[1, 1], [-1, 0]]
    mats = [identity(2)]
    for _ in range(5):
        prev = mats[-1]
        mats.append([[sum(a[i][k] * prev[k][j] for k in range(2)) for j in range(2)] for i in range(2)])

    e1 = [(-10, 8), (-8, -2), (2, -10), (10, -8), (8, 2), (-2, 10)]
    e2 = [(8, 2), (11, 8), (2, 11)]
    # Neighbors of v3 = (2/21, 11/21).  The set {(0,0), (1/3,1/3), (13/21,-2/21)}
    # is the neighborhood of (8/21, 2/21), another cell of the same orbit; its
    # image under A^2 followed by the shift (0, 1) is the neighborhood of v3.
    e3 = [(0, 21), (7, 7), (-2, 10)]
    reps = [[F(0), F(0)], [F(1, 3), F(1, 3)], [F(2, 21), F(11, 21)]]
    nbrs = [[[F(x, 21), F(y, 21)] for x, y in e] for e in (e1, e2, e3)]

    # Tiling vertices: every vertex lies on exactly one hexagon (side 2).
    hex_verts = []
    for k in range(6):
        ang = math.radians(60 * k)
        hex_verts.append(lat(np.array([2 * math.cos(ang), 2 * math.sin(ang)])))
    tiling_vertices = []
    for m in mats:
        for v in hex_verts:
            w = [sum(m[i][j] * v[j] for j in range(2)) for i in range(2)]
            for tx in range(-2, 3):
                for ty in range(-2, 3):
                    tiling_vertices.append((w[0] + tx, w[1] + ty))
    tiling_vertices = sorted(set(tiling_vertices))

    def polygon_around(c, radius):
        cc = cart(c)
        pts = [v for v in tiling_vertices if abs(np.linalg.norm(cart(v) - cc) - radius) < 1e-9]
        pts.sort(key=lambda v: math.atan2(*(cart(v) - cc)[::-1]))
        return [list(v) for v in pts]

    polys = [polygon_around(reps[0], 2.0), polygon_around(reps[1], 2 / r3), polygon_around(reps[2], 2 / r3)]
    assert [len(p) for p in polys] == [6, 3, 3], [len(p) for p in polys]

    # Neighbor lists must match geometric adjacency: hexagon-triangle centers
    # are 4/sqrt3 apart, triangle-triangle centers 2/sqrt3.
    centers = []
    for i, rep in enumerate(reps):
        for m in mats:
            w = [sum(m[r][c] * rep[c] for c in range(2)) for r in range(2)]
            for tx in range(-3, 4):
                for ty in range(-3, 4):
                    centers.append((i, (w[0] + tx, w[1] + ty)))
    centers = sorted(set(centers))
    for i, (rep, nb) in enumerate(zip(reps, nbrs)):
        want = 4 / r3 if i == 0 else 2 / r3
        geo = set()
        for j, c in centers:
            dist = np.linalg.norm(cart(c) - cart(rep))
            if (i == 0 or j == 0) and abs(dist - 4 / r3) < 1e-9:
                geo.add(c)
            elif i != 0 and j != 0 and abs(dist - 2 / r3) < 1e-9:
                geo.add(c)
        assert geo == {tuple(q) for q in nb}, (i, sorted(geo))

    return {
        "name": "snub-trihexagonal",
        "dim": 2,
        "orientations": [orient(m, [0, 0]) for m in mats],
        "orbits": [
            {"id": i, "rep": pt(reps[i]), "neighbors": [pt(q) for q in nbrs[i]],
             "render": {"vertices": [pt(v) for v in polys[i]]}}
            for i in range(3)
        ],
        "embedding": basis.tolist(),
        "metadata": {"description": "snub trihexagonal tiling, wallpaper group p6", "oeis_free": "A383908"},
    }


def truncated_octahedral():
    h = F(1, 2)
    q = F(1, 4)
    axis = [[s if i == j else 0 for j in range(3)] for i in range(3) for s in (1, -1)]
    diag = [list(v) for v in itertools.product((-h, h), repeat=3)]
    verts = set()
    for perm in itertools.permutations((0, q, h)):
        for s in itertools.product((1, -1), repeat=3):
            verts.add(tuple(F(s[i]) * perm[i] for i in range(3)))
    verts = [list(v) for v in sorted(verts)]
    assert len(verts) == 24
    return {
        "name": "truncated-octahedral",
        "dim": 3,
        "orientations": with_centering(signed_perms(3), [[0, 0, 0], [h, h, h]]),
        "orbits": [{"id": 0, "rep": pt([0, 0, 0]), "neighbors": [pt(p) for p in axis + diag],
                    "render": render3(verts)}],
        "embedding": identity(3),
        "metadata": {"description": "bitruncated cubic honeycomb (polysplatts); cubic basis with body centering",
                     "oeis_free": "A038181"},
    }


def rectified_cubic():
    h = F(1, 2)
    axis = [[s if i == j else 0 for j in range(3)] for i in range(3) for s in (1, -1)]
    diag = [list(v) for v in itertools.product((-h, h), repeat=3)]
    cubo = set()
    for perm in set(itertools.permutations((h, h, 0))):
        for s in itertools.product((1, -1), repeat=3):
            cubo.add(tuple(F(s[i]) * perm[i] for i in range(3)))
    cubo = [list(v) for v in sorted(cubo)]
    octa = [[h + (s * h if i == j else 0) for j in range(3)] for i in range(3) for s in (1, -1)]
    return {
        "name": "rectified-cubic",
        "dim": 3,
        "orientations": [orient(m, [0, 0, 0]) for m in signed_perms(3)],
        "orbits": [
            {"id": 0, "rep": pt([0, 0, 0]), "neighbors": [pt(p) for p in axis + diag],
             "render": render3(cubo)},
            {"id": 1, "rep": pt([h, h, h]), "neighbors": [pt([h + d[0], h + d[1], h + d[2]]) for d in diag],
             "render": render3(octa)},
        ],
        "embedding": identity(3),
        "metadata": {"description": "rectified cubic honeycomb (cuboctahedra and octahedra)", "oeis_free": "A384254"},
    }


def tet_oct():
    # Basis is twice the unit cube; octahedra sit on the face-centred lattice,
    # tetrahedra on the points with all coordinates in {1/4, 3/4} mod 1.
    h, q = F(1, 2), F(1, 4)
    fcc = [[0, 0, 0], [h, h, 0], [h, 0, h], [0, h, h]]
    oct_nbrs = [list(v) for v in itertools.product((-q, q), repeat=3)]
    tet_nbrs = [[0, 0, 0], [0, h, h], [h, 0, h], [h, h, 0]]
    octa = [[(s * h if i == j else 0) for j in range(3)] for i in range(3) for s in (1, -1)]
    tetra = [[h, 0, 0], [0, h, 0], [0, 0, h], [h, h, h]]
    return {
        "name": "tet-oct",
        "dim": 3,
        "orientations": with_centering(signed_perms(3), fcc),
        "orbits": [
            {"id": 0, "rep": pt([0, 0, 0]), "neighbors": [pt(p) for p in oct_nbrs], "render": render3(octa)},
            {"id": 1, "rep": pt([q, q, q]), "neighbors": [pt(p) for p in tet_nbrs], "render": render3(tetra)},
        ],
        "embedding": [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]],
        "metadata": {"description": "tetrahedral-octahedral honeycomb (alternated cubic); basis is the conventional face-centred cell",
                     "oeis_free": "A343909"},
    }


def disphenoid():
    # Cells are the vertices of the bitruncated cubic honeycomb; each is a
    # tetragonal disphenoid spanned by the four body-centred sites it touches.
    h, q = F(1, 2), F(1, 4)
    rep = [F(0), q, h]
    nbrs = [[q, 0, h], [-q, 0, h], [0, h, q], [0, h, 3 * q]]
    corners = [[0, 0, 0], [h, h, h], [-h, h, h], [0, 0, 1]]
    return {
        "name": "disphenoid",
        "dim": 3,
        "orientations": with_centering(signed_perms(3), [[0, 0, 0], [h, h, h]]),
        "orbits": [{"id": 0, "rep": pt(rep), "neighbors": [pt(p) for p in nbrs], "render": render3(corners)}],
        "embedding": identity(3),
        "metadata": {"description": "tetragonal disphenoid honeycomb (dual of the bitruncated cubic)",
                     "oeis_free": "A385024"},
    }


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "data", "tilings")
    os.makedirs(outdir, exist_ok=True)
    for make in (square, cubic, snub_trihexagonal, truncated_octahedral, rectified_cubic, tet_oct, disphenoid):
        write(outdir, make())


if __name__ == "__main__":
    main()

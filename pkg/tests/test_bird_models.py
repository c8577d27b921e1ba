from dataclasses import replace

import numpy as np
import pytest

from sphorigami.bird_models import (
    CORNER_LABELS,
    WING_INNER,
    BirdParams,
    DigonSheet,
    build_bird,
    digon_foldout,
    extend_inner_wing,
    extension_overlaps,
    fold_flat_bird,
    foldout_kawasaki,
    replay_fold,
    wing_theta_bound,
)
from sphorigami.errors import FoldRangeError, ValidationError
from sphorigami.fold3d import point_in_face
from sphorigami.sphere_core import pole_through, reflect, spherical_distance

BETAS = [np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi]


@pytest.fixture(scope="module", params=BETAS, ids=["quarter", "half", "three-quarter", "hemisphere"])
def flat(request):
    diagram = extend_inner_wing(digon_foldout(DigonSheet(request.param)), 0.5)
    return fold_flat_bird(diagram)


def test_sheet_rejects_bad_angles():
    for beta in (0.0, -1.0, 4.0):
        with pytest.raises(ValidationError):
            DigonSheet(beta)
    with pytest.raises(ValidationError):
        BirdParams(np.pi / 2, 0.0)


def test_incircle_touches_all_four_sides(flat):
    d = flat.diagram
    ks = d.sheet.corners
    c, r = d.incircle.pole, d.incircle.angular_radius
    assert r == pytest.approx(d.sheet.inner_angle / 2, abs=1e-12)
    # the sides N-E1, E1-S, ... all lie on the lune's two boundary great circles
    for i in range(4):
        n = pole_through(ks[i], ks[(i + 1) % 4])
        assert abs(np.pi / 2 - np.arccos(abs(n @ c)) - r) < 1e-12


def test_crease_mirrors_contain_their_ends(flat):
    d = flat.diagram
    assert len(d.creases) == 20 and len(d.faces) == 16
    assert [c.step for c in d.creases] == sorted(c.step for c in d.creases)
    for c in d.creases:
        for name in c.ends:
            assert abs(c.mirror.pole @ d.points[name]) < 1e-12


def test_faces_tile_the_sheet(flat):
    d = flat.diagram
    total = sum(d.face_geometry(k).area() for k in range(len(d.faces)))
    assert total == pytest.approx(d.sheet.area(), abs=1e-10)


def test_every_interior_vertex_is_flat_foldable(flat):
    res = foldout_kawasaki(flat.diagram)
    assert set(res) == {"C", "P0", "P1", "P2", "P3"}
    for r in res.values():
        assert r.foldable and r.even


def test_replay_reproduces_each_face_map(flat):
    for m, path in zip(flat.maps, flat.paths):
        assert np.allclose(replay_fold(flat.diagram, path), m, atol=1e-10)
        assert np.allclose(m @ m.T, np.eye(3), atol=1e-12)


def test_fold_order_covers_every_crease(flat):
    assert sorted(flat.fold_order) == list(range(len(flat.diagram.creases)))


def test_tips(flat):
    tips = flat.tips
    c = flat.map_point("C")
    assert np.allclose(tips["tail"], tips["back"], atol=1e-9)
    assert np.allclose(tips["wing_inner"], tips["wing_outer"], atol=1e-9)
    assert spherical_distance(c, tips["tail"]) == pytest.approx(np.pi / 2, abs=1e-9)
    # all tips sit on one geodesic ray leaving the centre's image
    ray_tail, ray_wing = np.cross(c, tips["tail"]), np.cross(c, tips["wing_inner"])
    assert np.linalg.norm(np.cross(ray_tail, ray_wing)) < 1e-12 and ray_tail @ ray_wing > 0
    beta = flat.diagram.sheet.inner_angle
    assert spherical_distance(c, tips["wing_inner"]) == pytest.approx(beta / 2, abs=1e-9)
    if beta == np.pi:
        for lab in CORNER_LABELS:
            assert np.allclose(tips[lab], tips["tail"], atol=1e-9)
    else:
        assert np.linalg.norm(tips["tail"] - tips["wing_inner"]) > 1e-3


def _reflector(pole):
    return np.eye(3) - 2.0 * np.outer(pole, pole)


def test_flat_bird_is_mirror_symmetric(flat):
    d = flat.diagram
    sigma = _reflector(d.sheet.mirror)
    images = flat.images()

    def key(face):
        return np.sort(face.vertices, axis=0)

    keys = [key(d.face_geometry(k)) for k in range(len(d.faces))]
    for k in range(len(d.faces)):
        mirrored = key(d.face_geometry(k).transformed(lambda x: sigma @ x))
        (j,) = [i for i, other in enumerate(keys) if np.allclose(other, mirrored, atol=1e-9)]
        assert np.allclose(key(images[j]), key(images[k]), atol=1e-9)


def test_extension_stays_clear_of_tail_and_back(flat):
    assert extension_overlaps(flat) == []


@pytest.mark.parametrize("beta", BETAS)
def test_extension_at_bound_fits_inside_mirrored_wing(beta):
    d = digon_foldout(DigonSheet(beta))
    bound = wing_theta_bound(d)
    ext = extend_inner_wing(d, bound).extension.face
    r = _reflector(pole_through(d.points["C"], d.points["P0"]))
    mirrored = d.face_geometry(d.wing_face(WING_INNER)).transformed(lambda x: r @ x)
    apex = ext.vertices[2]
    assert point_in_face(mirrored, apex)
    assert abs(np.cross(d.points["C"], r @ d.points["K1"]) @ apex) < 1e-12
    assert ext.area() < mirrored.area()
    with pytest.raises(FoldRangeError):
        extend_inner_wing(d, bound + 1e-3)


@pytest.mark.parametrize("beta", BETAS)
def test_built_bird(beta):
    theta = 0.5
    bird = build_bird(BirdParams(beta, theta))
    assert bird.wing_chords["wing_inner"] == pytest.approx(bird.wing_chords["wing_outer"], abs=1e-9)
    inner, outer = bird.wing_dihedrals["wing_inner"], bird.wing_dihedrals["wing_outer"]
    assert inner < np.pi < outer
    labels = {lab for lab, _ in bird.faces}
    assert {"tail", "back", "wing_inner", "wing_outer", "wing_inner_extension"} <= labels
    for lab in ("wing_inner", "wing_outer"):
        assert np.linalg.norm(bird.tips[lab] - bird.flat.tips[lab]) > 1e-3


def test_dihedral_depends_on_sheet_angle():
    a = build_bird(BirdParams(np.pi / 4, 0.5)).wing_dihedrals["wing_inner"]
    b = build_bird(BirdParams(np.pi, 0.5)).wing_dihedrals["wing_inner"]
    assert abs(a - b) > 1e-3


def test_wing_theta_above_bound_rejected():
    d = digon_foldout(DigonSheet(np.pi / 2))
    with pytest.raises(FoldRangeError):
        build_bird(BirdParams(np.pi / 2, wing_theta_bound(d) + 0.05))
    # the bound is the wing face's angle at C, the sharper end of the hinge
    wing = d.faces[d.wing_face(WING_INNER)]
    at_c = d.face_geometry(d.wing_face(WING_INNER)).interior_angle(wing.index("C"))
    assert wing_theta_bound(d) == pytest.approx(at_c, abs=1e-15)


def test_output_vertices_stay_on_sphere(flat):
    for img in flat.images():
        assert np.allclose(np.linalg.norm(img.vertices, axis=1), 1.0, atol=1e-12)


def test_faces_stay_glued_along_creases(flat):
    d = flat.diagram
    for crease in d.creases:
        sides = [k for k, f in enumerate(d.faces) if set(crease.ends) <= set(f)]
        assert len(sides) == 2
        for name in crease.ends:
            a, b = (flat.maps[k] @ d.points[name] for k in sides)
            assert np.allclose(a, b, atol=1e-12)


def test_crease_ends_lie_on_sheet(flat):
    d = flat.diagram
    sheet = d.sheet.face()
    for c in d.creases:
        for name in c.ends:
            assert point_in_face(sheet, d.points[name])


def test_other_fixed_face_moves_bird_rigidly(flat):
    d = flat.diagram
    other = fold_flat_bird(replace(d, root=7))
    # the whole folded bird differs by one orthogonal map
    g = other.maps[0] @ flat.maps[0].T
    for m0, m1 in zip(flat.maps, other.maps):
        assert np.allclose(g @ m0, m1, atol=1e-10)


def test_small_wing_theta_limits():
    d = digon_foldout(DigonSheet(np.pi / 2))
    areas = [extend_inner_wing(d, t).extension.face.area() for t in (0.3, 0.03, 0.003)]
    # a thin triangle on the hinge: area shrinks like the tangent of its base angle
    assert areas[0] / areas[1] == pytest.approx(np.tan(0.3) / np.tan(0.03), rel=0.01)
    assert areas[1] / areas[2] == pytest.approx(np.tan(0.03) / np.tan(0.003), rel=0.01)
    # a vanishing tilt leaves a plain flat fold of each wing across its hinge
    bird = build_bird(BirdParams(np.pi / 2, 1e-8))
    for corner, lab in ((1, "wing_inner"), (3, "wing_outer")):
        k = d.wing_face(corner)
        ends = [bird.flat.maps[k] @ d.points[n] for n in d.wing_hinge(corner)]
        hinge = pole_through(*ends)
        assert abs(np.linalg.norm(bird.tips[lab]) - 1.0) < 1e-7
        assert np.linalg.norm(bird.tips[lab] - reflect(bird.flat.tips[lab], hinge)) < 1e-7

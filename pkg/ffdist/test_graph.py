#!/usr/bin/env python3
"""
Cayley distance graphs: connection sets, BFS layers, diameters and pair counts.
"""

import math

import numpy as np
import pytest

from ffdist import config, geometry, graph, spectral
from ffdist.configurations import random_subset
from ffdist.field import field_from_q
from ffdist.geometry import PointSet


def test_connection_sphere():
    F3, F5 = field_from_q(3), field_from_q(5)
    spec = graph.connection_sphere(F5, 1, 2)
    assert spec.degree == 4
    assert sorted(pt.coords for pt in spec.connection.points()) == [(0, 1), (0, 4), (1, 0), (4, 0)]
    assert graph.connection_sphere(F3, 1, 3).degree == 6
    with pytest.raises(ValueError):
        graph.connection_sphere(F5, 0, 2)


def test_connection_set_validation():
    F5 = field_from_q(5)
    with pytest.raises(ValueError):
        graph.connection_from_set(PointSet.from_ranks(F5, 2, [0, 1, 4]))
    with pytest.raises(ValueError):
        graph.connection_from_set(PointSet.from_ranks(F5, 2, [1]))


def test_bfs_layers_on_the_grid():
    F5 = field_from_q(5)
    profile = graph.bfs_from_origin(graph.connection_sphere(F5, 1, 2))
    assert profile.layer_sizes == (1, 4, 8, 8, 4)
    assert profile.eccentricity == 4
    assert profile.connected


def test_bfs_complete_and_disconnected_graphs():
    F3 = field_from_q(3)
    everything = PointSet.from_ranks(F3, 2, range(1, 9))
    assert graph.diameter(graph.connection_from_set(everything)) == 1

    # +-(1, 0) only reaches the first axis
    axis = graph.connection_from_set(PointSet.from_ranks(F3, 2, [1, 2]))
    profile = graph.bfs_from_origin(axis)
    assert profile.eccentricity == math.inf
    assert profile.reached == 3
    assert not profile.connected


@pytest.mark.parametrize("q, d", [(3, 2), (5, 2), (7, 2), (9, 2), (3, 3), (5, 3), (3, 4), (7, 4)])
def test_bfs_matches_naive_oracle(q, d):
    ctx = field_from_q(q)
    for c in range(1, q):
        spec = graph.connection_sphere(ctx, c, d)
        assert graph.bfs_from_origin(spec) == graph.bfs_naive(spec)


def test_diameter_is_source_independent():
    F5 = field_from_q(5)
    spec = graph.connection_sphere(F5, 2, 2)
    assert graph.diameter(spec, all_sources=True) == graph.diameter(spec) == 4


def test_sharp_diameters():
    for q in (3, 5, 7, 9):
        for row in graph.diameter_report(4, [q], workers=2):
            assert row["diameter"] == 2
    for q in (7, 11, 17):
        assert all(row["diameter"] == 3 for row in graph.diameter_report(2, [q]))
    for q in (5, 9, 13):
        assert all(row["diameter"] != 2 for row in graph.diameter_report(2, [q]))
    for q in (3, 5, 7, 11):
        assert all(row["diameter"] in (2, 3) for row in graph.diameter_report(3, [q]))


def test_diameter_five_plane():
    rows = graph.diameter_report(2, [5])
    assert [row["color"] for row in rows] == [1, 2, 3, 4]
    assert all(row["diameter"] == 4 for row in rows)


def test_diameter_claims_cover_all_cells():
    for row in graph.diameter_report(2, [7], colors=[3]):
        names = [claim["anchor"] for claim in row["claims"]]
        assert names == ["never-two", "diameter-sharp"]
        assert all(claim["pass"] for claim in row["claims"])

    row, = graph.diameter_report(3, [5], colors=[1])
    anchors = {claim["anchor"] for claim in row["claims"]}
    assert anchors == {"diameter-sharp", "exploratory"}


def test_diameter_report_guard():
    with pytest.raises(config.ResourceGuardError):
        graph.diameter_report(7, [9])


def test_nu_count_full_space():
    F3 = field_from_q(3)
    full = PointSet.full(F3, 2)
    nu = graph.nu_count(full, full, full)
    assert nu.count == 81
    assert nu.main_term == 81
    assert nu.within_bound


def test_nu_count_two_ways_and_bound():
    rng = np.random.default_rng(9)
    for q, d in ((5, 3), (7, 3), (5, 4)):
        ctx = field_from_q(q)
        U = geometry.sphere(ctx, 1, d)
        salem = spectral.salem_constant(U)
        for _ in range(5):
            E = random_subset(ctx, d, 0.2, rng)
            F = random_subset(ctx, d, 0.1, rng)
            nu = graph.nu_count(E, F, U, salem=salem)
            assert nu.count == graph.nu_count_by_shifts(E, F, U)
            assert nu.within_bound
            if nu.main_dominates:
                assert nu.count > 0


def test_nu_count_translated_spheres():
    F7 = field_from_q(7)
    S = geometry.sphere(F7, 1, 4)
    E = S.translate((1, 0, 0, 0))
    F = S.translate((0, 2, 0, 0))
    assert graph.nu_count(E, F, S).count > 0


def test_nu_count_rejects_mixed_spaces():
    F5 = field_from_q(5)
    with pytest.raises(ValueError):
        graph.nu_count(PointSet.full(F5, 2), PointSet.full(F5, 3), PointSet.full(F5, 2))


def test_salem_diameter_claim():
    F5 = field_from_q(5)
    # every point of nonzero norm: |U| = 16, large against its Salem constant
    U = PointSet.from_mask(F5, 2, geometry.norms(F5, 2) != 0)
    spec = graph.connection_from_set(U)
    claim = graph.salem_diameter_claim(spec, graph.diameter(spec))
    assert claim["anchor"] == "salem-diameter"
    assert claim["pass"]

    axes = graph.connection_from_set(PointSet.from_ranks(F5, 2, [1, 4, 5, 20]))
    assert graph.salem_diameter_claim(axes, graph.diameter(axes)) is None

"""Section geometry: coefficient coordinates, purity, feasibility."""

import numpy as np
import pytest

from bloch_atlas import gellmann, sections
from bloch_atlas.sections import SectionSpec


def test_spec_validation():
    SectionSpec(4, (3, 6))
    SectionSpec(4, (10, 12, 13))
    with pytest.raises(ValueError):
        SectionSpec(4, (3,))
    with pytest.raises(ValueError):
        SectionSpec(4, (3, 3))
    with pytest.raises(ValueError):
        SectionSpec(4, (3, 16))


def test_density_is_hermitian_unit_trace():
    spec = SectionSpec(6, (1, 13))
    rho = sections.density(spec, [0.3, -0.2])
    assert np.allclose(rho, rho.conj().T)
    assert np.isclose(np.trace(rho).real, 1.0, atol=1e-15)


def test_coefficients_are_hilbert_schmidt_coordinates():
    # c_i is recovered as tr(rho g_i), and purity follows the radius formula
    rng = np.random.default_rng(4)
    spec = SectionSpec(4, (3, 6, 15))
    c = rng.uniform(-0.3, 0.3, size=3)
    rho = sections.density(spec, c)
    for ci, a in zip(c, spec.generators):
        assert np.isclose(np.trace(rho @ gellmann.generator(4, a)).real,
                          ci, atol=1e-14)
    assert np.isclose(np.trace(rho @ rho).real,
                      sections.purity(spec, c), atol=1e-14)


def test_bounding_radius_is_pure_state_radius():
    for n in (2, 3, 4, 6, 8, 9, 10):
        # a pure state has tr rho^2 = 1, so |c|^2 = 2 (1 - 1/n)
        r = sections.bounding_radius(n)
        assert np.isclose(1.0 / n + 0.5 * r * r, 1.0, atol=1e-15)


def test_feasibility_at_center_and_far_out():
    spec = SectionSpec(4, (3, 6))
    assert sections.is_feasible(spec, [0.0, 0.0])
    r = sections.bounding_radius(4)
    assert not sections.is_feasible(spec, [1.01 * r, 0.0])


def test_known_feasible_boundary_point():
    # along +g3 for n = 4 the first eigenvalue hits zero at c = 1/2
    spec = SectionSpec(4, (3, 6))
    assert sections.is_feasible(spec, [0.5 - 1e-9, 0.0])
    assert not sections.is_feasible(spec, [0.5 + 1e-9, 0.0])

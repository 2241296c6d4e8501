"""Bubble algebra: evaluation, conformal actions, pairings, norms, geometry
classification, and the JSON schema."""

import math

import numpy as np
import pytest

from sobstab.bubbles import (
    BubbleParam,
    Geometry,
    Superposition,
    dilate,
    evaluate,
    hs_inner,
    hs_norm_sq,
    invert,
    lp_norm,
    pair_against_bubble,
    superposition_from_dict,
    superposition_to_dict,
)
from sobstab.constants import Ambient, sharp_constants
from sobstab.errors import GeometryError, ParameterError, SchemaError
from sobstab.functional import _conformal_ratio
from sobstab.quadrature import DEFAULT_CONFIG, QuadratureConfig

AMB31 = Ambient(3, 1.0)
ORIGIN3 = (0.0, 0.0, 0.0)


def single(amb, coeff=1.0, center=None, scale=1.0):
    center = (0.0,) * amb.d if center is None else center
    return Superposition(amb, (BubbleParam(coeff, center, scale),))


class TestBubbleParam:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(coeff=0.0, center=ORIGIN3, scale=1.0),
            dict(coeff=math.nan, center=ORIGIN3, scale=1.0),
            dict(coeff=1.0, center=ORIGIN3, scale=0.0),
            dict(coeff=1.0, center=ORIGIN3, scale=-2.0),
            dict(coeff=1.0, center=(0.0, math.inf, 0.0), scale=1.0),
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ParameterError):
            BubbleParam(**kwargs)

    def test_dimension_mismatch(self):
        with pytest.raises(ParameterError):
            Superposition(AMB31, (BubbleParam(1.0, (0.0, 0.0), 1.0),))

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            Superposition(AMB31, ())


class TestGeometry:
    def test_concentric(self):
        u = Superposition(
            AMB31,
            (
                BubbleParam(1.0, (1.0, 2.0, 3.0), 1.0),
                BubbleParam(-2.0, (1.0, 2.0, 3.0), 5.0),
            ),
        )
        assert u.geometry is Geometry.CONCENTRIC

    def test_collinear(self):
        u = Superposition(
            AMB31,
            (
                BubbleParam(1.0, (0.0, 0.0, 0.0), 1.0),
                BubbleParam(1.0, (1.0, 1.0, 0.0), 1.0),
                BubbleParam(1.0, (-2.0, -2.0, 0.0), 1.0),
            ),
        )
        assert u.geometry is Geometry.COLLINEAR

    def test_general(self):
        u = Superposition(
            AMB31,
            (
                BubbleParam(1.0, (0.0, 0.0, 0.0), 1.0),
                BubbleParam(1.0, (1.0, 0.0, 0.0), 1.0),
                BubbleParam(1.0, (0.0, 1.0, 0.0), 1.0),
            ),
        )
        assert u.geometry is Geometry.GENERAL

    def test_general_rejected_by_norms(self):
        u = Superposition(
            AMB31,
            (
                BubbleParam(1.0, (0.0, 0.0, 0.0), 1.0),
                BubbleParam(1.0, (1.0, 0.0, 0.0), 1.0),
                BubbleParam(1.0, (0.0, 1.0, 0.0), 1.0),
            ),
        )
        with pytest.raises(GeometryError):
            lp_norm(u)
        with pytest.raises(GeometryError):
            hs_norm_sq(u)

    def test_offline_probe_bubble_rejected(self):
        u = Superposition(
            AMB31,
            (
                BubbleParam(1.0, (0.0, 0.0, 0.0), 1.0),
                BubbleParam(1.0, (1.0, 0.0, 0.0), 1.0),
            ),
        )
        h = BubbleParam(1.0, (0.0, 1.0, 0.0), 1.0)
        with pytest.raises(GeometryError):
            pair_against_bubble(u, h)


class TestEvaluate:
    def test_center_value(self):
        cst = sharp_constants(AMB31)
        u = single(AMB31, coeff=2.0, scale=4.0)
        assert evaluate(u, ORIGIN3) == pytest.approx(2.0 * 2.0 * cst.c_d, rel=1e-14)

    def test_decay_value(self):
        cst = sharp_constants(AMB31)
        u = single(AMB31)
        assert evaluate(u, (1.0, 0.0, 0.0)) == pytest.approx(
            cst.c_d / math.sqrt(2.0), rel=1e-14
        )

    def test_superposition_linearity(self):
        u1 = single(AMB31, coeff=1.0, scale=1.0)
        u2 = single(AMB31, coeff=3.0, scale=2.0)
        both = Superposition(AMB31, u1.terms + u2.terms)
        y = (0.3, -0.2, 0.9)
        assert evaluate(both, y) == pytest.approx(
            evaluate(u1, y) + evaluate(u2, y), rel=1e-14
        )


class TestConformalActions:
    def test_dilate_pointwise(self):
        u = Superposition(
            AMB31,
            (
                BubbleParam(1.0, (0.5, 0.0, -1.0), 2.0),
                BubbleParam(-0.7, (1.0, 0.0, -2.0), 0.3),
            ),
        )
        mu = 3.7
        y = np.array([0.2, -0.4, 1.1])
        lhs = evaluate(dilate(u, mu), tuple(y))
        rhs = mu**AMB31.beta_exp * evaluate(u, tuple(mu * y))
        assert lhs == pytest.approx(rhs, rel=1e-13)

    def test_dilate_validation(self):
        with pytest.raises(ParameterError):
            dilate(single(AMB31), 0.0)

    def test_invert_is_involution(self):
        u = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 2.0), BubbleParam(2.0, ORIGIN3, 0.125)),
        )
        back = invert(invert(u, 1.5), 1.5)
        for t0, t1 in zip(u.terms, back.terms):
            assert t1.scale == pytest.approx(t0.scale, rel=1e-15)

    def test_invert_requires_origin_centers(self):
        u = single(AMB31, center=(1.0, 0.0, 0.0))
        with pytest.raises(GeometryError):
            invert(u, 1.0)

    def test_dilation_preserves_hs_norm(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            scales = rng.uniform(0.2, 5.0, size=2)
            coeffs = rng.uniform(0.5, 2.0, size=2)
            u = Superposition(
                AMB31,
                (
                    BubbleParam(coeffs[0], ORIGIN3, scales[0]),
                    BubbleParam(coeffs[1], ORIGIN3, scales[1]),
                ),
            )
            mu = float(rng.uniform(0.2, 5.0))
            assert hs_norm_sq(dilate(u, mu)) == pytest.approx(
                hs_norm_sq(u), rel=1e-9
            )

    def test_pairing_inversion_symmetry(self):
        """(B_lam, B_mu^(2*-1)) is invariant under the simultaneous
        inversion (lam, mu) -> (tau^-2/lam, tau^-2/mu)."""
        lam, mu, tau = 2.0, 0.4, 1.3
        u = single(AMB31, scale=lam)
        before = pair_against_bubble(u, BubbleParam(1.0, ORIGIN3, mu))
        ui = invert(u, tau)
        after = pair_against_bubble(
            ui, BubbleParam(1.0, ORIGIN3, 1.0 / (tau * tau * mu))
        )
        assert after == pytest.approx(before, rel=1e-9)


class TestPairings:
    def test_self_pairing_is_one(self):
        for scale in (1.0, 0.01, 100.0):
            u = single(AMB31, scale=scale)
            p = pair_against_bubble(u, BubbleParam(1.0, ORIGIN3, scale))
            assert p == pytest.approx(1.0, rel=1e-10)

    def test_unit_coefficient_required(self):
        with pytest.raises(ParameterError):
            pair_against_bubble(single(AMB31), BubbleParam(2.0, ORIGIN3, 1.0))

    def test_small_scale_cross_pairing_matches_leading_constant(self):
        cst = sharp_constants(AMB31)
        lam = 1e-6
        u = single(AMB31, scale=lam)
        p = pair_against_bubble(u, BubbleParam(1.0, ORIGIN3, 1.0))
        assert p / math.sqrt(lam) == pytest.approx(cst.c0, rel=5e-3)

    @pytest.mark.parametrize(
        "x2, l1, l2",
        [
            ((2.0, 0.0, 0.0), 1.0, 1.0),
            ((1.5, 0.0, 0.0), 3.0, 0.2),
            ((0.3, 0.0, 0.0), 1.0, 10.0),
            ((5.0, 0.0, 0.0), 0.5, 0.5),
        ],
    )
    def test_conformal_reduction_against_direct_quadrature(self, x2, l1, l2):
        """Independent check of the two-center pairing: the axisymmetric
        double integral must equal the concentric pairing at the conformal
        scale ratio of the pair."""
        u = single(AMB31, scale=l1)
        direct = pair_against_bubble(u, BubbleParam(1.0, x2, l2))
        r2 = sum(c * c for c in x2)
        t = _conformal_ratio(l1, l2, r2)
        reduced = pair_against_bubble(
            single(AMB31, scale=t), BubbleParam(1.0, ORIGIN3, 1.0)
        )
        assert direct == pytest.approx(reduced, rel=1e-8)

    def test_d1_concentric_and_collinear(self):
        amb = Ambient(1, 0.25)
        u = single(amb, center=(0.0,))
        assert pair_against_bubble(u, BubbleParam(1.0, (0.0,), 1.0)) == (
            pytest.approx(1.0, rel=1e-10)
        )
        v = Superposition(
            amb, (BubbleParam(1.0, (0.0,), 1.0), BubbleParam(1.0, (3.0,), 2.0))
        )
        direct = pair_against_bubble(v, BubbleParam(1.0, (1.0,), 0.5))
        assert math.isfinite(direct) and direct > 0


class TestHsInner:
    def test_single_bubble_norm(self):
        cst = sharp_constants(AMB31)
        u = single(AMB31, coeff=2.5, scale=4.0)
        assert hs_norm_sq(u) == pytest.approx(2.5**2 * cst.S_d, rel=1e-10)

    def test_symmetry(self):
        u = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 1.0), BubbleParam(0.5, (1.0, 0, 0), 2.0)),
        )
        v = Superposition(
            AMB31,
            (BubbleParam(-1.5, (2.0, 0, 0), 0.7),),
        )
        assert hs_inner(u, v) == pytest.approx(hs_inner(v, u), rel=1e-9)

    def test_cauchy_schwarz(self):
        u = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 1.0), BubbleParam(1.0, ORIGIN3, 4.0)),
        )
        v = single(AMB31, coeff=2.0, scale=0.5)
        lhs = hs_inner(u, v) ** 2
        rhs = hs_norm_sq(u) * hs_norm_sq(v)
        assert lhs <= rhs * (1.0 + 1e-9)

    def test_coefficient_bilinearity_is_exact(self):
        base = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 1.0), BubbleParam(2.0, ORIGIN3, 3.0)),
        )
        doubled = Superposition(
            AMB31,
            (BubbleParam(2.0, ORIGIN3, 1.0), BubbleParam(4.0, ORIGIN3, 3.0)),
        )
        assert hs_norm_sq(doubled) == pytest.approx(
            4.0 * hs_norm_sq(base), rel=1e-14
        )

    def test_mismatched_ambient_rejected(self):
        with pytest.raises(ParameterError):
            hs_inner(single(AMB31), single(Ambient(5, 1.0), center=(0.0,) * 5))

    def test_extreme_scale_diagonal(self):
        """The regression case behind the log-radius quadrature: diagonal
        pairings must stay exact for very small scales."""
        u = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 1.0), BubbleParam(1.0, ORIGIN3, 1e-7)),
        )
        cst = sharp_constants(AMB31)
        cross = pair_against_bubble(u, BubbleParam(1.0, ORIGIN3, 1.0)) - 1.0
        expected = cst.S_d * (2.0 + 2.0 * cross)
        assert hs_norm_sq(u) == pytest.approx(expected, rel=1e-9)


class TestLpNorm:
    @pytest.mark.parametrize(
        "d, s", [(3, 1.0), (4, 1.0), (5, 1.0), (2, 0.5), (3, 0.75), (1, 0.25)]
    )
    def test_unit_normalization(self, d, s):
        amb = Ambient(d, s)
        assert lp_norm(single(amb)) == pytest.approx(1.0, abs=1e-9)

    def test_homogeneity(self):
        u = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 1.0), BubbleParam(-0.5, ORIGIN3, 2.0)),
        )
        scaled = Superposition(
            AMB31,
            (BubbleParam(2.0, ORIGIN3, 1.0), BubbleParam(-1.0, ORIGIN3, 2.0)),
        )
        assert lp_norm(scaled) == pytest.approx(2.0 * lp_norm(u), rel=1e-12)

    def test_collinear_matches_concentric_limit(self):
        """Bringing two collinear centers together converges to the
        concentric value."""
        con = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 1.0), BubbleParam(1.0, ORIGIN3, 2.0)),
        )
        near = Superposition(
            AMB31,
            (
                BubbleParam(1.0, ORIGIN3, 1.0),
                BubbleParam(1.0, (1e-7, 0.0, 0.0), 2.0),
            ),
        )
        assert lp_norm(near) == pytest.approx(lp_norm(con), rel=1e-6)

    def test_d1_collinear(self):
        amb = Ambient(1, 0.25)
        u = Superposition(
            amb, (BubbleParam(1.0, (0.0,), 1.0), BubbleParam(1.0, (4.0,), 1.0))
        )
        val = lp_norm(u)
        # between the single-bubble norm and the triangle-inequality bound;
        # at s = 1/4 the profile decays so slowly that separation 4 is still
        # strongly interacting, so the value sits near the upper end
        assert 1.0 < val < 2.0
        far = Superposition(
            amb, (BubbleParam(1.0, (0.0,), 1.0), BubbleParam(1.0, (400.0,), 1.0))
        )
        assert lp_norm(far) < val

    def test_far_separation_approaches_sum_of_masses(self):
        amb = AMB31
        u = Superposition(
            amb,
            (
                BubbleParam(1.0, ORIGIN3, 1.0),
                BubbleParam(1.0, (2000.0, 0.0, 0.0), 1.0),
            ),
        )
        assert lp_norm(u) == pytest.approx(2.0 ** (1.0 / amb.two_star), rel=1e-3)


class TestSchema:
    def test_roundtrip(self):
        u = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 1.0), BubbleParam(-2.0, (1, 2, 3), 0.5)),
        )
        v = superposition_from_dict(superposition_to_dict(u))
        assert v == u

    @pytest.mark.parametrize(
        "doc, field",
        [
            ([], "document"),
            ({"s": 1.0, "terms": []}, "d:"),
            ({"d": 3, "terms": []}, "s:"),
            ({"d": 3, "s": 2.0, "terms": []}, "s:"),
            ({"d": 0, "s": 1.0, "terms": []}, "d:"),
            ({"d": 3, "s": 1.0}, "terms"),
            ({"d": 3, "s": 1.0, "terms": []}, "terms"),
            ({"d": 3, "s": 1.0, "terms": [{"center": [0, 0, 0], "lambda": 1}]},
             "terms[0].coeff"),
            ({"d": 3, "s": 1.0,
              "terms": [{"coeff": 1, "center": [0, 0], "lambda": 1}]},
             "terms[0].center"),
            ({"d": 3, "s": 1.0,
              "terms": [{"coeff": 1, "center": [0, 0, 0], "lambda": -1}]},
             "terms[0].lambda"),
            ({"d": 3, "s": 1.0,
              "terms": [{"coeff": 0, "center": [0, 0, 0], "lambda": 1}]},
             "terms[0].coeff"),
        ],
    )
    def test_schema_errors_name_fields(self, doc, field):
        with pytest.raises(SchemaError) as exc:
            superposition_from_dict(doc)
        assert field in str(exc.value)

    def test_schema_error_is_parameter_error(self):
        with pytest.raises(ParameterError):
            superposition_from_dict({"d": 3})


class TestQuadratureConfigThreading:
    def test_loose_config_changes_cost_not_value_much(self):
        loose = QuadratureConfig(rel_tol=1e-6, abs_tol=1e-9)
        u = Superposition(
            AMB31,
            (BubbleParam(1.0, ORIGIN3, 1.0), BubbleParam(1.0, ORIGIN3, 10.0)),
        )
        a = hs_norm_sq(u, loose)
        b = hs_norm_sq(u, DEFAULT_CONFIG)
        assert a == pytest.approx(b, rel=1e-5)
